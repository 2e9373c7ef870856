#ifndef FRACLAP_QUADRATURE_HPP
#define FRACLAP_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fraclap {

// The quadrature rules here are deliberately non-adaptive in the integrand:
// node placement depends only on the interval geometry. That makes every
// downstream quantity a fixed positive-weight linear functional of the
// integrand, which buys three properties the callers rely on: bitwise
// deterministic output, exact monotonicity in the integrand, and exact
// additivity when an integral is split at fixed breakpoints.

struct GaussRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Cached Gauss-Legendre rule; supported orders are 4..64.
const GaussRule& gauss_rule(int order);

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order = 16);

// Composite Gauss-Legendre on log-spaced panels; for smooth integrands over
// wide positive ranges (Dini integrals, far tails after substitution).
// Requires 0 < a < b.
double integrate_log_panels(const std::function<double(double)>& f, double a,
                            double b, int panels_per_decade = 4, int order = 16);

// Tanh-sinh (double-exponential) rule on [a, b] for integrands with an
// integrable endpoint singularity. The callback receives the node x together
// with cancellation-free distances to both endpoints, so kernels of the form
// |x - endpoint|^{-p} can be evaluated without catastrophic subtraction.
//
// Handles |f| ~ d^{-p} with p up to roughly 0.96 at ~1e-10 accuracy.
double tanh_sinh(const std::function<double(double x, double da, double db)>& f,
                 double a, double b);

} // namespace fraclap

#endif
