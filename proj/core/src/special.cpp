#include "fraclap/special.hpp"

#include <cmath>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

void require_dimension(int n) {
    if (n < 1)
        throw BadOrderError("dimension must be >= 1, got " + std::to_string(n));
}

} // namespace

double sphere_measure(int n) {
    require_dimension(n);
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n) {
    require_dimension(n);
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double riesz_constant(int n, double alpha) {
    require_dimension(n);
    if (!(alpha > 0.0) || !(alpha < static_cast<double>(n)))
        throw BadOrderError("riesz_constant needs 0 < alpha < n, got alpha = " +
                            std::to_string(alpha) + ", n = " + std::to_string(n));
    // gamma(n, alpha) = Gamma((n - alpha)/2) / (2^alpha pi^{n/2} Gamma(alpha/2)).
    // Evaluated through lgamma to stay stable when alpha approaches 0 or n.
    const double log_num = std::lgamma(0.5 * (n - alpha));
    const double log_den = alpha * std::log(2.0) + 0.5 * n * std::log(M_PI) +
                           std::lgamma(0.5 * alpha);
    return std::exp(log_num - log_den);
}

double flap_constant(int n, double alpha) {
    require_dimension(n);
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw BadOrderError("flap_constant needs 0 < alpha < 2, got alpha = " +
                            std::to_string(alpha));
    // C(n, alpha) = 2^alpha Gamma((n + alpha)/2) / (pi^{n/2} |Gamma(-alpha/2)|)
    // with |Gamma(-alpha/2)| = (2/alpha) Gamma(1 - alpha/2).
    const double log_num = alpha * std::log(2.0) + std::lgamma(0.5 * (n + alpha)) +
                           std::log(0.5 * alpha);
    const double log_den = 0.5 * n * std::log(M_PI) + std::lgamma(1.0 - 0.5 * alpha);
    return std::exp(log_num - log_den);
}

double newtonian_constant(int n) {
    if (n < 3)
        throw BadOrderError("newtonian_constant is defined for n >= 3, got " +
                            std::to_string(n));
    return 1.0 / (n * (n - 2) * ball_volume(n));
}

} // namespace fraclap
