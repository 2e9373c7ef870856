#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "fraclap/csv.hpp"
#include "fraclap/envelopes.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/nonlocal_operator.hpp"
#include "fraclap/perron.hpp"
#include "fraclap/riesz_potential.hpp"
#include "fraclap/subsuper.hpp"
#include "svg_plot.hpp"

namespace fraclap::tools {

namespace {

namespace fs = std::filesystem;

fs::path prepare_out_dir(const RunConfig& c, const RunOptions& o) {
    const fs::path out = o.out_dir.empty() ? fs::path(c.output_dir) : fs::path(o.out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec && !fs::is_directory(out))
        throw ValidationError("cannot create output directory '" + out.string() +
                              "': " + ec.message());
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw ValidationError("write to '" + path.string() + "' failed");
}

std::string config_record(const RunConfig& c) {
    auto kv = config_entries(c);
    kv.insert(kv.begin(), {"record", "config"});
    return format_summary(kv);
}

GridPtr make_grid(const RunConfig& c) {
    GridSpec spec;
    spec.cells = c.grid.cells;
    spec.r_max = c.grid.r_max;
    spec.ratio = c.grid.ratio;
    spec.first_cell = c.grid.first_cell;
    // Potentials and solution tails produced by this run decay like
    // r^-(min(n, tau) - alpha); the floor keeps the hint usable when tau
    // sits right at alpha.
    spec.tail_exponent_hint =
        std::max(0.5, std::min(static_cast<double>(c.dimension), c.tau) - c.alpha);
    return make_graded_grid(spec);
}

RadialFunction build_source(const RunConfig& c, const DecayProfile& omega,
                            const GridPtr& grid) {
    if (c.source == "envelope") {
        const double tau = c.tau;
        return sample(
            grid, [&omega, tau](double s) { return omega(s) * std::pow(1.0 + s, -tau); },
            0.0, tau);
    }
    if (c.source == "closed_form") {
        const double e = 0.5 * (c.dimension + c.alpha);
        return sample(grid, [e](double s) { return std::pow(1.0 + s * s, -e); }, 0.0,
                      c.dimension + c.alpha);
    }
    if (c.source == "gaussian")
        return sample(grid, [](double s) { return std::exp(-s * s); }, 0.0, 60.0);
    // "zero": the tail power is irrelevant (the tail amplitude is zero) but
    // must clear the integrability gate on its own.
    return sample(grid, [](double) { return 0.0; }, 0.0, c.dimension + 2.0);
}

// I_alpha maps (1+|y|^2)^{-(n+alpha)/2} onto lambda (1+|x|^2)^{-(n-alpha)/2}
// with lambda = 2^-alpha Gamma((n-alpha)/2) / Gamma((n+alpha)/2).
double closed_form_constant(int n, double alpha) {
    return std::exp(std::lgamma(0.5 * (n - alpha)) - std::lgamma(0.5 * (n + alpha)) -
                    alpha * std::log(2.0));
}

void write_plot(const fs::path& path, const PlotSpec& spec,
                const std::vector<PlotSeries>& series) {
    std::ostringstream svg;
    write_svg_plot(svg, spec, series);
    write_text(path, svg.str());
}

PerronOptions perron_options(const RunConfig& c) {
    PerronOptions opts;
    opts.max_iter = c.tolerances.max_iterations;
    opts.tol = c.tolerances.solver_tol;
    return opts;
}

std::string joined_levels(const std::vector<double>& levels) {
    std::string out;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i)
            out += ',';
        out += format_double(levels[i]);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> member_record(
    const char* tag, double a, double c_used, double theta, const SolveResult& res,
    double min_u) {
    return {{"record", tag},
            {"a", format_double(a)},
            {"C_used", format_double(c_used)},
            {"theta", format_double(theta)},
            {"iterations", std::to_string(res.iterations)},
            {"residual_inf", format_double(res.residual_inf)},
            {"limit_estimate", format_double(res.limit_estimate)},
            {"monotone_violations", std::to_string(res.monotone_violations)},
            {"min_u", format_double(min_u)}};
}

} // namespace

void run_potential(const RunConfig& c, const RunOptions& o) {
    validate_config(c);
    const fs::path out = prepare_out_dir(c, o);
    const DecayProfile omega = build_profile(c.profile);
    const GridPtr grid = make_grid(c);
    const RadialFunction f = build_source(c, omega, grid);
    const RadialFunction w = riesz_potential(f, grid, c.dimension, c.alpha);

    // The ratio column compares against the known closed-form potential when
    // the source has one and is zero otherwise.
    std::vector<double> ratio(w.values.size(), 0.0);
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    if (c.source == "closed_form") {
        const double lambda = closed_form_constant(c.dimension, c.alpha);
        const double e = 0.5 * (c.dimension - c.alpha);
        for (std::size_t i = 0; i < ratio.size(); ++i) {
            const double r = grid->nodes[i];
            ratio[i] = w.values[i] / (lambda * std::pow(1.0 + r * r, -e));
        }
        ratio_min = *std::min_element(ratio.begin(), ratio.end());
        ratio_max = *std::max_element(ratio.begin(), ratio.end());
    }

    std::ostringstream csv;
    csv << "r,f,w,ratio\n";
    for (std::size_t i = 0; i < w.values.size(); ++i)
        csv << format_double(grid->nodes[i]) << ',' << format_double(f.values[i]) << ','
            << format_double(w.values[i]) << ',' << format_double(ratio[i]) << '\n';
    write_text(out / "potential.csv", csv.str());

    if (o.plots) {
        PlotSpec spec;
        spec.title = "potential of the " + c.source + " source";
        spec.x_label = "r";
        spec.y_label = "value";
        spec.log_x = true;
        spec.log_y = true;
        std::vector<PlotSeries> series(2);
        series[0] = {"f", grid->nodes, f.values};
        series[1] = {"potential of f", grid->nodes, w.values};
        write_plot(out / "potential.svg", spec, series);
    }

    const std::string record = format_summary(
        {{"record", "potential"},
         {"source", c.source},
         {"w_origin", format_double(w.values.front())},
         {"w_max", format_double(*std::max_element(w.values.begin(), w.values.end()))},
         {"tail_power", format_double(w.tail_power)},
         {"ratio_min", format_double(ratio_min)},
         {"ratio_max", format_double(ratio_max)}});
    write_text(out / "potential.summary", config_record(c) + "\n" + record + "\n");
    std::cout << record << "\n";
}

void run_bounds(const RunConfig& c, const RunOptions& o) {
    validate_config(c);
    const fs::path out = prepare_out_dir(c, o);
    const DecayProfile omega = build_profile(c.profile);
    const double dini = dini_integral(omega);
    const GridPtr grid = make_grid(c);
    const double tau = c.tau;
    const RadialFunction f = sample(
        grid, [&omega, tau](double s) { return omega(s) * std::pow(1.0 + s, -tau); },
        0.0, tau);

    const EnvelopeVerification v =
        verify_envelopes(f, omega, c.dimension, c.alpha, c.tau);

    std::ostringstream csv;
    write_envelope_csv(csv, v);
    write_text(out / "bounds.csv", csv.str());

    if (o.plots) {
        PlotSpec spec;
        spec.title = "potential against the " + regime_name(v.regime) + " envelopes";
        spec.x_label = "r";
        spec.y_label = "value";
        spec.log_x = true;
        spec.log_y = true;
        std::vector<PlotSeries> series(3);
        series[0] = {"potential", v.upper.radii, v.upper.w_values};
        series[1].label = "upper envelope";
        series[2].label = "lower envelope";
        for (std::size_t i = 0; i < v.upper.radii.size(); ++i) {
            series[1].x.push_back(v.upper.radii[i]);
            series[1].y.push_back(v.upper.fitted_C * v.upper.bound_values[i]);
            series[2].x.push_back(v.lower.radii[i]);
            series[2].y.push_back(v.lower.fitted_C * v.lower.bound_values[i]);
        }
        write_plot(out / "bounds.svg", spec, series);
    }

    const std::string record =
        format_summary({{"record", "bounds"},
                        {"regime", regime_name(v.regime)},
                        {"fitted_slope", format_double(v.upper.fitted_slope)},
                        {"predicted_slope", format_double(v.predicted_slope)},
                        {"C_upper", format_double(v.upper.fitted_C)},
                        {"C_lower", format_double(v.lower.fitted_C)},
                        {"r_start", format_double(v.r_start)},
                        {"r_end", format_double(v.r_end)},
                        {"dini", format_double(dini)},
                        {"pass", v.pass() ? "1" : "0"}});
    write_text(out / "bounds.summary", config_record(c) + "\n" + record + "\n");
    std::cout << record << "\n";
}

void run_solve(const RunConfig& c, const RunOptions& o) {
    validate_config(c);
    if (c.a_list.size() != 1)
        throw ValidationError("solve expects a single level 'a'; the config lists " +
                              std::to_string(c.a_list.size()) +
                              " levels (use the family subcommand)");
    const double a = c.a_list.front();
    const fs::path out = prepare_out_dir(c, o);
    const DecayProfile omega = build_profile(c.profile);
    const GridPtr grid = make_grid(c);
    const NonlocalOperator op = assemble_flap_matrix(grid, c.dimension, c.alpha);
    const OrderedPair pair =
        make_ordered_pair(a, omega, c.tau, c.theta1, grid, c.dimension, c.alpha);

    const double theta_used =
        c.theta_auto ? c.theta_fraction * admissible_theta(pair, op, omega, c.tau, c.p)
                     : c.theta;
    const ShapeFunctions shapes = seeded_shapes(c.seed);
    const CoefficientPair coeffs = make_coefficient_pair(
        grid, theta_used, c.tau, c.alpha, omega, shapes.k, shapes.K);

    const SolveResult res = perron_solve(op, pair, coeffs, c.p, perron_options(c));
    const std::vector<double> residuals =
        check_subsolution(op, res.u, coeffs, c.p).residuals;

    std::ostringstream csv;
    write_solution_csv(csv, res.u, pair.sub, pair.super, residuals);
    write_text(out / "solution.csv", csv.str());

    if (o.plots) {
        PlotSpec spec;
        spec.title = "solution between its bracket, a = " + format_double(a);
        spec.x_label = "r";
        spec.y_label = "u";
        spec.log_x = true;
        std::vector<PlotSeries> series(3);
        series[0] = {"u", grid->nodes, res.u.values};
        series[1] = {"lower bracket", grid->nodes, pair.sub.values};
        series[2] = {"upper bracket", grid->nodes, pair.super.values};
        write_plot(out / "solution.svg", spec, series);
    }

    const double min_u = *std::min_element(res.u.values.begin(), res.u.values.end());
    const std::string record =
        format_summary(member_record("solve", a, pair.C_used, theta_used, res, min_u));
    write_text(out / "solve.summary", config_record(c) + "\n" + record + "\n");
    std::cout << record << "\n";
}

void run_family(const RunConfig& c, const RunOptions& o) {
    validate_config(c);
    const fs::path out = prepare_out_dir(c, o);
    const DecayProfile omega = build_profile(c.profile);
    const GridPtr grid = make_grid(c);
    const NonlocalOperator op = assemble_flap_matrix(grid, c.dimension, c.alpha);

    std::vector<OrderedPair> pairs;
    pairs.reserve(c.a_list.size());
    for (const double a : c.a_list)
        pairs.push_back(
            make_ordered_pair(a, omega, c.tau, c.theta1, grid, c.dimension, c.alpha));

    double theta_used = c.theta;
    if (c.theta_auto) {
        double smallest = std::numeric_limits<double>::infinity();
        for (const OrderedPair& pair : pairs)
            smallest = std::min(smallest, admissible_theta(pair, op, omega, c.tau, c.p));
        theta_used = c.theta_fraction * smallest;
    }
    const ShapeFunctions shapes = seeded_shapes(c.seed);
    const CoefficientPair coeffs = make_coefficient_pair(
        grid, theta_used, c.tau, c.alpha, omega, shapes.k, shapes.K);
    const PerronOptions popts = perron_options(c);

    // Solves are independent given the shared coefficients; dispatch them in
    // batches of --jobs. Outputs are written afterwards in level order so
    // the bytes do not depend on the batch size.
    const std::size_t count = pairs.size();
    std::vector<SolveResult> results(count);
    const std::size_t stride = o.jobs > 0 ? static_cast<std::size_t>(o.jobs) : 1;
    for (std::size_t base = 0; base < count; base += stride) {
        const std::size_t stop = std::min(count, base + stride);
        std::vector<std::future<SolveResult>> batch;
        batch.reserve(stop - base);
        for (std::size_t i = base; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, [&, i] {
                return perron_solve(op, pairs[i], coeffs, c.p, popts);
            }));
        for (std::size_t i = base; i < stop; ++i)
            results[i] = batch[i - base].get();
    }

    std::string summary = config_record(c) + "\n";
    std::vector<double> min_values(count);
    bool all_positive = true;
    for (std::size_t i = 0; i < count; ++i) {
        const std::string tag = format_double(c.a_list[i]);
        const std::vector<double> residuals =
            check_subsolution(op, results[i].u, coeffs, c.p).residuals;
        std::ostringstream csv;
        write_solution_csv(csv, results[i].u, pairs[i].sub, pairs[i].super, residuals);
        write_text(out / ("family_" + tag + ".csv"), csv.str());

        if (o.plots) {
            PlotSpec spec;
            spec.title = "family member a = " + tag;
            spec.x_label = "r";
            spec.y_label = "u";
            spec.log_x = true;
            std::vector<PlotSeries> series(3);
            series[0] = {"u", grid->nodes, results[i].u.values};
            series[1] = {"lower bracket", grid->nodes, pairs[i].sub.values};
            series[2] = {"upper bracket", grid->nodes, pairs[i].super.values};
            write_plot(out / ("family_" + tag + ".svg"), spec, series);
        }

        min_values[i] = *std::min_element(results[i].u.values.begin(),
                                          results[i].u.values.end());
        if (!(min_values[i] >= 0.5 * c.a_list[i] - 1e-8))
            all_positive = false;
        summary += format_summary(member_record("member", c.a_list[i], pairs[i].C_used,
                                                theta_used, results[i], min_values[i]));
        summary += '\n';
    }

    bool distinct_limits = true;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j) {
            const double limit_gap =
                std::abs(results[i].limit_estimate - results[j].limit_estimate);
            const double level_gap = std::abs(c.a_list[i] - c.a_list[j]);
            if (!(limit_gap >= 0.5 * level_gap))
                distinct_limits = false;
        }

    const std::string record =
        format_summary({{"record", "family"},
                        {"levels", joined_levels(c.a_list)},
                        {"theta_used", format_double(theta_used)},
                        {"p", format_double(c.p)},
                        {"distinct_limits", distinct_limits ? "1" : "0"},
                        {"all_positive", all_positive ? "1" : "0"}});
    summary += record + '\n';
    write_text(out / "family.summary", summary);
    std::cout << record << "\n";
}

void run_verify(const RunConfig& c, const RunOptions& o) {
    validate_config(c);
    const fs::path out = prepare_out_dir(c, o);

    struct CheckResult {
        std::string name;
        bool ok;
        std::string detail;
    };
    std::vector<CheckResult> checks;
    const auto run_check = [&checks](const std::string& name,
                                     const std::function<std::string()>& body) {
        try {
            checks.push_back({name, true, body()});
        } catch (const Error& e) {
            checks.push_back({name, false, e.what()});
        }
    };

    const DecayProfile omega = build_profile(c.profile);

    run_check("profile", [&] {
        const ProfileReport rep = validate_profile(omega);
        if (!rep.monotone)
            throw NumericalError("weight is not non-increasing (" +
                                 std::to_string(rep.offending_samples.size()) +
                                 " offending samples)");
        if (!rep.positive)
            throw NumericalError("weight is not strictly positive");
        if (!rep.dini_finite)
            throw NumericalError("weight fails the tail convergence gate");
        return "dini=" + format_double(rep.dini_value);
    });

    const GridPtr grid = make_grid(c);
    const double tau = c.tau;
    const RadialFunction f = sample(
        grid, [&omega, tau](double s) { return omega(s) * std::pow(1.0 + s, -tau); },
        0.0, tau);

    run_check("partition", [&] {
        const RadialFunction w = riesz_potential(f, grid, c.dimension, c.alpha);
        const std::size_t n = grid->nodes.size();
        double worst = 0.0;
        for (const std::size_t i : {n / 4, n / 2, (3 * n) / 4}) {
            const double r = grid->nodes[i];
            if (!(r > 0.0))
                continue;
            const PotentialSplit split = split_contributions(f, r, c.dimension, c.alpha);
            const double rel = std::abs(split.total() - w.values[i]) /
                               std::max(std::abs(w.values[i]), 1e-300);
            worst = std::max(worst, rel);
        }
        if (!(worst <= 1e-6))
            throw NumericalError("three-region split misses the full potential by " +
                                 format_double(worst) + " relative");
        return "max_rel=" + format_double(worst);
    });

    std::optional<NonlocalOperator> op;
    run_check("operator", [&] {
        op = assemble_flap_matrix(grid, c.dimension, c.alpha);
        const auto n = static_cast<Eigen::Index>(op->size());
        const double scale = op->matrix.cwiseAbs().maxCoeff();
        double max_offdiag = -std::numeric_limits<double>::infinity();
        double worst_gap = 0.0;
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            double row_sum = 0.0;
            double row_abs = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                row_sum += op->matrix(i, j);
                row_abs += std::abs(op->matrix(i, j));
                if (i != j)
                    max_offdiag = std::max(max_offdiag, op->matrix(i, j));
            }
            const double gap = std::abs(row_sum - op->tail_row_correction(i)) /
                               (row_abs + std::abs(op->tail_row_correction(i)) + 1e-300);
            worst_gap = std::max(worst_gap, gap);
        }
        if (op->matrix.row(n - 1).cwiseAbs().maxCoeff() != 0.0)
            throw NumericalError("boundary row must be empty");
        if (max_offdiag > 1e-12 * scale)
            throw NumericalError("positive off-diagonal coupling breaks the "
                                 "comparison principle: " +
                                 format_double(max_offdiag));
        if (worst_gap > 1e-11)
            throw NumericalError("row sums disagree with the far-field mass by " +
                                 format_double(worst_gap) + " relative");
        const RadialFunction flat = sample(grid, [](double) { return 0.625; }, 0.625);
        const RadialFunction lap = apply_flap(*op, flat);
        double flat_resid = 0.0;
        for (const double v : lap.values)
            flat_resid = std::max(flat_resid, std::abs(v));
        if (flat_resid != 0.0)
            throw NumericalError("constants are not annihilated exactly: " +
                                 format_double(flat_resid));
        return "offdiag_max=" + format_double(max_offdiag) +
               " rowsum_gap=" + format_double(worst_gap);
    });

    run_check("coefficients", [&] {
        const double theta_probe = c.theta_auto ? 0.1 * c.theta1 : c.theta;
        const ShapeFunctions shapes = seeded_shapes(c.seed);
        const CoefficientPair coeffs = make_coefficient_pair(
            grid, theta_probe, c.tau, c.alpha, omega, shapes.k, shapes.K);
        check_coefficient_envelopes(coeffs, omega);
        return "theta_probe=" + format_double(theta_probe);
    });

    run_check("degenerate_solve", [&] {
        if (!op)
            throw NumericalError("skipped: operator assembly failed");
        const double a = c.a_list.front();
        const OrderedPair pair =
            make_ordered_pair(a, omega, c.tau, c.theta1, grid, c.dimension, c.alpha);
        const CoefficientPair zero = make_coefficient_pair(
            grid, 0.0, c.tau, c.alpha, omega, [](double) { return 1.0; },
            [](double) { return 1.0; });
        const SolveResult res = perron_solve(*op, pair, zero, c.p, perron_options(c));
        double deviation = 0.0;
        for (const double v : res.u.values)
            deviation = std::max(deviation, std::abs(v - a));
        if (res.iterations > 2)
            throw NumericalError("flat solution took " +
                                 std::to_string(res.iterations) + " iterations");
        if (!(deviation <= 1e-10))
            throw NumericalError("flat solution off by " + format_double(deviation));
        if (res.monotone_violations != 0)
            throw NumericalError("iteration moved the wrong way " +
                                 std::to_string(res.monotone_violations) + " times");
        return "iterations=" + std::to_string(res.iterations) +
               " deviation=" + format_double(deviation);
    });

    int failed = 0;
    std::vector<std::pair<std::string, std::string>> kv = {{"record", "verify"}};
    for (const CheckResult& check : checks) {
        std::cout << (check.ok ? "[ ok ] " : "[FAIL] ") << check.name << "  "
                  << check.detail << "\n";
        kv.emplace_back(check.name, check.ok ? "1" : "0");
        if (!check.ok)
            ++failed;
    }
    kv.emplace_back("pass", failed == 0 ? "1" : "0");
    const std::string record = format_summary(kv);
    write_text(out / "verify.summary", config_record(c) + "\n" + record + "\n");
    std::cout << record << "\n";
    if (failed > 0)
        throw NumericalError("verify: " + std::to_string(failed) + " of " +
                             std::to_string(checks.size()) +
                             " invariant checks failed");
}

} // namespace fraclap::tools
