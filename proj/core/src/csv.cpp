#include "fraclap/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

#include "fraclap/errors.hpp"

namespace fraclap {

std::string format_double(double x) {
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x)
            break;
    }
    return buf;
}

std::string format_summary(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string line;
    for (const auto& [key, value] : kv) {
        if (!line.empty())
            line += ' ';
        line += key;
        line += '=';
        line += value;
    }
    return line;
}

void write_envelope_csv(std::ostream& os, const EnvelopeVerification& v) {
    os << "r,w,upper_shape,lower_shape\n";
    for (std::size_t i = 0; i < v.upper.radii.size(); ++i)
        os << format_double(v.upper.radii[i]) << ','
           << format_double(v.upper.w_values[i]) << ','
           << format_double(v.upper.bound_values[i]) << ','
           << format_double(v.lower.bound_values[i]) << '\n';
    os << "# "
       << format_summary({{"regime", regime_name(v.regime)},
                          {"fitted_slope", format_double(v.upper.fitted_slope)},
                          {"C_upper", format_double(v.upper.fitted_C)},
                          {"C_lower", format_double(v.lower.fitted_C)},
                          {"pass", v.pass() ? "true" : "false"}})
       << '\n';
}

void write_solution_csv(std::ostream& os, const RadialFunction& u,
                        const RadialFunction& sub, const RadialFunction& super,
                        const std::vector<double>& interior_residuals) {
    require_same_grid(u, sub);
    require_same_grid(u, super);
    const auto& r = u.grid->nodes;
    if (interior_residuals.size() + 1 != r.size())
        throw ValidationError("write_solution_csv: residual column must cover "
                              "exactly the interior nodes");
    os << "r,u,U_sub,U_super,residual\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double res = i + 1 < r.size() ? interior_residuals[i] : 0.0;
        os << format_double(r[i]) << ',' << format_double(u.values[i]) << ','
           << format_double(sub.values[i]) << ',' << format_double(super.values[i])
           << ',' << format_double(res) << '\n';
    }
}

void read_radius_value_csv(std::istream& is, std::vector<double>& radii,
                           std::vector<double>& values) {
    radii.clear();
    values.clear();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError("table profile line " + std::to_string(lineno) +
                                  ": expected two comma-separated columns");
        const auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        char* end = nullptr;
        const std::string left = trim(line.substr(0, comma));
        const std::string right = trim(line.substr(comma + 1));
        const double r = std::strtod(left.c_str(), &end);
        const bool left_ok = end != left.c_str() && end == left.c_str() + left.size();
        const double v = std::strtod(right.c_str(), &end);
        const bool right_ok =
            end != right.c_str() && end == right.c_str() + right.size();
        if (!left_ok || !right_ok) {
            if (lineno == 1)
                continue; // header row
            throw ValidationError("table profile line " + std::to_string(lineno) +
                                  ": non-numeric entry");
        }
        radii.push_back(r);
        values.push_back(v);
    }
    if (radii.empty())
        throw ValidationError("table profile: no data rows");
}

} // namespace fraclap

