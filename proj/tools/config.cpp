#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "fraclap/csv.hpp"
#include "fraclap/errors.hpp"
#include "json.hpp"

namespace fraclap::tools {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what) {
    throw ValidationError("config: " + key + " " + what);
}

double as_double(const ordered_json& v, const std::string& key) {
    if (!v.is_number())
        bad_key(key, "must be a number");
    return v.get<double>();
}

int as_int(const ordered_json& v, const std::string& key) {
    const double x = as_double(v, key);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        bad_key(key, "must be an integer");
    return static_cast<int>(x);
}

std::uint64_t as_uint(const ordered_json& v, const std::string& key) {
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    const double x = as_double(v, key);
    if (x != std::floor(x) || x < 0.0 || x > 9e15)
        bad_key(key, "must be a nonnegative integer");
    return static_cast<std::uint64_t>(x);
}

std::string as_string(const ordered_json& v, const std::string& key) {
    if (!v.is_string())
        bad_key(key, "must be a string");
    return v.get<std::string>();
}

std::vector<double> as_number_array(const ordered_json& v, const std::string& key) {
    if (!v.is_array())
        bad_key(key, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& item : v)
        out.push_back(as_double(item, key));
    return out;
}

void apply_profile(RunConfig& c, const ordered_json& v) {
    if (!v.is_object())
        bad_key("profile", "must be a table of profile settings");
    for (const auto& [key, value] : v.items()) {
        if (key == "kind")
            c.profile.kind = as_string(value, "profile.kind");
        else if (key == "parameter")
            c.profile.parameter = as_double(value, "profile.parameter");
        else if (key == "amplitude")
            c.profile.amplitude = as_double(value, "profile.amplitude");
        else if (key == "domain_floor")
            c.profile.domain_floor = as_double(value, "profile.domain_floor");
        else if (key == "file")
            c.profile.file = as_string(value, "profile.file");
        else
            bad_key("profile." + key, "is not a recognized setting");
    }
}

void apply_grid(RunConfig& c, const ordered_json& v) {
    if (!v.is_object())
        bad_key("grid", "must be a table of grid settings");
    for (const auto& [key, value] : v.items()) {
        if (key == "cells") {
            const int n = as_int(value, "grid.cells");
            if (n < 0)
                bad_key("grid.cells", "must be nonnegative");
            c.grid.cells = static_cast<std::size_t>(n);
        } else if (key == "r_max")
            c.grid.r_max = as_double(value, "grid.r_max");
        else if (key == "ratio")
            c.grid.ratio = as_double(value, "grid.ratio");
        else if (key == "first_cell")
            c.grid.first_cell = as_double(value, "grid.first_cell");
        else
            bad_key("grid." + key, "is not a recognized setting");
    }
}

void apply_tolerances(RunConfig& c, const ordered_json& v) {
    if (!v.is_object())
        bad_key("tolerances", "must be a table of tolerance settings");
    for (const auto& [key, value] : v.items()) {
        if (key == "solver_tol")
            c.tolerances.solver_tol = as_double(value, "tolerances.solver_tol");
        else if (key == "max_iterations")
            c.tolerances.max_iterations = as_int(value, "tolerances.max_iterations");
        else
            bad_key("tolerances." + key, "is not a recognized setting");
    }
}

RunConfig config_from_json(const ordered_json& j) {
    if (!j.is_object())
        throw ValidationError("config: the document root must be an object/table");
    RunConfig c;
    bool have_a = false;
    bool have_a_list = false;
    for (const auto& [key, value] : j.items()) {
        if (key == "dimension")
            c.dimension = as_int(value, "dimension");
        else if (key == "alpha")
            c.alpha = as_double(value, "alpha");
        else if (key == "tau")
            c.tau = as_double(value, "tau");
        else if (key == "p")
            c.p = as_double(value, "p");
        else if (key == "profile")
            apply_profile(c, value);
        else if (key == "source")
            c.source = as_string(value, "source");
        else if (key == "theta") {
            if (value.is_string()) {
                if (value.get<std::string>() != "auto")
                    bad_key("theta", "must be a number or the string \"auto\"");
                c.theta_auto = true;
                c.theta = 0.0;
            } else {
                c.theta_auto = false;
                c.theta = as_double(value, "theta");
            }
        } else if (key == "theta_fraction")
            c.theta_fraction = as_double(value, "theta_fraction");
        else if (key == "theta1")
            c.theta1 = as_double(value, "theta1");
        else if (key == "a") {
            have_a = true;
            c.a_list = {as_double(value, "a")};
        } else if (key == "a_list") {
            have_a_list = true;
            c.a_list = as_number_array(value, "a_list");
        } else if (key == "grid")
            apply_grid(c, value);
        else if (key == "tolerances")
            apply_tolerances(c, value);
        else if (key == "output_dir")
            c.output_dir = as_string(value, "output_dir");
        else if (key == "seed")
            c.seed = as_uint(value, "seed");
        else
            throw ValidationError("config: unknown key '" + key + "'");
    }
    if (have_a && have_a_list)
        throw ValidationError("config: give either 'a' or 'a_list', not both");
    return c;
}

// Minimal TOML reader covering the documented subset. Everything funnels
// into a JSON object so both formats share one applier above.

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"')
            in_string = !in_string;
        else if (line[i] == '#' && !in_string)
            return line.substr(0, i);
    }
    return line;
}

ordered_json parse_toml_scalar(const std::string& text, int line_no) {
    const std::string where = "config line " + std::to_string(line_no);
    if (text.empty())
        throw ValidationError(where + ": missing value");
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"')
            throw ValidationError(where + ": unterminated string");
        const std::string body = text.substr(1, text.size() - 2);
        if (body.find('"') != std::string::npos)
            throw ValidationError(where + ": escaped quotes are not supported");
        return ordered_json(body);
    }
    if (text == "true")
        return ordered_json(true);
    if (text == "false")
        return ordered_json(false);
    // Integers keep their type so unsigned fields (seed, cells) accept the
    // full range; anything with a point or exponent becomes a double.
    if (text.find_first_of(".eE") == std::string::npos) {
        char* end = nullptr;
        const long long i = std::strtoll(text.c_str(), &end, 10);
        if (end == text.c_str() + text.size())
            return ordered_json(i);
    }
    char* end = nullptr;
    const double x = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        throw ValidationError(where + ": cannot parse value '" + text + "'");
    return ordered_json(x);
}

ordered_json parse_toml_value(const std::string& text, int line_no) {
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']')
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": unterminated array");
        ordered_json arr = ordered_json::array();
        const std::string body = text.substr(1, text.size() - 2);
        std::size_t pos = 0;
        while (pos <= body.size()) {
            const std::size_t comma = body.find(',', pos);
            const std::string item =
                trim(comma == std::string::npos ? body.substr(pos)
                                                : body.substr(pos, comma - pos));
            if (!item.empty())
                arr.push_back(parse_toml_scalar(item, line_no));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        return arr;
    }
    return parse_toml_scalar(text, line_no);
}

ordered_json toml_to_json(const std::string& text) {
    ordered_json root = ordered_json::object();
    ordered_json* scope = &root;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        const std::string line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unterminated table header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": empty table name");
            if (!root.contains(name))
                root[name] = ordered_json::object();
            scope = &root[name];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": empty key");
        (*scope)[key] = parse_toml_value(value, line_no);
    }
    return root;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& format) {
    if (format == "toml")
        return config_from_json(toml_to_json(text));
    if (format != "json")
        throw ValidationError("config format must be 'json' or 'toml', got '" +
                              format + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("config: JSON parse failed: ") + e.what());
    }
    return config_from_json(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    std::string format;
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0)
        format = "json";
    else if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0)
        format = "toml";
    else {
        const std::size_t first = text.find_first_not_of(" \t\r\n");
        format = (first != std::string::npos && text[first] == '{') ? "json" : "toml";
    }

    RunConfig c = parse_config_text(text, format);
    if (c.profile.kind == "table" && !c.profile.file.empty() &&
        std::filesystem::path(c.profile.file).is_relative()) {
        std::filesystem::path dir = std::filesystem::path(path).parent_path();
        if (dir.empty())
            dir = ".";
        c.profile.file = (dir / c.profile.file).string();
    }
    return c;
}

std::string to_json(const RunConfig& c) {
    ordered_json j;
    j["dimension"] = c.dimension;
    j["alpha"] = c.alpha;
    j["tau"] = c.tau;
    j["p"] = c.p;
    j["profile"] = {{"kind", c.profile.kind},
                    {"parameter", c.profile.parameter},
                    {"amplitude", c.profile.amplitude},
                    {"domain_floor", c.profile.domain_floor},
                    {"file", c.profile.file}};
    j["source"] = c.source;
    if (c.theta_auto)
        j["theta"] = "auto";
    else
        j["theta"] = c.theta;
    j["theta_fraction"] = c.theta_fraction;
    j["theta1"] = c.theta1;
    j["a_list"] = c.a_list;
    j["grid"] = {{"cells", c.grid.cells},
                 {"r_max", c.grid.r_max},
                 {"ratio", c.grid.ratio},
                 {"first_cell", c.grid.first_cell}};
    j["tolerances"] = {{"solver_tol", c.tolerances.solver_tol},
                       {"max_iterations", c.tolerances.max_iterations}};
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j.dump(2) + "\n";
}

void validate_config(const RunConfig& c) {
    if (c.dimension < 1)
        throw ValidationError("config: dimension must be at least 1, got " +
                              std::to_string(c.dimension));
    if (!(c.alpha > 0.0) || !(c.alpha < 2.0) ||
        !(c.alpha < static_cast<double>(c.dimension)))
        throw ValidationError("config: alpha must lie in (0, 2) and below the "
                              "dimension, got alpha = " +
                              format_double(c.alpha) + " with dimension " +
                              std::to_string(c.dimension));
    if (!(c.tau >= c.alpha) || !std::isfinite(c.tau))
        throw ValidationError("config: tau must be finite and at least alpha, got "
                              "tau = " +
                              format_double(c.tau) + ", alpha = " +
                              format_double(c.alpha));
    if (!(c.p > 1.0) || !std::isfinite(c.p))
        throw ValidationError("config: p must be finite and exceed 1, got " +
                              format_double(c.p));

    if (c.profile.kind != "power" && c.profile.kind != "log_power" &&
        c.profile.kind != "table")
        throw ValidationError("config: profile.kind must be power, log_power, or "
                              "table, got '" +
                              c.profile.kind + "'");
    if (!(c.profile.parameter >= 0.0) || !std::isfinite(c.profile.parameter))
        throw ValidationError("config: profile.parameter must be finite and "
                              "nonnegative");
    if (!(c.profile.amplitude > 0.0) || !std::isfinite(c.profile.amplitude))
        throw ValidationError("config: profile.amplitude must be finite and positive");
    if (!(c.profile.domain_floor > 0.0) || !std::isfinite(c.profile.domain_floor))
        throw ValidationError("config: profile.domain_floor must be finite and "
                              "positive");
    if (c.profile.kind == "table" && c.profile.file.empty())
        throw ValidationError("config: profile.file is required for table profiles");

    if (c.source != "envelope" && c.source != "closed_form" &&
        c.source != "gaussian" && c.source != "zero")
        throw ValidationError("config: source must be envelope, closed_form, "
                              "gaussian, or zero, got '" +
                              c.source + "'");

    if (!c.theta_auto && (!(c.theta >= 0.0) || !std::isfinite(c.theta)))
        throw ValidationError("config: theta must be finite and nonnegative");
    if (!(c.theta_fraction > 0.0) || !(c.theta_fraction <= 1.0))
        throw ValidationError("config: theta_fraction must lie in (0, 1], got " +
                              format_double(c.theta_fraction));
    if (!(c.theta1 > 0.0) || !std::isfinite(c.theta1))
        throw ValidationError("config: theta1 must be finite and positive");

    if (c.a_list.empty())
        throw ValidationError("config: a_list must name at least one level");
    for (const double a : c.a_list)
        if (!(a > 0.0) || !(a < 1.0))
            throw ValidationError("config: a must lie in (0, 1), got " +
                                  format_double(a));
    std::set<double> distinct(c.a_list.begin(), c.a_list.end());
    if (distinct.size() != c.a_list.size())
        throw ValidationError("config: a_list levels must be distinct");

    if (c.grid.cells < 16)
        throw ValidationError("config: grid.cells must be at least 16, got " +
                              std::to_string(c.grid.cells));
    if (!(c.grid.r_max > 0.0) || !std::isfinite(c.grid.r_max))
        throw ValidationError("config: grid.r_max must be finite and positive");
    if (c.grid.ratio != 0.0 && (!(c.grid.ratio >= 1.0) || !(c.grid.ratio <= 4.0)))
        throw ValidationError("config: grid.ratio must be 0 (automatic) or in "
                              "[1, 4], got " +
                              format_double(c.grid.ratio));
    if (!(c.grid.first_cell > 0.0) || !(c.grid.first_cell < c.grid.r_max))
        throw ValidationError("config: grid.first_cell must lie in (0, r_max)");

    if (!(c.tolerances.solver_tol > 0.0))
        throw ValidationError("config: tolerances.solver_tol must be positive");
    if (c.tolerances.max_iterations < 1)
        throw ValidationError("config: tolerances.max_iterations must be at least 1");

    if (c.output_dir.empty())
        throw ValidationError("config: output_dir must not be empty");
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("dimension", std::to_string(c.dimension));
    kv.emplace_back("alpha", format_double(c.alpha));
    kv.emplace_back("tau", format_double(c.tau));
    kv.emplace_back("p", format_double(c.p));
    kv.emplace_back("profile.kind", c.profile.kind);
    kv.emplace_back("profile.parameter", format_double(c.profile.parameter));
    kv.emplace_back("profile.amplitude", format_double(c.profile.amplitude));
    kv.emplace_back("profile.domain_floor", format_double(c.profile.domain_floor));
    if (!c.profile.file.empty())
        kv.emplace_back("profile.file", c.profile.file);
    kv.emplace_back("source", c.source);
    kv.emplace_back("theta", c.theta_auto ? std::string("auto") : format_double(c.theta));
    kv.emplace_back("theta_fraction", format_double(c.theta_fraction));
    kv.emplace_back("theta1", format_double(c.theta1));
    std::string levels;
    for (std::size_t i = 0; i < c.a_list.size(); ++i) {
        if (i)
            levels += ',';
        levels += format_double(c.a_list[i]);
    }
    kv.emplace_back("a_list", levels);
    kv.emplace_back("grid.cells", std::to_string(c.grid.cells));
    kv.emplace_back("grid.r_max", format_double(c.grid.r_max));
    kv.emplace_back("grid.ratio", format_double(c.grid.ratio));
    kv.emplace_back("grid.first_cell", format_double(c.grid.first_cell));
    kv.emplace_back("tolerances.solver_tol", format_double(c.tolerances.solver_tol));
    kv.emplace_back("tolerances.max_iterations",
                    std::to_string(c.tolerances.max_iterations));
    kv.emplace_back("output_dir", c.output_dir);
    kv.emplace_back("seed", std::to_string(c.seed));
    return kv;
}

DecayProfile build_profile(const ProfileConfig& p) {
    if (p.kind == "power")
        return DecayProfile::power(p.parameter, p.amplitude, p.domain_floor);
    if (p.kind == "log_power")
        return DecayProfile::log_power(p.parameter, p.amplitude, p.domain_floor);
    if (p.kind == "table") {
        std::ifstream in(p.file);
        if (!in)
            throw ValidationError("profile.file: cannot open '" + p.file + "'");
        std::vector<double> radii, values;
        read_radius_value_csv(in, radii, values);
        return DecayProfile::table(std::move(radii), std::move(values));
    }
    throw ValidationError("profile.kind must be power, log_power, or table, got '" +
                          p.kind + "'");
}

ShapeFunctions seeded_shapes(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Uniform [0, 1) straight off the generator bits; <random> distributions
    // are implementation-defined and would break cross-platform determinism.
    const auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const double freq_k = 0.5 + 1.5 * unit();
    const double phase_k = 2.0 * std::numbers::pi * unit();
    const double freq_K = 0.5 + 1.5 * unit();
    const double phase_K = 2.0 * std::numbers::pi * unit();

    ShapeFunctions shapes;
    // Oscillation in log radius keeps the shapes slowly varying over the
    // whole grid instead of aliasing against the graded far cells.
    shapes.k = [freq_k, phase_k](double r) {
        return 0.5 + 0.5 * std::sin(freq_k * std::log1p(r) + phase_k);
    };
    shapes.K = [freq_K, phase_K](double r) {
        return std::sin(freq_K * std::log1p(r) + phase_K);
    };
    return shapes;
}

} // namespace fraclap::tools
