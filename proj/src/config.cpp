#include "grainkin/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "grainkin/errors.hpp"

namespace grainkin {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(key, key + ": cannot parse '" + v + "' as a real number");
    return out;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(key, key + ": cannot parse '" + v + "' as a nonnegative integer");
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_real(key, item));
    }
    return out;
}

std::string format_list(const std::vector<double>& v) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

void assign(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment") cfg.experiment = value;
    else if (key == "gamma") cfg.gamma = parse_real(key, value);
    else if (key == "c") cfg.c = parse_real(key, value);
    else if (key == "L") cfg.L = parse_real(key, value);
    else if (key == "N") cfg.N = parse_count(key, value);
    else if (key == "xi_max") cfg.xi_max = parse_real(key, value);
    else if (key == "M") cfg.M = parse_count(key, value);
    else if (key == "dt") cfg.dt = parse_real(key, value);
    else if (key == "T") cfg.T = parse_real(key, value);
    else if (key == "k_list") cfg.k_list = parse_list(key, value);
    else if (key == "a") cfg.a = parse_real(key, value);
    else if (key == "tol") cfg.tol = parse_real(key, value);
    else if (key == "seed") cfg.seed = parse_count(key, value);
    else if (key == "sweep") cfg.sweep = parse_list(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else throw ConfigError(key, "unknown key '" + key + "'");
}

std::pair<std::string, std::string> split_assignment(std::string_view line, const char* what) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        const std::string key = trim(line);
        throw ConfigError(key, std::string(what) + ": expected 'key = value', got '" + key + "'");
    }
    return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"constants", "maxwell-fourier",  "maxwell-physical",
                                                   "profile",   "uniqueness-probe", "gap"};
    return names;
}

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "constants") {
        c.L = 200.0;
        c.N = 16384;
    } else if (experiment == "maxwell-fourier") {
        c.xi_max = 60.0;
        c.M = 8192;
        c.dt = 0.01;
        c.T = 50.0;
    } else if (experiment == "maxwell-physical") {
        c.L = 200.0;
        c.N = 16384;
        c.dt = 0.05;
        c.T = 50.0;
        c.xi_max = 20.0;
        c.M = 2000;
    } else if (experiment == "profile" || experiment == "uniqueness-probe") {
        c.gamma = 0.1;
        c.L = 40.0;
        c.N = 4096;
        c.dt = 0.025;
        c.T = 3000.0;
        c.tol = 1e-4;
    } else if (experiment == "gap") {
        c.a = 2.5;
        c.L = 100.0;
        c.N = 8192;
        c.dt = 0.05;
        c.T = 100.0;
    } else {
        throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
    }
    return c;
}

ExperimentConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        entries.push_back(split_assignment(line, "config"));
    }
    for (const std::string& o : overrides) entries.push_back(split_assignment(o, "override"));

    // The experiment decides the defaults; its last assignment wins.
    std::string experiment = "constants";
    for (const auto& [k, v] : entries)
        if (k == "experiment") experiment = v;
    ExperimentConfig cfg = default_config(experiment);
    for (const auto& [k, v] : entries) {
        if (v.empty() && k != "sweep") throw ConfigError(k, k + ": missing value");
        assign(cfg, k, v);
    }
    validate(cfg);
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
        throw ConfigError("experiment", "unknown experiment '" + cfg.experiment + "'");
    if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) throw ConfigError("gamma", "gamma must lie in [0,1)");
    const bool profile = cfg.experiment == "profile" || cfg.experiment == "uniqueness-probe";
    if (profile && !(cfg.gamma > 0.0))
        throw ConfigError("gamma", "gamma must lie in (0,1) for steady profiles");
    if (!(cfg.c >= 0.0)) throw ConfigError("c", "c must be nonnegative");
    if (!(cfg.L > 0.0)) throw ConfigError("L", "L must be positive");
    if (cfg.N < 8 || cfg.N % 2 != 0) throw ConfigError("N", "N must be even and at least 8");
    if (!(cfg.xi_max > 0.0)) throw ConfigError("xi_max", "xi_max must be positive");
    if (cfg.M < 8) throw ConfigError("M", "M must be at least 8");
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.5)) throw ConfigError("dt", "dt must lie in (0, 0.5]");
    if (!(cfg.T > 0.0)) throw ConfigError("T", "T must be positive");
    if (cfg.k_list.empty()) throw ConfigError("k_list", "k_list must not be empty");
    for (double k : cfg.k_list)
        if (!(k > 2.0 && k <= 3.0)) throw ConfigError("k_list", "every k must lie in (2,3]");
    if (!(cfg.a > 2.0 && cfg.a < 3.0)) throw ConfigError("a", "a must lie in (2,3)");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol", "tol must be positive");
    for (double g : cfg.sweep)
        if (!(g > 0.0 && g < 1.0)) throw ConfigError("sweep", "sweep values must lie in (0,1)");
    if (cfg.output_dir.empty()) throw ConfigError("output_dir", "output_dir must not be empty");
}

std::string echo_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "experiment = " << cfg.experiment << '\n'
       << "gamma = " << cfg.gamma << '\n'
       << "c = " << cfg.c << '\n'
       << "L = " << cfg.L << '\n'
       << "N = " << cfg.N << '\n'
       << "xi_max = " << cfg.xi_max << '\n'
       << "M = " << cfg.M << '\n'
       << "dt = " << cfg.dt << '\n'
       << "T = " << cfg.T << '\n'
       << "k_list = " << format_list(cfg.k_list) << '\n'
       << "a = " << cfg.a << '\n'
       << "tol = " << cfg.tol << '\n'
       << "seed = " << cfg.seed << '\n'
       << "sweep = " << format_list(cfg.sweep) << '\n'
       << "output_dir = " << cfg.output_dir << '\n';
    return os.str();
}

}  // namespace grainkin
