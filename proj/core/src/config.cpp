#include "rz/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace rz {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has a non-numeric value: " + v, key);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

double parse_angle(const std::string& text) {
    const std::string s = trim(text);
    const size_t pos = s.find("pi");
    if (pos == std::string::npos) {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad angle: " + text);
        return v;
    }
    std::string pre = trim(s.substr(0, pos));
    std::string post = trim(s.substr(pos + 2));
    if (!pre.empty() && pre.back() == '*') pre = trim(pre.substr(0, pre.size() - 1));
    double coeff = 1.0;
    if (pre == "-") {
        coeff = -1.0;
    } else if (pre == "+" || pre.empty()) {
        coeff = 1.0;
    } else {
        size_t used = 0;
        coeff = std::stod(pre, &used);
        if (used != pre.size()) throw std::invalid_argument("bad angle: " + text);
    }
    double divisor = 1.0;
    if (!post.empty()) {
        if (post.front() != '/') throw std::invalid_argument("bad angle: " + text);
        const std::string d = trim(post.substr(1));
        size_t used = 0;
        divisor = std::stod(d, &used);
        if (used != d.size() || divisor == 0.0)
            throw std::invalid_argument("bad angle: " + text);
    }
    return coeff * std::numbers::pi / divisor;
}

const std::set<std::string>& RunConfig::known_keys() {
    static const std::set<std::string> keys = {
        // model
        "omega", "delta", "g1", "j1", "j2", "j1_over_j2", "theta", "n_cavities",
        // minimizer
        "tol_grad_scale", "max_iterations", "n_random_seeds", "seed",
        // run control
        "workers", "out_dir",
        // scan grid
        "axis1", "axis1_min", "axis1_max", "axis1_points",
        "axis2", "axis2_min", "axis2_max", "axis2_points", "refine_boundaries",
        // current sweeps
        "ratio_min", "ratio_max", "ratio_points", "theta_list",
        // exponent fits
        "transition", "side", "modes", "window_min", "window_max", "fit_points",
        // exact diagonalization
        "n_max", "n_max_list", "fock_cap", "ed_solver", "ed_tol", "ed_dump_vector",
    };
    return keys;
}

RunConfig RunConfig::from_file(const std::string& path, const std::string& env_prefix) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str(), env_prefix);
}

RunConfig RunConfig::from_text(const std::string& text, const std::string& env_prefix) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        cfg.set(key, value);
    }
    cfg.apply_env(env_prefix);
    return cfg;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'", key);
    kv_[key] = value;
}

void RunConfig::apply_env(const std::string& prefix) {
    if (prefix.empty()) return;
    for (const std::string& key : known_keys()) {
        std::string name = prefix;
        for (char c : key) name += static_cast<char>(std::toupper(c));
        if (const char* v = std::getenv(name.c_str())) kv_[key] = v;
    }
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) {
    const std::string v = has(key) ? kv_.at(key) : fallback;
    resolved_[key] = v;
    return v;
}

double RunConfig::get_double(const std::string& key, double fallback) {
    if (!has(key)) {
        std::ostringstream os;
        os << fallback;
        resolved_[key] = os.str();
        return fallback;
    }
    const double v = to_double(key, kv_.at(key));
    resolved_[key] = kv_.at(key);
    return v;
}

int RunConfig::get_int(const std::string& key, int fallback) {
    return static_cast<int>(get_double(key, fallback));
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) {
        resolved_[key] = std::to_string(fallback);
        return fallback;
    }
    try {
        const std::uint64_t v = std::stoull(kv_.at(key));
        resolved_[key] = kv_.at(key);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has a non-integer value", key);
    }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) {
    const std::string v = get_string(key, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "' has a non-boolean value: " + v, key);
}

double RunConfig::get_angle(const std::string& key, double fallback) {
    if (!has(key)) {
        std::ostringstream os;
        os << fallback;
        resolved_[key] = os.str();
        return fallback;
    }
    try {
        const double v = parse_angle(kv_.at(key));
        resolved_[key] = kv_.at(key);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has a bad angle value: " + kv_.at(key), key);
    }
}

std::vector<double> RunConfig::get_angle_list(const std::string& key,
                                              const std::vector<double>& fallback) {
    if (!has(key)) {
        std::ostringstream os;
        for (size_t i = 0; i < fallback.size(); ++i) os << (i ? "," : "") << fallback[i];
        resolved_[key] = os.str();
        return fallback;
    }
    std::vector<double> out;
    try {
        for (const std::string& item : split(kv_.at(key), ','))
            if (!item.empty()) out.push_back(parse_angle(item));
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has a bad angle list", key);
    }
    resolved_[key] = kv_.at(key);
    return out;
}

std::vector<int> RunConfig::get_int_list(const std::string& key,
                                         const std::vector<int>& fallback) {
    if (!has(key)) {
        std::ostringstream os;
        for (size_t i = 0; i < fallback.size(); ++i) os << (i ? "," : "") << fallback[i];
        resolved_[key] = os.str();
        return fallback;
    }
    std::vector<int> out;
    try {
        for (const std::string& item : split(kv_.at(key), ','))
            if (!item.empty()) out.push_back(std::stoi(item));
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has a bad integer list", key);
    }
    resolved_[key] = kv_.at(key);
    return out;
}

std::string RunConfig::require_string(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'", key);
    return get_string(key, "");
}

double RunConfig::require_double(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'", key);
    return get_double(key, 0.0);
}

double RunConfig::require_angle(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'", key);
    return get_angle(key, 0.0);
}

int RunConfig::require_int(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key '" + key + "'", key);
    return get_int(key, 0);
}

ModelParams RunConfig::model_params() {
    ModelParams p;
    p.omega = get_double("omega", 1.0);
    p.delta = get_double("delta", 50.0);
    p.g1 = get_double("g1", 0.0);
    p.j2 = get_double("j2", 0.05);
    if (has("j1") && has("j1_over_j2"))
        throw ConfigError("keys 'j1' and 'j1_over_j2' are mutually exclusive",
                          "j1_over_j2");
    if (has("j1_over_j2"))
        p.j1 = get_double("j1_over_j2", 0.0) * p.j2;
    else
        p.j1 = get_double("j1", 0.0);
    p.theta = get_angle("theta", 0.0);
    p.n_cavities = get_int("n_cavities", 6);
    return p;
}

MinimizeOptions RunConfig::minimize_options() {
    MinimizeOptions opts;
    opts.tol_grad_scale = get_double("tol_grad_scale", 1e-10);
    opts.max_iterations = get_int("max_iterations", 10000);
    opts.n_random_seeds = get_int("n_random_seeds", 20);
    opts.rng_seed = get_u64("seed", opts.rng_seed);
    return opts;
}

std::string RunConfig::resolved_text() const {
    std::ostringstream os;
    for (const auto& [k, v] : resolved_) os << k << " = " << v << "\n";
    return os.str();
}

}  // namespace rz
