#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rz/meanfield.hpp"
#include "rz/model.hpp"

namespace rz {

/// Plain-text key=value run configuration ('#' comments, UTF-8). Unknown keys
/// are rejected at load time; every getter records the resolved value so a run
/// can echo the exact configuration it used. Environment variables override
/// file values via prefix-matched names (key `g1` <- `RZ_G1`).
class RunConfig {
  public:
    static const std::set<std::string>& known_keys();

    static RunConfig from_file(const std::string& path, const std::string& env_prefix = "RZ_");
    static RunConfig from_text(const std::string& text, const std::string& env_prefix = "RZ_");

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key, double fallback);
    int get_int(const std::string& key, int fallback);
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
    bool get_bool(const std::string& key, bool fallback);
    /// Angle values accept plain decimals or pi expressions: "pi/2", "-3pi/4".
    double get_angle(const std::string& key, double fallback);
    std::vector<double> get_angle_list(const std::string& key,
                                       const std::vector<double>& fallback);
    std::vector<int> get_int_list(const std::string& key, const std::vector<int>& fallback);

    /// Throw ConfigError naming the key when absent.
    std::string require_string(const std::string& key);
    double require_double(const std::string& key);
    double require_angle(const std::string& key);
    int require_int(const std::string& key);

    /// Model parameters with the paper-wide defaults (omega=1, delta=50,
    /// j2=0.05). j1 comes from `j1` or `j1_over_j2` (both at once is an error).
    ModelParams model_params();
    MinimizeOptions minimize_options();

    /// Sorted key=value snapshot of every key this run resolved.
    std::string resolved_text() const;

  private:
    void apply_env(const std::string& prefix);
    std::map<std::string, std::string> kv_;
    std::map<std::string, std::string> resolved_;
};

/// Parse "pi/2"-style angle strings or plain decimals.
double parse_angle(const std::string& text);

}  // namespace rz
