#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rodfield/inverse.hpp"

namespace rodfield {

/// Config file problem. `key` is empty for syntax errors; `line` is 1-based
/// or 0 when unknown.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, int line, const std::string& what);
    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

struct GridSpec {
    double xmin = -3.0, xmax = 3.0;
    double ymin = -3.0, ymax = 3.0;
    int nx = 61, ny = 61;

    /// Row-major points, x fastest.
    std::vector<Vec2> points() const;
};

struct SensorConfig {
    Vec2 center = Vec2::Zero();
    double radius = 5.0;
    int count = 64;
};

/// Everything a run needs. Loaded from a flat YAML mapping whose keys are
/// listed in `known_config_keys()`; unknown keys are rejected.
struct RunConfig {
    RodSpec rod;
    HarmonicBackground background = HarmonicBackground::linear({1.0, 0.0});
    GridSpec grid;
    SensorConfig sensors;

    // solver; n_cap / n_facade of 0 mean "from nodes_per_delta"
    int n_cap = 0;
    int n_facade = 0;
    double nodes_per_delta = 4.0;
    int n_quad = 16;
    ForwardModel model = ForwardModel::bem;

    // compare
    std::vector<double> deltas{0.1, 0.05, 0.025};
    double probe_radius = 3.0;
    int probe_count = 256;

    // invert
    double noise_rms = 0.0;
    ForwardModel source = ForwardModel::bem;
    std::uint64_t seed = 0;
    bool has_init = false;
    FitParams init;
    int max_iter = 200;
    double tolerance = 1e-10;
    bool free_transverse = true;

    Resolution resolution() const;
    Resolution resolution_for(const RodSpec& spec) const;

    /// Cross-field checks (grid counts, sensor circle around the rod, ...).
    void validate() const;
};

const std::vector<std::string>& known_config_keys();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace rodfield
