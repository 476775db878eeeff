#include "rodfield/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace rodfield {

ConfigError::ConfigError(std::string key, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : key + ": ") + what),
      key_(std::move(key)),
      line_(line) {}

namespace {

// ValidationError::what() already starts with "field: ".
std::string bare_message(const ValidationError& e) {
    const std::string w = e.what();
    const std::string prefix = e.field() + ": ";
    return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

}  // namespace

std::vector<Vec2> GridSpec::points() const {
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int j = 0; j < ny; ++j) {
        const double y = ymin + (ymax - ymin) * j / (ny - 1);
        for (int i = 0; i < nx; ++i) pts.emplace_back(xmin + (xmax - xmin) * i / (nx - 1), y);
    }
    return pts;
}

Resolution RunConfig::resolution_for(const RodSpec& spec) const {
    Resolution r = auto_resolution(spec, nodes_per_delta);
    if (n_cap > 0) r.n_cap = n_cap;
    if (n_facade > 0) r.n_facade = n_facade;
    return r;
}

Resolution RunConfig::resolution() const { return resolution_for(rod); }

void RunConfig::validate() const {
    try {
        rod.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.field(), 0, bare_message(e));
    }
    if (background.trivial()) throw ConfigError("a", 0, "background field must be nonzero");
    if (grid.nx < 2) throw ConfigError("nx", 0, "need at least 2 grid columns");
    if (grid.ny < 2) throw ConfigError("ny", 0, "need at least 2 grid rows");
    if (!(grid.xmin < grid.xmax)) throw ConfigError("xmax", 0, "xmax must exceed xmin");
    if (!(grid.ymin < grid.ymax)) throw ConfigError("ymax", 0, "ymax must exceed ymin");
    if (n_cap != 0 && n_cap < 8) throw ConfigError("n_cap", 0, "must be 0 (auto) or >= 8");
    if (n_facade != 0 && n_facade < 8) throw ConfigError("n_facade", 0, "must be 0 (auto) or >= 8");
    if (!(nodes_per_delta > 0.0)) throw ConfigError("nodes_per_delta", 0, "must be > 0");
    if (n_quad < 16) throw ConfigError("n_quad", 0, "must be >= 16");
    if (sensors.count < 1) throw ConfigError("sensor_count", 0, "must be >= 1");
    if (!(sensors.radius > 0.0)) throw ConfigError("sensor_radius", 0, "must be > 0");
    const double reach = std::max((rod.world_p() - sensors.center).norm(), (rod.world_q() - sensors.center).norm());
    if (reach + 3.0 * rod.delta > sensors.radius)
        throw ConfigError("sensor_radius", 0, "sensor circle must enclose the rod with a 2*delta gap");
    if (deltas.empty()) throw ConfigError("deltas", 0, "need at least one value");
    for (double d : deltas)
        if (!(d > 0.0)) throw ConfigError("deltas", 0, "values must be > 0");
    if (!(probe_radius > 0.0)) throw ConfigError("probe_radius", 0, "must be > 0");
    if (probe_count < 1) throw ConfigError("probe_count", 0, "must be >= 1");
    if (!(noise_rms >= 0.0)) throw ConfigError("noise_rms", 0, "must be >= 0");
    if (max_iter < 1) throw ConfigError("max_iter", 0, "must be >= 1");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance", 0, "must be > 0");
    if (has_init && !(init.length > 0.0)) throw ConfigError("init_length", 0, "must be > 0");
}

const std::vector<std::string>& known_config_keys() {
    static const std::vector<std::string> keys{
        "L",           "delta",        "center",        "angle",        "sigma0",        "a",
        "h_poly",      "xmin",         "xmax",          "ymin",         "ymax",          "nx",
        "ny",          "sensor_center", "sensor_radius", "sensor_count", "n_cap",         "n_facade",
        "nodes_per_delta", "n_quad",   "model",         "deltas",       "probe_radius",  "probe_count",
        "noise_rms",   "source",       "seed",          "init_center",  "init_angle",    "init_length",
        "max_iter",    "tolerance",    "free_transverse"};
    return keys;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

template <class T>
T scalar(const YAML::Node& n, const std::string& key, const char* expected) {
    if (!n.IsScalar()) throw ConfigError(key, line_of(n), std::string("expected ") + expected);
    try {
        return n.as<T>();
    } catch (const YAML::BadConversion&) {
        throw ConfigError(key, line_of(n), std::string("expected ") + expected + ", got '" + n.Scalar() + "'");
    }
}

double number(const YAML::Node& n, const std::string& key) {
    const double v = scalar<double>(n, key, "a number");
    if (!std::isfinite(v)) throw ConfigError(key, line_of(n), "must be finite");
    return v;
}

int integer(const YAML::Node& n, const std::string& key) { return scalar<int>(n, key, "an integer"); }

std::vector<double> numbers(const YAML::Node& n, const std::string& key) {
    if (!n.IsSequence()) throw ConfigError(key, line_of(n), "expected a list [x, y, ...]");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(number(item, key));
    return out;
}

Vec2 vec2(const YAML::Node& n, const std::string& key) {
    const std::vector<double> v = numbers(n, key);
    if (v.size() != 2) throw ConfigError(key, line_of(n), "expected 2 components");
    return {v[0], v[1]};
}

ForwardModel model_value_of(const YAML::Node& n, const std::string& key) {
    const auto name = scalar<std::string>(n, key, "bem or asymptotic");
    try {
        return parse_forward_model(name);
    } catch (const ValidationError& e) {
        throw ConfigError(key, line_of(n), bare_message(e));
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("", e.mark.line + 1, e.msg);
    }
    RunConfig c;
    if (root.IsNull()) return c;
    if (!root.IsMap()) throw ConfigError("", line_of(root), "config must be a mapping of key: value pairs");

    const auto& known = known_config_keys();
    bool has_a = false;
    bool has_poly = false;
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        const YAML::Node& v = kv.second;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError(key, line_of(kv.first), "unknown key");

        if (key == "L") c.rod.length = number(v, key);
        else if (key == "delta") c.rod.delta = number(v, key);
        else if (key == "center") c.rod.center = vec2(v, key);
        else if (key == "angle") c.rod.angle = number(v, key);
        else if (key == "sigma0") c.rod.sigma0 = number(v, key);
        else if (key == "a") {
            c.background = HarmonicBackground::linear(vec2(v, key));
            has_a = true;
        } else if (key == "h_poly") {
            const std::vector<double> p = numbers(v, key);
            if (p.size() != 5) throw ConfigError(key, line_of(v), "expected 5 coefficients [c0, c1, c2, c3, c4]");
            c.background = HarmonicBackground::polynomial({p[0], p[1], p[2], p[3], p[4]});
            has_poly = true;
        } else if (key == "xmin") c.grid.xmin = number(v, key);
        else if (key == "xmax") c.grid.xmax = number(v, key);
        else if (key == "ymin") c.grid.ymin = number(v, key);
        else if (key == "ymax") c.grid.ymax = number(v, key);
        else if (key == "nx") c.grid.nx = integer(v, key);
        else if (key == "ny") c.grid.ny = integer(v, key);
        else if (key == "sensor_center") c.sensors.center = vec2(v, key);
        else if (key == "sensor_radius") c.sensors.radius = number(v, key);
        else if (key == "sensor_count") c.sensors.count = integer(v, key);
        else if (key == "n_cap") c.n_cap = integer(v, key);
        else if (key == "n_facade") c.n_facade = integer(v, key);
        else if (key == "nodes_per_delta") c.nodes_per_delta = number(v, key);
        else if (key == "n_quad") c.n_quad = integer(v, key);
        else if (key == "model") c.model = model_value_of(v, key);
        else if (key == "deltas") c.deltas = numbers(v, key);
        else if (key == "probe_radius") c.probe_radius = number(v, key);
        else if (key == "probe_count") c.probe_count = integer(v, key);
        else if (key == "noise_rms") c.noise_rms = number(v, key);
        else if (key == "source") c.source = model_value_of(v, key);
        else if (key == "seed") c.seed = scalar<std::uint64_t>(v, key, "a non-negative integer");
        else if (key == "init_center") {
            c.init.center = vec2(v, key);
            c.has_init = true;
        } else if (key == "init_angle") {
            c.init.angle = number(v, key);
            c.has_init = true;
        } else if (key == "init_length") {
            c.init.length = number(v, key);
            c.has_init = true;
        } else if (key == "max_iter") c.max_iter = integer(v, key);
        else if (key == "tolerance") c.tolerance = number(v, key);
        else if (key == "free_transverse") c.free_transverse = scalar<bool>(v, key, "true or false");
    }
    if (has_a && has_poly) throw ConfigError("h_poly", 0, "give either a or h_poly, not both");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace rodfield
