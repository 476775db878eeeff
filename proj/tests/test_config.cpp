#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rodfield/config.hpp"

using namespace rodfield;

namespace {

std::string error_key(const std::string& text, int* line = nullptr) {
    try {
        parse_config(text).validate();
    } catch (const ConfigError& e) {
        if (line) *line = e.line();
        return e.key();
    }
    return "<ok>";
}

}  // namespace

TEST_CASE("defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.rod.length == 1.0);
    CHECK(c.rod.sigma0 == 2.0);
    CHECK(c.background.is_linear());
    CHECK(c.background.uniform_gradient() == Vec2(1.0, 0.0));
    CHECK(c.grid.points().size() == 61u * 61u);
    CHECK(c.deltas == std::vector<double>{0.1, 0.05, 0.025});
    CHECK_FALSE(c.has_init);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("all keys parse") {
    const RunConfig c = parse_config(R"(# rod
L: 3
delta: 0.1
center: [0.5, -1]
angle: 0.25
sigma0: 4
xmin: -1
xmax: 1
ymin: 0
ymax: 2
nx: 3
ny: 2
sensor_center: [0.5, -1]
sensor_radius: 4
sensor_count: 32
n_cap: 20
n_facade: 90
nodes_per_delta: 8
n_quad: 32
model: asymptotic
deltas: [0.2, 0.1]
probe_radius: 4
probe_count: 64
noise_rms: 0.001
source: asymptotic
seed: 99
init_center: [0, 0]
init_angle: 0.1
init_length: 1.5
max_iter: 50
tolerance: 1e-8
free_transverse: false
)");
    CHECK(c.rod.length == 3.0);
    CHECK(c.rod.center == Vec2(0.5, -1.0));
    CHECK(c.rod.sigma0 == 4.0);
    CHECK(c.sensors.count == 32);
    CHECK(c.resolution().n_cap == 20);
    CHECK(c.resolution().n_facade == 90);
    CHECK(c.model == ForwardModel::asymptotic);
    CHECK(c.source == ForwardModel::asymptotic);
    CHECK(c.seed == 99u);
    CHECK(c.has_init);
    CHECK(c.init.length == 1.5);
    CHECK(c.max_iter == 50);
    CHECK_FALSE(c.free_transverse);
    CHECK(c.deltas.size() == 2);
    const std::vector<Vec2> g = c.grid.points();
    REQUIRE(g.size() == 6);
    CHECK(g[0] == Vec2(-1.0, 0.0));
    CHECK(g[1] == Vec2(0.0, 0.0));
    CHECK(g[3] == Vec2(-1.0, 2.0));
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("background forms") {
    CHECK(parse_config("a: [0, 2]").background.uniform_gradient() == Vec2(0.0, 2.0));
    const RunConfig q = parse_config("h_poly: [0, 1, 0, 0.5, 0]");
    CHECK_FALSE(q.background.is_linear());
    CHECK(q.background.coefficients()[3] == 0.5);
    CHECK(error_key("a: [1, 0]\nh_poly: [0, 1, 0, 0, 0]") != "<ok>");
    CHECK(error_key("h_poly: [0, 1]") == "h_poly");
}

TEST_CASE("errors name key and line") {
    int line = 0;
    CHECK(error_key("L: 2") == "<ok>");
    CHECK(error_key("L: 2\ndelta: 0.1\nbogus: 3\n", &line) == "bogus");
    CHECK(line == 3);
    CHECK(error_key("L: 2\ndelta: abc\n", &line) == "delta");
    CHECK(line == 2);
    CHECK(error_key("center: [1]") == "center");
    CHECK(error_key("nx: 1") == "nx");
    CHECK(error_key("model: fem") == "model");
    CHECK(error_key("deltas: []") == "deltas");
    CHECK(error_key("- a\n- b\n") == "");
    CHECK(error_key("L: [1, 2") == "");
    CHECK(error_key("delta: -1") == "delta");
    // Sensor circle has to enclose the rod.
    CHECK(error_key("L: 4\nsensor_radius: 1.5\n") == "sensor_radius");
}

TEST_CASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/rodfield.yaml"), std::ios_base::failure);
}
