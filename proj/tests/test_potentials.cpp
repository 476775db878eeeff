#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rodfield/potentials.hpp"
#include "rodfield/quadrature.hpp"

using namespace rodfield;
using std::numbers::pi;

namespace {

RodSpec rod(double L, double d, Vec2 c = Vec2::Zero(), double angle = 0.0) {
    RodSpec s;
    s.length = L;
    s.delta = d;
    s.center = c;
    s.angle = angle;
    return s;
}

BoundaryMesh unit_disc(int n_cap) { return build_mesh(rod(0.0, 1.0), n_cap, 8); }

DensityVector density_of(const BoundaryMesh& m, double (*f)(const Vec2&)) {
    DensityVector phi{Eigen::VectorXd(m.size())};
    for (std::size_t i = 0; i < m.size(); ++i) phi.values[static_cast<Eigen::Index>(i)] = f(m[i].position);
    return phi;
}

}  // namespace

TEST_CASE("gauss-legendre rules") {
    const QuadratureRule r = gauss_legendre(8);
    CHECK(r.integrate([](double x) { return std::pow(x, 14); }) == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
    CHECK(r.integrate([](double x) { return std::pow(x, 15); }) == doctest::Approx(0.0));
    const QuadratureRule g = graded_rule(-1.0, 1.0, 0.2, 1e-3, 8);
    const double exact = (std::atan(0.8 / 1e-3) + std::atan(1.2 / 1e-3)) / 1e-3;
    CHECK(g.integrate([](double y) { return 1.0 / ((y - 0.2) * (y - 0.2) + 1e-6); }) ==
          doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("disc NP operator") {
    const BoundaryMesh m = unit_disc(32);
    for (NpDiagonal d : {NpDiagonal::gauss_identity, NpDiagonal::curvature_limit}) {
        const NpMatrix np = assemble_np(m, d);
        // On the unit circle the kernel is the constant 1/(4 pi).
        CHECK((np.weighted_column_sums().array() - 0.5).abs().maxCoeff() <= 1e-13);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(64);
        CHECK(((np.matrix * ones).array() - 0.5).abs().maxCoeff() <= 1e-13);
        Eigen::VectorXd mags = np.eigenvalues().cwiseAbs();
        std::sort(mags.data(), mags.data() + mags.size());
        CHECK(mags[63] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(mags[62] <= 1e-13);
    }
}

TEST_CASE("gauss identity columns on rods") {
    const RodSpec s = rod(2.0, 0.1, Vec2(0.4, -1.0), 0.9);
    const BoundaryMesh m = build_mesh(s, auto_resolution(s));
    const NpMatrix np = assemble_np(m);
    CHECK((np.weighted_column_sums().array() - 0.5).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("curvature-limit diagonal column sums") {
    const RodSpec s = rod(2.0, 0.1);
    const BoundaryMesh m = build_mesh(s, auto_resolution(s, 8.0));
    const NpMatrix np = assemble_np(m, NpDiagonal::curvature_limit);
    const Eigen::VectorXd dev = (np.weighted_column_sums().array() - 0.5).abs();
    MESSAGE("curvature-limit column sum deviation " << dev.maxCoeff());
    CHECK(dev.maxCoeff() <= 1e-3);
    // The deviation is concentrated where the curvature jumps.
    std::size_t worst = 0;
    dev.maxCoeff(&worst);
    CHECK(std::abs(std::abs(m[worst].position.x()) - 1.0) <= 4.0 * 0.1);
}

TEST_CASE("neumann data") {
    const RodSpec s = rod(2.0, 0.1);
    const BoundaryMesh m = build_mesh(s, 16, 40);
    const DensityVector up = neumann_data(m, HarmonicBackground::linear(Vec2(0.0, 1.0)));
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        if (m[i].tag == SegmentTag::facade_bottom) CHECK(up.values[k] == doctest::Approx(-1.0));
        if (m[i].tag == SegmentTag::facade_top) CHECK(up.values[k] == doctest::Approx(1.0));
    }
    const DensityVector side = neumann_data(m, HarmonicBackground::linear(Vec2(1.0, 0.0)));
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!is_cap(m[i].tag)) CHECK(side.values[static_cast<Eigen::Index>(i)] == 0.0);

    // Panel average of cos over an arc of angle w on the unit disc.
    const BoundaryMesh disc = unit_disc(32);
    const DensityVector dd = neumann_data(disc, HarmonicBackground::linear(Vec2(1.0, 0.0)));
    for (std::size_t i = 0; i < disc.size(); ++i) {
        const double w = disc[i].weight;
        CHECK(dd.values[static_cast<Eigen::Index>(i)] ==
              doctest::Approx(disc[i].position.x() * std::sin(0.5 * w) / (0.5 * w)).epsilon(1e-12));
    }

    const auto quad = HarmonicBackground::polynomial({0.0, 0.0, 0.0, 1.0, 0.0});
    const BoundaryMesh tilted = build_mesh(rod(3.0, 0.2, Vec2(1.0, 2.0), 0.3), 16, 60);
    CHECK(std::abs(weighted_total(tilted, neumann_data(tilted, quad))) <= 1e-10);
}

TEST_CASE("density solve") {
    const RodSpec s = rod(2.0, 0.05);
    const BoundaryMesh m = build_mesh(s, auto_resolution(s));
    const NpMatrix np = assemble_np(m);
    const double lambda = 1.5;

    DensityVector zero{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.size()))};
    CHECK(solve_density(np, lambda, zero).values.norm() == 0.0);

    const DensityVector rhs = neumann_data(m, HarmonicBackground::linear(Vec2(1.0, 1.0)));
    DensitySolveInfo info;
    const DensityVector phi = solve_density(np, lambda, rhs, &info);
    CHECK(info.relative_residual <= 1e-10);
    CHECK(std::abs(weighted_total(m, phi)) <= 1e-12);

    // Columns summing to 1/2 give sum w phi = sum w rhs / (lambda - 1/2) for any rhs.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    DensityVector any{Eigen::VectorXd(static_cast<Eigen::Index>(m.size()))};
    for (auto& v : any.values) v = n01(rng);
    for (double lam : {-3.0, -0.6, 0.75, 4.0}) {
        const DensityVector sol = solve_density(np, lam, any);
        CHECK(weighted_total(m, sol) == doctest::Approx(weighted_total(m, any) / (lam - 0.5)).epsilon(1e-9));
    }

    CHECK_THROWS_AS(solve_density(np, 0.5, rhs), SolverError);
    CHECK_THROWS_AS(solve_density(np, -0.2, rhs), SolverError);
}

TEST_CASE("single layer on the unit disc") {
    const BoundaryMesh m = unit_disc(64);
    const DensityVector one = density_of(m, [](const Vec2&) { return 1.0; });
    for (double t : {0.0, 1.0, 2.5}) {
        const Vec2 x = 2.0 * Vec2(std::cos(t), std::sin(t));
        CHECK(single_layer(m, one, x).value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
        CHECK_FALSE(single_layer(m, one, x).near_boundary);
    }
    // Inside, S[1] is the constant ln(r0) = 0.
    CHECK(std::abs(single_layer(m, one, Vec2(0.2, -0.3)).value) <= 1e-12);
    CHECK(single_layer(m, one, Vec2(1.01, 0.0)).near_boundary);
}

TEST_CASE("single layer gradient matches finite differences") {
    const RodSpec s = rod(2.0, 0.1, Vec2(0.3, 0.1), 0.5);
    const BoundaryMesh m = build_mesh(s, auto_resolution(s));
    const DensityVector phi = neumann_data(m, HarmonicBackground::linear(Vec2(1.0, -0.5)));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    int tested = 0;
    while (tested < 20) {
        const Vec2 x(u(rng), u(rng));
        if (near_boundary(m, x) || signed_distance(s, x) < 0.2) continue;
        const double h = 1e-5;
        const Vec2 g = single_layer_grad(m, phi, x).gradient;
        for (int k = 0; k < 2; ++k) {
            Vec2 e = Vec2::Zero();
            e[k] = h;
            const double fd = (single_layer(m, phi, x + e).value - single_layer(m, phi, x - e).value) / (2.0 * h);
            CHECK(std::abs(fd - g[k]) <= 1e-6 * std::max(1.0, std::abs(g[k])));
        }
        const FieldValue both = single_layer_eval(m, phi, x);
        CHECK(both.value == doctest::Approx(single_layer(m, phi, x).value).epsilon(1e-13));
        CHECK((both.gradient - g).norm() <= 1e-13 * std::max(1.0, g.norm()));
        ++tested;
    }
}

TEST_CASE("zero-total density decays like 1/|x|") {
    const RodSpec s = rod(2.0, 0.1);
    const BoundaryMesh m = build_mesh(s, auto_resolution(s));
    const NpMatrix np = assemble_np(m);
    const DensityVector phi = solve_density(np, 1.5, neumann_data(m, HarmonicBackground::linear(Vec2(1.0, 0.0))));
    const double r1 = std::abs(single_layer(m, phi, Vec2(50.0, 0.0)).value);
    const double r2 = std::abs(single_layer(m, phi, Vec2(100.0, 0.0)).value);
    CHECK(r2 / r1 == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("one-sided normal derivatives follow the jump relation") {
    // On the unit disc K*[cos] = 0, so the limits are +-cos/2. Outside, the
    // radial derivative cos/(2 r^2) leaves an O(h^2) extrapolation error, so
    // the samples sit closer than the default.
    const BoundaryMesh m = unit_disc(128);
    const DensityVector phi = density_of(m, [](const Vec2& x) { return x.x(); });
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); i += 7) {
        const double c = m[i].position.x();
        worst = std::max(worst, std::abs(single_layer_normal_limit(m, phi, i, +1, 2.0) - 0.5 * c));
        worst = std::max(worst, std::abs(single_layer_normal_limit(m, phi, i, -1, 2.0) + 0.5 * c));
    }
    MESSAGE("disc trace error " << worst);
    CHECK(worst <= 1e-2);

    // General boundary: limits equal (+-1/2 + K*) phi.
    const RodSpec s = rod(2.0, 0.1);
    const BoundaryMesh r = build_mesh(s, auto_resolution(s, 16.0));
    const NpMatrix np = assemble_np(r);
    const DensityVector p = neumann_data(r, HarmonicBackground::linear(Vec2(0.0, 1.0)));
    const Eigen::VectorXd kp = np.matrix * p.values;
    worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].tag != SegmentTag::facade_top || std::abs(r[i].position.x()) > 0.5) continue;
        const auto k = static_cast<Eigen::Index>(i);
        worst = std::max(worst, std::abs(single_layer_normal_limit(r, p, i, +1) - (0.5 * p.values[k] + kp[k])));
        worst = std::max(worst, std::abs(single_layer_normal_limit(r, p, i, -1) - (-0.5 * p.values[k] + kp[k])));
    }
    MESSAGE("rod trace error " << worst);
    CHECK(worst <= 1e-3);
}
