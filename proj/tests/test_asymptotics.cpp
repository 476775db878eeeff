#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rodfield/asymptotics.hpp"
#include "rodfield/solver.hpp"

using namespace rodfield;
using std::numbers::pi;

namespace {

AsymptoticModel model(double L, double d, const HarmonicBackground& h, Vec2 c = Vec2::Zero(), double angle = 0.0,
                      double sigma0 = 2.0) {
    RodSpec s;
    s.length = L;
    s.delta = d;
    s.center = c;
    s.angle = angle;
    s.sigma0 = sigma0;
    return AsymptoticModel::from_spec(s, h);
}

HarmonicBackground lin(double a1, double a2) { return HarmonicBackground::linear(Vec2(a1, a2)); }

// Random point at least `clear` away from the segment [P, Q] of a rod of length L.
Vec2 exterior_point(std::mt19937_64& rng, double L, double clear) {
    std::uniform_real_distribution<double> u(-2.0 * L, 2.0 * L);
    for (;;) {
        const Vec2 x(u(rng), u(rng));
        const double t = std::clamp(x.x(), -0.5 * L, 0.5 * L);
        if ((x - Vec2(t, 0.0)).norm() >= clear) return x;
    }
}

}  // namespace

TEST_CASE("localisation functions") {
    for (double h : {0.01, 0.5, 3.0}) {
        const auto [f1, f2] = f1_f2(Vec2(0.0, h), 2.0);
        CHECK(f1 == 0.0);
        CHECK(f2 == doctest::Approx(-2.0 / (1.0 + h * h)));
    }
    const double d = 0.01;
    const auto [g1, g2] = f1_f2(Vec2(1.0 + d, 0.0), 2.0);
    CHECK(g1 == 0.0);
    CHECK(g2 == doctest::Approx(1.0 / d - 1.0 / (2.0 + d)));
    CHECK_THROWS_AS(f1_f2(Vec2(1.0, 0.0), 2.0), SingularPointError);
    CHECK_THROWS_AS(f1_f2(Vec2(-1.0, 0.0), 2.0), SingularPointError);
}

TEST_CASE("distance form of f1^2 + f2^2") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> len(0.5, 10.0);
    for (int k = 0; k < 100; ++k) {
        const double L = len(rng);
        const Vec2 x = exterior_point(rng, L, 1e-3);
        const auto [f1, f2] = f1_f2(x, L);
        const double direct = f1 * f1 + f2 * f2;
        CHECK(std::abs(localization_factor(x, L) - direct) <= 1e-12 * direct);
    }
}

TEST_CASE("cap blow-up") {
    double prev = 0.0;
    for (double d : {0.1, 0.03, 0.01, 0.003, 0.001}) {
        const double v = d * d * localization_factor(Vec2(1.0 + d, 0.0), 2.0);
        CHECK(v > prev);
        CHECK(v <= 1.0);
        prev = v;
    }
    CHECK(prev >= 0.99);
    for (double alpha : {-1.2, 0.0, 0.7}) {
        const double d = 0.01;
        const Vec2 x = Vec2(1.0, 0.0) + 1.01 * d * Vec2(std::cos(alpha), std::sin(alpha));
        CHECK(d * d * localization_factor(x, 2.0) == doctest::Approx(1.0 / (1.01 * 1.01)).epsilon(0.02));
    }
}

TEST_CASE("midsection stays bounded") {
    for (double L : {1.0, 2.0, 10.0}) {
        const double d = 0.01 * L;
        for (double x2 = d; x2 <= 2.0 * L; x2 *= 1.1) CHECK(localization_factor(Vec2(0.0, x2), L) <= 64.0 / (L * L));
    }
}

TEST_CASE("linear closed form") {
    const AsymptoticModel m = model(2.0, 0.05, lin(1.0, 0.0));
    CHECK(m.strength() == doctest::Approx(0.05));
    CHECK(asym_u_linear(m, Vec2(2.0, 0.0)) == doctest::Approx(2.0 - 0.017486).epsilon(1e-6));
    CHECK(asym_u_linear(m, Vec2(2.0, 0.0)) - 2.0 == doctest::Approx(0.05 / (2.0 * pi) * std::log(1.0 / 9.0)));

    const AsymptoticModel up = model(2.0, 0.05, lin(0.0, 1.0));
    double prev = 1.0;
    for (double r : {10.0, 100.0, 1000.0}) {
        const double p = std::abs(asym_u_linear(up, Vec2(0.0, r)) - r);
        CHECK(p < prev);
        prev = p;
    }
    CHECK(prev <= 1e-4);

    // The arctan pair against the textbook form.
    std::mt19937_64 rng(2);
    const Vec2 a(0.3, -1.1);
    const AsymptoticModel g = model(3.0, 0.02, HarmonicBackground::linear(a));
    for (int k = 0; k < 50; ++k) {
        const Vec2 x = exterior_point(rng, 3.0, 0.05);
        CHECK(asym_u_linear(g, x) - a.dot(x) ==
              doctest::Approx(oracle::asym_perturbation_local(a, 3.0, g.strength(), x)).epsilon(1e-10));
    }
}

TEST_CASE("one-sided limits on the axis") {
    const AsymptoticModel m = model(2.0, 0.05, lin(0.0, 1.0));
    const double c = m.strength();
    CHECK(asym_u_linear(m, Vec2(0.3, 0.0)) == doctest::Approx(c));
    CHECK(asym_u_linear(m, Vec2(0.3, -0.0)) == doctest::Approx(-c));
    CHECK(asym_u_linear(m, Vec2(0.3, 1e-12)) == doctest::Approx(c).epsilon(1e-9));
    CHECK(std::abs(asym_u_linear(m, Vec2(1.5, 0.0))) <= 1e-15);
}

TEST_CASE("frame covariance") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * pi), off(-3.0, 3.0);
    const Vec2 a(0.8, 0.4);
    const AsymptoticModel base = model(2.0, 0.05, HarmonicBackground::linear(a));
    for (int k = 0; k < 30; ++k) {
        const double t = ang(rng);
        const Vec2 c(off(rng), off(rng));
        const Mat2 R = rotation(t);
        const AsymptoticModel moved = model(2.0, 0.05, HarmonicBackground::linear(R * a), c, t);
        const Vec2 x = exterior_point(rng, 2.0, 0.1);
        const Vec2 y = c + R * x;
        CHECK(asym_u_linear(moved, y) - (R * a).dot(y) == doctest::Approx(asym_u_linear(base, x) - a.dot(x)).epsilon(1e-10));
        CHECK((asym_grad_linear(moved, y) - R * asym_grad_linear(base, x)).norm() <= 1e-10);
    }
}

TEST_CASE("gradient of the closed form") {
    std::mt19937_64 rng(13);
    const Vec2 a(1.0, 1.0);
    const AsymptoticModel m = model(2.0, 0.05, HarmonicBackground::linear(a), Vec2(0.2, 0.1), 0.3);
    const double c = m.strength();
    for (int k = 0; k < 50; ++k) {
        const Vec2 xl = exterior_point(rng, 2.0, 0.1);
        const Vec2 x = m.center + rotation(m.angle) * xl;
        const Vec2 g = asym_grad_linear(m, x);
        const double h = 1e-6;
        for (int j = 0; j < 2; ++j) {
            Vec2 e = Vec2::Zero();
            e[j] = h;
            const double fd = (asym_u_linear(m, x + e) - asym_u_linear(m, x - e)) / (2.0 * h);
            CHECK(std::abs(fd - g[j]) <= 1e-6 * std::max(1.0, std::abs(g[j])));
        }
        const auto [f1, f2] = f1_f2(xl, 2.0);
        const double es2 = (g - a).squaredNorm();
        CHECK(es2 == doctest::Approx(c * c / (pi * pi) * a.squaredNorm() * (f1 * f1 + f2 * f2)).epsilon(1e-10));
        CHECK(perturbed_field_energy(m, x) == doctest::Approx(es2).epsilon(1e-10));
    }
}

TEST_CASE("perturbed field magnitude ignores the field direction") {
    const Vec2 x(0.7, 0.35);
    const double ref = std::sqrt(perturbed_field_energy(model(2.0, 0.05, lin(1.0, 0.0)), x));
    for (double psi : {0.3, 1.0, 2.2, 4.0}) {
        const AsymptoticModel m = model(2.0, 0.05, lin(std::cos(psi), std::sin(psi)));
        CHECK((asym_grad_linear(m, x) - Vec2(std::cos(psi), std::sin(psi))).norm() == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("general background reduces to the linear one") {
    const Vec2 a(0.6, -0.9);
    const auto poly = HarmonicBackground::polynomial({0.0, a.x(), a.y(), 0.0, 0.0});
    const AsymptoticModel ml = model(2.0, 0.05, HarmonicBackground::linear(a), Vec2(0.1, 0.0), 0.5);
    const AsymptoticModel mg = model(2.0, 0.05, poly, Vec2(0.1, 0.0), 0.5);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 40; ++k) {
        Vec2 xl = exterior_point(rng, 2.0, 0.1);
        if (std::abs(xl.y()) < 0.1) xl.y() = std::copysign(0.1, xl.y());
        const Vec2 x = ml.center + rotation(ml.angle) * xl;
        const AsymptoticValue v = asym_u_general(mg, x, 16);
        CHECK_FALSE(v.underresolved);
        CHECK(std::abs(v.value - asym_u_linear(ml, x)) <= 1e-8);
    }
}

TEST_CASE("general background self-convergence and symmetry") {
    const auto xy = HarmonicBackground::polynomial({0.0, 0.0, 0.0, 0.0, 1.0});
    const AsymptoticModel m = model(2.0, 0.05, xy);
    for (const Vec2& x : {Vec2(0.3, 0.2), Vec2(1.4, -0.5), Vec2(-2.0, 1.0), Vec2(0.0, 0.15)}) {
        const double coarse = asym_u_general(m, x, 16).value;
        const double fine = asym_u_general(m, x, 256).value;
        CHECK(std::abs(coarse - fine) <= 1e-8);
    }
    CHECK(asym_u_general(m, Vec2(0.3, 0.01), 16).underresolved);

    // Only a2 in the linear part: zero perturbation on the axis beyond the rod.
    const auto a2 = HarmonicBackground::polynomial({0.0, 0.0, 1.0, 0.0, 0.0});
    const AsymptoticModel up = model(2.0, 0.05, a2);
    for (double x1 : {1.5, -3.0, 7.0}) CHECK(std::abs(asym_u_general(up, Vec2(x1, 0.0), 16).value) <= 1e-14);
}

TEST_CASE("quadratic background against the Poisson and log integrals") {
    // H = x1^2 - x2^2: d2 H(y1, 0) = 0, d2^2 H = -2, d1 H(L/2, 0) = L.
    const auto q = HarmonicBackground::polynomial({0.0, 0.0, 0.0, 1.0, 0.0});
    const AsymptoticModel m = model(2.0, 0.05, q);
    const double c = m.strength();
    const Vec2 x(0.4, 0.7);
    // int_{-1}^{1} ln(((x1-y)^2 + x2^2) / ((x1+1)^2 + x2^2)) dy in closed form.
    auto F = [&](double t) { return t * std::log(t * t + x.y() * x.y()) - 2.0 * t + 2.0 * x.y() * std::atan(t / x.y()); };
    const double log_int = (F(x.x() + 1.0) - F(x.x() - 1.0)) - 2.0 * std::log(std::pow(x.x() + 1.0, 2) + x.y() * x.y());
    const double rq2 = std::pow(x.x() - 1.0, 2) + x.y() * x.y();
    const double rp2 = std::pow(x.x() + 1.0, 2) + x.y() * x.y();
    const double expect = q.value(x) + c / (2.0 * pi) * (-2.0) * log_int + c / (2.0 * pi) * std::log(rq2 / rp2) * 2.0;
    CHECK(asym_u_general(m, x, 16).value == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("averaging operator") {
    CHECK(a_delta_apply([](double) { return 1.0; }, 0.01, 2.0, 0.0) ==
          doctest::Approx(std::atan(50.0) / pi).epsilon(1e-10));
    CHECK(a_delta_apply([](double) { return 1.0; }, 0.01, 2.0, 0.0) == doctest::Approx(0.49363).epsilon(1e-5));
    CHECK(a_delta_apply([](double y) { return y * y; }, 1e-3, 2.0, 0.5) == doctest::Approx(0.125).epsilon(0.4));

    for (double d : {1e-2, 1e-3, 1e-4})
        for (double x1 : {-0.5, 0.0, 0.5, 0.93})
            for (int n = 0; n <= 2; ++n) {
                const double v = a_delta_apply([n](double y) { return std::pow(y, n); }, d, 2.0, x1);
                CAPTURE(d);
                CAPTURE(x1);
                CAPTURE(n);
                CHECK(std::abs(v - oracle::a_delta_moment(n, d, 2.0, x1)) <= 1e-10);
            }

    for (double x1 : {-0.5, 0.0, 0.5})
        for (int n = 0; n <= 3; ++n) {
            auto err = [&](double d) {
                return std::abs(a_delta_apply([n](double y) { return std::pow(y, n); }, d, 2.0, x1) - 0.5 * std::pow(x1, n));
            };
            // Odd moments at x1 = 0 vanish by symmetry for every delta.
            if (n % 2 == 1 && x1 == 0.0) {
                CHECK(err(1e-3) <= 1e-15);
                continue;
            }
            CHECK(err(1e-4) < err(1e-3));
            CHECK(err(1e-3) < err(1e-2));
        }
}

TEST_CASE("closed form depends on delta and lambda only through the strength") {
    const Vec2 x(0.9, 0.6);
    // delta / (lambda - 1/2) = 0.05 for both.
    const AsymptoticModel a = model(2.0, 0.05, lin(1.0, 1.0), Vec2::Zero(), 0.0, 2.0);
    AsymptoticModel b = a;
    b.delta = 0.025;
    b.lambda = 1.0;
    CHECK(std::abs(asym_u_linear(a, x) - asym_u_linear(b, x)) <= 1e-12);
    CHECK((asym_grad_linear(a, x) - asym_grad_linear(b, x)).norm() <= 1e-12);
    b.lambda = 2.0;
    CHECK(std::abs(asym_u_linear(a, x) - asym_u_linear(b, x)) > 1e-3);
}

TEST_CASE("closed form tracks the BEM field for a thin rod") {
    RodSpec s;
    s.length = 2.0;
    s.delta = 0.025;
    const auto h = lin(1.0, 0.0);
    const ForwardSolution sol = solve_forward(s, h);
    const AsymptoticModel m = AsymptoticModel::from_spec(s, h);
    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        const double t = 2.0 * pi * k / 64.0;
        const Vec2 x = 3.0 * Vec2(std::cos(t), std::sin(t));
        worst = std::max(worst, std::abs(eval_u(sol, x).value - asym_u_linear(m, x)));
    }
    MESSAGE("max |u_bem - u_asym| on r=3 for delta 0.025: " << worst);
    CHECK(worst <= 0.2 * s.delta);
}
