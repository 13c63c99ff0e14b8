#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gelfand/grid.hpp>

#include <cmath>

using namespace gelfand;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("unit sphere areas match closed forms") {
    CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
    CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
    // omega_{n-1} = 2 pi^{n/2} / Gamma(n/2)
    CHECK(unit_sphere_area(10) ==
          doctest::Approx(2.0 * std::pow(kPi, 5.0) / 24.0).epsilon(1e-14));
}

TEST_CASE("grid construction invariants") {
    const RadialGrid g = build_grid(64, GradingSpec::power(2.0), 5, 1.0);
    CHECK(g.cell_count() == 64);
    CHECK(g.node_count() == 65);
    CHECK(g.r(0) == 0.0);
    CHECK(g.r(64) == 1.0);
    for (int i = 0; i < 64; ++i) CHECK(g.r(i) < g.r(i + 1));
    // power grading: node i at R (i/M)^2
    CHECK(g.r(32) == doctest::Approx(0.25).epsilon(1e-15));

    const RadialGrid u = build_grid(64, GradingSpec::uniform(), 5, 2.0);
    CHECK(u.r(16) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(u.trapezoid_weights().sum() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("grid validation rejects bad arguments") {
    CHECK_THROWS(build_grid(4, GradingSpec::power(2.0), 3, 1.0));  // M < 8
    CHECK_THROWS(build_grid(64, GradingSpec::power(2.0), 1, 1.0)); // n < 2
    CHECK_THROWS(build_grid(64, GradingSpec::power(5.0), 3, 1.0)); // exponent > 4
    CHECK_THROWS(build_grid(64, GradingSpec::power(2.0), 3, 0.0)); // R = 0
}

TEST_CASE("ball integration converges at second order on polynomials") {
    const int n = 3;
    const double vol = unit_sphere_area(n) / n;
    double err[2];
    int k = 0;
    for (int M : {128, 256}) {
        const RadialGrid g = build_grid(M, GradingSpec::power(2.0), n, 1.0);
        Eigen::ArrayXd one = Eigen::ArrayXd::Ones(g.node_count());
        err[k++] = std::abs(integrate_ball(g, one, 1.0) - vol);
        if (M == 256) {
            CHECK(integrate_ball(g, one, 1.0) == doctest::Approx(vol).epsilon(1e-4));
            CHECK(integrate_ball(g, one, 0.5) == doctest::Approx(vol / 8.0).epsilon(1e-4));
            Eigen::ArrayXd lin = g.nodes();
            CHECK(integrate_ball(g, lin, 1.0) ==
                  doctest::Approx(unit_sphere_area(n) / 4.0).epsilon(1e-4));
        }
    }
    CHECK(err[0] / err[1] > 3.0); // about 4 per doubling
}

TEST_CASE("graded rule integrates pure powers exactly") {
    const int n = 3;
    const RadialGrid g = build_grid(128, GradingSpec::power(2.0), n, 1.0);
    const auto& r = g.nodes();
    // integrand r^{-1.5}: omega int r^{-1.5} r^2 dr = omega r^{1.5}/1.5; the
    // run starts at node 1, so the exact reference drops the [0, r_1] head
    Eigen::ArrayXd w(g.node_count());
    w[0] = 0.0; // placeholder
    for (int i = 1; i < g.node_count(); ++i) w[i] = std::pow(r[i], -1.5);
    auto exact = [&](double rho) {
        return unit_sphere_area(n) * (std::pow(rho, 1.5) - std::pow(r[1], 1.5)) / 1.5;
    };
    CHECK(integrate_ball_graded(g, w, 1.0, 1) == doctest::Approx(exact(1.0)).epsilon(1e-13));
    // partial cell at an off-node radius stays exact (log-log interpolation)
    const double rho = 0.7 * r[3] + 0.3 * r[4];
    CHECK(integrate_ball_graded(g, w, rho, 1) == doctest::Approx(exact(rho)).epsilon(1e-12));
}

TEST_CASE("trapezoid overshoots steep powers where the graded rule is exact") {
    const int n = 3;
    const RadialGrid g = build_grid(128, GradingSpec::power(2.0), n, 1.0);
    const auto& r = g.nodes();
    Eigen::ArrayXd w(g.node_count());
    w[0] = 0.0;
    for (int i = 1; i < g.node_count(); ++i) w[i] = std::pow(r[i], -2.9);
    const double exact =
        unit_sphere_area(n) * (1.0 - std::pow(r[1], 0.1)) / 0.1;
    CHECK(integrate_ball_graded(g, w, 1.0, 1) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(integrate_ball(g, w, 1.0, 1) > exact * 1.02);
}

TEST_CASE("graded rule falls back to trapezoid on nonpositive cells") {
    const RadialGrid g = build_grid(64, GradingSpec::uniform(), 3, 1.0);
    Eigen::ArrayXd w(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) w[i] = g.r(i) - 2.0; // negative everywhere
    CHECK(integrate_ball_graded(g, w, 1.0) ==
          doctest::Approx(integrate_ball(g, w, 1.0)).epsilon(1e-14));
    // smooth positive integrands agree between the rules at second order
    Eigen::ArrayXd s(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) s[i] = 1.0 + g.r(i);
    CHECK(integrate_ball_graded(g, s, 1.0) ==
          doctest::Approx(integrate_ball(g, s, 1.0)).epsilon(1e-3));
}

TEST_CASE("grid function evaluation and derivatives") {
    const RadialGrid g = build_grid(128, GradingSpec::power(2.0), 3, 1.0);
    const GridFunction u = GridFunction::from_callable(g, [](double r) { return r * r; });
    CHECK(u.eval(0.3) == doctest::Approx(0.09).epsilon(1e-4));
    CHECK(u.sup_norm() == doctest::Approx(1.0));
    // derivative of r^2 is 2r, three-point fits are exact on quadratics
    const Eigen::ArrayXd du = u.derivative_values();
    for (int i = 0; i < g.node_count(); ++i)
        CHECK(du[i] == doctest::Approx(2.0 * g.r(i)).epsilon(1e-9));
    // L2 over the ball: (omega int_0^1 r^4 r^2 dr)^{1/2}
    CHECK(u.l2_norm() ==
          doctest::Approx(std::sqrt(unit_sphere_area(3) / 7.0)).epsilon(1e-3));
}

TEST_CASE("singular grid functions skip the origin") {
    const RadialGrid g = build_grid(64, GradingSpec::power(2.0), 3, 1.0);
    Eigen::ArrayXd vals(g.node_count());
    vals[0] = 0.0;
    for (int i = 1; i < g.node_count(); ++i) vals[i] = 2.0 * std::log(1.0 / g.r(i));
    const GridFunction u(g, vals, true);
    CHECK(u.first_node() == 1);
    CHECK(u.singular_at_origin());
    CHECK_THROWS(u.eval(0.0)); // below the resolvable range
}
