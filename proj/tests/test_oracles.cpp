#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gelfand/oracles.hpp>
#include <gelfand/solver.hpp>

#include <cmath>
#include <limits>

using namespace gelfand;

TEST_CASE("critical exponents: frozen reference values") {
    const CriticalExponents e11 = critical_exponents(11);
    REQUIRE(e11.q_n.has_value());
    // independently derived from q = (n - 2 sqrt(n-1)) / (n - 4 - 2 sqrt(n-1))
    CHECK(*e11.q_n == doctest::Approx(6.922024586816337).epsilon(1e-15));
    CHECK(e11.p_n == doctest::Approx(7.922024586816337).epsilon(1e-15));
    CHECK(*e11.alpha_n == doctest::Approx(0.33772233983162064).epsilon(1e-15));
    CHECK(*e11.lambda_star_power == doctest::Approx(2.9254446796632414).epsilon(1e-15));

    const CriticalExponents e12 = critical_exponents(12);
    CHECK(*e12.q_n == doctest::Approx(3.9266499161421597).epsilon(1e-15));
}

TEST_CASE("critical exponents: structure over the dimension range") {
    const CriticalExponents e10 = critical_exponents(10);
    CHECK(std::isinf(e10.p_n));
    CHECK(e10.p_n > 0.0);
    CHECK(!e10.q_n.has_value());
    CHECK(!e10.alpha_n.has_value());
    CHECK(!e10.lambda_star_power.has_value());
    CHECK_THROWS(critical_exponents(9));

    double prev_q = std::numeric_limits<double>::infinity();
    for (int n = 11; n <= 30; ++n) {
        const CriticalExponents e = critical_exponents(n);
        REQUIRE(e.q_n.has_value());
        CHECK(*e.q_n > 1.0);
        CHECK(*e.q_n < prev_q); // exponent decreases in n
        prev_q = *e.q_n;
        // alpha = 2/(q-1) and lambda = alpha (n - 2 - alpha), recomputed here
        CHECK(*e.alpha_n == doctest::Approx(2.0 / (*e.q_n - 1.0)).epsilon(1e-14));
        CHECK(*e.lambda_star_power ==
              doctest::Approx(*e.alpha_n * (n - 2.0 - *e.alpha_n)).epsilon(1e-14));
        // p and q are computed by separate formulas; the identity p = q + 1
        // is algebra, not construction
        CHECK(std::abs(e.p_n - (*e.q_n + 1.0)) <= 1e-12 * e.p_n);
    }
}

TEST_CASE("log-exponential singular profile solves the equation in closed form") {
    for (int n : {3, 10}) {
        const RadialGrid g = build_grid(512, GradingSpec::power(2.0), n, 1.0);
        const SingularProfile sp = singular_profile(SingularKind::LogExponential, n, g);
        CHECK(sp.lambda == doctest::Approx(2.0 * (n - 2)).epsilon(1e-15));
        CHECK(sp.u.singular_at_origin());
        CHECK(sp.u[g.cell_count()] == 0.0);
        // u = 2 log(1/r): lambda e^u = 2(n-2) r^{-2} must equal -Laplace(u)
        const GridFunction lap = radial_laplacian(sp.u);
        for (int i = g.cell_count() / 4; i < g.cell_count(); ++i) {
            const double r = g.r(i);
            CHECK(-lap[i] ==
                  doctest::Approx(sp.lambda * std::exp(sp.u[i])).epsilon(1e-3));
            CHECK(sp.u[i] == doctest::Approx(2.0 * std::log(1.0 / r)).epsilon(1e-13));
        }
    }
    const RadialGrid g2 = build_grid(64, GradingSpec::power(2.0), 2, 1.0);
    CHECK_THROWS(singular_profile(SingularKind::LogExponential, 2, g2));
}

TEST_CASE("power singular profile scales correctly with the ball radius") {
    const int n = 11;
    const double R = 2.0;
    const RadialGrid g = build_grid(512, GradingSpec::power(2.0), n, R);
    const SingularProfile sp = singular_profile(SingularKind::Power, n, g);
    const CriticalExponents ce = critical_exponents(n);
    CHECK(sp.lambda == doctest::Approx(*ce.lambda_star_power / (R * R)).epsilon(1e-15));
    CHECK(sp.f.q() == *ce.q_n);
    // u = (r/R)^{-alpha} - 1 vanishes at the boundary
    CHECK(sp.u[g.cell_count()] == 0.0);
    const GridFunction lap = radial_laplacian(sp.u);
    for (int i = g.cell_count() / 4; i < g.cell_count() - 1; ++i)
        CHECK(-lap[i] ==
              doctest::Approx(sp.lambda * sp.f.f(sp.u[i])).epsilon(1e-3));

    const RadialGrid g10 = build_grid(64, GradingSpec::power(2.0), 10, 1.0);
    CHECK_THROWS(singular_profile(SingularKind::Power, 10, g10));
}

TEST_CASE("ball eigenvalue oracle against Bessel zeros") {
    // n = 2: lambda_1 = j_0^2 with j_0 the first zero of J_0
    const double j0 = 2.4048255576957728;
    const RadialGrid g2 = build_grid(1024, GradingSpec::power(2.0), 2, 1.0);
    CHECK(ball_lambda1(2, g2).lambda1 == doctest::Approx(j0 * j0).epsilon(1e-5));
    // n = 3: lambda_1 = pi^2, and 1/R^2 scaling
    const double kPi = 3.14159265358979323846;
    const RadialGrid g3 = build_grid(1024, GradingSpec::power(2.0), 3, 2.0);
    CHECK(ball_lambda1(3, g3).lambda1 == doctest::Approx(kPi * kPi / 4.0).epsilon(1e-5));
}
