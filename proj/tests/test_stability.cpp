#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gelfand/continuation.hpp>
#include <gelfand/oracles.hpp>
#include <gelfand/solver.hpp>
#include <gelfand/stability.hpp>

#include <cmath>

using namespace gelfand;

namespace {
constexpr double kPi = 3.14159265358979323846;

Solution minimal_solution(int n, int M, double lambda) {
    const RadialGrid g = build_grid(M, GradingSpec::power(2.0), n, 1.0);
    const Problem p = make_problem(g, Nonlinearity::exponential(), lambda);
    return newton_solve(p, GridFunction::zero(g));
}
} // namespace

TEST_CASE("hardy margin closed form") {
    CHECK(hardy_margin(10) == 0.0); // exactly, (8^2)/4 - 16
    CHECK(hardy_margin(9) == doctest::Approx(-1.75).epsilon(1e-15));
    CHECK(hardy_margin(11) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(hardy_margin(12) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS(hardy_margin(2));
}

TEST_CASE("zero potential reproduces the Dirichlet eigenvalue of the ball") {
    // n = 3: lambda_1(B_1) = pi^2, eigenfunction sin(pi r)/r
    const RadialGrid g = build_grid(1024, GradingSpec::power(2.0), 3, 1.0);
    const BallEigenpair e = ball_lambda1(3, g);
    CHECK(e.lambda1 == doctest::Approx(kPi * kPi).epsilon(1e-5));
    // eigenfunction proportional to sin(pi r)/r: compare normalized shapes
    const double mid = e.phi1.eval(0.5);
    REQUIRE(mid != 0.0);
    for (double r : {0.25, 0.5, 0.75}) {
        const double ref = std::sin(kPi * r) / r / (std::sin(kPi * 0.5) / 0.5);
        CHECK(e.phi1.eval(r) / mid == doctest::Approx(ref).epsilon(1e-4));
    }
}

TEST_CASE("minimal solutions are stable, mu1 decreases with lambda") {
    const Solution s1 = minimal_solution(3, 512, 1.0);
    const Solution s2 = minimal_solution(3, 512, 3.0);
    REQUIRE(s1.converged);
    REQUIRE(s2.converged);
    const StabilityCertificate c1 = principal_eigenvalue(s1.u, s1.problem.f, 1.0);
    const StabilityCertificate c2 = principal_eigenvalue(s2.u, s2.problem.f, 3.0);
    CHECK(c1.stable);
    CHECK(c2.stable);
    CHECK(c1.mu1 > c2.mu1);
    CHECK(c2.mu1 > 0.0);
}

TEST_CASE("certificate is Rayleigh-consistent with the quadratic form") {
    const Solution s = minimal_solution(5, 512, 4.0);
    REQUIRE(s.converged);
    const StabilityCertificate c = principal_eigenvalue(s.u, s.problem.f, 4.0);
    // phi1 is L2-normalized and mu1 is defined as Q(phi1)
    CHECK(quadratic_form(s.u, s.problem.f, 4.0, c.phi1) == c.mu1);
    CHECK(c.phi1.l2_norm() == doctest::Approx(1.0).epsilon(1e-12));
    // interior positivity
    for (int i = 1; i < s.u.grid().node_count() - 1; ++i) CHECK(c.phi1[i] > 0.0);
}

TEST_CASE("quadratic form is nonnegative on test directions at a stable solution") {
    const Solution s = minimal_solution(4, 256, 2.0);
    REQUIRE(s.converged);
    const RadialGrid& g = s.u.grid();
    for (double w : {1.0, 2.5, 6.0}) {
        const GridFunction xi = GridFunction::from_callable(
            g, [&](double r) { return std::sin(w * r) * (1.0 - r); });
        Eigen::ArrayXd v = xi.values();
        v[g.cell_count()] = 0.0;
        CHECK(quadratic_form(s.u, s.problem.f, 2.0, GridFunction(g, v)) >= 0.0);
    }
}

TEST_CASE("angular modes only raise the eigenvalue") {
    const Solution s = minimal_solution(3, 512, 3.0);
    REQUIRE(s.converged);
    EigenOptions o0, o1;
    o1.angular_k = 1;
    const double mu0 = principal_eigenvalue(s.u, s.problem.f, 3.0, o0).mu1;
    const double mu1 = principal_eigenvalue(s.u, s.problem.f, 3.0, o1).mu1;
    CHECK(mu1 > mu0);
}

TEST_CASE("singular log profile stability flips exactly at dimension ten") {
    for (int n : {8, 9, 10, 11, 12}) {
        const RadialGrid g = build_grid(512, GradingSpec::power(2.0), n, 1.0);
        const SingularProfile sp = singular_profile(SingularKind::LogExponential, n, g);
        const StabilityCertificate c = principal_eigenvalue(sp.u, sp.f, sp.lambda);
        CHECK(c.stable == (hardy_margin(n) >= 0.0));
    }
}

TEST_CASE("weighted inequality holds on stable solutions and validates input") {
    const Solution s = minimal_solution(5, 512, 4.0);
    REQUIRE(s.converged);
    const EstimateReport rep = weighted_test_inequality(s.u, 0.3, WeightTag::critical());
    CHECK(rep.holds);
    CHECK(rep.lhs <= rep.rhs);
    CHECK(rep.ratio == doctest::Approx(rep.lhs / rep.rhs));
    CHECK_THROWS(weighted_test_inequality(s.u, 0.8, WeightTag::critical())); // rho >= 2R/3
    CHECK_THROWS(weighted_test_inequality(s.u, 0.3, WeightTag::log10(1.0))); // needs n = 10
}

TEST_CASE("log weight at n = 10 and power weight at n = 12") {
    {
        const RadialGrid g = build_grid(512, GradingSpec::power(2.0), 10, 1.0);
        const SingularProfile sp = singular_profile(SingularKind::LogExponential, 10, g);
        const EstimateReport rep = weighted_test_inequality(sp.u, 0.3, WeightTag::log10(1.0));
        CHECK(rep.holds);
        CHECK_THROWS(weighted_test_inequality(sp.u, 0.3, WeightTag::log10(50.0))); // delta cap
    }
    {
        const RadialGrid g = build_grid(512, GradingSpec::power(2.0), 12, 1.0);
        const SingularProfile sp = singular_profile(SingularKind::LogExponential, 12, g);
        const EstimateReport rep = weighted_test_inequality(sp.u, 0.3, WeightTag::power(8.5));
        CHECK(rep.holds);
        CHECK_THROWS(weighted_test_inequality(sp.u, 0.3, WeightTag::power(7.0))); // a <= 8
    }
}

TEST_CASE("curvature inequality holds with the linear cutoff") {
    const Solution s = minimal_solution(6, 512, 1.0);
    REQUIRE(s.converged);
    const GridFunction eta =
        GridFunction::from_callable(s.u.grid(), [](double r) { return 1.0 - r; });
    const EstimateReport rep = curvature_test_inequality(s.u, eta);
    CHECK(rep.holds);
    CHECK(rep.lhs <= rep.rhs);
}

TEST_CASE("annotate_branch fills mu1 with a zero crossing at the fold") {
    const RadialGrid g = build_grid(256, GradingSpec::power(2.0), 3, 1.0);
    Branch b = trace_branch(g, Nonlinearity::exponential());
    REQUIRE(b.fold.has_value());
    annotate_branch(b);
    for (const auto& p : b.points) CHECK(std::isfinite(p.mu1));
    CHECK(b.points.front().mu1 > 0.0);
    CHECK(b.points.back().mu1 < 0.0); // post-fold upper branch is unstable
}
