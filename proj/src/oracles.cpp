#include "gelfand/oracles.hpp"

#include "gelfand/stability.hpp"

#include <cmath>
#include <stdexcept>

namespace gelfand {

CriticalExponents critical_exponents(int n) {
    if (n < 10) throw std::invalid_argument("critical_exponents: n >= 10 required");
    CriticalExponents ce;
    ce.n = n;
    if (n == 10) {
        ce.p_n = std::numeric_limits<double>::infinity();
        return ce;
    }
    const long double s = sqrtl(static_cast<long double>(n) - 1.0L);
    const long double den = n - 2.0L * s - 4.0L;
    const long double q = (n - 2.0L * s) / den;
    const long double p = 2.0L * (n - 2.0L * s - 2.0L) / den;
    const long double alpha = 2.0L / (q - 1.0L);
    ce.q_n = static_cast<double>(q);
    ce.p_n = static_cast<double>(p);
    ce.alpha_n = static_cast<double>(alpha);
    ce.lambda_star_power = static_cast<double>(alpha * (n - 2.0L - alpha));
    return ce;
}

SingularProfile singular_profile(SingularKind kind, int n, const RadialGrid& grid) {
    if (grid.dimension() != n)
        throw std::invalid_argument("singular_profile: grid dimension mismatch");
    const double R = grid.radius();
    const int N = grid.node_count();
    Eigen::ArrayXd v(N);

    if (kind == SingularKind::LogExponential) {
        if (n < 3) throw std::invalid_argument("singular_profile: log profile needs n >= 3");
        for (int i = 1; i < N; ++i) v[i] = 2.0 * std::log(R / grid.r(i));
        v[0] = v[1];
        return SingularProfile{GridFunction(grid, v, true), 2.0 * (n - 2) / (R * R),
                               Nonlinearity::exponential()};
    }

    if (n < 11) throw std::invalid_argument("singular_profile: power profile needs n >= 11");
    const CriticalExponents ce = critical_exponents(n);
    const double alpha = *ce.alpha_n;
    for (int i = 1; i < N; ++i) v[i] = std::pow(grid.r(i) / R, -alpha) - 1.0;
    v[0] = v[1];
    return SingularProfile{GridFunction(grid, v, true), *ce.lambda_star_power / (R * R),
                           Nonlinearity::power(*ce.q_n)};
}

BallEigenpair ball_lambda1(int n, const RadialGrid& grid) {
    if (grid.dimension() != n)
        throw std::invalid_argument("ball_lambda1: grid dimension mismatch");
    GridFunction zero = GridFunction::zero(grid);
    StabilityCertificate cert =
        principal_eigenvalue(zero, Nonlinearity::exponential(), 0.0);
    return BallEigenpair{cert.mu1, std::move(cert.phi1)};
}

} // namespace gelfand
