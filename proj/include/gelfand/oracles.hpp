#pragma once

#include "gelfand/grid.hpp"
#include "gelfand/nonlinearity.hpp"

#include <optional>

namespace gelfand {

// Exponents of the borderline power nonlinearity in dimension n >= 10.
// p_n is stored as +infinity at n = 10; q_n, alpha_n and the profile
// lambda exist for n >= 11 only.
struct CriticalExponents {
    int n = 0;
    std::optional<double> q_n;
    std::optional<double> alpha_n;           // 2/(q_n - 1)
    std::optional<double> lambda_star_power; // alpha_n (n - 2 - alpha_n)
    double p_n = 0.0;
};

// Closed forms with sqrt(n-1) evaluated in long double. p_n = q_n + 1
// holds as an algebraic identity but the two are computed independently.
CriticalExponents critical_exponents(int n);

enum class SingularKind { LogExponential, Power };

struct SingularProfile {
    GridFunction u;
    double lambda = 0.0;
    Nonlinearity f;
};

// Closed-form singular stable solutions on the ball of the grid:
//   log_exponential (n >= 3):  u = 2 log(R/r),        lambda = 2(n-2)/R^2, f = e^t
//   power           (n >= 11): u = (r/R)^{-alpha} - 1, lambda = alpha(n-2-alpha)/R^2,
//                              f = (1+t)^{q_n}
// The profile is marked singular at the origin; node 0 is a placeholder.
SingularProfile singular_profile(SingularKind kind, int n, const RadialGrid& grid);

struct BallEigenpair {
    double lambda1 = 0.0;
    GridFunction phi1;
};

// Principal Dirichlet eigenpair of -Laplace on the ball of the grid,
// through the stability eigensolver with zero potential.
BallEigenpair ball_lambda1(int n, const RadialGrid& grid);

} // namespace gelfand
