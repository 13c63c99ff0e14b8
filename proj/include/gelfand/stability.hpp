#pragma once

#include "gelfand/continuation.hpp"

#include <map>
#include <string>

namespace gelfand {

// Certificate for the second-variation form Q(xi) = int |grad xi|^2
// - lambda f'_-(u) xi^2 over the ball. mu1 is the smallest eigenvalue of
// the linearized operator with weight r^{n-1}; phi1 is the minimizer,
// positive at interior nodes, normalized to unit L2(ball) norm, so
// Q(phi1) = mu1 by construction.
struct StabilityCertificate {
    double mu1 = 0.0;
    GridFunction phi1;
    bool stable = false;   // mu1 >= -tol_eig
    bool marginal = false; // |mu1| < tol_eig
};

// Measured two-sided inequality. holds tolerates 1e-9 relative rounding.
// ratio is 0 when both sides vanish and is clamped finite when rhs = 0.
struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool holds = false;
    std::map<std::string, double> params;
};

EstimateReport make_report(std::string name, double lhs, double rhs,
                           std::map<std::string, double> params = {});

// Q(xi) for xi vanishing on the boundary (and, for singular u, at the two
// innermost nodes; for angular_k >= 1, at the origin). The gradient term
// uses exact piecewise-linear cell integrals, the potential term the
// trapezoid rule, so the value agrees bitwise with the eigensolver's
// matrix form. angular_k adds the spherical-harmonic penalty
// k(k+n-2)/r^2 to the potential.
double quadratic_form(const GridFunction& u, const Nonlinearity& f, double lambda,
                      const GridFunction& xi, int angular_k = 0);

struct EigenOptions {
    double tol_eig = 1e-7;
    int angular_k = 0;
    int max_steps = 500;
};

// Smallest eigenvalue of -phi'' - ((n-1)/r) phi' - lambda f'_-(u) phi with
// phi(R) = 0 and a natural condition at the origin (Dirichlet at the first
// positive node when u is singular there). Sturm bisection brackets the
// eigenvalue, shifted inverse iteration recovers the eigenvector. Throws
// on iteration stagnation.
StabilityCertificate principal_eigenvalue(const GridFunction& u, const Nonlinearity& f,
                                          double lambda, const EigenOptions& opts = {});

// (n-2)^2/4 - 2(n-2): gap between the Hardy constant and the strength of
// the inverse-square potential of the log profile. Nonnegative iff n >= 10.
double hardy_margin(int n);

// Weight selector for weighted_test_inequality. critical uses the
// exponent a = n-2 (dimensions 3..9); power carries a free exponent a in
// (8, 2(1+sqrt(n-1))) for n >= 11; log10 is the n = 10 borderline weight
// r^{-8} log(1/r)^{-delta} and requires a unit-radius ball.
struct WeightTag {
    enum class Kind { Critical, Power, Log10 } kind = Kind::Critical;
    double param = 0.0; // a for Power, delta for Log10

    static WeightTag critical() { return {Kind::Critical, 0.0}; }
    static WeightTag power(double a) { return {Kind::Power, a}; }
    static WeightTag log10(double delta) { return {Kind::Log10, delta}; }
};

// Weighted consequence of stability tested on a concrete cutoff: zeta = 1
// on B_rho, linear to 0 on B_{3rho/2}. lhs is the weighted Dirichlet
// energy of u over B_rho times the weight's coefficient, rhs the annulus
// energy times an explicit constant; holds is a theorem for stable u.
// Requires 0 < rho < 2R/3; the log10 weight additionally requires
// delta <= -8 log(3rho/2) so the ball coefficient stays positive.
EstimateReport weighted_test_inequality(const GridFunction& u, double rho,
                                        const WeightTag& weight);

// Level-set curvature consequence of stability: for radial u the second
// fundamental form of the level spheres has norm (n-1) u'^2/r^2, and
// int A^2 eta^2 <= int |grad u|^2 |grad eta|^2 for eta vanishing at R.
EstimateReport curvature_test_inequality(const GridFunction& u, const GridFunction& eta);

// Fill mu1 on every branch point via principal_eigenvalue.
void annotate_branch(Branch& b);

} // namespace gelfand
