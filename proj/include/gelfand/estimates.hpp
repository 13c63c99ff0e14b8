#pragma once

#include "gelfand/solver.hpp"
#include "gelfand/stability.hpp"

#include <vector>

namespace gelfand {

// Lp norm over the ball of radius rho; p may be +infinity (nodal max).
// gradient = true measures |u'| instead of |u|. Singular inputs integrate
// from the first positive node, giving a lower bound.
double lebesgue_norm(const GridFunction& u, double p, double rho, bool gradient = false);

// max over node pairs r_i != r_j in [0, rho] of |u(r_i)-u(r_j)|/|r_i-r_j|^alpha.
// For radial profiles same-ray pairs dominate, so the 1D sweep suffices.
double holder_seminorm(const GridFunction& u, double alpha, double rho);

struct MorreyParams {
    double p = 2.0;
    double beta = 1.0; // in (0, n]
};

// sup over centers |y| in {0, R/cs, ..., R} and radii on a geometric grid
// (first cell width to 2R, 64 points plus R, locally refined around the
// maximizer) of (r^{beta-n} int_{B_R cap B_r(y)} |u|^p)^{1/p}. The off-center
// integrals reduce to 1D through the sphere-cap fraction, integrated by
// 128-interval composite Simpson.
double morrey_norm(const GridFunction& u, const MorreyParams& mp, int center_samples = 33);

struct RadialQuantities {
    double D = 0.0;  // rho^{2-n} int_{B_rho} |grad u|^2
    double Rq = 0.0; // int_{B_rho} |x|^{-n} |x . grad u|^2
};

// Throws when the Rq integrand r u'^2 is non-integrable at the origin
// (log-log slope <= -0.98 on the innermost nodes of a singular input).
RadialQuantities radial_quantities(const GridFunction& u, double rho);

struct DecayInput {
    std::vector<double> a, b;
    double L = 1.0;
    double M_bound = 1.0;
};

struct DecayResult {
    bool hyp_ok = false;
    double eps = 0.0;   // root of 2^{-eps} = L^{1+eps}/(1+L)
    double theta = 0.0; // (2^{-eps})^{1/(1+eps)}
    double Cc = 0.0;    // L^{eps/(1+eps)}/theta
    bool conclusion_ok = false;
};

// Geometric-decay checker: sequences with a_0, b_0 <= M, b nonincreasing,
// a_j + b_j <= L a_{j-1}, and b_j <= L(b_{j-1} - b_j) whenever a_j >= a_{j-1}/2,
// satisfy b_j <= Cc M theta^j. Requires L > 1/2.
DecayResult decay_check(const DecayInput& d);

// Random hypothesis-satisfying instance (deterministic per seed); at each
// step either a halves (conditional vacuous) or b contracts by L/(1+L).
DecayInput make_decay_instance(double L, double M_bound, int length, unsigned long long seed);

// Scale-free defect of the boundary-flux identity
// (R/2) int_{dB_R} u_nu^2 = n int lambda F(u) - ((n-2)/2) int |grad u|^2.
double pohozaev_residual(const Solution& s);

// (A - lambda1) int u Phi1 <= B int Phi1, valid whenever
// lambda f(t) >= A t - B on the range of u with A > lambda1 and B >= 0.
EstimateReport l1_bound_check(const Solution& s, double A, double B);

} // namespace gelfand
