#pragma once

#include "gelfand/grid.hpp"
#include "gelfand/nonlinearity.hpp"
#include "gelfand/tridiag.hpp"

#include <vector>

namespace gelfand {

// -Laplace(u) = lambda f(u) on the ball of the grid, u = 0 on the boundary.
struct Problem {
    RadialGrid grid;
    Nonlinearity f;
    double lambda = 0.0;
};

Problem make_problem(RadialGrid grid, Nonlinearity f, double lambda);

struct Solution {
    Problem problem;
    GridFunction u;
    double residual_norm = 0.0; // deflated componentwise backward error
    bool converged = false;
    int iterations = 0;
};

// Thrown by monotone_iteration when the iterates blow up.
struct Divergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conservative flux discretization of the radial Laplacian. Row i applies
// to nodes i-1, i, i+1 as sub/diag/sup; row 0 couples nodes 0 and 1 only
// (symmetry closure, equal to 2n(u1-u0)/h^2 on any grid). Rows cover
// equation nodes 0..M-1; the boundary node has no row. Exact on quadratics.
struct LaplaceStencil {
    Eigen::ArrayXd sub, diag, sup; // size M, sub[0] unused, sup[M-1] couples u_M
};

LaplaceStencil laplace_stencil(const RadialGrid& g);

// Laplacian of a grid function. Node M and, for singular inputs, node 1 use
// one-sided quadratic fits; for singular inputs node 0 is a placeholder.
GridFunction radial_laplacian(const GridFunction& u);

// Laplace(u) + lambda f(u), nodal. Zero for an exact solution.
GridFunction residual(const Problem& p, const GridFunction& u);

// Max-norm of the residual over the equation nodes (boundary excluded).
double residual_norm(const Problem& p, const GridFunction& u);

// Residual over the equation nodes for a prebuilt stencil, boundary value
// taken from v[M]. Fills out (size M) when given.
double stencil_residual_max(const LaplaceStencil& st, const Problem& p,
                            const Eigen::ArrayXd& v, Eigen::ArrayXd* out = nullptr);

// Componentwise backward error with the rounding floor deflated: per row
// the defect |F_i| is reduced by 8 eps times the magnitude sum of the
// terms entering the row, and the excess is scaled by the physical content
// |stencil part| + |source|. The raw max residual carries an O(eps/h^2)
// rounding floor which graded meshes push far above any usable tolerance,
// while scaling by the magnitude sum alone turns vacuous on near-origin
// rows where that sum dwarfs the source term. Rows at the rounding floor
// count as exact. out, when given, receives the raw residual.
double stencil_residual_scaled(const LaplaceStencil& st, const Problem& p,
                               const Eigen::ArrayXd& v, Eigen::ArrayXd* out = nullptr);

// Damped Newton with step halving on the max residual; minimum damping
// factor 2^-20. Non-convergence is reported through the flag, not thrown.
Solution newton_solve(const Problem& p, const GridFunction& u0, double tol = 1e-10,
                      int max_iter = 50);

// Tridiagonal Jacobian of the residual at u over the equation nodes.
TriDiag jacobian(const Problem& p, const GridFunction& u);

// Picard sweep from u = 0: each iterate solves -Laplace(u_j) = lambda
// f(u_{j-1}). Iterates are nodally nondecreasing and converge to the
// minimal solution for solvable lambda. Stops when both the successive
// max-difference and the residual are <= tol. Throws Divergence once the
// sup norm exceeds cap. The optional trace collects every iterate.
Solution monotone_iteration(const Problem& p, double tol = 1e-10, double cap = 1e3,
                            int max_iter = 200000,
                            std::vector<Eigen::ArrayXd>* trace = nullptr);

} // namespace gelfand
