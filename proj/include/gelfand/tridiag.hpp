#pragma once

#include <Eigen/Core>

namespace gelfand {

// Tridiagonal matrix with rows (lower[i-1], diag[i], upper[i]).
struct TriDiag {
    Eigen::ArrayXd lower; // size m-1
    Eigen::ArrayXd diag;  // size m
    Eigen::ArrayXd upper; // size m-1

    int size() const { return static_cast<int>(diag.size()); }
    Eigen::ArrayXd multiply(const Eigen::ArrayXd& x) const;
};

// Solves T x = b by LU with partial pivoting (row swaps between adjacent
// rows, fill bandwidth 2). Throws on exact singularity.
Eigen::ArrayXd tridiag_solve(const TriDiag& T, Eigen::ArrayXd b);

// Unpivoted elimination for symmetric positive definite systems. Pivoting
// is only normwise stable: a row swap mixes scales, which turns the inner
// components of r^{n-1}-graded systems (spanning tens of orders) into
// noise. Plain elimination keeps every row at its own scale and is stable
// without pivoting on definite tridiagonals. Throws on a zero pivot.
Eigen::ArrayXd tridiag_solve_spd(const TriDiag& T, Eigen::ArrayXd b);

// Number of eigenvalues of the symmetric pair (A, W) below sigma, i.e. the
// count of negative pivots in the LDL^T factorization of A - sigma W;
// W is diagonal positive. Zero pivots are nudged, standard Sturm practice.
int sturm_count_below(const TriDiag& A, const Eigen::ArrayXd& Wdiag, double sigma);

} // namespace gelfand
