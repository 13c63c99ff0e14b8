#include "gelfand/tridiag.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gelfand {

Eigen::ArrayXd TriDiag::multiply(const Eigen::ArrayXd& x) const {
    const int m = size();
    Eigen::ArrayXd y(m);
    for (int i = 0; i < m; ++i) {
        double v = diag[i] * x[i];
        if (i > 0) v += lower[i - 1] * x[i - 1];
        if (i + 1 < m) v += upper[i] * x[i + 1];
        y[i] = v;
    }
    return y;
}

Eigen::ArrayXd tridiag_solve(const TriDiag& T, Eigen::ArrayXd b) {
    const int m = T.size();
    if (b.size() != m) throw std::invalid_argument("tridiag_solve: size mismatch");
    // working bands; pivoting introduces a second superdiagonal
    Eigen::ArrayXd dl = T.lower, d = T.diag, du = T.upper;
    Eigen::ArrayXd du2 = Eigen::ArrayXd::Zero(std::max(m - 2, 0));

    for (int i = 0; i < m - 1; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            // no interchange
            if (d[i] == 0.0) throw std::runtime_error("tridiag_solve: singular matrix");
            const double fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            if (i + 2 < m) du2[i] = 0.0;
        } else {
            // interchange rows i and i+1
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            double temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            du[i] = temp;
            if (i + 2 < m) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - fact * b[i];
        }
    }
    if (d[m - 1] == 0.0) throw std::runtime_error("tridiag_solve: singular matrix");

    Eigen::ArrayXd x(m);
    x[m - 1] = b[m - 1] / d[m - 1];
    if (m >= 2) x[m - 2] = (b[m - 2] - du[m - 2] * x[m - 1]) / d[m - 2];
    for (int i = m - 3; i >= 0; --i)
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    return x;
}

Eigen::ArrayXd tridiag_solve_spd(const TriDiag& T, Eigen::ArrayXd b) {
    const int m = T.size();
    if (b.size() != m) throw std::invalid_argument("tridiag_solve_spd: size mismatch");
    Eigen::ArrayXd d = T.diag, du = T.upper;
    for (int i = 1; i < m; ++i) {
        if (d[i - 1] == 0.0) throw std::runtime_error("tridiag_solve_spd: zero pivot");
        const double fact = T.lower[i - 1] / d[i - 1];
        d[i] -= fact * du[i - 1];
        b[i] -= fact * b[i - 1];
    }
    if (d[m - 1] == 0.0) throw std::runtime_error("tridiag_solve_spd: zero pivot");
    Eigen::ArrayXd x(m);
    x[m - 1] = b[m - 1] / d[m - 1];
    for (int i = m - 2; i >= 0; --i) x[i] = (b[i] - du[i] * x[i + 1]) / d[i];
    return x;
}

int sturm_count_below(const TriDiag& A, const Eigen::ArrayXd& Wdiag, double sigma) {
    const int m = A.size();
    int count = 0;
    double pivot = 0.0;
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i < m; ++i) {
        double d = A.diag[i] - sigma * Wdiag[i];
        if (i > 0) {
            const double e = A.lower[i - 1];
            d -= e * e / pivot;
        }
        if (d == 0.0) d = tiny; // nudge exact zeros
        if (d < 0.0) ++count;
        pivot = d;
    }
    return count;
}

} // namespace gelfand
