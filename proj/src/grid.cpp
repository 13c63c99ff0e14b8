#include "gelfand/grid.hpp"

#include <algorithm>
#include <cmath>

namespace gelfand {

double unit_sphere_area(int n) {
    if (n < 2) throw std::invalid_argument("unit_sphere_area: dimension must be >= 2");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

RadialGrid::RadialGrid(Eigen::ArrayXd nodes, int dim, double radius, GradingSpec grading)
    : nodes_(std::move(nodes)), dim_(dim), radius_(radius), grading_(grading) {
    const int M = cell_count();
    trap_.resize(M + 1);
    trap_[0] = 0.5 * (nodes_[1] - nodes_[0]);
    trap_[M] = 0.5 * (nodes_[M] - nodes_[M - 1]);
    for (int i = 1; i < M; ++i) trap_[i] = 0.5 * (nodes_[i + 1] - nodes_[i - 1]);
}

double RadialGrid::sphere_area() const { return unit_sphere_area(dim_); }

bool RadialGrid::operator==(const RadialGrid& o) const {
    return dim_ == o.dim_ && radius_ == o.radius_ && nodes_.size() == o.nodes_.size() &&
           (nodes_ == o.nodes_).all();
}

RadialGrid build_grid(int M, GradingSpec grading, int n, double R) {
    if (M < 8) throw std::invalid_argument("build_grid: need at least 8 cells");
    if (n < 2) throw std::invalid_argument("build_grid: dimension must be >= 2");
    if (!(R > 0.0)) throw std::invalid_argument("build_grid: radius must be positive");
    if (grading.kind == Grading::Power &&
        (grading.exponent < 1.0 || grading.exponent > 4.0))
        throw std::invalid_argument("build_grid: power grading exponent must lie in [1, 4]");

    Eigen::ArrayXd nodes(M + 1);
    for (int i = 0; i <= M; ++i) {
        const double s = static_cast<double>(i) / M;
        nodes[i] = grading.kind == Grading::Uniform ? R * s : R * std::pow(s, grading.exponent);
    }
    nodes[M] = R;
    return RadialGrid(std::move(nodes), n, R, grading);
}

GridFunction::GridFunction(RadialGrid grid, Eigen::ArrayXd values, bool singular_at_origin)
    : grid_(std::move(grid)), values_(std::move(values)), singular_(singular_at_origin) {
    if (values_.size() != grid_.node_count())
        throw std::invalid_argument("GridFunction: value count does not match grid");
    for (int i = first_node(); i < grid_.node_count(); ++i)
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("GridFunction: non-finite value at node " +
                                        std::to_string(i));
}

GridFunction GridFunction::zero(const RadialGrid& g) {
    return GridFunction(g, Eigen::ArrayXd::Zero(g.node_count()));
}

GridFunction GridFunction::from_callable(const RadialGrid& g,
                                         const std::function<double(double)>& f,
                                         bool singular_at_origin) {
    Eigen::ArrayXd v(g.node_count());
    for (int i = singular_at_origin ? 1 : 0; i < g.node_count(); ++i) v[i] = f(g.r(i));
    if (singular_at_origin) v[0] = v[1]; // placeholder, never read
    return GridFunction(g, std::move(v), singular_at_origin);
}

double GridFunction::eval(double r) const {
    const double lo = grid_.r(first_node());
    if (r < lo - 1e-14 * grid_.radius() || r > grid_.radius() * (1.0 + 1e-14))
        throw std::invalid_argument("GridFunction::eval: radius outside resolvable range");
    r = std::min(std::max(r, lo), grid_.radius());
    const auto& x = grid_.nodes();
    // nodes are sorted; binary search for the cell
    int hi = static_cast<int>(std::upper_bound(x.data(), x.data() + x.size(), r) - x.data());
    hi = std::min(std::max(hi, first_node() + 1), grid_.cell_count());
    const int loi = hi - 1;
    const double t = (r - x[loi]) / (x[hi] - x[loi]);
    return (1.0 - t) * values_[loi] + t * values_[hi];
}

Eigen::ArrayXd GridFunction::derivative_values() const {
    const int M = grid_.cell_count();
    const auto& x = grid_.nodes();
    Eigen::ArrayXd d(M + 1);

    auto three_point = [&](int a, int b, int c, double at) {
        const double xa = x[a], xb = x[b], xc = x[c];
        // derivative of the quadratic through (xa,ua),(xb,ub),(xc,uc) at 'at'
        const double la = (2.0 * at - xb - xc) / ((xa - xb) * (xa - xc));
        const double lb = (2.0 * at - xa - xc) / ((xb - xa) * (xb - xc));
        const double lc = (2.0 * at - xa - xb) / ((xc - xa) * (xc - xb));
        return la * values_[a] + lb * values_[b] + lc * values_[c];
    };

    for (int i = 1; i < M; ++i) d[i] = three_point(i - 1, i, i + 1, x[i]);
    d[M] = three_point(M - 2, M - 1, M, x[M]);
    if (singular_) {
        d[1] = three_point(1, 2, 3, x[1]);
        d[0] = 0.0; // placeholder, never read
    } else {
        d[0] = 0.0; // radial symmetry
    }
    return d;
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (int i = first_node(); i < grid_.node_count(); ++i)
        m = std::max(m, std::abs(values_[i]));
    return m;
}

double GridFunction::l2_norm() const {
    Eigen::ArrayXd sq = values_ * values_;
    return std::sqrt(integrate_ball(grid_, sq, grid_.radius(), first_node()));
}

namespace {

// One cell of int w(r) dr on [a, b], w = integrand * r^{n-1} with endpoint
// values wa, wb. Graded meshes put cells with b/a up to 4 near the origin,
// where the trapezoid rule overshoots steep power-law integrands (the
// singular profiles, |u|^p masses) by factors. When both endpoint values
// are positive fit w = c r^s through them and integrate that exactly;
// second order for smooth w, exact for pure powers. Trapezoid otherwise.
double graded_cell(double a, double b, double wa, double wb) {
    if (wa > 0.0 && wb > 0.0 && b > a && a > 0.0) {
        const double s = std::log(wb / wa) / std::log(b / a);
        const double sp1 = s + 1.0;
        if (std::abs(sp1) < 1e-9) return wa * a * std::log(b / a);
        return wa * a * (std::pow(b / a, sp1) - 1.0) / sp1;
    }
    return 0.5 * (b - a) * (wa + wb);
}

double trapezoid_cell(double a, double b, double wa, double wb) {
    return 0.5 * (b - a) * (wa + wb);
}

double linear_interp(double a, double b, double ga, double gb, double r) {
    const double t = (r - a) / (b - a);
    return (1.0 - t) * ga + t * gb;
}

// log-log interpolation, the partial-cell companion of graded_cell: the
// linear chord of a steep decaying power overshoots by factors on wide
// graded cells, and the ball-edge value it feeds gets amplified by the
// r^{beta-n} Morrey weight
double power_interp(double a, double b, double ga, double gb, double r) {
    if (ga > 0.0 && gb > 0.0 && a > 0.0)
        return ga * std::pow(gb / ga, std::log(r / a) / std::log(b / a));
    return linear_interp(a, b, ga, gb, r);
}

template <double Cell(double, double, double, double),
          double Interp(double, double, double, double, double)>
double ball_quadrature(const RadialGrid& g, const Eigen::ArrayXd& integrand, double rho,
                       int first_node) {
    if (integrand.size() != g.node_count())
        throw std::invalid_argument("integrate_ball: integrand size does not match grid");
    if (!(rho > 0.0) || rho > g.radius() * (1.0 + 1e-14))
        throw std::invalid_argument("integrate_ball: rho outside (0, R]");
    rho = std::min(rho, g.radius());

    const int n = g.dimension();
    const auto& x = g.nodes();
    auto weighted = [&](int i) { return integrand[i] * std::pow(x[i], n - 1); };

    double acc = 0.0;
    int i = first_node;
    while (i + 1 < g.node_count() && x[i + 1] <= rho) {
        acc += Cell(x[i], x[i + 1], weighted(i), weighted(i + 1));
        ++i;
    }
    if (i + 1 < g.node_count() && x[i] < rho) {
        const double g_rho = Interp(x[i], x[i + 1], integrand[i], integrand[i + 1], rho);
        acc += Cell(x[i], rho, weighted(i), g_rho * std::pow(rho, n - 1));
    }
    return acc * g.sphere_area();
}

} // namespace

double integrate_ball(const RadialGrid& g, const Eigen::ArrayXd& integrand, double rho,
                      int first_node) {
    return ball_quadrature<trapezoid_cell, linear_interp>(g, integrand, rho, first_node);
}

double integrate_ball_graded(const RadialGrid& g, const Eigen::ArrayXd& integrand, double rho,
                             int first_node) {
    return ball_quadrature<graded_cell, power_interp>(g, integrand, rho, first_node);
}

} // namespace gelfand
