#include "gelfand/stability.hpp"

#include "gelfand/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace gelfand {

namespace {

// Discrete forms of Q restricted to the active nodes lo..M-1. Dirichlet
// rows (boundary, excised origin, k >= 1 origin) are dropped entirely.
struct Forms {
    int lo = 0;
    int m = 0;
    TriDiag A;        // stiffness + angular penalty - potential
    Eigen::ArrayXd W; // lumped r^{n-1} mass
};

int first_active(const GridFunction& u, int angular_k) {
    if (u.singular_at_origin()) return 2;
    return angular_k >= 1 ? 1 : 0;
}

Forms assemble_forms(const GridFunction& u, const Nonlinearity& f, double lambda,
                     int angular_k) {
    const RadialGrid& g = u.grid();
    const int M = g.cell_count();
    const int n = g.dimension();
    const auto& r = g.nodes();
    const double omega = g.sphere_area();

    Forms fo;
    fo.lo = first_active(u, angular_k);
    fo.m = M - fo.lo;
    if (fo.m < 2) throw std::invalid_argument("stability: grid too coarse");
    fo.A.diag = Eigen::ArrayXd::Zero(fo.m);
    fo.A.lower = Eigen::ArrayXd::Zero(fo.m - 1);
    fo.A.upper = Eigen::ArrayXd::Zero(fo.m - 1);

    // gradient term: xi piecewise linear, cell integral of r^{n-1} exact
    for (int c = std::max(fo.lo - 1, 0); c < M; ++c) {
        const double h = r[c + 1] - r[c];
        const double kcell =
            omega * (std::pow(r[c + 1], n) - std::pow(r[c], n)) / n / (h * h);
        const int a = c - fo.lo;
        if (a >= 0) fo.A.diag[a] += kcell;
        if (a + 1 < fo.m) fo.A.diag[a + 1] += kcell;
        if (a >= 0 && a + 1 < fo.m) {
            fo.A.lower[a] -= kcell;
            fo.A.upper[a] -= kcell;
        }
    }

    const Eigen::ArrayXd trap = g.trapezoid_weights();
    fo.W.resize(fo.m);
    for (int i = fo.lo; i < M; ++i) {
        const double wi = omega * trap[i] * std::pow(r[i], n - 1);
        fo.W[i - fo.lo] = wi;
        double pot = -lambda * f.fprime_minus(u[i]);
        if (angular_k >= 1)
            pot += static_cast<double>(angular_k) * (angular_k + n - 2) / (r[i] * r[i]);
        fo.A.diag[i - fo.lo] += wi * pot;
    }
    return fo;
}

void require_vanishing(const GridFunction& xi, int node, const char* where) {
    const double scale = std::max(1.0, xi.sup_norm());
    if (std::abs(xi[node]) > 1e-12 * scale)
        throw std::invalid_argument(std::string("quadratic_form: xi must vanish ") + where);
}

// constant of the annulus bound for the cutoff with slope -2/rho
double cutoff_constant(double a) {
    return 2.0 * std::max(a - 2.0, 0.0) + 4.0 * std::max(1.0, std::pow(1.5, 2.0 - a));
}

} // namespace

EstimateReport make_report(std::string name, double lhs, double rhs,
                           std::map<std::string, double> params) {
    EstimateReport rep;
    rep.name = std::move(name);
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.holds = lhs <= rhs * (1.0 + 1e-9);
    if (rhs == 0.0)
        rep.ratio = lhs == 0.0 ? 0.0 : std::numeric_limits<double>::max();
    else
        rep.ratio = lhs / rhs;
    rep.params = std::move(params);
    return rep;
}

double quadratic_form(const GridFunction& u, const Nonlinearity& f, double lambda,
                      const GridFunction& xi, int angular_k) {
    if (xi.grid() != u.grid())
        throw std::invalid_argument("quadratic_form: grid mismatch");
    const int M = u.grid().cell_count();
    require_vanishing(xi, M, "at the boundary");
    const int lo = first_active(u, angular_k);
    for (int i = 0; i < lo; ++i) require_vanishing(xi, i, "near the origin");

    const Forms fo = assemble_forms(u, f, lambda, angular_k);
    const Eigen::ArrayXd x = xi.values().segment(lo, fo.m);
    return (x * fo.A.multiply(x)).sum();
}

StabilityCertificate principal_eigenvalue(const GridFunction& u, const Nonlinearity& f,
                                          double lambda, const EigenOptions& opts) {
    const Forms fo = assemble_forms(u, f, lambda, opts.angular_k);
    const int m = fo.m;

    // bracket: generalized Gershgorin over rows with positive weight, a
    // Rayleigh quotient from above
    double lo_b = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        double off = 0.0;
        if (i > 0) off += std::abs(fo.A.lower[i - 1]);
        if (i + 1 < m) off += std::abs(fo.A.upper[i]);
        if (fo.W[i] > 0.0) lo_b = std::min(lo_b, (fo.A.diag[i] - off) / fo.W[i]);
    }
    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(m);
    double hi_b = (ones * fo.A.multiply(ones)).sum() / fo.W.sum();
    hi_b += std::max(1e-12, 1e-12 * std::abs(hi_b));
    if (!(lo_b < hi_b)) lo_b = hi_b - std::max(1.0, std::abs(hi_b));
    for (int g = 0; g < 64 && sturm_count_below(fo.A, fo.W, lo_b) > 0; ++g)
        lo_b -= 2.0 * (hi_b - lo_b);
    for (int g = 0; g < 64 && sturm_count_below(fo.A, fo.W, hi_b) < 1; ++g)
        hi_b += 2.0 * (hi_b - lo_b);

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo_b + hi_b);
        if (!(mid > lo_b) || !(mid < hi_b)) break;
        if (sturm_count_below(fo.A, fo.W, mid) >= 1)
            hi_b = mid;
        else
            lo_b = mid;
    }

    // shift strictly below the bracket keeps the solve definite while the
    // eigendirection dominates after one or two applications
    const double sigma = lo_b - std::max(4.0 * (hi_b - lo_b), 1e-8 * (1.0 + std::abs(lo_b)));
    TriDiag S = fo.A;
    S.diag -= sigma * fo.W;

    TriDiag Aabs = fo.A;
    Aabs.diag = fo.A.diag.abs();
    Aabs.lower = fo.A.lower.abs();
    Aabs.upper = fo.A.upper.abs();

    Eigen::ArrayXd v = ones / std::sqrt(static_cast<double>(m));
    Eigen::ArrayXd v_prev;
    double rq = 0.0, rq_prev = std::numeric_limits<double>::infinity();
    bool settled = false;
    for (int step = 0; step < opts.max_steps; ++step) {
        v_prev = v;
        v = tridiag_solve_spd(S, fo.W * v);
        const double nrm = std::sqrt((v * v).sum());
        if (!(nrm > 0.0) || !std::isfinite(nrm))
            throw std::runtime_error("principal_eigenvalue: inverse iteration broke down");
        v /= nrm;
        const double den = (fo.W * v * v).sum();
        rq = (v * fo.A.multiply(v)).sum() / den;
        // the Rayleigh difference can jitter above 1e-13 relative when the
        // r^{n-1} weights span many orders, so a settled direction counts too
        const double overlap = std::min(1.0, std::abs((v * v_prev).sum()));
        if (step >= 1 && (std::abs(rq - rq_prev) <= 1e-13 * (1.0 + std::abs(rq)) ||
                          1.0 - overlap <= 1e-26)) {
            settled = true;
            break;
        }
        // the iteration can land on a machine-precision 2-cycle where the
        // quotient jitters by its own cancellation noise, roughly
        // eps * (v.|A|v)/(v.Wv), and the overlap deficit floors at eps. The
        // Sturm bisection already pins the eigenvalue, so accept once the
        // quotient sits inside that bracket up to the noise and the
        // direction is stationary at machine level.
        if (step >= 2 && 1.0 - overlap <= 64.0 * std::numeric_limits<double>::epsilon()) {
            const double noise = std::numeric_limits<double>::epsilon() *
                                 (v.abs() * Aabs.multiply(v.abs())).sum() / den;
            const double pad = 64.0 * noise + 1e-12 * (1.0 + std::abs(rq));
            if (rq >= lo_b - pad && rq <= hi_b + pad) {
                settled = true;
                break;
            }
        }
        rq_prev = rq;
    }
    if (!settled)
        throw std::runtime_error("principal_eigenvalue: inverse iteration stagnated");

    if ((fo.W * v).sum() < 0.0) v = -v;
    const int M = u.grid().cell_count();
    Eigen::ArrayXd phi = Eigen::ArrayXd::Zero(M + 1);
    phi.segment(fo.lo, m) = v;
    phi /= GridFunction(u.grid(), phi).l2_norm();
    GridFunction phi1(u.grid(), phi);

    const double mu1 = quadratic_form(u, f, lambda, phi1, opts.angular_k);
    return StabilityCertificate{mu1, std::move(phi1), mu1 >= -opts.tol_eig,
                                std::abs(mu1) < opts.tol_eig};
}

double hardy_margin(int n) {
    if (n < 3) throw std::invalid_argument("hardy_margin: n >= 3 required");
    const double d = n - 2.0;
    return 0.25 * d * d - 2.0 * d;
}

EstimateReport weighted_test_inequality(const GridFunction& u, double rho,
                                        const WeightTag& weight) {
    const RadialGrid& g = u.grid();
    const int n = g.dimension();
    const double R = g.radius();
    if (!(rho > 0.0) || !(rho < 2.0 * R / 3.0))
        throw std::invalid_argument("weighted_test_inequality: need 0 < rho < 2R/3");

    const Eigen::ArrayXd du = u.derivative_values();
    const auto& r = g.nodes();
    const int fn = u.first_node();
    const int N = g.node_count();

    const Eigen::ArrayXd grad2 = du * du;
    const double annulus =
        integrate_ball(g, grad2, 1.5 * rho, fn) - integrate_ball(g, grad2, rho, fn);

    Eigen::ArrayXd ball = Eigen::ArrayXd::Zero(N);
    switch (weight.kind) {
    case WeightTag::Kind::Critical: {
        if (n < 3 || n > 9)
            throw std::invalid_argument("critical weight needs 3 <= n <= 9");
        const double coef = (n - 2.0) * (10.0 - n) / 4.0;
        for (int i = std::max(fn, 1); i < N; ++i)
            ball[i] = grad2[i] * std::pow(r[i], 2.0 - n);
        const double lhs = coef * integrate_ball(g, ball, rho, fn);
        const double C = cutoff_constant(n - 2.0);
        const double rhs = C * std::pow(rho, 2.0 - n) * annulus;
        return make_report("weighted_radial_critical", lhs, rhs,
                           {{"n", double(n)},
                            {"rho", rho},
                            {"coefficient", coef},
                            {"constant", C}});
    }
    case WeightTag::Kind::Power: {
        if (n < 11) throw std::invalid_argument("power weight needs n >= 11");
        const double a = weight.param;
        const double amax = 2.0 * (1.0 + std::sqrt(n - 1.0));
        if (!(a > 8.0) || !(a < amax))
            throw std::invalid_argument(
                "power weight exponent outside (8, 2(1+sqrt(n-1)))");
        const double coef = n - 2.0 + a - a * a / 4.0;
        for (int i = std::max(fn, 1); i < N; ++i)
            ball[i] = grad2[i] * std::pow(r[i], -a);
        const double lhs = coef * integrate_ball(g, ball, rho, fn);
        const double C = cutoff_constant(a);
        const double rhs = C * std::pow(rho, -a) * annulus;
        return make_report(
            "weighted_radial_power", lhs, rhs,
            {{"n", double(n)}, {"rho", rho}, {"a", a}, {"coefficient", coef}, {"constant", C}});
    }
    case WeightTag::Kind::Log10: {
        if (n != 10) throw std::invalid_argument("log weight needs n = 10");
        if (std::abs(R - 1.0) > 1e-12)
            throw std::invalid_argument("log weight requires a unit-radius ball");
        const double delta = weight.param;
        const double lmin = -std::log(1.5 * rho); // log(1/r) at the outer edge
        if (!(delta > 0.0) || !(delta <= 8.0 * lmin))
            throw std::invalid_argument(
                "log weight needs 0 < delta <= -8 log(3 rho/2)");
        for (int i = std::max(fn, 1); i < N; ++i)
            ball[i] = grad2[i] * std::pow(-std::log(r[i]), -1.0 - delta) *
                      std::pow(r[i], 2.0 - n);
        const double lhs = delta * integrate_ball(g, ball, rho, fn);
        const double C = 21.0;
        const double rhs = C * std::pow(rho, -8.0) * std::pow(lmin, -delta) * annulus;
        return make_report(
            "weighted_radial_log", lhs, rhs,
            {{"n", double(n)}, {"rho", rho}, {"delta", delta}, {"constant", C}});
    }
    }
    throw std::logic_error("weighted_test_inequality: unknown weight");
}

EstimateReport curvature_test_inequality(const GridFunction& u, const GridFunction& eta) {
    const RadialGrid& g = u.grid();
    if (eta.grid() != g)
        throw std::invalid_argument("curvature_test_inequality: grid mismatch");
    const int M = g.cell_count();
    const double scale = std::max(1.0, eta.sup_norm());
    if (std::abs(eta[M]) > 1e-12 * scale)
        throw std::invalid_argument("curvature_test_inequality: eta must vanish at r = R");

    const int n = g.dimension();
    const auto& r = g.nodes();
    const Eigen::ArrayXd du = u.derivative_values();
    const Eigen::ArrayXd de = eta.derivative_values();
    const int fn = std::max(u.first_node(), eta.first_node());
    const int N = g.node_count();

    Eigen::ArrayXd curv = Eigen::ArrayXd::Zero(N); // (n-1) (u'/r)^2 eta^2
    for (int i = std::max(fn, 1); i < N; ++i) {
        const double q = du[i] / r[i];
        curv[i] = (n - 1.0) * q * q * eta[i] * eta[i];
    }
    const Eigen::ArrayXd grad = du * du * de * de;

    const double lhs = integrate_ball(g, curv, g.radius(), fn);
    const double rhs = integrate_ball(g, grad, g.radius(), fn);
    return make_report("curvature_levelset", lhs, rhs, {{"n", double(n)}});
}

void annotate_branch(Branch& b) {
    for (auto& pt : b.points)
        pt.mu1 = principal_eigenvalue(pt.u, b.f, pt.lambda).mu1;
}

} // namespace gelfand
