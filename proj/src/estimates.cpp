#include "gelfand/estimates.hpp"

#include "gelfand/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gelfand {

double lebesgue_norm(const GridFunction& u, double p, double rho, bool gradient) {
    const RadialGrid& g = u.grid();
    if (!(rho > 0.0) || rho > g.radius() * (1.0 + 1e-14))
        throw std::invalid_argument("lebesgue_norm: rho outside (0, R]");
    if (!(p >= 1.0)) throw std::invalid_argument("lebesgue_norm: p >= 1 required");

    const Eigen::ArrayXd vals = gradient ? u.derivative_values() : u.values();
    const int fn = u.first_node();

    if (std::isinf(p)) {
        double m = 0.0;
        for (int i = fn; i < g.node_count(); ++i) {
            if (g.r(i) > rho * (1.0 + 1e-14)) break;
            m = std::max(m, std::abs(vals[i]));
        }
        return m;
    }
    Eigen::ArrayXd integrand(g.node_count());
    for (int i = 0; i < g.node_count(); ++i)
        integrand[i] = std::pow(std::abs(vals[i]), p);
    return std::pow(integrate_ball_graded(g, integrand, rho, fn), 1.0 / p);
}

double holder_seminorm(const GridFunction& u, double alpha, double rho) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("holder_seminorm: alpha outside (0, 1]");
    const RadialGrid& g = u.grid();
    if (rho > g.radius() * (1.0 + 1e-14))
        throw std::invalid_argument("holder_seminorm: rho > R");

    int last = u.first_node();
    while (last + 1 < g.node_count() && g.r(last + 1) <= rho * (1.0 + 1e-14)) ++last;

    double m = 0.0;
    for (int i = u.first_node(); i <= last; ++i)
        for (int j = i + 1; j <= last; ++j)
            m = std::max(m, std::abs(u[i] - u[j]) / std::pow(g.r(j) - g.r(i), alpha));
    return m;
}

namespace {

// integral of sin^m over [0, x], 128-interval composite Simpson
double sin_power_integral(double x, int m) {
    if (!(x > 0.0)) return 0.0;
    const int K = 128;
    const double h = x / K;
    double acc = 0.0; // endpoints contribute sin(0)^m = 0 and the last node once
    for (int j = 0; j <= K; ++j) {
        const double w = (j == 0 || j == K) ? 1.0 : (j % 2 ? 4.0 : 2.0);
        acc += w * std::pow(std::sin(j * h), m);
    }
    return acc * h / 3.0;
}

// fraction of the sphere |x| = s lying inside the ball B_r(y), center
// distance y from the origin
double cap_fraction(double s, double y, double r, int n, double full_angle_integral) {
    if (s + y <= r) return 1.0;
    if (s >= r + y || s + r <= y) return 0.0;
    const double c = std::clamp((s * s + y * y - r * r) / (2.0 * s * y), -1.0, 1.0);
    return sin_power_integral(std::acos(c), n - 2) / full_angle_integral;
}

} // namespace

double morrey_norm(const GridFunction& u, const MorreyParams& mp, int center_samples) {
    const RadialGrid& g = u.grid();
    const int n = g.dimension();
    if (!(mp.p >= 1.0) || std::isinf(mp.p))
        throw std::invalid_argument("morrey_norm: p must be finite and >= 1");
    if (!(mp.beta > 0.0) || mp.beta > n * (1.0 + 1e-14))
        throw std::invalid_argument("morrey_norm: beta outside (0, n]");
    if (center_samples < 8)
        throw std::invalid_argument("morrey_norm: center_samples >= 8 required");

    const int N = g.node_count();
    const int fn = u.first_node();
    const double R = g.radius();

    Eigen::ArrayXd up(N);
    for (int i = 0; i < N; ++i) up[i] = std::pow(std::abs(u[i]), mp.p);

    const double full = sin_power_integral(std::acos(-1.0), n - 2);

    // r^{beta-n} int_{B_R cap B_rad(y)} |u|^p. Centered balls go through the
    // exact partial-cell path; the nodal cap mask would smear the ball edge
    // across a whole cell, which is a big overshoot when rad spans only a
    // few graded cells. Off-center caps are continuous in r, so the nodal
    // mask is fine there.
    auto cell_value = [&](double y, double rad) {
        if (y == 0.0) {
            const double integral = integrate_ball_graded(g, up, std::min(rad, R), fn);
            return std::pow(rad, mp.beta - n) * integral;
        }
        Eigen::ArrayXd masked(N);
        for (int i = 0; i < N; ++i)
            masked[i] = up[i] * cap_fraction(g.r(i), y, rad, n, full);
        const double integral = integrate_ball_graded(g, masked, R, fn);
        return std::pow(rad, mp.beta - n) * integral;
    };

    const double rmin = g.r(fn + 1) - g.r(fn);
    const double rmax = 2.0 * R;
    const int nr = 64;
    const double gstep = std::pow(rmax / rmin, 1.0 / (nr - 1));

    std::vector<double> radii;
    for (int k = 0; k < nr; ++k) radii.push_back(rmin * std::pow(gstep, k));
    radii.push_back(R);

    double best = 0.0, best_y = 0.0, best_lo = rmin, best_hi = rmax;
    for (int cj = 0; cj <= center_samples; ++cj) {
        const double y = R * cj / center_samples;
        for (const double rad : radii) {
            const double val = cell_value(y, rad);
            if (val > best) {
                best = val;
                best_y = y;
                best_lo = std::max(rad / gstep, rmin);
                best_hi = std::min(rad * gstep, rmax);
            }
        }
    }

    // two local refinement passes around the maximizing radius
    for (int pass = 0; pass < 2; ++pass) {
        const double lo = best_lo, hi = best_hi;
        for (int k = 0; k <= 16; ++k) {
            const double rad = lo * std::pow(hi / lo, k / 16.0);
            const double val = cell_value(best_y, rad);
            if (val > best) {
                best = val;
                best_lo = lo * std::pow(hi / lo, std::max(k - 1, 0) / 16.0);
                best_hi = lo * std::pow(hi / lo, std::min(k + 1, 16) / 16.0);
            }
        }
    }

    return std::pow(best, 1.0 / mp.p);
}

RadialQuantities radial_quantities(const GridFunction& u, double rho) {
    const RadialGrid& g = u.grid();
    if (!(rho > 0.0) || rho > g.radius() * (1.0 + 1e-14))
        throw std::invalid_argument("radial_quantities: rho outside (0, R]");

    const Eigen::ArrayXd du = u.derivative_values();
    const int fn = u.first_node();
    const int n = g.dimension();
    const int N = g.node_count();

    if (u.singular_at_origin()) {
        // log-log slope of r u'^2 on the innermost nodes; <= -0.98 means the
        // Rq integrand fails to be integrable at the origin
        const int kmax = std::min(fn + 8, N - 1);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        bool positive = true;
        for (int i = fn; i < kmax; ++i) {
            const double w = g.r(i) * du[i] * du[i];
            if (!(w > 0.0)) {
                positive = false;
                break;
            }
            const double x = std::log(g.r(i)), y = std::log(w);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (positive && cnt >= 2) {
            const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
            if (slope <= -0.98)
                throw std::invalid_argument(
                    "radial_quantities: non-integrable gradient singularity at the origin");
        }
    }

    Eigen::ArrayXd dirichlet = du * du;
    Eigen::ArrayXd weighted = Eigen::ArrayXd::Zero(N);
    for (int i = std::max(fn, 1); i < N; ++i)
        weighted[i] = du[i] * du[i] * std::pow(g.r(i), 2.0 - n);

    RadialQuantities q;
    q.D = std::pow(rho, 2.0 - n) * integrate_ball(g, dirichlet, rho, fn);
    q.Rq = integrate_ball(g, weighted, rho, fn);
    return q;
}

DecayResult decay_check(const DecayInput& d) {
    if (!(d.L > 0.5))
        throw std::invalid_argument("decay_check: L > 1/2 required");
    if (d.a.size() != d.b.size() || d.a.size() < 2)
        throw std::invalid_argument("decay_check: sequences must have equal length >= 2");
    if (!(d.M_bound > 0.0))
        throw std::invalid_argument("decay_check: M_bound must be positive");
    for (size_t j = 0; j < d.a.size(); ++j)
        if (!std::isfinite(d.a[j]) || !std::isfinite(d.b[j]) || d.a[j] < 0.0 || d.b[j] < 0.0)
            throw std::invalid_argument("decay_check: entries must be finite and nonnegative");

    DecayResult res;
    res.hyp_ok = d.a[0] <= d.M_bound && d.b[0] <= d.M_bound;
    for (size_t j = 1; j < d.a.size() && res.hyp_ok; ++j) {
        if (d.b[j] > d.b[j - 1]) res.hyp_ok = false;
        if (d.a[j] + d.b[j] > d.L * d.a[j - 1]) res.hyp_ok = false;
        if (d.a[j] >= 0.5 * d.a[j - 1] && d.b[j] > d.L * (d.b[j - 1] - d.b[j]))
            res.hyp_ok = false;
    }

    // root of eps log 2 + (1+eps) log L - log(1+L), increasing since L > 1/2
    const double ll = std::log(d.L), l1 = std::log(1.0 + d.L);
    auto gfun = [&](double e) { return e * std::log(2.0) + (1.0 + e) * ll - l1; };
    double lo = 0.0, hi = 1.0;
    while (gfun(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;
        (gfun(mid) < 0.0 ? lo : hi) = mid;
    }
    res.eps = 0.5 * (lo + hi);
    res.theta = std::pow(2.0, -res.eps / (1.0 + res.eps));
    res.Cc = std::pow(d.L, res.eps / (1.0 + res.eps)) / res.theta;

    res.conclusion_ok = true;
    double bound = res.Cc * d.M_bound;
    for (size_t j = 0; j < d.b.size(); ++j, bound *= res.theta)
        if (d.b[j] > bound * (1.0 + 1e-9)) res.conclusion_ok = false;
    return res;
}

DecayInput make_decay_instance(double L, double M_bound, int length, unsigned long long seed) {
    if (!(L > 0.5) || !(M_bound > 0.0) || length < 2)
        throw std::invalid_argument("make_decay_instance: bad parameters");
    std::mt19937_64 rng(seed);
    // portable uniform in [0,1); uniform_real_distribution is not pinned
    auto u01 = [&rng] { return (rng() >> 11) * 0x1.0p-53; };

    DecayInput d;
    d.L = L;
    d.M_bound = M_bound;
    d.a.resize(static_cast<size_t>(length));
    d.b.resize(static_cast<size_t>(length));
    d.a[0] = M_bound * u01();
    d.b[0] = M_bound * u01();
    for (int j = 1; j < length; ++j) {
        const double ap = d.a[j - 1], bp = d.b[j - 1];
        bool placed = false;
        if (u01() < 0.5) {
            // contract b, keep a above half so the conditional bites
            const double bt = u01() * (L / (1.0 + L)) * bp;
            const double amax = L * ap - bt;
            if (amax >= 0.5 * ap) {
                d.b[j] = bt;
                d.a[j] = 0.5 * ap + u01() * (amax - 0.5 * ap);
                placed = true;
            }
        }
        if (!placed) {
            // halve a so the conditional is vacuous, then cap b by the sum rule
            d.a[j] = u01() * 0.499 * ap;
            d.b[j] = u01() * std::min(bp, L * ap - d.a[j]);
        }
    }
    return d;
}

double pohozaev_residual(const Solution& s) {
    if (!s.converged)
        throw std::invalid_argument("pohozaev_residual: solution did not converge");
    const RadialGrid& g = s.problem.grid;
    const int n = g.dimension();
    const int M = g.cell_count();
    const double R = g.radius();
    const double omega = g.sphere_area();

    const Eigen::ArrayXd du = s.u.derivative_values();
    const double flux = du[M];
    const double T1 = 0.5 * R * flux * flux * omega * std::pow(R, n - 1);

    Eigen::ArrayXd Fv(g.node_count());
    for (int i = 0; i < g.node_count(); ++i)
        Fv[i] = s.problem.f.antiderivative(s.u[i]);
    const double T2 = n * s.problem.lambda * integrate_ball(g, Fv, R, s.u.first_node());

    const Eigen::ArrayXd grad2 = du * du;
    const double T3 =
        0.5 * (n - 2.0) * integrate_ball(g, grad2, R, s.u.first_node());

    const double scale = std::max({std::abs(T1), std::abs(T2), std::abs(T3)});
    if (scale == 0.0) return 0.0;
    return std::abs(T1 - T2 + T3) / scale;
}

EstimateReport l1_bound_check(const Solution& s, double A, double B) {
    if (!s.converged)
        throw std::invalid_argument("l1_bound_check: solution did not converge");
    if (!(B >= 0.0)) throw std::invalid_argument("l1_bound_check: B >= 0 required");
    const RadialGrid& g = s.problem.grid;

    const BallEigenpair eig = ball_lambda1(g.dimension(), g);
    if (!(A > eig.lambda1))
        throw std::invalid_argument("l1_bound_check: A must exceed lambda1 of the ball");

    // sampled lower-bound hypothesis lambda f(t) >= A t - B on [0, sup u]
    const double top = s.u.sup_norm();
    for (int k = 0; k <= 512; ++k) {
        const double t = top * k / 512.0;
        if (s.problem.lambda * s.problem.f.f(t) < A * t - B - 1e-12 * (1.0 + std::abs(B)))
            throw std::invalid_argument(
                "l1_bound_check: lambda f(t) >= A t - B fails on the solution range");
    }

    const Eigen::ArrayXd uphi = s.u.values() * eig.phi1.values();
    const double lhs =
        (A - eig.lambda1) * integrate_ball(g, uphi, g.radius(), s.u.first_node());
    const double rhs = B * integrate_ball(g, eig.phi1.values(), g.radius(), 0);
    return make_report("eigenfunction_l1_bound", lhs, rhs,
                       {{"A", A}, {"B", B}, {"lambda1", eig.lambda1}});
}

} // namespace gelfand
