#include "gelfand/continuation.hpp"

#include <cmath>

namespace gelfand {

namespace {

// Arclength inner product. Uniform nodal mean, not the volume-weighted L2:
// the r^{n-1} weight starves the origin peak in high dimension, blowing up
// the normalized tangent exactly where the branch moves.
struct Metric {
    Eigen::ArrayXd w;
    double theta_u, theta_lambda;

    double ip(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) const {
        return (w * a * b).sum();
    }
    double norm(const Eigen::ArrayXd& du, double dl) const {
        return std::sqrt(theta_u * ip(du, du) + theta_lambda * dl * dl);
    }
};

TriDiag assemble_jacobian(const LaplaceStencil& st, const Problem& p,
                          const Eigen::ArrayXd& v) {
    const int M = p.grid.cell_count();
    TriDiag J;
    J.diag.resize(M);
    J.lower.resize(M - 1);
    J.upper.resize(M - 1);
    for (int i = 0; i < M; ++i)
        J.diag[i] = st.diag[i] + p.lambda * p.f.fprime_minus(v[i]);
    for (int i = 1; i < M; ++i) J.lower[i - 1] = st.sub[i];
    for (int i = 0; i + 1 < M; ++i) J.upper[i] = st.sup[i];
    return J;
}

struct FitResult {
    double lambda_star;
    double s_star;
};

// vertex of the quadratic through (s_a, l_a), (s_b, l_b), (s_c, l_c)
FitResult fit_vertex(double sa, double la, double sb, double lb, double sc, double lc) {
    const double c1 = (lb - la) / (sb - sa);
    const double c2 = ((lc - lb) / (sc - sb) - c1) / (sc - sa);
    if (!(c2 < 0.0)) return {lb, sb}; // degenerate, no interior maximum
    double s_star = 0.5 * (sa + sb) - 0.5 * c1 / c2;
    s_star = std::min(std::max(s_star, sa), sc);
    const double l_star = la + c1 * (s_star - sa) + c2 * (s_star - sa) * (s_star - sb);
    return {l_star, s_star};
}

} // namespace

FoldInfo detect_fold(const Branch& b) {
    const auto& pts = b.points;
    for (size_t i = 2; i < pts.size(); ++i) {
        const double d1 = pts[i - 1].lambda - pts[i - 2].lambda;
        const double d2 = pts[i].lambda - pts[i - 1].lambda;
        if (d1 > 0.0 && d2 < 0.0) {
            // center the triple on the first descending point when possible:
            // after step refinement the (i-1, i, i+1) spacings are the fine ones,
            // while (i-2, i-1) may still be a coarse interval that drags the fit
            const size_t lo = (i + 1 < pts.size()) ? i - 1 : i - 2;
            const auto fit = fit_vertex(pts[lo].arclength, pts[lo].lambda,
                                        pts[lo + 1].arclength, pts[lo + 1].lambda,
                                        pts[lo + 2].arclength, pts[lo + 2].lambda);
            int idx = static_cast<int>(lo);
            double best = std::abs(pts[idx].arclength - fit.s_star);
            for (size_t j : {lo + 1, lo + 2}) {
                const double d = std::abs(pts[j].arclength - fit.s_star);
                if (d < best) {
                    best = d;
                    idx = static_cast<int>(j);
                }
            }
            return FoldInfo{fit.lambda_star, pts[idx].sup_norm, idx};
        }
    }
    throw NoFold("detect_fold: lambda increments never change sign");
}

Branch trace_branch(const RadialGrid& grid, const Nonlinearity& f,
                    const ContinuationSettings& s) {
    if (!(s.ds > 0.0) || s.max_points < 2 || !(s.sup_limit > 0.0) || !(s.tol > 0.0))
        throw std::invalid_argument("trace_branch: bad settings");

    const int M = grid.cell_count();
    const LaplaceStencil st = laplace_stencil(grid);
    Metric metric{Eigen::ArrayXd::Constant(M + 1, 1.0 / (M + 1)), s.theta_u, s.theta_lambda};

    Branch branch{grid, f, {}, std::nullopt, {}};

    Eigen::ArrayXd u = Eigen::ArrayXd::Zero(M + 1);
    branch.points.push_back(BranchPoint{0.0, GridFunction(grid, u), 0.0, 0.0,
                                        std::numeric_limits<double>::quiet_NaN()});

    // initial tangent from du/dlambda at the trivial point
    Eigen::ArrayXd tu = Eigen::ArrayXd::Zero(M + 1);
    double tl = 1.0;
    {
        Problem p0{grid, f, 0.0};
        TriDiag J = assemble_jacobian(st, p0, u);
        Eigen::ArrayXd g = Eigen::ArrayXd::Constant(M, f.f(0.0));
        Eigen::ArrayXd v = tridiag_solve(J, -g);
        for (int i = 0; i < M; ++i) tu[i] = v[i];
        const double nrm = metric.norm(tu, 1.0);
        tu /= nrm;
        tl = 1.0 / nrm;
    }

    int refine = 1;
    int post_fold = 0;
    bool pending_detect = false;
    bool aborted = false;

    while (static_cast<int>(branch.points.size()) < s.max_points) {
        const BranchPoint& cur = branch.points.back();
        double ds_eff = s.ds * (1.0 + cur.sup_norm) / refine;

        // predictor plus bordered Newton corrector, halving on failure
        Eigen::ArrayXd un;
        double ln = 0.0;
        bool accepted = false;
        int halvings = 0;
        while (!accepted && halvings <= 10) {
            un = cur.u.values() + ds_eff * tu;
            un[M] = 0.0;
            ln = cur.lambda + ds_eff * tl;

            bool ok = false;
            for (int it = 0; it < s.max_corrector; ++it) {
                Problem p{grid, f, ln};
                Eigen::ArrayXd F(M);
                const double fmax = stencil_residual_scaled(st, p, un, &F);
                const double N = s.theta_u * metric.ip(tu, un - cur.u.values()) +
                                 s.theta_lambda * tl * (ln - cur.lambda) - ds_eff;
                if (fmax <= s.tol && std::abs(N) <= s.tol * (1.0 + std::abs(ln))) {
                    ok = true;
                    break;
                }
                TriDiag J = assemble_jacobian(st, p, un);
                Eigen::ArrayXd g(M);
                for (int i = 0; i < M; ++i) g[i] = f.f(un[i]);
                Eigen::ArrayXd s1, s2;
                try {
                    s1 = tridiag_solve(J, -F);
                    s2 = tridiag_solve(J, -g);
                } catch (const std::runtime_error&) {
                    break;
                }
                // border row: theta_u <tu, du> + theta_lambda tl dl = -N
                double a_s1 = 0.0, a_s2 = 0.0;
                for (int i = 0; i < M; ++i) {
                    a_s1 += metric.w[i] * tu[i] * s1[i];
                    a_s2 += metric.w[i] * tu[i] * s2[i];
                }
                a_s1 *= s.theta_u;
                a_s2 *= s.theta_u;
                const double beta = s.theta_lambda * tl;
                const double denom = beta + a_s2;
                if (denom == 0.0) break;
                const double dl = (-N - a_s1) / denom;
                for (int i = 0; i < M; ++i) un[i] += s1[i] + dl * s2[i];
                ln += dl;
                if (!un.isFinite().all() || !std::isfinite(ln)) break;
            }
            if (ok) {
                accepted = true;
            } else {
                ds_eff *= 0.5;
                ++halvings;
            }
        }

        if (!accepted) {
            if (branch.points.size() == 1)
                throw ContinuationFailure("trace_branch: corrector never converged");
            branch.termination = "corrector_failure";
            aborted = true;
            break;
        }

        const Eigen::ArrayXd du = un - cur.u.values();
        const double dl = ln - cur.lambda;
        const double step = metric.norm(du, dl);
        const double arc = cur.arclength + step;
        GridFunction ug(grid, un);
        const double sup = ug.sup_norm();
        branch.points.push_back(BranchPoint{ln, std::move(ug), arc, sup,
                                            std::numeric_limits<double>::quiet_NaN()});

        // secant tangent
        tu = du / step;
        tl = dl / step;

        const size_t k = branch.points.size();
        if (!branch.fold && pending_detect) {
            branch.fold = detect_fold(branch);
            refine = 1;
            pending_detect = false;
        } else if (!branch.fold && k >= 3) {
            const double d1 = branch.points[k - 2].lambda - branch.points[k - 3].lambda;
            const double d2 = branch.points[k - 1].lambda - branch.points[k - 2].lambda;
            if (d1 > 0.0 && d2 < 0.0) {
                if (refine < s.fold_refine) {
                    // retreat two points and re-approach the turn with a finer
                    // step, so both sides of the bracket end up finely sampled;
                    // keeping the coarse pre-turn interval would let cubic terms
                    // in lambda(s) pollute the vertex fit
                    branch.points.pop_back();
                    if (branch.points.size() >= 3) branch.points.pop_back();
                    refine *= 2;
                    const auto& b1 = branch.points[branch.points.size() - 2];
                    const auto& b2 = branch.points.back();
                    const Eigen::ArrayXd du2 = b2.u.values() - b1.u.values();
                    const double dl2 = b2.lambda - b1.lambda;
                    const double st2 = metric.norm(du2, dl2);
                    tu = du2 / st2;
                    tl = dl2 / st2;
                    continue;
                }
                // one more point before fitting so the triple is centered
                pending_detect = true;
            }
        }
        if (branch.fold && s.post_fold_points >= 0 &&
            ++post_fold > s.post_fold_points) {
            branch.termination = "post_fold";
            aborted = true;
            break;
        }
        if (branch.points.back().sup_norm > s.sup_limit) {
            branch.termination = "sup_limit";
            aborted = true;
            break;
        }
    }
    // sign change seen but the extra centering point never landed
    if (!branch.fold && pending_detect) branch.fold = detect_fold(branch);
    if (!aborted) branch.termination = "max_points";
    return branch;
}

Solution extremal_profile(const Branch& b, double tol) {
    if (!(tol > 0.0) || !(tol < 1.0))
        throw std::invalid_argument("extremal_profile: tol must lie in (0, 1)");
    const FoldInfo fold = b.fold ? *b.fold : detect_fold(b);
    const double target = fold.lambda_star * (1.0 - tol);

    int best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= fold.index && i < static_cast<int>(b.points.size()); ++i) {
        const double d = std::abs(b.points[i].lambda - target);
        if (d < bestd) {
            bestd = d;
            best = i;
        }
    }
    Problem p{b.grid, b.f, target};
    return newton_solve(p, b.points[best].u, 1e-10, 50);
}

} // namespace gelfand
