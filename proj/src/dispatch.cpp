#include "gelfand/dispatch.hpp"

#include "gelfand/continuation.hpp"
#include "gelfand/estimates.hpp"
#include "gelfand/io.hpp"
#include "gelfand/oracles.hpp"
#include "gelfand/solver.hpp"
#include "gelfand/stability.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

namespace gelfand {

namespace {

using nlohmann::ordered_json;

ordered_json json_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

// removes everything registered unless release() ran
class OutputGuard {
  public:
    std::string add(std::string path) {
        paths_.push_back(path);
        return path;
    }
    void release() { done_ = true; }
    ~OutputGuard() {
        if (done_) return;
        for (const auto& p : paths_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
    }

  private:
    std::vector<std::string> paths_;
    bool done_ = false;
};

void write_json(const ordered_json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << j.dump(2) << "\n";
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

ContinuationSettings settings_from(const RunConfig& cfg) {
    ContinuationSettings s;
    s.ds = cfg.ds;
    s.max_points = cfg.max_points;
    s.sup_limit = cfg.sup_limit;
    s.tol = cfg.tol;
    s.fold_refine = cfg.fold_refine;
    return s;
}

ordered_json family_json(const Nonlinearity& f) {
    ordered_json j;
    j["name"] = f.name();
    switch (f.family()) {
        case Nonlinearity::Family::Exponential: break;
        case Nonlinearity::Family::Power: j["q"] = json_real(f.q()); break;
        case Nonlinearity::Family::Affine:
            j["A"] = json_real(f.A());
            j["B"] = json_real(f.B());
            break;
        case Nonlinearity::Family::Constant: j["c"] = json_real(f.c()); break;
    }
    return j;
}

// monotone sweep to the minimal solution, Newton polish to full tolerance
Solution solve_minimal(const RunConfig& cfg, const Nonlinearity& f, double lambda) {
    RadialGrid grid = build_grid(cfg.M, cfg.grading, cfg.n, cfg.radius);
    Problem p = make_problem(grid, f, lambda);
    Solution sweep = monotone_iteration(p, std::max(cfg.tol, 1e-8), cfg.sup_limit);
    Solution s = newton_solve(p, sweep.u, cfg.tol);
    s.iterations += sweep.iterations;
    if (!s.converged)
        throw std::runtime_error("solver did not converge at lambda = " + format_real(lambda));
    return s;
}

int cmd_solve(const RunConfig& cfg, const std::string& out) {
    OutputGuard guard;
    const auto csv = guard.add(out + "/solution.csv");
    const auto jsp = guard.add(out + "/solution.json");

    Solution s = solve_minimal(cfg, make_family(cfg), *cfg.lambda);
    write_gridfunction_csv(s.u, csv);

    ordered_json j;
    j["n"] = cfg.n;
    j["family"] = family_json(s.problem.f);
    j["lambda"] = json_real(s.problem.lambda);
    j["M"] = s.problem.grid.cell_count();
    j["sup_norm"] = json_real(s.u.sup_norm());
    j["residual_norm"] = json_real(s.residual_norm);
    j["iterations"] = s.iterations;
    j["converged"] = s.converged;
    j["csv"] = "solution.csv";
    write_json(j, jsp);
    guard.release();
    return 0;
}

int cmd_branch(const RunConfig& cfg, const std::string& out) {
    OutputGuard guard;
    const auto csv = guard.add(out + "/branch.csv");
    const auto jsp = guard.add(out + "/fold.json");

    RadialGrid grid = build_grid(cfg.M, cfg.grading, cfg.n, cfg.radius);
    Branch b = trace_branch(grid, make_family(cfg), settings_from(cfg));
    annotate_branch(b);
    write_branch_csv(b, csv);

    ordered_json j;
    j["n"] = cfg.n;
    j["family"] = family_json(b.f);
    j["points"] = static_cast<int>(b.points.size());
    j["termination"] = b.termination;
    j["fold_found"] = b.fold.has_value();
    if (b.fold) {
        j["lambda_star"] = json_real(b.fold->lambda_star);
        j["sup_at_fold"] = json_real(b.fold->sup_at_fold);
        j["fold_index"] = b.fold->index;
    }
    j["csv"] = "branch.csv";
    write_json(j, jsp);
    guard.release();
    return 0;
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out) {
    OutputGuard guard;
    const auto csv = guard.add(out + "/phi1.csv");
    const auto jsp = guard.add(out + "/certificate.json");

    Solution s = solve_minimal(cfg, make_family(cfg), *cfg.lambda);
    EigenOptions opts;
    opts.tol_eig = cfg.tol_eig;
    opts.angular_k = cfg.angular_k;
    StabilityCertificate cert = principal_eigenvalue(s.u, s.problem.f, s.problem.lambda, opts);
    write_gridfunction_csv(cert.phi1, csv);

    ordered_json j;
    j["n"] = cfg.n;
    j["family"] = family_json(s.problem.f);
    j["lambda"] = json_real(s.problem.lambda);
    j["angular_k"] = cfg.angular_k;
    j["mu1"] = json_real(cert.mu1);
    j["stable"] = cert.stable;
    j["marginal"] = cert.marginal;
    j["csv"] = "phi1.csv";
    write_json(j, jsp);
    guard.release();
    return 0;
}

double power_weight_exponent(const RunConfig& cfg) {
    const double amax = 2.0 * (1.0 + std::sqrt(static_cast<double>(cfg.n - 1)));
    if (cfg.a != 0.0) {
        if (!(cfg.a > 8.0 && cfg.a < amax))
            throw ConfigError("power-weight exponent a must lie in (8, " + format_real(amax) +
                              ") for n = " + std::to_string(cfg.n));
        return cfg.a;
    }
    return 0.5 * (8.0 + amax);
}

// largest B with lambda f(t) >= A t - B on [0, T], with a small cushion
double affine_minorant_offset(const Nonlinearity& f, double lambda, double A, double T) {
    auto gap = [&](double t) { return A * t - lambda * f.f(t); };
    double B = std::max(gap(0.0), gap(T));
    double tstar = -1.0;
    if (f.family() == Nonlinearity::Family::Exponential) {
        if (A > 0.0 && lambda > 0.0) tstar = std::log(A / lambda);
    } else if (f.family() == Nonlinearity::Family::Power) {
        const double q = f.q();
        if (A > 0.0 && lambda > 0.0)
            tstar = std::pow(A / (lambda * q), 1.0 / (q - 1.0)) - 1.0;
    }
    if (tstar > 0.0 && tstar < T) B = std::max(B, gap(tstar));
    B = std::max(B, 0.0);
    return B + 1e-9 * (1.0 + B);
}

int cmd_verify(const RunConfig& cfg, const std::string& out) {
    OutputGuard guard;
    const auto csv = guard.add(out + "/reports.csv");
    const auto jsp = guard.add(out + "/reports.json");

    if (cfg.n == 10 && std::abs(cfg.radius - 1.0) > 1e-12)
        throw ConfigError("the n = 10 log-weight verification needs radius = 1");
    const WeightTag tag = cfg.n <= 9    ? WeightTag::critical()
                          : cfg.n == 10 ? WeightTag::log10(cfg.delta)
                                        : WeightTag::power(power_weight_exponent(cfg));
    if (cfg.n == 10 && !(cfg.delta <= -8.0 * std::log(1.5 * cfg.rho)))
        throw ConfigError("delta too large for rho: need delta <= -8 log(3 rho / 2)");

    RadialGrid grid = build_grid(cfg.M, cfg.grading, cfg.n, cfg.radius);
    Nonlinearity f = make_family(cfg);
    Branch b = trace_branch(grid, f, settings_from(cfg));
    if (!b.fold) throw std::runtime_error("no fold located (termination: " + b.termination + ")");
    Solution s = extremal_profile(b, 1.0 - cfg.lambda_frac);
    const GridFunction& u = s.u;
    const double R = cfg.radius;

    std::vector<ReportRow> rows;
    auto push = [&](EstimateReport r) {
        rows.push_back(ReportRow{std::move(r), cfg.n, f.name(), cfg.lambda_frac});
    };

    push(weighted_test_inequality(u, cfg.rho, tag));

    GridFunction eta =
        GridFunction::from_callable(grid, [R](double r) { return 1.0 - r / R; });
    push(curvature_test_inequality(u, eta));

    const double gl2 = lebesgue_norm(u, 2.0, 0.5 * R, true);
    const double l1 = lebesgue_norm(u, 1.0, R);
    push(make_report("gradient_l1_ratio", gl2, cfg.ratio_cap * l1,
                     {{"cap", cfg.ratio_cap}, {"l1_norm", l1},
                      {"measured_ratio", l1 > 0.0 ? gl2 / l1 : 0.0}}));

    push(make_report("pohozaev_identity", pohozaev_residual(s), cfg.pohozaev_tol));

    const BallEigenpair pair = ball_lambda1(cfg.n, grid);
    const double A = 2.0 * pair.lambda1;
    const double T = std::max(1.0, u.sup_norm());
    push(l1_bound_check(s, A, affine_minorant_offset(f, s.problem.lambda, A, T)));

    MorreyParams mp;
    mp.p = 2.0;
    mp.beta = static_cast<double>(cfg.n);
    const double mn = morrey_norm(u, mp, cfg.center_samples);
    const double l2 = lebesgue_norm(u, 2.0, R);
    push(make_report("morrey_lebesgue_consistency", std::abs(mn - l2), 1e-10 * l2,
                     {{"morrey", mn}, {"lebesgue", l2}}));

    double worst = 0.0;
    bool all_ok = true;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        DecayInput d = make_decay_instance(2.0, 1.0, 40, cfg.seed + static_cast<unsigned>(i));
        DecayResult r = decay_check(d);
        all_ok = all_ok && r.hyp_ok && r.conclusion_ok;
        double bound = r.Cc * d.M_bound;
        for (size_t j = 0; j < d.b.size(); ++j, bound *= r.theta)
            worst = std::max(worst, d.b[j] / bound);
    }
    push(make_report("geometric_decay", worst, 1.0,
                     {{"instances", static_cast<double>(instances)},
                      {"all_ok", all_ok ? 1.0 : 0.0}}));

    write_reports_csv(rows, csv);
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json j;
        j["name"] = row.report.name;
        j["n"] = row.n;
        j["family"] = row.family;
        j["lambda_frac"] = json_real(row.lambda_frac);
        j["lhs"] = json_real(row.report.lhs);
        j["rhs"] = json_real(row.report.rhs);
        j["ratio"] = json_real(row.report.ratio);
        j["holds"] = row.report.holds;
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : row.report.params) params[k] = json_real(v);
        j["params"] = params;
        arr.push_back(j);
    }
    write_json(arr, jsp);
    guard.release();
    return 0;
}

AtlasRow atlas_cell(const RunConfig& cfg, int n, const std::string& fam) {
    RadialGrid grid = build_grid(cfg.M, cfg.grading, n, cfg.radius);
    RunConfig local = cfg;
    local.n = n;
    Nonlinearity f = make_family(cfg, fam);
    Branch b = trace_branch(grid, f, settings_from(cfg));
    if (!b.fold)
        throw std::runtime_error("atlas: no fold for n = " + std::to_string(n) + ", family " +
                                 fam + " (termination: " + b.termination + ")");

    Solution s90 = extremal_profile(b, 1.0 - cfg.lambda_frac);
    EigenOptions opts;
    opts.tol_eig = cfg.tol_eig;
    StabilityCertificate cert = principal_eigenvalue(s90.u, f, s90.problem.lambda, opts);

    Solution s99 = extremal_profile(b, 0.01);
    const double pw = 2.0 + cfg.gamma;
    const double vals = lebesgue_norm(s99.u, pw, cfg.radius, false);
    const double grads = lebesgue_norm(s99.u, pw, cfg.radius, true);
    const double w = std::pow(std::pow(vals, pw) + std::pow(grads, pw), 1.0 / pw);

    return AtlasRow{n, fam, b.fold->lambda_star, b.fold->sup_at_fold, cert.mu1, w};
}

int cmd_atlas(const RunConfig& cfg, const std::string& out, int workers) {
    OutputGuard guard;
    const auto csv = guard.add(out + "/atlas.csv");

    struct Cell {
        std::string fam;
        int n;
    };
    std::vector<Cell> cells;
    for (const auto& fam : cfg.families)
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) cells.push_back({fam, n});

    std::vector<AtlasRow> rows(cells.size());
    std::atomic<size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    int nthreads = workers > 0 ? workers : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(cells.size())));

    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            try {
                rows[i] = atlas_cell(cfg, cells[i].n, cells[i].fam);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(cells.size());
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    write_atlas_csv(rows, csv);
    guard.release();
    return 0;
}

int cmd_oracle(const RunConfig& cfg, const std::string& out) {
    OutputGuard guard;
    const auto jsp = guard.add(out + "/oracle.json");

    ordered_json arr = ordered_json::array();
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        const CriticalExponents ce = critical_exponents(n);
        ordered_json row;
        row["n"] = n;
        if (ce.q_n) row["q_n"] = json_real(*ce.q_n);
        row["p_n"] = json_real(ce.p_n);
        if (ce.alpha_n) row["alpha_n"] = json_real(*ce.alpha_n);
        if (ce.lambda_star_power) row["lambda_star_power"] = json_real(*ce.lambda_star_power);
        row["hardy_margin"] = json_real(hardy_margin(n));
        arr.push_back(row);
    }
    write_json(arr, jsp);
    guard.release();
    return 0;
}

} // namespace

int dispatch(const std::string& subcommand, const RunConfig& cfg, const std::string& out_dir,
             int workers) {
    try {
        validate_config(cfg, subcommand);
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw ConfigError("cannot create output directory: " + out_dir);

        if (subcommand == "solve") return cmd_solve(cfg, out_dir);
        if (subcommand == "branch") return cmd_branch(cfg, out_dir);
        if (subcommand == "spectrum") return cmd_spectrum(cfg, out_dir);
        if (subcommand == "verify") return cmd_verify(cfg, out_dir);
        if (subcommand == "atlas") return cmd_atlas(cfg, out_dir, workers);
        if (subcommand == "oracle") return cmd_oracle(cfg, out_dir);
        throw ConfigError("unknown subcommand: " + subcommand);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace gelfand
