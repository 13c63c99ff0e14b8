#pragma once

#include "gelfand/solver.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gelfand {

struct BranchPoint {
    double lambda = 0.0;
    GridFunction u;
    double arclength = 0.0;
    double sup_norm = 0.0;
    double mu1 = std::numeric_limits<double>::quiet_NaN(); // filled by stability
};

struct FoldInfo {
    double lambda_star = 0.0;
    double sup_at_fold = 0.0;
    int index = 0; // branch point nearest the fitted vertex
};

struct Branch {
    RadialGrid grid;
    Nonlinearity f = Nonlinearity::exponential();
    std::vector<BranchPoint> points;
    std::optional<FoldInfo> fold;
    std::string termination; // "max_points", "sup_limit", "corrector_failure"
};

struct ContinuationSettings {
    double ds = 0.05;          // base arclength step, scaled by 1 + sup(u)
    int max_points = 2000;
    double sup_limit = 1e3;
    double tol = 1e-10;
    int max_corrector = 12;
    double theta_u = 1.0; // weights of the arclength metric
    double theta_lambda = 1.0;
    int fold_refine = 64;      // local step reduction factor near the fold
    int post_fold_points = 12; // stop this many points after the fold, -1 = off;
                               // running the upper branch to lambda -> 0 risks
                               // snapping onto the negative-lambda branch
};

struct NoFold : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ContinuationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pseudo-arclength continuation of the minimal branch from (lambda, u) =
// (0, 0), secant predictor and Newton corrector on the bordered system.
// Near a turning point the tracer rolls back and shrinks the local step by
// fold_refine before fitting the fold. Throws ContinuationFailure only if
// no step ever succeeds; later corrector failures terminate the trace.
Branch trace_branch(const RadialGrid& grid, const Nonlinearity& f,
                    const ContinuationSettings& s = {});

// First sign change of the lambda increments, located by a quadratic fit
// of lambda against arclength. Throws NoFold when lambda is monotone.
FoldInfo detect_fold(const Branch& b);

// Minimal-branch profile at lambda_star * (1 - tol), warm started from the
// nearest pre-fold point.
Solution extremal_profile(const Branch& b, double tol);

} // namespace gelfand
