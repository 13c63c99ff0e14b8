#pragma once

#include "gelfand/continuation.hpp"
#include "gelfand/stability.hpp"

#include <string>
#include <vector>

namespace gelfand {

// 17 significant digits; infinities become the literal strings
// "inf"/"-inf" so text output never carries IEEE spellings.
std::string format_real(double x);

void write_gridfunction_csv(const GridFunction& u, const std::string& path);

// columns s,lambda,sup_norm,mu1 (mu1 is nan unless annotated)
void write_branch_csv(const Branch& b, const std::string& path);

struct ReportRow {
    EstimateReport report;
    int n = 0;
    std::string family;
    double lambda_frac = 0.0;
};

// columns name,n,family,lambda_frac,lhs,rhs,ratio,holds
void write_reports_csv(const std::vector<ReportRow>& rows, const std::string& path);

struct AtlasRow {
    int n = 0;
    std::string family;
    double lambda_star = 0.0;
    double sup_at_fold = 0.0;
    double mu1_at_90pct = 0.0;
    double w12_gamma_extremal = 0.0;
};

// columns n,family,lambda_star,sup_at_fold,mu1_at_90pct,w12_gamma_extremal
void write_atlas_csv(const std::vector<AtlasRow>& rows, const std::string& path);

} // namespace gelfand
