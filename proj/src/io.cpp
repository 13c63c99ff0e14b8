#include "gelfand/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gelfand {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace

void write_gridfunction_csv(const GridFunction& u, const std::string& path) {
    auto out = open_out(path);
    out << "r,value\n";
    const auto& g = u.grid();
    for (int i = 0; i < g.node_count(); ++i)
        out << format_real(g.r(i)) << "," << format_real(u.values()[i]) << "\n";
    finish(out, path);
}

void write_branch_csv(const Branch& b, const std::string& path) {
    auto out = open_out(path);
    out << "s,lambda,sup_norm,mu1\n";
    for (const auto& pt : b.points)
        out << format_real(pt.arclength) << "," << format_real(pt.lambda) << ","
            << format_real(pt.sup_norm) << "," << format_real(pt.mu1) << "\n";
    finish(out, path);
}

void write_reports_csv(const std::vector<ReportRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "name,n,family,lambda_frac,lhs,rhs,ratio,holds\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << r.name << "," << row.n << "," << row.family << ","
            << format_real(row.lambda_frac) << "," << format_real(r.lhs) << ","
            << format_real(r.rhs) << "," << format_real(r.ratio) << ","
            << (r.holds ? "true" : "false") << "\n";
    }
    finish(out, path);
}

void write_atlas_csv(const std::vector<AtlasRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "n,family,lambda_star,sup_at_fold,mu1_at_90pct,w12_gamma_extremal\n";
    for (const auto& row : rows)
        out << row.n << "," << row.family << "," << format_real(row.lambda_star) << ","
            << format_real(row.sup_at_fold) << "," << format_real(row.mu1_at_90pct) << ","
            << format_real(row.w12_gamma_extremal) << "\n";
    finish(out, path);
}

} // namespace gelfand
