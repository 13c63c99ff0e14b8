#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gelfand/dispatch.hpp>
#include <gelfand/io.hpp>
#include <gelfand/solver.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace gelfand;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gelfand_io_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("format_real keeps 17 significant digits and round trips") {
    for (double x : {1.0 / 3.0, 3.3219852190148684, -2.2250738585072014e-308,
                     1.7976931348623157e308, 0.1, -0.0}) {
        const std::string s = format_real(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x); // bit-exact round trip
    }
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_real(2.0) == "2");
}

TEST_CASE("grid function csv layout") {
    TempDir tmp;
    const RadialGrid g = build_grid(16, GradingSpec::uniform(), 3, 1.0);
    const GridFunction u = GridFunction::from_callable(g, [](double r) { return 1.0 - r; });
    const auto path = tmp.path / "u.csv";
    write_gridfunction_csv(u, path.string());
    const std::string text = slurp(path);
    CHECK(text.substr(0, 8) == "r,value\n");
    // one header plus one line per node
    CHECK(std::count(text.begin(), text.end(), '\n') == g.node_count() + 1);
    CHECK(text.find("0.9375,0.0625") != std::string::npos);
}

TEST_CASE("reports csv writes the full schema") {
    TempDir tmp;
    ReportRow row;
    row.report = make_report("sample_inequality", 1.0, 4.0);
    row.n = 5;
    row.family = "exponential";
    row.lambda_frac = 0.9;
    const auto path = tmp.path / "reports.csv";
    write_reports_csv({row}, path.string());
    const std::string text = slurp(path);
    CHECK(text.find("name,n,family,lambda_frac,lhs,rhs,ratio,holds") == 0);
    CHECK(text.find("sample_inequality,5,exponential,") != std::string::npos);
    CHECK(text.find(",true") != std::string::npos);
    CHECK(text.find("0.25") != std::string::npos); // ratio
}

TEST_CASE("dispatch writes solve outputs and reports success") {
    TempDir tmp;
    RunConfig cfg;
    cfg.n = 3;
    cfg.M = 64;
    cfg.lambda = 1.0;
    const int rc = dispatch("solve", cfg, (tmp.path / "out").string(), 1);
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "out" / "solution.csv"));
    CHECK(fs::exists(tmp.path / "out" / "solution.json"));
    const std::string js = slurp(tmp.path / "out" / "solution.json");
    CHECK(js.find("\"lambda\"") != std::string::npos);
    CHECK(js.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("dispatch distinguishes config errors from solver failures") {
    TempDir tmp;
    RunConfig cfg;
    cfg.n = 3;
    cfg.M = 64;
    // missing lambda: config error, exit 2
    CHECK(dispatch("solve", cfg, (tmp.path / "a").string(), 1) == 2);
    // lambda above the fold: solver failure, exit 1, partial outputs removed
    cfg.lambda = 50.0;
    CHECK(dispatch("solve", cfg, (tmp.path / "b").string(), 1) == 1);
    CHECK(!fs::exists(tmp.path / "b" / "solution.csv"));
    CHECK(!fs::exists(tmp.path / "b" / "solution.json"));
    // unknown subcommand: config error
    CHECK(dispatch("explode", cfg, (tmp.path / "c").string(), 1) == 2);
}

TEST_CASE("dispatch output is deterministic") {
    TempDir tmp;
    RunConfig cfg;
    cfg.n = 4;
    cfg.M = 128;
    cfg.lambda = 2.0;
    REQUIRE(dispatch("solve", cfg, (tmp.path / "r1").string(), 1) == 0);
    REQUIRE(dispatch("solve", cfg, (tmp.path / "r2").string(), 1) == 0);
    CHECK(slurp(tmp.path / "r1" / "solution.csv") == slurp(tmp.path / "r2" / "solution.csv"));
    CHECK(slurp(tmp.path / "r1" / "solution.json") ==
          slurp(tmp.path / "r2" / "solution.json"));
}

TEST_CASE("branch csv carries the annotated spectrum column") {
    TempDir tmp;
    RunConfig cfg;
    cfg.n = 3;
    cfg.M = 64;
    cfg.max_points = 200;
    const int rc = dispatch("branch", cfg, (tmp.path / "out").string(), 1);
    REQUIRE(rc == 0);
    const std::string text = slurp(tmp.path / "out" / "branch.csv");
    CHECK(text.find("s,lambda,sup_norm,mu1") == 0);
    CHECK(text.find("nan") == std::string::npos); // every point annotated
    const std::string fold = slurp(tmp.path / "out" / "fold.json");
    CHECK(fold.find("lambda_star") != std::string::npos);
}
