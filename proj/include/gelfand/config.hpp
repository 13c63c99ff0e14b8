#pragma once

#include "gelfand/grid.hpp"
#include "gelfand/nonlinearity.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gelfand {

// Raised for malformed config text or values a subcommand cannot accept;
// the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int n = 3;
    std::string family = "exponential"; // exponential | power | affine | constant
    std::vector<std::string> families;  // atlas cells; defaults to {family}
    double q = 2.0;                     // power exponent
    double A = 1.0, B = 0.0;            // affine slope and offset
    double c = 1.0;                     // constant value

    int M = 2048;
    GradingSpec grading = GradingSpec::power(2.0);
    double radius = 1.0;

    std::optional<double> lambda; // required by solve and spectrum
    double tol = 1e-10;
    double tol_eig = 1e-7;
    int angular_k = 0;

    double ds = 0.05;
    int max_points = 2000;
    double sup_limit = 1e3;
    int fold_refine = 64;

    double lambda_frac = 0.9; // verify/atlas work at lambda_frac * lambda_star
    double rho = 0.3;         // inner radius of the weighted inequalities
    double delta = 1.0;       // log-weight exponent (n = 10)
    double a = 0.0;           // power-weight exponent, 0 = midpoint of (8, a_max)
    double alpha = 0.1;       // Holder exponent
    double gamma = 0.1;       // Sobolev excess for the atlas column
    double p = 2.0;           // Morrey integrability
    double beta = 0.0;        // Morrey scaling, 0 = dimension n
    int center_samples = 33;

    double pohozaev_tol = 1e-3; // verify-row threshold on the flux defect
    double ratio_cap = 100.0;   // verify-row cap on grad-L2 / L1
    int n_min = 3, n_max = 9;   // atlas and oracle dimension range
    unsigned long long seed = 12345;
};

// Flat TOML subset: key = value lines, # comments, quoted strings, numbers,
// booleans. Sections, arrays, duplicate or unknown keys are rejected with
// the offending line number.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Subcommand-specific checks (lambda present, ranges, family lists...).
void validate_config(const RunConfig& cfg, const std::string& subcommand);

Nonlinearity make_family(const RunConfig& cfg, const std::string& name);
Nonlinearity make_family(const RunConfig& cfg);

} // namespace gelfand
