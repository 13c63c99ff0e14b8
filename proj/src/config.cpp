#include "gelfand/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace gelfand {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

struct RawValue {
    enum class Kind { String, Number, Boolean } kind;
    std::string str;
    double num = 0.0;
    bool flag = false;
};

RawValue parse_value(int line, const std::string& raw) {
    RawValue v{};
    if (raw.empty()) fail(line, "missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(line, "unterminated string");
        const std::string body = raw.substr(1, raw.size() - 2);
        if (body.find('"') != std::string::npos || body.find('\\') != std::string::npos)
            fail(line, "escapes and embedded quotes are not supported");
        v.kind = RawValue::Kind::String;
        v.str = body;
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = RawValue::Kind::Boolean;
        v.flag = raw == "true";
        return v;
    }
    char* end = nullptr;
    const double d = std::strtod(raw.c_str(), &end);
    if (end != raw.c_str() + raw.size()) fail(line, "cannot parse value '" + raw + "'");
    if (!std::isfinite(d)) fail(line, "value must be finite");
    v.kind = RawValue::Kind::Number;
    v.num = d;
    return v;
}

double want_number(int line, const std::string& key, const RawValue& v) {
    if (v.kind != RawValue::Kind::Number) fail(line, "key '" + key + "' expects a number");
    return v.num;
}

long long want_integer(int line, const std::string& key, const RawValue& v) {
    const double d = want_number(line, key, v);
    if (d != std::floor(d) || std::abs(d) > 9e15)
        fail(line, "key '" + key + "' expects an integer");
    return static_cast<long long>(d);
}

std::string want_string(int line, const std::string& key, const RawValue& v) {
    if (v.kind != RawValue::Kind::String) fail(line, "key '" + key + "' expects a string");
    return v.str;
}

std::string canonical_family(const std::string& name, int line) {
    if (name == "exp" || name == "exponential") return "exponential";
    if (name == "power" || name == "affine" || name == "constant") return name;
    if (line > 0) fail(line, "unknown family '" + name + "'");
    throw ConfigError("unknown family '" + name + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw_line;
    int line = 0;
    while (std::getline(in, raw_line)) {
        ++line;
        // strip comments outside quotes
        bool quoted = false;
        std::string stripped;
        for (char ch : raw_line) {
            if (ch == '"') quoted = !quoted;
            if (ch == '#' && !quoted) break;
            stripped.push_back(ch);
        }
        const std::string entry = trim(stripped);
        if (entry.empty()) continue;
        if (entry.front() == '[') fail(line, "sections are not supported");

        const size_t eq = entry.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(entry.substr(0, eq));
        if (key.empty()) fail(line, "empty key");
        for (char ch : key)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
                fail(line, "bad key '" + key + "'");
        if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
        const RawValue v = parse_value(line, trim(entry.substr(eq + 1)));

        if (key == "n") cfg.n = static_cast<int>(want_integer(line, key, v));
        else if (key == "family") cfg.family = canonical_family(want_string(line, key, v), line);
        else if (key == "families") {
            std::stringstream list(want_string(line, key, v));
            std::string item;
            cfg.families.clear();
            while (std::getline(list, item, ',')) {
                item = trim(item);
                if (item.empty()) fail(line, "empty entry in families");
                cfg.families.push_back(canonical_family(item, line));
            }
            if (cfg.families.empty()) fail(line, "families must not be empty");
        }
        else if (key == "q") cfg.q = want_number(line, key, v);
        else if (key == "A") cfg.A = want_number(line, key, v);
        else if (key == "B") cfg.B = want_number(line, key, v);
        else if (key == "c") cfg.c = want_number(line, key, v);
        else if (key == "M") cfg.M = static_cast<int>(want_integer(line, key, v));
        else if (key == "grading") {
            const std::string g = want_string(line, key, v);
            if (g == "uniform") cfg.grading.kind = Grading::Uniform;
            else if (g == "power") cfg.grading.kind = Grading::Power;
            else fail(line, "grading must be 'uniform' or 'power'");
        }
        else if (key == "grading_exponent") cfg.grading.exponent = want_number(line, key, v);
        else if (key == "radius") cfg.radius = want_number(line, key, v);
        else if (key == "lambda") cfg.lambda = want_number(line, key, v);
        else if (key == "tol") cfg.tol = want_number(line, key, v);
        else if (key == "tol_eig") cfg.tol_eig = want_number(line, key, v);
        else if (key == "angular_k") cfg.angular_k = static_cast<int>(want_integer(line, key, v));
        else if (key == "ds") cfg.ds = want_number(line, key, v);
        else if (key == "max_points") cfg.max_points = static_cast<int>(want_integer(line, key, v));
        else if (key == "sup_limit") cfg.sup_limit = want_number(line, key, v);
        else if (key == "fold_refine") cfg.fold_refine = static_cast<int>(want_integer(line, key, v));
        else if (key == "lambda_frac") cfg.lambda_frac = want_number(line, key, v);
        else if (key == "rho") cfg.rho = want_number(line, key, v);
        else if (key == "delta") cfg.delta = want_number(line, key, v);
        else if (key == "a") cfg.a = want_number(line, key, v);
        else if (key == "alpha") cfg.alpha = want_number(line, key, v);
        else if (key == "gamma") cfg.gamma = want_number(line, key, v);
        else if (key == "p") cfg.p = want_number(line, key, v);
        else if (key == "beta") cfg.beta = want_number(line, key, v);
        else if (key == "center_samples")
            cfg.center_samples = static_cast<int>(want_integer(line, key, v));
        else if (key == "pohozaev_tol") cfg.pohozaev_tol = want_number(line, key, v);
        else if (key == "ratio_cap") cfg.ratio_cap = want_number(line, key, v);
        else if (key == "n_min") cfg.n_min = static_cast<int>(want_integer(line, key, v));
        else if (key == "n_max") cfg.n_max = static_cast<int>(want_integer(line, key, v));
        else if (key == "seed") {
            const long long s = want_integer(line, key, v);
            if (s < 0) fail(line, "seed must be nonnegative");
            cfg.seed = static_cast<unsigned long long>(s);
        }
        else fail(line, "unknown key '" + key + "'");
    }
    if (cfg.families.empty()) cfg.families = {cfg.family};
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

void check_family_params(const RunConfig& cfg, const std::string& fam) {
    if (fam == "power" && !(cfg.q > 1.0))
        throw ConfigError("power family needs q > 1");
    if (fam == "affine" && (!(cfg.A > 0.0) || cfg.B < 0.0))
        throw ConfigError("affine family needs A > 0 and B >= 0");
    if (fam == "constant" && cfg.c < 0.0)
        throw ConfigError("constant family needs c >= 0");
}

} // namespace

void validate_config(const RunConfig& cfg, const std::string& subcommand) {
    if (cfg.n < 2) throw ConfigError("dimension n must be at least 2");
    if (cfg.M < 8) throw ConfigError("M must be at least 8");
    if (!(cfg.radius > 0.0)) throw ConfigError("radius must be positive");
    if (cfg.grading.kind == Grading::Power &&
        !(cfg.grading.exponent >= 1.0 && cfg.grading.exponent <= 4.0))
        throw ConfigError("grading_exponent must lie in [1, 4]");
    if (!(cfg.tol > 0.0) || !(cfg.tol_eig > 0.0))
        throw ConfigError("tolerances must be positive");
    if (cfg.angular_k < 0) throw ConfigError("angular_k must be nonnegative");
    check_family_params(cfg, cfg.family);
    if (cfg.lambda && *cfg.lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    if (!(cfg.ds > 0.0)) throw ConfigError("ds must be positive");
    if (cfg.max_points < 2) throw ConfigError("max_points must be at least 2");
    if (!(cfg.sup_limit > 0.0)) throw ConfigError("sup_limit must be positive");
    if (cfg.fold_refine < 1) throw ConfigError("fold_refine must be at least 1");
    if (!(cfg.lambda_frac > 0.0 && cfg.lambda_frac < 1.0))
        throw ConfigError("lambda_frac must lie in (0, 1)");
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
    if (!(cfg.gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (!(cfg.p >= 1.0)) throw ConfigError("p must be at least 1");
    if (cfg.beta != 0.0 && !(cfg.beta > 0.0 && cfg.beta <= cfg.n))
        throw ConfigError("beta must lie in (0, n]");
    if (cfg.center_samples < 8) throw ConfigError("center_samples must be at least 8");
    if (!(cfg.pohozaev_tol > 0.0)) throw ConfigError("pohozaev_tol must be positive");
    if (!(cfg.ratio_cap > 0.0)) throw ConfigError("ratio_cap must be positive");

    const bool needs_fold = subcommand == "verify" || subcommand == "atlas";
    if (subcommand == "solve" || subcommand == "spectrum") {
        if (!cfg.lambda) throw ConfigError(subcommand + " requires lambda");
    }
    if (subcommand == "verify") {
        if (!(cfg.rho > 0.0 && cfg.rho < 2.0 * cfg.radius / 3.0))
            throw ConfigError("rho must lie in (0, 2 radius / 3)");
        if (!(cfg.delta > 0.0)) throw ConfigError("delta must be positive");
        if (cfg.a != 0.0 && !(cfg.a > 8.0))
            throw ConfigError("power-weight exponent a must exceed 8 (0 = automatic)");
    }
    if (subcommand == "atlas" || subcommand == "oracle") {
        if (cfg.n_min > cfg.n_max) throw ConfigError("n_min must not exceed n_max");
        if (subcommand == "oracle" && cfg.n_min < 10)
            throw ConfigError("oracle needs n_min >= 10");
        if (subcommand == "atlas" && cfg.n_min < 2)
            throw ConfigError("atlas needs n_min >= 2");
    }
    if (needs_fold) {
        const auto& fams = subcommand == "atlas" ? cfg.families
                                                 : std::vector<std::string>{cfg.family};
        for (const auto& fam : fams) {
            check_family_params(cfg, fam);
            if (fam != "exponential" && fam != "power")
                throw ConfigError(subcommand + " needs a family with a fold "
                                  "(exponential or power)");
        }
    }
}

Nonlinearity make_family(const RunConfig& cfg, const std::string& name) {
    const std::string fam = canonical_family(name, 0);
    if (fam == "exponential") return Nonlinearity::exponential();
    if (fam == "power") return Nonlinearity::power(cfg.q);
    if (fam == "affine") return Nonlinearity::affine(cfg.A, cfg.B);
    return Nonlinearity::constant(cfg.c);
}

Nonlinearity make_family(const RunConfig& cfg) { return make_family(cfg, cfg.family); }

} // namespace gelfand
