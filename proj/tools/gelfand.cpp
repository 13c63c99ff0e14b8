#include "gelfand/config.hpp"
#include "gelfand/dispatch.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"radial semilinear elliptic laboratory: -Laplace(u) = lambda f(u) on a ball"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;

    const char* names[] = {"solve", "branch", "spectrum", "verify", "atlas", "oracle"};
    const char* blurbs[] = {
        "minimal solution at a fixed lambda",
        "arclength continuation of the minimal branch through the fold",
        "principal eigenpair of the linearization at a fixed lambda",
        "stability-estimate report suite near the fold",
        "fold summary over a dimension range and family list",
        "closed-form exponent and margin table",
    };
    for (int i = 0; i < 6; ++i) {
        auto* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("--config", config_path, "flat TOML config file")->required();
        sub->add_option("--out", out_dir, "output directory (default .)");
        sub->add_option("--workers", workers, "worker threads, 0 = hardware");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // help exits clean, bad usage is a config error
    }

    try {
        const gelfand::RunConfig cfg = gelfand::load_config(config_path);
        return gelfand::dispatch(app.get_subcommands().front()->get_name(), cfg, out_dir,
                                 workers);
    } catch (const gelfand::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
