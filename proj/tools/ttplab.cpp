// Batch driver: loads a JSON run configuration and executes it.
//
// Usage:
//   ttplab --config run.json [--seed N] [--threads N] [--out DIR] [--emit-plot-data]
//
// The command (simulate | ensemble | stochastic | residuals | p0-solve |
// check) lives inside the config document.

#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "ttplab/errors.hpp"
#include "ttplab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Lagrangian thermal-tracer laboratory"};

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    bool emit_plot_data = false;

    app.add_option("--config", config_path, "Run configuration (JSON)")->required();
    auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--threads", threads, "Worker threads (default: TTPLAB_THREADS or 1)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--emit-plot-data", emit_plot_data, "Write extra columnar plot files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (threads <= 0) {
        if (const char* env = std::getenv("TTPLAB_THREADS")) threads = std::atoi(env);
        if (threads <= 0) threads = 1;
    }

    try {
        ttplab::RunConfig cfg = ttplab::load_run_config(config_path);
        cfg.out_dir = out_dir;
        cfg.threads = threads;
        cfg.emit_plot_data = emit_plot_data;
        if (seed_opt->count() > 0) {
            cfg.seed = seed;
            cfg.seed_overridden = true;
        }
        return ttplab::run(cfg);
    } catch (const ttplab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
