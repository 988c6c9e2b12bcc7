// dqt — sweep driver for steady-state energy currents.
//
//   dqt sweep --config <path> [--output <path>] [--methods dqme,dme,fme] [--threads N]
//
// Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dqt/sweep.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Steady-state energy currents in driven-dissipative quantum systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;
    std::string methods;
    std::size_t threads = 1;

    CLI::App* sweep = app.add_subcommand("sweep", "Evaluate currents over a parameter grid and write CSV");
    sweep->add_option("--config", config_path, "JSON sweep configuration")->required();
    sweep->add_option("--output", output_path, "CSV destination (overrides the config's output; '-' for stdout)");
    sweep->add_option("--methods", methods, "Comma-separated subset of dqme,dme,fme (overrides the config)");
    sweep->add_option("--threads", threads, "Worker threads for independent sweep points")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        dqt::cli::SweepConfig cfg = dqt::cli::load_config(config_path);
        if (!methods.empty()) {
            cfg.methods = dqt::cli::parse_methods(methods);
            dqt::cli::validate_methods(cfg);
        }
        if (!output_path.empty()) cfg.output = output_path;

        const auto rows = dqt::cli::run_sweep(cfg, threads);
        if (cfg.output.empty() || cfg.output == "-") {
            std::cout << dqt::cli::format_csv(rows);
        } else {
            dqt::cli::emit_csv(rows, cfg.output);
            std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), cfg.output.c_str());
        }
    } catch (const dqt::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
