#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "risec/experiments.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    int preset = 0;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Path to a key-value config file")->required();
    cmd->add_option("--preset", opts.preset, "Apply a canned experiment setup (2-5)")
        ->check(CLI::Range(2, 5));
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&opts](std::uint64_t s) { opts.seed = s; }, "Override the master seed");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-rate optimization experiments for RIS-aided downlinks"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string out_path = "results.csv";
    int jobs = 1;
    CLI::App* run = app.add_subcommand("run", "Run a sweep and write CSV results");
    add_common(run, run_opts);
    run->add_option("--out", out_path, "Output CSV path");
    run->add_option("--jobs", jobs, "Concurrent realizations")->check(CLI::PositiveNumber);

    CommonOpts validate_opts;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Check a config file and echo the effective settings");
    add_common(validate_cmd, validate_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const risec::ExperimentConfig cfg =
                risec::load_config(run_opts.config_path, run_opts.preset, run_opts.seed);
            const auto rows =
                risec::run_sweep(cfg.sweep, cfg.scenario, cfg.algorithm, cfg.record_timing, jobs);
            risec::emit_csv(rows, out_path);
            risec::write_metadata(cfg, out_path, rows.size(), out_path + ".meta.json");
            std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
        } else {
            const risec::ExperimentConfig cfg = risec::load_config(
                validate_opts.config_path, validate_opts.preset, validate_opts.seed);
            std::cout << risec::serialize_config(cfg);
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg)
            if (c == '\n')
                c = ' ';
        std::cerr << "error: " << msg << "\n";
        return 1;
    }
    return 0;
}
