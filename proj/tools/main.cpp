// driftdiff CLI: run, validate, truncation-study, convergence, sweep.
// Exit codes: 0 pass, 1 config error, 2 solver failure, 3 invariant violation.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "driftdiff/driftdiff.hpp"

namespace {

int finish(const driftdiff::RunOutcome& outcome) {
    if (outcome.exit_code == 0) {
        std::cout << outcome.message << "\n";
    } else {
        std::cerr << "error: " << outcome.message << "\n";
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume drift-diffusion simulator with Robin boundary fluxes"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::vector<int> p_list, resolutions;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "path to the JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config's output_dir)");
    };

    CLI::App* run = app.add_subcommand("run", "run a simulation and write trajectory/final-state CSVs");
    add_common(run);
    CLI::App* validate = app.add_subcommand("validate", "parse and validate a configuration, build nothing");
    validate->add_option("--config", config_path, "path to the JSON run configuration")->required();
    CLI::App* trunc = app.add_subcommand("truncation-study", "compare the base flux against truncated sigma_p");
    add_common(trunc);
    trunc->add_option("--p-list", p_list, "truncation indices, e.g. --p-list 2 4 8 16");
    CLI::App* conv = app.add_subcommand("convergence", "fit the spatial order against an analytic oracle");
    add_common(conv);
    conv->add_option("--resolutions", resolutions, "grid resolutions, e.g. --resolutions 16 32 64");
    CLI::App* sweep = app.add_subcommand("sweep", "run the config's sweep.parameters grid");
    add_common(sweep);
    sweep->add_option("--jobs", jobs, "worker pool size (default: available parallelism)");

    CLI11_PARSE(app, argc, argv);

    driftdiff::RunConfig cfg;
    try {
        cfg = driftdiff::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    }

    try {
        if (run->parsed()) {
            return finish(driftdiff::cmd_run(cfg, driftdiff::resolve_output_dir(out_dir, cfg)));
        }
        if (validate->parsed()) {
            return finish(driftdiff::cmd_validate(cfg));
        }
        if (trunc->parsed()) {
            return finish(driftdiff::cmd_truncation_study(cfg, p_list, driftdiff::resolve_output_dir(out_dir, cfg)));
        }
        if (conv->parsed()) {
            return finish(driftdiff::cmd_convergence(cfg, resolutions, driftdiff::resolve_output_dir(out_dir, cfg)));
        }
        if (sweep->parsed()) {
            return finish(driftdiff::cmd_sweep(cfg, driftdiff::resolve_output_dir(out_dir, cfg), jobs));
        }
    } catch (const driftdiff::SolverError& e) {
        std::cerr << "error: solver: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
