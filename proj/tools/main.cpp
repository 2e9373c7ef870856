#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "fraclap/errors.hpp"
#include "harness.hpp"

namespace {

struct CliState {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
    bool no_plots = false;
    std::uint64_t seed = 0;
    std::vector<CLI::Option*> seed_options;
};

void add_common_options(CLI::App* cmd, CliState& state) {
    cmd->add_option("--config", state.config_path, "run configuration (JSON or TOML)")
        ->required();
    cmd->add_option("--out", state.out_dir, "output directory (overrides the config)");
    cmd->add_option("--jobs", state.jobs, "concurrent solves (family subcommand)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-plots", state.no_plots, "skip SVG plot files");
    state.seed_options.push_back(
        cmd->add_option("--seed", state.seed, "override the config seed"));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"radial nonlocal diffusion experiment harness"};
    app.require_subcommand(1);

    CliState state;
    CLI::App* potential =
        app.add_subcommand("potential", "potential of the configured source");
    CLI::App* bounds =
        app.add_subcommand("bounds", "check the decay envelopes of the potential");
    CLI::App* solve =
        app.add_subcommand("solve", "one monotone solve between its bracket");
    CLI::App* family =
        app.add_subcommand("family", "one solve per level under a shared theta");
    CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
    for (CLI::App* cmd : {potential, bounds, solve, family, verify})
        add_common_options(cmd, state);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage problems fall under the validation exit code; --help exits 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        fraclap::tools::RunConfig config = fraclap::tools::load_config(state.config_path);
        for (const CLI::Option* opt : state.seed_options)
            if (opt->count() > 0)
                config.seed = state.seed;

        fraclap::tools::RunOptions options;
        options.out_dir = state.out_dir;
        options.jobs = state.jobs;
        options.plots = !state.no_plots;

        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "potential")
            fraclap::tools::run_potential(config, options);
        else if (name == "bounds")
            fraclap::tools::run_bounds(config, options);
        else if (name == "solve")
            fraclap::tools::run_solve(config, options);
        else if (name == "family")
            fraclap::tools::run_family(config, options);
        else
            fraclap::tools::run_verify(config, options);
        return 0;
    } catch (const fraclap::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fraclap::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fraclap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
