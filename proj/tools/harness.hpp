#ifndef FRACLAP_TOOLS_HARNESS_HPP
#define FRACLAP_TOOLS_HARNESS_HPP

#include <string>

#include "config.hpp"

namespace fraclap::tools {

struct RunOptions {
    std::string out_dir; // overrides config.output_dir when nonempty
    int jobs = 1;        // concurrent solves in the family subcommand
    bool plots = true;   // write SVG files next to the CSVs
};

// Each subcommand validates the config, writes its CSV/SVG/summary files
// under the output directory, and echoes the result record on stdout.
// Summary files open with a `record=config` line carrying every resolved
// field, so a run is reproducible from its summary alone. Failures
// propagate as ValidationError / NumericalError; main maps the two branches
// to exit codes 2 and 3.
void run_potential(const RunConfig& config, const RunOptions& options);
void run_bounds(const RunConfig& config, const RunOptions& options);
void run_solve(const RunConfig& config, const RunOptions& options);
void run_family(const RunConfig& config, const RunOptions& options);

// Invariant battery over the configured instance: profile sanity, the
// three-region partition of the potential, operator sign structure and
// constant annihilation, coefficient envelopes, and the degenerate solve
// that must hit the flat solution immediately. Writes verify.summary, then
// throws NumericalError if any check failed.
void run_verify(const RunConfig& config, const RunOptions& options);

} // namespace fraclap::tools

#endif
