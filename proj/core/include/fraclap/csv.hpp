#ifndef FRACLAP_CSV_HPP
#define FRACLAP_CSV_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fraclap/envelopes.hpp"
#include "fraclap/perron.hpp"

namespace fraclap {

// Shortest round-trip decimal form of x (printf %.17g trimmed), identical
// across runs and platforms with IEEE doubles. Every CSV and summary writer
// funnels through this so that regression tests can diff bytes.
std::string format_double(double x);

// One-line record `key=value key=value ...`, the machine-readable summary
// format shared by all subcommands.
std::string format_summary(const std::vector<std::pair<std::string, std::string>>& kv);

// Columns r,w,upper_shape,lower_shape; one row per sampled radius, then a
// trailing `# key=value ...` comment line with the fitted constants so the
// file is self-describing without breaking CSV parsers.
void write_envelope_csv(std::ostream& os, const EnvelopeVerification& v);

// Columns r,u,U_sub,U_super,residual over all nodes. The boundary node
// carries the pinned far-field value and has no equation; its residual
// cell is written as 0.
void write_solution_csv(std::ostream& os, const RadialFunction& u,
                        const RadialFunction& sub, const RadialFunction& super,
                        const std::vector<double>& interior_residuals);

// Reads a two-column CSV `r,omega` (header optional) into knot vectors for
// a table profile. Throws ValidationError on malformed rows.
void read_radius_value_csv(std::istream& is, std::vector<double>& radii,
                           std::vector<double>& values);

} // namespace fraclap

#endif
