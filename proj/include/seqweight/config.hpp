#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seqweight/montecarlo.hpp"

namespace seqweight {

/// Parsed scenario file plus notes about defaults that were filled in.
struct ConfigLoad {
    std::vector<ScenarioSpec> specs;
    std::vector<std::string> notes;
};

/// Scenario config format: one `[name]` section per scenario followed by
/// key=value lines (J, signal_fraction, mu, alpha, beta, eta, r, procedure,
/// l, u, reps, seed). Blank lines and `#` comments are ignored. Unknown or
/// duplicate keys, and values that fail scenario validation, raise
/// std::invalid_argument with the offending line number. Sections without a
/// seed get one derived from default_seed and the section ordinal.
ConfigLoad load_config(std::istream& in, std::uint64_t default_seed);
ConfigLoad load_config_file(const std::string& path, std::uint64_t default_seed);

/// Plot-ready series of the sweep: header J,scenario,ess,ess_se then one row
/// per result in input order.
void emit_plot_data(std::span<const ScenarioResult> results, std::ostream& out);

}  // namespace seqweight
