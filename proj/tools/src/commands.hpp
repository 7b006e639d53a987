#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace ultimum::cli {

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_invalid = 2, exit_io = 3, exit_quality = 4 };

/// Common header of every artifact: command, version, seed, config echo, tolerances.
/// The timestamp is added separately so everything else is reproducible.
nlohmann::json envelope(const std::string& command, const RunConfig& cfg);

nlohmann::json solve_report(const RunConfig& cfg);

/// "y,V" CSV over the configured grid.
std::string curve_csv(const RunConfig& cfg);

struct VerifyOutcome {
    nlohmann::json report;
    std::string sweep_csv;
    bool pass = false;
};
VerifyOutcome verify(const RunConfig& cfg);

struct OccupationOutcome {
    nlohmann::json report;
    std::string bins_csv;
    bool pass = false;
};
OccupationOutcome occupation(const RunConfig& cfg);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_number(double v);

}  // namespace ultimum::cli
