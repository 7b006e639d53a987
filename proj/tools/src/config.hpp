#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ultimum/levy_model.hpp"
#include "ultimum/path.hpp"
#include "ultimum/stopping.hpp"

namespace ultimum::cli {

/// Malformed or schema-violating configuration document.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CurveSettings {
    int points = 500;
    double y_max = 0.0;  ///< <= 0 selects 1.5 y*
};

struct SimulationSettings {
    std::size_t paths = 100000;
    double dt = 1e-3;
    double eps_tail = 1e-9;
    double horizon_cap = 2000.0;
    unsigned threads = 0;
    double max_unclean_fraction = 0.01;
};

struct VerifySettings {
    std::vector<double> sweep;  ///< empty: y* plus +-0.25, +-0.5, clipped below at the median
    bool supremum_check = true;
    std::size_t supremum_paths = 10000;
    double refined_min_dt = 1e-6;  ///< adaptive grid floor for the supremum-law check
    bool occupation = false;
};

struct OccupationSettings {
    double y = 0.5;
    double a = 2.0;
    std::size_t bins = 20;
    double min_dt = 1e-6;  ///< adaptive grid floor; 0 = uniform grid (Gaussian families only)
};

struct RunConfig {
    FamilyParams family;
    std::uint64_t seed = 42;
    CurveSettings curve;
    SimulationSettings simulation;
    VerifySettings verify;
    OccupationSettings occupation;
    SolverTolerances tolerances;

    PathConfig path_config() const;
};

/// Parses and validates a configuration document. Unknown keys, wrong types and
/// invalid family parameters are rejected with a message naming the key.
/// A degenerate family (psi'(0+) >= 0) raises DegenerateModelError.
RunConfig parse_config(const std::string& text);

/// Full configuration, defaults included, as it is echoed into reports.
nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const FamilyParams& family);
nlohmann::json to_json(const SolverTolerances& tol);

}  // namespace ultimum::cli
