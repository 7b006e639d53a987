#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ultimum/levy_model.hpp"
#include "ultimum/rng.hpp"

namespace ultimum {

/// Simulation grid and truncation settings.
///
/// Paths stop at the first epoch where the drawdown sup X - X exceeds
/// cutoff_level() = ln(1/eps_tail)/Phi(0) + y_margin; from there the supremum
/// moves again with probability at most eps_tail. Paths that instead reach
/// horizon_cap are flagged as not cleanly truncated.
///
/// With min_dt > 0 the Gaussian families use a state-dependent step
/// clamp((d / (refine_band * sigma))^2, min_dt, dt), where d is the distance of
/// the drawdown to 0 or to the next watched level. Increments stay exact in
/// law; only the monitoring grid is densified where the supremum or a
/// threshold could be crossed between grid points.
struct PathConfig {
    double dt = 1e-3;
    double horizon_cap = 2000.0;
    double eps_tail = 1e-9;
    double y_margin = 0.0;
    bool store_full_path = true;
    double min_dt = 0.0;
    double refine_band = 5.0;

    /// Throws DomainError on invalid settings.
    void validate() const;
    double cutoff_level(const ProcessFamily& family) const;
};

enum class EventKind : std::uint8_t { start, grid, jump_pre, jump_post, horizon };

/// One recorded epoch. Consecutive events are joined linearly; a jump is a
/// jump_pre/jump_post pair at the same time.
struct PathEvent {
    double t;
    double x;
    EventKind kind;
    std::uint64_t grid_index;  ///< index of uniform grid points, 0 otherwise
};

enum class Termination { drawdown_cutoff, horizon_cap, observer };

struct PathSummary {
    double end_time = 0.0;
    double final_sup = 0.0;
    double theta_hat = 0.0;
    Termination termination = Termination::drawdown_cutoff;
};

/// Drawdown levels of Y^{start_level} = (start_level v sup X) - X near which
/// the adaptive grid refines until they are first passed. `levels` must be ascending.
struct StepControl {
    double start_level = 0.0;
    std::span<const double> levels{};
};

struct SimulatedPath {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> running_sup;
    std::vector<double> jump_times;
    std::vector<double> jump_sizes;  ///< positive magnitudes of the downward jumps
    double theta_hat = 0.0;
    double end_time = 0.0;
    double final_sup = 0.0;
    bool truncated_cleanly = false;
};

/// Simulates one path from substream `path_index` of `seed`.
SimulatedPath simulate_path(const ProcessFamily& family, const PathConfig& cfg, std::uint64_t seed,
                            std::uint64_t path_index = 0);

/// First recorded epoch where the running supremum equals its final value.
/// Throws DomainError for paths without stored samples and, unless
/// `allow_unclean`, for paths that hit the horizon cap.
double extract_theta(const SimulatedPath& path, bool allow_unclean = false);

/// First recorded epoch with running_sup - value >= y; nullopt if never reached.
std::optional<double> reflected_first_passage(const SimulatedPath& path, double y);

/// A piece of the reflected process Y on which it is linear in time.
struct ReflectedPiece {
    double duration;
    double y_start;
    double y_end;
};

/// Splits the linear stretch (t0, x0) -> (t1, x1) into at most two linear pieces
/// of Y = level v max(X) - X, where `level` >= x0 is the reflection level at t0.
/// Returns the number of pieces written.
int reflected_pieces(double t0, double x0, double t1, double x1, double level, ReflectedPiece out[2]);

}  // namespace ultimum

#include "ultimum/detail/path_engine.hpp"
