#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ultimum/path.hpp"
#include "ultimum/scale.hpp"
#include "ultimum/stats.hpp"

namespace ultimum {

struct McOptions {
    unsigned threads = 0;                ///< 0 = std::thread::hardware_concurrency()
    double max_unclean_fraction = 0.01;  ///< above this, SimulationQualityError
};

/// Monte Carlo estimate of E|theta - tau_y| for the threshold rule
/// tau_y = inf{t : sup X - X >= y}.
struct ThresholdEstimate {
    double threshold = 0.0;
    McEstimate direct;          ///< mean of |theta_hat - tau_hat|
    McEstimate representation;  ///< mean of int_0^tau (2F(Y) - 1) dt + theta_hat
    McEstimate coarse_direct;   ///< direct estimator on the 2*dt sub-skeleton (calibration only)
    double bias_allowance = 0.0;  ///< |direct - coarse_direct| / (sqrt 2 - 1); 0 when simulation is exact
};

struct ObjectiveSweep {
    std::vector<ThresholdEstimate> thresholds;
    McEstimate theta;
    McEstimate coarse_theta;
    double theta_bias_allowance = 0.0;
    bool calibrated = false;  ///< whether the 2*dt sub-skeleton was evaluated
    std::size_t paths_used = 0;
    std::size_t discarded = 0;
    std::uint64_t seed = 0;

    /// Per-path difference of the direct estimators for thresholds i and j.
    McEstimate paired_difference(std::size_t i, std::size_t j) const;
    /// Per-path difference representation - direct for threshold i.
    McEstimate representation_gap(std::size_t i) const;

    std::vector<double> direct_values;          ///< row-major, paths_used x thresholds.size()
    std::vector<double> representation_values;  ///< same layout
};

/// Evaluates every threshold on the same simulated paths. y_margin is raised
/// to the largest threshold. Requires n >= 100.
ObjectiveSweep estimate_objective_sweep(const ProcessFamily& family, std::span<const double> thresholds,
                                        std::size_t n, const PathConfig& cfg, std::uint64_t seed,
                                        const McOptions& opts = {});

ThresholdEstimate estimate_objective(const ProcessFamily& family, double y, std::size_t n, const PathConfig& cfg,
                                     std::uint64_t seed, const McOptions& opts = {});

/// Mean of theta_hat with its calibration companion (sweep without thresholds).
ObjectiveSweep estimate_theta(const ProcessFamily& family, std::size_t n, const PathConfig& cfg, std::uint64_t seed,
                              const McOptions& opts = {});

struct SupremumLawEstimate {
    std::vector<double> sorted_suprema;
    KsResult ks;
    double mass_at_zero = 0.0;
    double median = 0.0;
    double median_std_error = 0.0;  ///< bootstrap
    double phi0 = 0.0;
    std::size_t discarded = 0;
    std::uint64_t seed = 0;

    double empirical_cdf(double x) const;
};

/// Ultimate suprema of n paths, tested against Exp(Phi(0)). Requires n >= 1000.
SupremumLawEstimate estimate_supremum_cdf(const ProcessFamily& family, std::size_t n, const PathConfig& cfg,
                                          std::uint64_t seed, const McOptions& opts = {});

/// Fraction of paths whose supremum is exactly 0. Each path stops as soon as X > 0,
/// so this is cheap even on very fine grids.
McEstimate estimate_mass_at_zero(const ProcessFamily& family, std::size_t n, const PathConfig& cfg,
                                 std::uint64_t seed, const McOptions& opts = {});

struct OccupationEstimate {
    double start_level = 0.0;
    double barrier = 0.0;
    std::vector<double> edges;  ///< bins + 1 ascending edges over [0, barrier]
    std::vector<McEstimate> bins;
    McEstimate atom;     ///< time spent with Y exactly 0
    McEstimate passage;  ///< sigma(y, a): total occupation before passage over the barrier
    std::size_t discarded = 0;
};

/// Occupation of Y^y = (y v sup X) - X before it first reaches a. Requires
/// 0 <= y < a, bins >= 10. With a Gaussian part each stretch between events
/// contributes the expected occupation of the Brownian bridge through its
/// endpoints up to its passage over a, that passage and the running maximum
/// between samples are drawn from their exact bridge laws, and the atom is
/// identically 0. The compound Poisson path is
/// piecewise linear and is integrated exactly.
OccupationEstimate occupation_histogram(const ProcessFamily& family, double y, double a, std::size_t bins,
                                        std::size_t n, const PathConfig& cfg, std::uint64_t seed,
                                        const McOptions& opts = {});

/// Analytic counterpart of one occupation bin: int_lo^hi u_a(y, x) dx.
double potential_mass(const ScaleModel& model, double y, double a, double lo, double hi);

}  // namespace ultimum
