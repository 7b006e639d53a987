#include "ultimum/path.hpp"

#include <cmath>

#include "ultimum/error.hpp"

namespace ultimum {

void PathConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("PathConfig: dt must be > 0");
    if (!(horizon_cap > 0.0) || !std::isfinite(horizon_cap)) throw DomainError("PathConfig: horizon_cap must be > 0");
    if (!(eps_tail > 0.0 && eps_tail <= 1e-3)) throw DomainError("PathConfig: eps_tail must lie in (0, 1e-3]");
    if (!(y_margin >= 0.0) || !std::isfinite(y_margin)) throw DomainError("PathConfig: y_margin must be >= 0");
    if (!(min_dt >= 0.0 && min_dt <= dt)) throw DomainError("PathConfig: min_dt must lie in [0, dt]");
    if (!(refine_band > 0.0)) throw DomainError("PathConfig: refine_band must be > 0");
}

double PathConfig::cutoff_level(const ProcessFamily& family) const {
    return std::log(1.0 / eps_tail) / family.phi0() + y_margin;
}

SimulatedPath simulate_path(const ProcessFamily& family, const PathConfig& cfg, std::uint64_t seed,
                            std::uint64_t path_index) {
    cfg.validate();
    Engine engine = make_engine(seed, path_index);
    SimulatedPath path;
    double running = 0.0;
    const bool store = cfg.store_full_path;
    double pending_pre = 0.0;
    const auto summary = run_path(family, cfg, engine, [&](const PathEvent& e) {
        if (e.kind == EventKind::jump_pre) pending_pre = e.x;
        if (e.kind == EventKind::jump_post) {
            path.jump_times.push_back(e.t);
            path.jump_sizes.push_back(pending_pre - e.x);
        }
        if (store) {
            running = path.times.empty() ? e.x : std::max(running, e.x);
            path.times.push_back(e.t);
            path.values.push_back(e.x);
            path.running_sup.push_back(running);
        }
        return true;
    });
    path.theta_hat = summary.theta_hat;
    path.end_time = summary.end_time;
    path.final_sup = summary.final_sup;
    path.truncated_cleanly = summary.termination == Termination::drawdown_cutoff;
    return path;
}

double extract_theta(const SimulatedPath& path, bool allow_unclean) {
    if (path.running_sup.empty()) throw DomainError("extract_theta: path has no stored samples");
    if (!path.truncated_cleanly && !allow_unclean)
        throw DomainError("extract_theta: path hit the horizon cap; theta would be biased");
    const double final_sup = path.running_sup.back();
    for (std::size_t i = 0; i < path.running_sup.size(); ++i) {
        if (path.running_sup[i] == final_sup) return path.times[i];
    }
    return path.times.back();
}

std::optional<double> reflected_first_passage(const SimulatedPath& path, double y) {
    if (!(y >= 0.0)) throw DomainError("reflected_first_passage: y must be >= 0");
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        if (path.running_sup[i] - path.values[i] >= y) return path.times[i];
    }
    return std::nullopt;
}

int reflected_pieces(double t0, double x0, double t1, double x1, double level, ReflectedPiece out[2]) {
    const double d = t1 - t0;
    if (!(d > 0.0)) return 0;
    if (x1 <= level) {
        out[0] = {d, level - x0, level - x1};
        return 1;
    }
    // X overtakes the reflection level inside the stretch; Y sits at 0 afterwards.
    const double frac = (level - x0) / (x1 - x0);
    int count = 0;
    if (frac > 0.0) out[count++] = {frac * d, level - x0, 0.0};
    out[count++] = {(1.0 - frac) * d, 0.0, 0.0};
    return count;
}

}  // namespace ultimum
