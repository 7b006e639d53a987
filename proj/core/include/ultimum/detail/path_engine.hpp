#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace ultimum {

/// Streams one path of `family` to `observer`, which is called as
/// `bool observer(const PathEvent&)` for every epoch in time order and may
/// return false to end the path early (Termination::observer).
template <class Observer>
PathSummary run_path(const ProcessFamily& family, const PathConfig& cfg, Engine& engine, Observer&& observer,
                     const StepControl& control = {}) {
    boost::random::exponential_distribution<double> unit_exp(1.0);

    const double mu = family.mu();
    const double lambda = family.lambda();
    const double eta = family.eta();
    const double cutoff = cfg.cutoff_level(family);
    const double horizon = cfg.horizon_cap;

    PathSummary summary;
    double t = 0.0;
    double x = 0.0;
    double sup = 0.0;

    const auto finish = [&](Termination why) {
        summary.end_time = t;
        summary.final_sup = sup;
        summary.termination = why;
        return summary;
    };
    const auto note_sup = [&] {
        if (x > sup) {
            sup = x;
            summary.theta_hat = t;
        }
    };

    if (!observer(PathEvent{0.0, 0.0, EventKind::start, 0})) return finish(Termination::observer);

    if (!family.unbounded_variation()) {
        // Exact: linear drift between exponential inter-arrival times.
        for (;;) {
            const double arrival = t + unit_exp(engine) / lambda;
            if (arrival >= horizon) {
                x += mu * (horizon - t);
                t = horizon;
                note_sup();
                observer(PathEvent{t, x, EventKind::horizon, 0});
                return finish(Termination::horizon_cap);
            }
            x += mu * (arrival - t);
            t = arrival;
            note_sup();
            if (!observer(PathEvent{t, x, EventKind::jump_pre, 0})) return finish(Termination::observer);
            x -= unit_exp(engine) / eta;
            if (!observer(PathEvent{t, x, EventKind::jump_post, 0})) return finish(Termination::observer);
            if (sup - x > cutoff) return finish(Termination::drawdown_cutoff);
        }
    }

    boost::random::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = family.sigma();
    const double dt = cfg.dt;
    const bool adaptive = cfg.min_dt > 0.0;
    const double band = cfg.refine_band * sigma;
    std::size_t passed = 0;

    const double full_drift = mu * dt;
    const double full_sd = sigma * std::sqrt(dt);
    const auto diffuse = [&](double h) {
        if (h > 0.0) x += mu * h + sigma * std::sqrt(h) * normal(engine);
    };
    const auto next_step = [&]() {
        if (!adaptive) return dt;
        const double level = std::max(control.start_level, sup);
        const double y = level - x;
        while (passed < control.levels.size() && y >= control.levels[passed]) ++passed;
        double dist = std::min(sup - x, y);
        if (passed < control.levels.size()) dist = std::min(dist, control.levels[passed] - y);
        const double h = (dist / band) * (dist / band);
        return std::clamp(h, cfg.min_dt, dt);
    };

    double next_jump = lambda > 0.0 ? unit_exp(engine) / lambda : std::numeric_limits<double>::infinity();
    std::uint64_t k = 0;
    for (;;) {
        double t_next = adaptive ? t + next_step() : static_cast<double>(k + 1) * dt;
        const bool at_horizon = t_next >= horizon;
        if (at_horizon) t_next = horizon;

        bool whole_step = !adaptive;
        while (next_jump < t_next) {
            whole_step = false;
            diffuse(next_jump - t);
            t = next_jump;
            note_sup();
            if (!observer(PathEvent{t, x, EventKind::jump_pre, 0})) return finish(Termination::observer);
            x -= unit_exp(engine) / eta;
            if (!observer(PathEvent{t, x, EventKind::jump_post, 0})) return finish(Termination::observer);
            if (sup - x > cutoff) return finish(Termination::drawdown_cutoff);
            next_jump += unit_exp(engine) / lambda;
        }

        if (whole_step && !at_horizon) {
            x += full_drift + full_sd * normal(engine);
        } else {
            diffuse(t_next - t);
        }
        t = t_next;
        ++k;
        note_sup();
        const EventKind kind = at_horizon ? EventKind::horizon : EventKind::grid;
        if (!observer(PathEvent{t, x, kind, adaptive ? 0 : k})) return finish(Termination::observer);
        if (sup - x > cutoff) return finish(Termination::drawdown_cutoff);
        if (at_horizon) return finish(Termination::horizon_cap);
    }
}

}  // namespace ultimum
