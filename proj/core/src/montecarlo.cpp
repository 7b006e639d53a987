#include "ultimum/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "ultimum/error.hpp"
#include "ultimum/numerics.hpp"

namespace ultimum {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kCrossingStream = 0xb41d6e5ULL;

// Runs fn(p) for p in [0, n) on up to `threads` workers. Each path writes only
// its own slots, so results do not depend on the schedule.
template <class Fn>
void for_each_path(std::size_t n, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t p = 0; p < n; ++p) fn(p);
        return;
    }
    constexpr std::size_t chunk = 64;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                try {
                    for (;;) {
                        const std::size_t begin = next.fetch_add(chunk);
                        if (begin >= n) return;
                        const std::size_t end = std::min(n, begin + chunk);
                        for (std::size_t p = begin; p < end; ++p) fn(p);
                    }
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next.store(n);
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void check_clean_fraction(std::size_t discarded, std::size_t n, const McOptions& opts, const PathConfig& cfg) {
    if (static_cast<double>(discarded) > opts.max_unclean_fraction * static_cast<double>(n)) {
        std::ostringstream msg;
        msg << discarded << " of " << n << " paths reached horizon_cap = " << cfg.horizon_cap
            << " before the drawdown cutoff; increase horizon_cap";
        throw SimulationQualityError(msg.str());
    }
}

// Mean of 2F(Y) - 1 = 1 - 2 e^{-phi0 Y} over a piece where Y is linear.
double mean_payoff(double phi0, double y0, double y1) {
    const double delta = y1 - y0;
    const double e0 = std::exp(-phi0 * y0);
    if (delta == 0.0) return 1.0 - 2.0 * e0;
    const double z = phi0 * delta;
    return 1.0 - 2.0 * e0 * (-std::expm1(-z) / z);
}

// Tracks theta_hat, the first-passage epochs tau_k of Y^0 over ascending
// thresholds, and int_0^{tau_k} (2F(Y) - 1) dt along the linearly joined path.
class ObjectiveObserver {
public:
    ObjectiveObserver(std::span<const double> ascending, double phi0)
        : thresholds_(ascending), phi0_(phi0), tau_(ascending.size(), kNaN), integral_(ascending.size(), kNaN) {}

    bool operator()(const PathEvent& e) {
        if (!started_) {
            started_ = true;
            sup_ = e.x;
            theta_ = e.t;
        } else {
            if (next_ < thresholds_.size()) {
                ReflectedPiece pieces[2];
                const int count = reflected_pieces(prev_t_, prev_x_, e.t, e.x, sup_, pieces);
                for (int i = 0; i < count; ++i)
                    accumulated_ += pieces[i].duration * mean_payoff(phi0_, pieces[i].y_start, pieces[i].y_end);
            }
            if (e.x > sup_) {
                sup_ = e.x;
                theta_ = e.t;
            }
        }
        const double drawdown = sup_ - e.x;
        while (next_ < thresholds_.size() && drawdown >= thresholds_[next_]) {
            tau_[next_] = e.t;
            integral_[next_] = accumulated_;
            ++next_;
        }
        prev_t_ = e.t;
        prev_x_ = e.x;
        return true;
    }

    double theta() const { return theta_; }
    double tau(std::size_t k) const { return tau_[k]; }
    double integral(std::size_t k) const { return integral_[k]; }
    double last_time() const { return prev_t_; }

private:
    std::span<const double> thresholds_;
    double phi0_;
    std::vector<double> tau_;
    std::vector<double> integral_;
    bool started_ = false;
    double sup_ = 0.0;
    double theta_ = 0.0;
    double prev_t_ = 0.0;
    double prev_x_ = 0.0;
    double accumulated_ = 0.0;
    std::size_t next_ = 0;
};

// Expected occupation of a Brownian bridge from u to v over a stretch of
// length h. Its density in z is (h/s) Q((|z-u| + |z-v|)/s) / phi(|v-u|/s) with
// s = sigma sqrt h and Q the standard normal tail; below() integrates it.
class BridgeOccupation {
public:
    BridgeOccupation(double u, double v, double h, double sigma)
        : lo_(std::min(u, v)), hi_(std::max(u, v)), h_(h), s_(sigma * std::sqrt(h)) {
        if (s_ > 0.0) d_ = (hi_ - lo_) / s_;
    }

    /// Expected time spent below c.
    double below(double c) const {
        if (!(s_ > 0.0)) return c > lo_ ? h_ : 0.0;
        if (c <= lo_) return 0.5 * h_ * g_ratio(d_ + 2.0 * (lo_ - c) / s_);
        if (c <= hi_) return h_ * (0.5 * g_hat(d_) + (c - lo_) / s_ * mills(d_));
        return h_ - 0.5 * h_ * g_ratio(d_ + 2.0 * (c - hi_) / s_);
    }

    /// Interval outside which the occupation is negligible.
    double reach_lo() const { return lo_ - 9.0 * s_; }
    double reach_hi() const { return hi_ + 9.0 * s_; }

private:
    // Q(w) / phi(w).
    static double mills(double w) {
        if (w < 25.0) return std::sqrt(0.5 * std::numbers::pi) * std::exp(0.5 * w * w) * std::erfc(w / std::numbers::sqrt2);
        return (1.0 - 1.0 / (w * w) * (1.0 - 3.0 / (w * w) * (1.0 - 5.0 / (w * w) * (1.0 - 7.0 / (w * w))))) / w;
    }
    // g(w) / phi(w) with g = phi - w Q, so that -g' = Q.
    static double g_hat(double w) {
        if (w < 25.0) return 1.0 - w * mills(w);
        const double r = 1.0 / (w * w);
        return r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
    }
    // g(w) / phi(d) for w >= d.
    double g_ratio(double w) const { return std::exp(-0.5 * (w - d_) * (w + d_)) * g_hat(w); }

    double lo_, hi_, h_, s_;
    double d_ = 0.0;
};

McEstimate summarize_column(const std::vector<double>& matrix, std::size_t rows, std::size_t cols, std::size_t col,
                            std::uint64_t seed) {
    std::vector<double> column(rows);
    for (std::size_t r = 0; r < rows; ++r) column[r] = matrix[r * cols + col];
    return summarize(column, seed);
}

}  // namespace

McEstimate ObjectiveSweep::paired_difference(std::size_t i, std::size_t j) const {
    const std::size_t k = thresholds.size();
    if (i >= k || j >= k) throw DomainError("paired_difference: threshold index out of range");
    std::vector<double> diff(paths_used);
    for (std::size_t r = 0; r < paths_used; ++r) diff[r] = direct_values[r * k + i] - direct_values[r * k + j];
    return summarize(diff, seed);
}

McEstimate ObjectiveSweep::representation_gap(std::size_t i) const {
    const std::size_t k = thresholds.size();
    if (i >= k) throw DomainError("representation_gap: threshold index out of range");
    std::vector<double> diff(paths_used);
    for (std::size_t r = 0; r < paths_used; ++r)
        diff[r] = representation_values[r * k + i] - direct_values[r * k + i];
    return summarize(diff, seed);
}

ObjectiveSweep estimate_objective_sweep(const ProcessFamily& family, std::span<const double> thresholds,
                                        std::size_t n, const PathConfig& cfg, std::uint64_t seed,
                                        const McOptions& opts) {
    if (n < 100) throw DomainError("estimate_objective: need n >= 100 paths");
    for (double y : thresholds)
        if (!(y >= 0.0) || !std::isfinite(y)) throw DomainError("estimate_objective: thresholds must be >= 0");

    PathConfig run_cfg = cfg;
    run_cfg.store_full_path = false;
    if (!thresholds.empty())
        run_cfg.y_margin = std::max(cfg.y_margin, *std::max_element(thresholds.begin(), thresholds.end()));
    run_cfg.validate();

    const std::size_t k = thresholds.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return thresholds[a] < thresholds[b]; });
    std::vector<double> ascending(k);
    for (std::size_t i = 0; i < k; ++i) ascending[i] = thresholds[order[i]];

    const bool calibrate = family.unbounded_variation() && run_cfg.min_dt == 0.0;
    const double phi0 = family.phi0();

    // Per path: [clean, theta, coarse_theta, k x (direct, representation, coarse_direct)]
    const std::size_t stride = 3 + 3 * k;
    std::vector<double> slots(n * stride, kNaN);

    for_each_path(n, opts.threads, [&](std::size_t p) {
        Engine engine = make_engine(seed, p);
        ObjectiveObserver fine(ascending, phi0);
        ObjectiveObserver coarse(ascending, phi0);
        const StepControl control{0.0, ascending};
        const auto summary = run_path(
            family, run_cfg, engine,
            [&](const PathEvent& e) {
                fine(e);
                if (calibrate && !(e.kind == EventKind::grid && e.grid_index % 2 != 0)) coarse(e);
                return true;
            },
            control);

        double* out = &slots[p * stride];
        out[0] = summary.termination == Termination::drawdown_cutoff ? 1.0 : 0.0;
        out[1] = fine.theta();
        out[2] = calibrate ? coarse.theta() : fine.theta();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t orig = order[i];
            const double tau = fine.tau(i);
            double* cell = out + 3 + 3 * orig;
            cell[0] = std::abs(fine.theta() - tau);
            cell[1] = fine.integral(i) + fine.theta();
            if (calibrate) {
                const double ctau = std::isnan(coarse.tau(i)) ? coarse.last_time() : coarse.tau(i);
                cell[2] = std::abs(coarse.theta() - ctau);
            } else {
                cell[2] = cell[0];
            }
        }
    });

    ObjectiveSweep sweep;
    sweep.seed = seed;
    sweep.calibrated = calibrate;
    std::vector<double> theta;
    std::vector<double> coarse_theta;
    std::vector<double> coarse_direct;
    for (std::size_t p = 0; p < n; ++p) {
        const double* row = &slots[p * stride];
        if (row[0] != 1.0) {
            ++sweep.discarded;
            continue;
        }
        theta.push_back(row[1]);
        coarse_theta.push_back(row[2]);
        for (std::size_t i = 0; i < k; ++i) {
            sweep.direct_values.push_back(row[3 + 3 * i]);
            sweep.representation_values.push_back(row[3 + 3 * i + 1]);
            coarse_direct.push_back(row[3 + 3 * i + 2]);
        }
    }
    check_clean_fraction(sweep.discarded, n, opts, run_cfg);
    sweep.paths_used = theta.size();

    constexpr double extrapolation = 1.0 / (std::numbers::sqrt2 - 1.0);
    sweep.theta = summarize(theta, seed);
    sweep.coarse_theta = summarize(coarse_theta, seed);
    sweep.theta_bias_allowance = calibrate ? std::abs(sweep.theta.mean - sweep.coarse_theta.mean) * extrapolation : 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        ThresholdEstimate est;
        est.threshold = thresholds[i];
        est.direct = summarize_column(sweep.direct_values, sweep.paths_used, k, i, seed);
        est.representation = summarize_column(sweep.representation_values, sweep.paths_used, k, i, seed);
        est.coarse_direct = summarize_column(coarse_direct, sweep.paths_used, k, i, seed);
        est.bias_allowance = calibrate ? std::abs(est.direct.mean - est.coarse_direct.mean) * extrapolation : 0.0;
        sweep.thresholds.push_back(est);
    }
    return sweep;
}

ThresholdEstimate estimate_objective(const ProcessFamily& family, double y, std::size_t n, const PathConfig& cfg,
                                     std::uint64_t seed, const McOptions& opts) {
    const double thresholds[] = {y};
    return estimate_objective_sweep(family, thresholds, n, cfg, seed, opts).thresholds.front();
}

ObjectiveSweep estimate_theta(const ProcessFamily& family, std::size_t n, const PathConfig& cfg, std::uint64_t seed,
                              const McOptions& opts) {
    return estimate_objective_sweep(family, {}, n, cfg, seed, opts);
}

double SupremumLawEstimate::empirical_cdf(double x) const {
    if (sorted_suprema.empty()) return kNaN;
    const auto it = std::upper_bound(sorted_suprema.begin(), sorted_suprema.end(), x);
    return static_cast<double>(it - sorted_suprema.begin()) / static_cast<double>(sorted_suprema.size());
}

SupremumLawEstimate estimate_supremum_cdf(const ProcessFamily& family, std::size_t n, const PathConfig& cfg,
                                          std::uint64_t seed, const McOptions& opts) {
    if (n < 1000) throw DomainError("estimate_supremum_cdf: need n >= 1000 paths");
    PathConfig run_cfg = cfg;
    run_cfg.store_full_path = false;
    run_cfg.validate();

    std::vector<double> suprema(n, kNaN);
    std::vector<char> clean(n, 0);
    for_each_path(n, opts.threads, [&](std::size_t p) {
        Engine engine = make_engine(seed, p);
        const auto summary = run_path(family, run_cfg, engine, [](const PathEvent&) { return true; });
        suprema[p] = summary.final_sup;
        clean[p] = summary.termination == Termination::drawdown_cutoff;
    });

    SupremumLawEstimate out;
    out.seed = seed;
    out.phi0 = family.phi0();
    for (std::size_t p = 0; p < n; ++p) {
        if (clean[p]) {
            out.sorted_suprema.push_back(suprema[p]);
        } else {
            ++out.discarded;
        }
    }
    check_clean_fraction(out.discarded, n, opts, run_cfg);
    const std::vector<double> unsorted = out.sorted_suprema;
    std::sort(out.sorted_suprema.begin(), out.sorted_suprema.end());

    const double phi0 = out.phi0;
    out.ks = ks_test(out.sorted_suprema, [phi0](double x) { return x < 0.0 ? 0.0 : -std::expm1(-phi0 * x); });
    const auto zeros = std::count(out.sorted_suprema.begin(), out.sorted_suprema.end(), 0.0);
    out.mass_at_zero = static_cast<double>(zeros) / static_cast<double>(out.sorted_suprema.size());
    out.median = sorted_median(out.sorted_suprema);
    out.median_std_error = bootstrap_median_std_error(unsorted, 200, seed);
    return out;
}

McEstimate estimate_mass_at_zero(const ProcessFamily& family, std::size_t n, const PathConfig& cfg,
                                 std::uint64_t seed, const McOptions& opts) {
    if (n < 2) throw DomainError("estimate_mass_at_zero: need n >= 2");
    PathConfig run_cfg = cfg;
    run_cfg.store_full_path = false;
    run_cfg.validate();

    // 1 = supremum exactly 0, 0 = positive, NaN = horizon reached first.
    std::vector<double> indicator(n, kNaN);
    for_each_path(n, opts.threads, [&](std::size_t p) {
        Engine engine = make_engine(seed, p);
        const auto summary = run_path(family, run_cfg, engine, [](const PathEvent& e) { return !(e.x > 0.0); });
        switch (summary.termination) {
            case Termination::observer: indicator[p] = 0.0; break;
            case Termination::drawdown_cutoff: indicator[p] = 1.0; break;
            case Termination::horizon_cap: break;
        }
    });
    std::vector<double> used;
    used.reserve(n);
    std::size_t discarded = 0;
    for (double v : indicator) {
        if (std::isnan(v)) {
            ++discarded;
        } else {
            used.push_back(v);
        }
    }
    check_clean_fraction(discarded, n, opts, run_cfg);
    return summarize(used, seed);
}

OccupationEstimate occupation_histogram(const ProcessFamily& family, double y, double a, std::size_t bins,
                                        std::size_t n, const PathConfig& cfg, std::uint64_t seed,
                                        const McOptions& opts) {
    if (!(a > 0.0) || !(y >= 0.0 && y < a)) throw DomainError("occupation_histogram: need 0 <= y < a");
    if (bins < 10) throw DomainError("occupation_histogram: need bins >= 10");
    if (n < 2) throw DomainError("occupation_histogram: need n >= 2");
    PathConfig run_cfg = cfg;
    run_cfg.store_full_path = false;
    run_cfg.y_margin = std::max(cfg.y_margin, a);
    run_cfg.validate();

    const double width = a / static_cast<double>(bins);
    const bool gaussian = family.unbounded_variation();
    const double sigma = family.sigma();
    // Per path: [passed, atom, total, bins...]
    const std::size_t stride = 3 + bins;
    std::vector<double> slots(n * stride, 0.0);
    const double barrier[] = {a};

    for_each_path(n, opts.threads, [&](std::size_t p) {
        Engine engine = make_engine(seed, p);
        // Separate stream for bridge crossings so the path itself is unchanged.
        Engine killer = make_engine(substream_seed(seed, kCrossingStream), p);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double* out = &slots[p * stride];
        double* hist = out + 3;
        double level = y;  // y v running sup of X
        double prev_t = 0.0;
        double prev_x = 0.0;
        bool started = false;

        // Adds the part of a linear piece of Y lying in [0, a) to the histogram.
        const auto deposit = [&](const ReflectedPiece& piece) {
            const double lo_y = std::min(piece.y_start, piece.y_end);
            const double hi_y = std::max(piece.y_start, piece.y_end);
            if (hi_y == lo_y) {
                if (lo_y >= a) return;
                out[2] += piece.duration;
                if (lo_y == 0.0) {
                    out[1] += piece.duration;
                } else {
                    hist[std::min(bins - 1, static_cast<std::size_t>(lo_y / width))] += piece.duration;
                }
                return;
            }
            const double rate = piece.duration / (hi_y - lo_y);
            const double top = std::min(hi_y, a);
            if (top <= lo_y) return;
            std::size_t b = std::min(bins - 1, static_cast<std::size_t>(lo_y / width));
            for (; b < bins; ++b) {
                const double edge_lo = std::max(lo_y, static_cast<double>(b) * width);
                const double edge_hi = std::min(top, static_cast<double>(b + 1) * width);
                if (edge_hi > edge_lo) {
                    hist[b] += rate * (edge_hi - edge_lo);
                    out[2] += rate * (edge_hi - edge_lo);
                }
                if (static_cast<double>(b + 1) * width >= top) break;
            }
        };

        // With a Gaussian part the path between events is a Brownian bridge; depositing
        // its conditional expected occupation avoids the bias of the linear chord,
        // whose spread is too small where the grid refines. Time spent above the
        // level belongs to Y near 0, so it goes to the first bin.
        const auto deposit_bridge = [&](double u, double v, double h) {
            const BridgeOccupation bridge(u, v, h, sigma);
            const auto bin_of = [&](double z) {
                return z <= 0.0 ? std::size_t{0} : std::min(bins - 1, static_cast<std::size_t>(z / width));
            };
            const std::size_t first = bin_of(bridge.reach_lo());
            const std::size_t last = bin_of(std::min(bridge.reach_hi(), a));
            if (first == last && bridge.reach_hi() < a) {
                hist[first] += h;
                out[2] += h;
                return;
            }
            // Only time before the bridge reaches a counts: by reflection the killed
            // occupation is B(u, v) - r B(2a - u, v), r = q_h(2a - u, v) / q_h(u, v).
            const double r = std::exp(-2.0 * (a - u) * (a - v) / (sigma * sigma * h));
            const BridgeOccupation mirror(2.0 * a - u, v, h, sigma);
            const auto killed_below = [&](double c) {
                return r > 1e-300 ? bridge.below(c) - r * mirror.below(c) : bridge.below(c);
            };
            double below = first == 0 ? 0.0 : killed_below(static_cast<double>(first) * width);
            for (std::size_t b = first; b <= last; ++b) {
                const double upper = b + 1 == bins ? killed_below(a) : killed_below(static_cast<double>(b + 1) * width);
                const double mass = std::max(0.0, upper - below);
                hist[b] += mass;
                out[2] += mass;
                below = upper;
            }
        };

        const auto summary = run_path(
            family, run_cfg, engine,
            [&](const PathEvent& e) {
                if (started && gaussian) {
                    if (e.t > prev_t) {
                        const double h = e.t - prev_t;
                        const double u = level - prev_x;
                        const double v = level - e.x;
                        deposit_bridge(u, v, h);
                        // The bridge may pass over a between the two samples.
                        const double var = sigma * sigma * h;
                        if (v < a && unit(killer) < std::exp(-2.0 * (a - u) * (a - v) / var)) return false;
                        // Likewise over the level: draw the bridge maximum, otherwise the running
                        // sup lags by O(sigma sqrt h) and Y piles up near 0.
                        if (u * v < 20.0 * var) {
                            const double gap = e.x - prev_x;
                            const double top = 0.5 * (prev_x + e.x +
                                                      std::sqrt(gap * gap - 2.0 * var * std::log1p(-unit(killer))));
                            level = std::max(level, top);
                        }
                    }
                } else if (started) {
                    ReflectedPiece pieces[2];
                    const int count = reflected_pieces(prev_t, prev_x, e.t, e.x, level, pieces);
                    for (int i = 0; i < count; ++i) deposit(pieces[i]);
                }
                started = true;
                level = std::max(level, e.x);
                prev_t = e.t;
                prev_x = e.x;
                return level - e.x < a;
            },
            StepControl{y, barrier});
        out[0] = summary.termination == Termination::observer ? 1.0 : 0.0;
    });

    OccupationEstimate est;
    est.start_level = y;
    est.barrier = a;
    for (std::size_t b = 0; b <= bins; ++b) est.edges.push_back(a * static_cast<double>(b) / static_cast<double>(bins));
    std::vector<double> clean;
    for (std::size_t p = 0; p < n; ++p) {
        if (slots[p * stride] == 1.0) {
            clean.insert(clean.end(), slots.begin() + static_cast<std::ptrdiff_t>(p * stride),
                         slots.begin() + static_cast<std::ptrdiff_t>((p + 1) * stride));
        } else {
            ++est.discarded;
        }
    }
    check_clean_fraction(est.discarded, n, opts, run_cfg);
    const std::size_t rows = clean.size() / stride;
    est.atom = summarize_column(clean, rows, stride, 1, seed);
    est.passage = summarize_column(clean, rows, stride, 2, seed);
    for (std::size_t b = 0; b < bins; ++b) est.bins.push_back(summarize_column(clean, rows, stride, 3 + b, seed));
    return est;
}

double potential_mass(const ScaleModel& model, double y, double a, double lo, double hi) {
    if (!(a > 0.0) || !(y >= 0.0 && y < a)) throw DomainError("potential_mass: need 0 <= y < a");
    if (!(lo >= 0.0 && hi <= a && lo <= hi)) throw DomainError("potential_mass: need 0 <= lo <= hi <= a");
    const double ratio = scale_w(model, a - y) / scale_w_prime(model, a);
    const auto w_prime = [&](double x) { return x > 0.0 ? scale_w_prime(model, x) : model.w_prime_at_zero(); };
    const numerics::SimpsonOptions opts{1e-12 * std::max(1.0, scale_w(model, a)), 40};
    double total = 0.0;
    // Below y the density is ratio * W'(x); from y on W(x - y) is subtracted (it jumps at y when W(0) > 0).
    if (lo < y) {
        const double top = std::min(hi, y);
        total += numerics::adaptive_simpson([&](double x) { return ratio * w_prime(x); }, lo, top, opts);
    }
    if (hi > y) {
        const double bottom = std::max(lo, y);
        total += numerics::adaptive_simpson(
            [&](double x) { return ratio * w_prime(x) - scale_w(model, x - y); }, bottom, hi, opts);
    }
    return total;
}

}  // namespace ultimum
