#include "ultimum/stopping.hpp"

#include <algorithm>
#include <cmath>

#include "ultimum/error.hpp"
#include "ultimum/numerics.hpp"

namespace ultimum {

namespace {

double w_prime_right(const ScaleModel& model, double x) {
    return x > 0.0 ? scale_w_prime(model, x) : model.w_prime_at_zero();
}

numerics::SimpsonOptions simpson(const SolverTolerances& tol, double scale) {
    return {tol.quadrature_rel * std::max(1.0, scale), tol.quadrature_depth};
}

// Half a unit in the leading significant digit of the larger magnitude, with
// magnitudes under `floor_abs` treated as zero.
bool agree_to_one_digit(double a, double b, double floor_abs) {
    const double mag = std::max({std::abs(a), std::abs(b), floor_abs});
    const double unit = std::pow(10.0, std::floor(std::log10(mag)));
    return std::abs(a - b) < 0.5 * unit;
}

}  // namespace

std::string to_string(Pasting pasting) {
    switch (pasting) {
        case Pasting::smooth: return "smooth";
        case Pasting::continuous: return "continuous";
        case Pasting::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double threshold_function_g(const ScaleModel& model, double y, const SolverTolerances& tol) {
    if (!(y >= 0.0)) throw DomainError("threshold_function_g: y must be >= 0");
    const double p0 = model.phi0();
    const auto integrand = [&](double x) { return (1.0 - 2.0 * std::exp(-p0 * x)) * w_prime_right(model, x); };
    return -model.w_at_zero() + numerics::adaptive_simpson(integrand, 0.0, y, simpson(tol, scale_w(model, y)));
}

double solve_threshold(const ScaleModel& model, const SolverTolerances& tol) {
    const double m = median(model.family());
    const auto g = [&](double y) { return threshold_function_g(model, y, tol); };
    if (!(g(m) < 0.0)) throw InternalError("solve_threshold: G(median) is not negative");
    double lo = m;
    double hi = 2.0 * m;
    int doublings = 1;
    while (!(g(hi) > 0.0)) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > tol.max_doublings) throw InternalError("solve_threshold: failed to bracket y*");
    }
    const double y_star = numerics::bisect(g, lo, hi, tol.threshold_abs);
    if (!(y_star > m)) throw InternalError("solve_threshold: root is not above the median");
    return y_star;
}

double value_function(const ScaleModel& model, double y_star, double y, const SolverTolerances& tol) {
    if (!(y >= 0.0)) throw DomainError("value_function: y must be >= 0");
    if (!(y_star > 0.0)) throw DomainError("value_function: y_star must be > 0");
    if (y >= y_star) return 0.0;
    const double p0 = model.phi0();
    const auto integrand = [&](double x) { return (2.0 * std::exp(-p0 * x) - 1.0) * scale_w(model, x - y); };
    return numerics::adaptive_simpson(integrand, y, y_star, simpson(tol, scale_w(model, y_star)));
}

double objective(const ScaleModel& model, const SolverTolerances& tol) {
    const double y_star = solve_threshold(model, tol);
    return value_function(model, y_star, 0.0, tol) + expected_theta(model.family());
}

PastingDiagnostic pasting_diagnostic(const ScaleModel& model, double y_star, double h, const SolverTolerances& tol) {
    if (!(h > 0.0 && h <= y_star / 10.0)) throw DomainError("pasting_diagnostic: h must lie in (0, y*/10]");
    PastingDiagnostic out;
    out.h = h;
    out.scale = scale_w(model, y_star);
    const double v_star = value_function(model, y_star, y_star, tol);
    for (int i = 0; i < 3; ++i) {
        const double step = h / static_cast<double>(1 << i);
        out.difference_quotients[i] = (v_star - value_function(model, y_star, y_star - step, tol)) / step;
    }
    const auto& d = out.difference_quotients;
    out.richardson = {2.0 * d[1] - d[0], 2.0 * d[2] - d[1]};
    out.left_derivative = (4.0 * out.richardson[1] - out.richardson[0]) / 3.0;

    const double smooth_limit = tol.smooth_band * out.scale;
    if (std::abs(out.left_derivative) <= smooth_limit) {
        out.classification = Pasting::smooth;
    } else if (out.left_derivative > tol.continuous_band * out.scale) {
        out.classification = Pasting::continuous;
    } else {
        out.classification = Pasting::inconclusive;
    }
    out.stable = agree_to_one_digit(out.richardson[0], out.richardson[1], smooth_limit);
    return out;
}

PredictionSolution solve(const ScaleModel& model, int curve_points, double curve_max, const SolverTolerances& tol) {
    if (curve_points < 2) throw DomainError("solve: curve_points must be >= 2");
    PredictionSolution s;
    s.phi0 = model.phi0();
    s.median = median(model.family());
    s.y_star = solve_threshold(model, tol);
    s.value_at_zero = value_function(model, s.y_star, 0.0, tol);
    s.expected_theta = expected_theta(model.family());
    s.objective = s.value_at_zero + s.expected_theta;
    s.pasting = pasting_diagnostic(model, s.y_star, s.y_star / 40.0, tol);

    const double upper = curve_max > 0.0 ? curve_max : 1.5 * s.y_star;
    s.value_curve.reserve(static_cast<std::size_t>(curve_points));
    for (int i = 0; i < curve_points; ++i) {
        const double y = upper * static_cast<double>(i) / static_cast<double>(curve_points - 1);
        s.value_curve.emplace_back(y, value_function(model, s.y_star, y, tol));
    }
    return s;
}

}  // namespace ultimum
