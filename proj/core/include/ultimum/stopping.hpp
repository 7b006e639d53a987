#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ultimum/scale.hpp"

namespace ultimum {

enum class Pasting { smooth, continuous, inconclusive };

std::string to_string(Pasting pasting);

/// Numerical settings shared by the analytic solver. Defaults are the
/// documented ones; they are echoed into every report.
struct SolverTolerances {
    double quadrature_rel = 1e-10;   ///< absolute quadrature tolerance, scaled by max(1, W(right end))
    int quadrature_depth = 40;
    double threshold_abs = 1e-10;    ///< bisection bracket width for y*
    int max_doublings = 60;
    double smooth_band = 1e-3;       ///< |D| <= smooth_band * W(y*) -> smooth
    double continuous_band = 1e-2;   ///< D > continuous_band * W(y*) -> continuous
};

struct PastingDiagnostic {
    Pasting classification = Pasting::inconclusive;
    double h = 0.0;
    std::array<double, 3> difference_quotients{};  ///< D(h), D(h/2), D(h/4)
    std::array<double, 2> richardson{};            ///< 2D(h/2) - D(h), 2D(h/4) - D(h/2)
    double left_derivative = 0.0;                  ///< second-level extrapolation
    double scale = 0.0;                            ///< W(y*), the magnitude the bands refer to
    bool stable = false;                           ///< richardson[0] and [1] agree to one significant digit
};

struct PredictionSolution {
    double phi0 = 0.0;
    double y_star = 0.0;
    double median = 0.0;
    double value_at_zero = 0.0;
    double expected_theta = 0.0;
    double objective = 0.0;
    PastingDiagnostic pasting;
    std::vector<std::pair<double, double>> value_curve;
};

/// G(y) = -W(0) + int_0^y (1 - 2 e^{-Phi(0) x}) W'(x) dx.
double threshold_function_g(const ScaleModel& model, double y, const SolverTolerances& tol = {});

/// Unique root of G on (median, inf).
double solve_threshold(const ScaleModel& model, const SolverTolerances& tol = {});

/// V(y) = int_0^{y*} (2 e^{-Phi(0) x} - 1) W(x - y) dx; zero for y >= y*.
double value_function(const ScaleModel& model, double y_star, double y, const SolverTolerances& tol = {});

/// Minimal expected L1 prediction error V(0) + E[theta].
double objective(const ScaleModel& model, const SolverTolerances& tol = {});

/// Left difference quotients of V at y*, with Richardson extrapolation.
/// Requires 0 < h <= y*/10.
PastingDiagnostic pasting_diagnostic(const ScaleModel& model, double y_star, double h,
                                     const SolverTolerances& tol = {});

/// Everything above in one pass; value_curve samples [0, curve_max] at curve_points
/// points (curve_max <= 0 selects 1.5 y*).
PredictionSolution solve(const ScaleModel& model, int curve_points = 500, double curve_max = 0.0,
                         const SolverTolerances& tol = {});

}  // namespace ultimum
