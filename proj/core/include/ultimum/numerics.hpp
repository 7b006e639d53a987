#pragma once

#include <cmath>
#include <functional>

namespace ultimum::numerics {

struct SimpsonOptions {
    double abs_tol = 1e-10;
    int max_depth = 40;
};

/// Adaptive Simpson quadrature of f over [a, b] with Richardson correction.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        SimpsonOptions opts = {});

/// Bisection on a sign change of f over [lo, hi]; returns the midpoint of the
/// final bracket, whose width is at most abs_tol. f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol);

}  // namespace ultimum::numerics
