#include "ultimum/numerics.hpp"

#include "ultimum/error.hpp"

namespace ultimum::numerics {

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                    double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, SimpsonOptions opts) {
    if (a == b) return 0.0;
    if (b < a) return -adaptive_simpson(f, b, a, opts);
    // Start from four panels so a coincidentally flat first estimate cannot stop the recursion.
    constexpr int panels = 4;
    const double width = (b - a) / panels;
    double total = 0.0;
    double x0 = a;
    double f0 = f(x0);
    for (int i = 0; i < panels; ++i) {
        const double x1 = i + 1 == panels ? b : a + (i + 1) * width;
        const double f1 = f(x1);
        const double xm = 0.5 * (x0 + x1);
        const double fm = f(xm);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_step(f, x0, f0, x1, f1, xm, fm, whole, opts.abs_tol / panels, opts.max_depth);
        x0 = x1;
        f0 = f1;
    }
    return total;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) throw InternalError("bisect: no sign change on bracket");
    while (hi - lo > abs_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace ultimum::numerics
