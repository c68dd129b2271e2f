#include "mmt/quadrature.hpp"

#include <cmath>

#include "mmt/errors.hpp"

namespace mmt {

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double err = left + right - whole;
    if (std::fabs(err) <= 15.0 * tol) return left + right + err / 15.0;
    if (depth <= 0)
        throw NumericError("integrate: adaptive Simpson hit the depth limit before reaching "
                           "the requested tolerance");
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    return sign * adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double integrate2d(const std::function<double(double, double)>& f, double x0, double x1,
                   const std::function<double(double)>& ylo,
                   const std::function<double(double)>& yhi, double tol) {
    if (x0 == x1) return 0.0;
    // Inner integrals get a tighter tolerance so their noise does not defeat
    // the outer error estimate.
    const double inner_tol = tol / (8.0 * (1.0 + std::fabs(x1 - x0)));
    auto column = [&](double x) {
        const double lo = ylo(x);
        const double hi = yhi(x);
        if (hi <= lo) return 0.0;
        return integrate([&](double y) { return f(x, y); }, lo, hi, inner_tol);
    };
    return integrate(column, x0, x1, tol);
}

} // namespace mmt
