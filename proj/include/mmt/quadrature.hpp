#pragma once

#include <functional>

namespace mmt {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
// Throws NumericError when the recursion depth limit is hit before the
// tolerance is met. a > b yields the signed integral.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-6, int max_depth = 40);

// Iterated 2-D integral over {x in [x0, x1], y in [ylo(x), yhi(x)]}.
// Inner bounds may cross (empty slice contributes zero).
double integrate2d(const std::function<double(double, double)>& f, double x0, double x1,
                   const std::function<double(double)>& ylo,
                   const std::function<double(double)>& yhi, double tol = 1e-6);

} // namespace mmt
