#pragma once

#include <cmath>

namespace mmt {

// Absolute tolerance used for equality comparisons of currency values.
inline constexpr double kEps = 1e-9;

// Execution policy for the data-parallel kernels. Serial is the reference
// implementation; Parallel runs the same batched loop under OpenMP and must
// produce bit-identical results.
enum class Exec { Serial, Parallel };

inline bool approx_eq(double a, double b, double eps = kEps) {
    return std::fabs(a - b) <= eps;
}

} // namespace mmt
