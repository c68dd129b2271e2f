#pragma once

#include <vector>

namespace mmt {

// Probability that a model of quality alpha passes criterion theta on T
// i.i.d. test samples: the upper tail of Binomial(T, alpha) from theta.
// Exactly 1 at theta = 0 and exactly 0 at theta = T+1; alpha in {0,1} is
// handled without NaN (0^0 counts as 1).
double acceptance_probability(double alpha, int theta, int T);

// All tail values [delta(0), delta(1), ..., delta(T+1)] in one pass.
// Length T+2, nonincreasing, endpoints exactly 1 and 0. Entry theta is
// bit-identical to acceptance_probability(alpha, theta, T).
std::vector<double> acceptance_profile(double alpha, int T);

} // namespace mmt
