#include "mmt/verification.hpp"

#include <cmath>

#include "mmt/errors.hpp"

namespace mmt {

namespace {

void check_inputs(double alpha, int theta, int T) {
    if (T < 1) throw InvalidInputError("acceptance_probability: T must be >= 1");
    if (alpha < 0.0 || alpha > 1.0)
        throw InvalidInputError("acceptance_probability: alpha must lie in [0,1]");
    if (theta < 0 || theta > T + 1)
        throw InvalidInputError("acceptance_probability: theta must lie in [0, T+1]");
}

// log C(T,i); lgamma keeps this finite for any T that fits in an int.
double log_choose(int T, int i) {
    return std::lgamma(T + 1.0) - std::lgamma(i + 1.0) - std::lgamma(T - i + 1.0);
}

// Tail accumulated from i = T downward so that single lookups and the
// profile's suffix sums add terms in the same order (bit-identical results).
// Every pmf term is evaluated in log space; naive C(T,i) overflows past
// T ~ 1029 and the direct recurrence dies when the first term underflows.
double tail_from(double alpha, int theta, int T) {
    const double la = std::log(alpha);
    const double l1a = std::log1p(-alpha);
    double acc = 0.0;
    for (int i = T; i >= theta; --i) {
        acc += std::exp(log_choose(T, i) + i * la + (T - i) * l1a);
    }
    return acc < 1.0 ? acc : 1.0;
}

} // namespace

double acceptance_probability(double alpha, int theta, int T) {
    check_inputs(alpha, theta, T);
    if (theta == 0) return 1.0;
    if (theta == T + 1) return 0.0;
    if (alpha == 0.0) return 0.0; // only the all-fail outcome has mass
    if (alpha == 1.0) return 1.0; // all T samples succeed
    return tail_from(alpha, theta, T);
}

std::vector<double> acceptance_profile(double alpha, int T) {
    check_inputs(alpha, 0, T);
    std::vector<double> profile(T + 2, 0.0);
    profile[0] = 1.0;
    profile[T + 1] = 0.0;
    if (alpha == 0.0) return profile;
    if (alpha == 1.0) {
        for (int t = 1; t <= T; ++t) profile[t] = 1.0;
        return profile;
    }
    const double la = std::log(alpha);
    const double l1a = std::log1p(-alpha);
    double acc = 0.0;
    for (int i = T; i >= 1; --i) {
        acc += std::exp(log_choose(T, i) + i * la + (T - i) * l1a);
        profile[i] = acc < 1.0 ? acc : 1.0;
    }
    return profile;
}

} // namespace mmt
