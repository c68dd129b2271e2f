#pragma once

#include "mmt/stage3.hpp"

namespace mmt {

// The buyer's order decision together with the payoff accounting.
// payoff_reduction is 0 whenever r_star <= 1.
struct OrderDecision {
    int r_star = 0;
    double payoff = 0.0;
    double payoff_reduction = 0.0;
    double benchmark_payoff = 0.0;
};

// Surplus the buyer loses to verification cost and imperfect verification
// when ordering model n at the mixed equilibrium. Only defined in the
// economical-and-effective regime; otherwise throws NotApplicableError.
double payoff_reduction(const MarketConfig& config, int n);

// Both clauses of the economical-and-effective condition evaluated at the
// equilibrium acceptance probabilities for order n.
bool lambda_ee(const MarketConfig& config, int n);

OrderDecision optimal_order(const MarketConfig& config);

// Complete-information benchmark: order the model with the largest utility
// surplus if it is positive, ties to the smallest index.
OrderDecision benchmark_order(const MarketConfig& config);

} // namespace mmt
