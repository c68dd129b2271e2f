#pragma once

#include <optional>
#include <vector>

#include "mmt/market.hpp"

namespace mmt {

// A complete price vector with the model it aims to sell and the resulting
// payoffs. target_model = 0 means no sale is intended.
struct PricingScheme {
    std::vector<double> prices;
    int target_model = 0;
    double seller_payoff = 0.0;
    double benchmark_payoff = 0.0;
};

struct PriceBound {
    int model_index = 0;
    std::optional<double> bound;
};

// Largest price for model n at which the buyer's participation constraint
// still holds, for given equilibrium acceptance probabilities. Returns
// nullopt when the discriminant is negative (no feasible price exists).
// For n = 1 the bound is simply U_1.
std::optional<double> price_upper_bound(const UnpricedMarket& market, int n, double delta_low,
                                        double delta_high);

// Per-candidate outcome of the self-consistent bound scan: the criterion,
// acceptance probabilities, price bound and mixed-sale seller payoff that
// are jointly consistent for selling model n at its bound.
struct BoundCandidate {
    int model_index = 0;
    int theta_star = 0;
    double delta_low = 0.0;
    double delta_high = 0.0;
    double price = 0.0;
    double sale_payoff = 0.0; // seller payoff of the mixed sale at this price
    bool effective = false;   // deception-deterrence clause at the bound
};

// Scans criteria for a theta whose implied price bound reproduces the same
// equilibrium criterion; the seller-best such bound wins. nullopt when no
// self-consistent bound exists for model n.
std::optional<BoundCandidate> consistent_price_bound(const UnpricedMarket& market, int n);

// The full condition system deciding which model the optimal scheme sells.
// At most one index can satisfy it; the audit of that claim lives in the
// test suite.
bool psi_condition(const UnpricedMarket& market, int n);

PricingScheme optimal_pricing(const UnpricedMarket& market);

// Complete-information benchmark: every price equals the model's utility and
// the seller targets the model with the largest utility-cost surplus.
PricingScheme benchmark_pricing(const UnpricedMarket& market);

} // namespace mmt
