#include "mmt/stage2.hpp"

#include <cmath>

#include "mmt/common.hpp"
#include "mmt/verification.hpp"

namespace mmt {

namespace {

struct MixedPoint {
    int theta = 0;
    double delta_low = 0.0;
    double delta_high = 0.0;
};

// Equilibrium acceptance probabilities for order n, when the mixed
// equilibrium exists.
std::optional<MixedPoint> mixed_point(const MarketConfig& config, int n) {
    if (classify_regime(config, n) != Regime::EconomicalEffective) return std::nullopt;
    const std::optional<int> theta = equilibrium_criterion(config, n);
    if (!theta) return std::nullopt;
    const int T = config.test_size();
    return MixedPoint{*theta, acceptance_probability(config.model(1).alpha, *theta, T),
                      acceptance_probability(config.model(n).alpha, *theta, T)};
}

double reduction_formula(double u1, double un, double pn, double ct, double dlow, double dhigh) {
    const double num = (un - u1) * ct + (1.0 - dhigh) * (un - u1) * (un - pn);
    const double den = (1.0 - dlow) * (pn - u1) + (1.0 - dhigh) * (un - pn);
    return num / den;
}

} // namespace

double payoff_reduction(const MarketConfig& config, int n) {
    if (n < 2 || n > config.size())
        throw InvalidInputError("payoff_reduction: defined for orders above the lowest model");
    const std::optional<MixedPoint> mp = mixed_point(config, n);
    if (!mp)
        throw NotApplicableError("payoff_reduction: order " + std::to_string(n) +
                                 " is not in the economical-and-effective regime");
    const ModelSpec& low = config.model(1);
    const ModelSpec& high = config.model(n);
    return reduction_formula(low.utility, high.utility, high.price, config.verification_cost(),
                             mp->delta_low, mp->delta_high);
}

bool lambda_ee(const MarketConfig& config, int n) {
    if (n < 2 || n > config.size()) return false;
    const std::optional<MixedPoint> mp = mixed_point(config, n);
    if (!mp) return false;
    const ModelSpec& low = config.model(1);
    const ModelSpec& high = config.model(n);
    const double pn = high.price;
    const bool economical = config.verification_cost() < (1.0 - mp->delta_low) * (pn - low.utility);
    const bool effective =
        mp->delta_low * (pn - low.cost) < mp->delta_high * (pn - high.cost);
    return economical && effective;
}

OrderDecision optimal_order(const MarketConfig& config) {
    const double lowest_surplus = config.model(1).utility - config.model(1).price;

    // Best deception-prone candidate: argmax of the reduced surplus over the
    // orders with economical and effective verification, ties to the
    // smallest index.
    int best_n = 0;
    double best_value = 0.0;
    double best_reduction = 0.0;
    for (int n = 2; n <= config.size(); ++n) {
        if (!lambda_ee(config, n)) continue;
        const double reduction = payoff_reduction(config, n);
        const double value = config.model(n).utility - config.model(n).price - reduction;
        if (best_n == 0 || value > best_value + kEps) {
            best_n = n;
            best_value = value;
            best_reduction = reduction;
        }
    }

    OrderDecision decision;
    decision.benchmark_payoff = benchmark_order(config).payoff;
    if (best_n != 0 && std::max(0.0, lowest_surplus) <= best_value + kEps) {
        decision.r_star = best_n;
        decision.payoff = best_value;
        decision.payoff_reduction = best_reduction;
    } else if (lowest_surplus >= -kEps) {
        decision.r_star = 1;
        decision.payoff = std::max(lowest_surplus, 0.0);
    } else {
        decision.r_star = 0;
        decision.payoff = 0.0;
    }
    return decision;
}

OrderDecision benchmark_order(const MarketConfig& config) {
    int best = 0;
    double best_surplus = 0.0;
    for (int n = 1; n <= config.size(); ++n) {
        const double surplus = config.model(n).utility - config.model(n).price;
        if (surplus > best_surplus + kEps) {
            best = n;
            best_surplus = surplus;
        }
    }
    OrderDecision decision;
    decision.r_star = best;
    decision.payoff = best == 0 ? 0.0 : best_surplus;
    decision.benchmark_payoff = decision.payoff;
    return decision;
}

} // namespace mmt
