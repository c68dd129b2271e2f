#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmt/market.hpp"

namespace mmt {

// Verification regimes of the delivery/verification game for a given order.
// Exactly one tag applies per (config, r); boundary ties go to the pure
// regimes (Uneconomical at C_T = p_r - U_1, PriceExceedsUtility at p_r = U_r).
enum class Regime {
    OrderedLowest,
    PriceExceedsUtility,
    Uneconomical,
    EconomicalIneffective,
    EconomicalEffective,
};

std::string to_string(Regime regime);

// Equilibrium of the delivery/verification game. Pure outcomes carry the
// delivered model and the buyer's verification choice; the mixed outcome
// carries the two mixing probabilities and the equilibrium acceptance
// probabilities at theta*.
struct Stage3Equilibrium {
    enum class Kind { Pure, Mixed };
    Kind kind = Kind::Pure;

    // Pure branch.
    int delivery = 1;
    Verify verification = Verify::NotVerify;
    std::optional<int> criterion;

    // Mixed branch.
    double prob_deliver_low = 0.0; // Prob[s* = 1]
    double prob_verify = 0.0;      // Prob[v* = V]
    int theta_star = 0;
    double delta_low = 0.0;  // delta(theta*, 1)
    double delta_high = 0.0; // delta(theta*, r)
};

// Delivery strategies that survive iterated elimination given order r:
// {1} when the lowest model was ordered, {1, r} otherwise.
std::vector<int> reduced_delivery_set(const MarketConfig& config, int r);

// The three-clause necessary condition on the equilibrium criterion theta.
// Requires r >= 2, U_1 < p_r < U_r and qualities strictly inside (0,1);
// violations of those preconditions throw SingularityError.
bool gamma_condition(const MarketConfig& config, int r, int theta);

// Smallest theta in [0, T+1] satisfying the gamma condition, or nullopt.
std::optional<int> equilibrium_criterion(const MarketConfig& config, int r);

Regime classify_regime(const MarketConfig& config, int r);

Stage3Equilibrium solve_stage3(const MarketConfig& config, int r);

// Expected payoffs when both sides play the given equilibrium of the game
// for order r. Computed from the expected-value primitives.
struct StagePayoffs {
    double buyer = 0.0;
    double seller = 0.0;
};
StagePayoffs equilibrium_payoffs(const MarketConfig& config, int r,
                                 const Stage3Equilibrium& eq);

namespace detail {

// Precomputed per-(alpha_1, alpha_r, T) tables shared by the criterion scans.
// Stage-1 sweeps probe many prices against the same pair of models, so the
// binomial work is hoisted out of the per-price path.
struct GammaContext {
    double alpha1 = 0.0, alphar = 0.0;
    int T = 0;
    std::vector<double> prof1, profr; // acceptance profiles, length T+2
    std::vector<double> lchoose;      // log C(T, i), length T+1
    double log_rho1 = 0.0, log_rhor = 0.0;

    GammaContext(double alpha1, double alphar, int T);
};

// Economy-side market scalars of the game for order r.
struct GammaEconomy {
    double c1 = 0.0, cr = 0.0;
    double u1 = 0.0, ur = 0.0;
    double p = 0.0;
    double ct = 0.0;
};

bool gamma_at(const GammaContext& ctx, const GammaEconomy& eco, int theta);
std::optional<int> criterion_scan(const GammaContext& ctx, const GammaEconomy& eco);

} // namespace detail

} // namespace mmt
