#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>

#include "mmt/common.hpp"
#include "mmt/density.hpp"
#include "mmt/stage3.hpp"

namespace mmt {

// Outcome of a brute-force no-deviation audit of an equilibrium. Gains are
// exact payoff differences against the best unilateral deviation; positive
// numbers mean the equilibrium claim failed.
struct DeviationReport {
    double max_buyer_gain = 0.0;
    double max_seller_gain = 0.0;
    std::string worst_deviation;
    double tolerance = kEps;
};

// Enumerates every pure deviation of the delivery/verification game for
// order r: the seller over the reduced delivery set (or all models when
// full_delivery_set), the buyer over NV and (V, theta) for theta in [0,T+1].
// Expected payoffs are closed-form, never sampled.
DeviationReport verify_equilibrium(const MarketConfig& config, int r,
                                   const Stage3Equilibrium& eq,
                                   bool full_delivery_set = false);

// Payoff cell of a 2x2 bimatrix: (row player, column player).
using BimatrixCell = std::pair<double, double>;
using Bimatrix2x2 = std::array<std::array<BimatrixCell, 2>, 2>;

struct Mixed2x2 {
    double row_first = 0.0; // probability on row 0
    double col_second = 0.0; // probability on column 1
};

// Solves the two indifference equations of a 2x2 game with no pure
// equilibrium. Throws InvalidInputError when a pure equilibrium exists and
// ConsistencyError when the matrix is degenerate.
Mixed2x2 solve_2x2_by_indifference(const Bimatrix2x2& game);

// Monte-Carlo estimate with its standard error.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Mixed strategy over the reduced delivery/verification game: the seller
// delivers model 1 with prob_deliver_low (else the ordered model), the buyer
// verifies with prob_verify at the given criterion.
struct MixedTradeStrategy {
    int order = 1;
    double prob_deliver_low = 0.0;
    double prob_verify = 0.0;
    int criterion = 0; // used only when the verify branch is drawn
};

MixedTradeStrategy to_mixed_strategy(int r, const Stage3Equilibrium& eq);

// Simulates trades by drawing delivery, verification and T Bernoulli test
// outcomes per sample. Returns (buyer, seller) estimates; deterministic per
// seed, independent of the execution policy.
std::pair<McEstimate, McEstimate> simulate_trade(const MarketConfig& config,
                                                 const MixedTradeStrategy& strategy,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 Exec exec = Exec::Serial);

// Unbiased Monte-Carlo estimate of the integral of `integrand` against the
// density. Deterministic per seed, independent of the execution policy.
McEstimate mc_integrate(const UtilityDensity& density,
                        const std::function<double(double, double)>& integrand,
                        std::uint64_t samples, std::uint64_t seed, Exec exec = Exec::Serial);

} // namespace mmt
