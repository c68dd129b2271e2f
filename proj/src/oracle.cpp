#include "mmt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mmt/rng.hpp"
#include "mmt/verification.hpp"

namespace mmt {

namespace {

// Expected payoffs of pure strategy pairs in the game for order r.
struct PureCell {
    double buyer;
    double seller;
};

PureCell cell(const MarketConfig& config, int r, int s, bool verify, int theta) {
    const StrategyProfile profile = verify ? StrategyProfile::verified(r, s, theta)
                                           : StrategyProfile::unverified(r, s);
    return {buyer_payoff(config, profile), seller_payoff(config, profile)};
}

} // namespace

MixedTradeStrategy to_mixed_strategy(int r, const Stage3Equilibrium& eq) {
    MixedTradeStrategy strategy;
    strategy.order = r;
    if (eq.kind == Stage3Equilibrium::Kind::Mixed) {
        strategy.prob_deliver_low = eq.prob_deliver_low;
        strategy.prob_verify = eq.prob_verify;
        strategy.criterion = eq.theta_star;
    } else {
        strategy.prob_deliver_low = eq.delivery == 1 ? 1.0 : 0.0;
        strategy.prob_verify = eq.verification == Verify::Verify ? 1.0 : 0.0;
        strategy.criterion = eq.criterion.value_or(0);
    }
    return strategy;
}

DeviationReport verify_equilibrium(const MarketConfig& config, int r, const Stage3Equilibrium& eq,
                                   bool full_delivery_set) {
    const MixedTradeStrategy mix = to_mixed_strategy(r, eq);
    const int T = config.test_size();
    const double q = mix.prob_deliver_low;
    const double w = mix.prob_verify;
    const int theta = mix.criterion;

    std::vector<int> deliveries;
    if (full_delivery_set) {
        for (int s = 1; s <= config.size(); ++s) deliveries.push_back(s);
    } else {
        deliveries = reduced_delivery_set(config, r);
    }

    // Buyer candidates against the seller's mix: NV plus every (V, theta').
    auto buyer_value = [&](bool verify, int th) {
        const PureCell low = cell(config, r, 1, verify, th);
        const PureCell high = cell(config, r, r, verify, th);
        return q * low.buyer + (1.0 - q) * high.buyer;
    };
    const double buyer_current =
        (1.0 - w) * buyer_value(false, 0) + w * buyer_value(true, theta);

    double buyer_best = buyer_value(false, 0);
    std::string buyer_best_name = "buyer: NV";
    for (int th = 0; th <= T + 1; ++th) {
        const double v = buyer_value(true, th);
        if (v > buyer_best) {
            buyer_best = v;
            buyer_best_name = "buyer: (V, theta=" + std::to_string(th) + ")";
        }
    }

    // Seller candidates against the buyer's mix.
    auto seller_value = [&](int s) {
        const PureCell nv = cell(config, r, s, false, 0);
        const PureCell vf = cell(config, r, s, true, theta);
        return (1.0 - w) * nv.seller + w * vf.seller;
    };
    const double seller_current = q * seller_value(1) + (1.0 - q) * seller_value(r);

    double seller_best = seller_value(deliveries.front());
    std::string seller_best_name = "seller: s=" + std::to_string(deliveries.front());
    for (int s : deliveries) {
        const double v = seller_value(s);
        if (v > seller_best) {
            seller_best = v;
            seller_best_name = "seller: s=" + std::to_string(s);
        }
    }

    DeviationReport report;
    report.max_buyer_gain = buyer_best - buyer_current;
    report.max_seller_gain = seller_best - seller_current;
    report.worst_deviation =
        report.max_buyer_gain >= report.max_seller_gain ? buyer_best_name : seller_best_name;
    return report;
}

Mixed2x2 solve_2x2_by_indifference(const Bimatrix2x2& g) {
    // Reject inputs with a pure equilibrium: cell (i,j) is one if the row
    // payoff is maximal in its column and the column payoff in its row.
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const bool row_best = g[i][j].first >= g[1 - i][j].first;
            const bool col_best = g[i][j].second >= g[i][1 - j].second;
            if (row_best && col_best)
                throw InvalidInputError("solve_2x2_by_indifference: game has a pure equilibrium");
        }
    }
    // Column mix (prob of column 1) making the row player indifferent.
    const double row_den = g[0][0].first - g[0][1].first - g[1][0].first + g[1][1].first;
    // Row mix (prob of row 0) making the column player indifferent.
    const double col_den = g[0][0].second - g[1][0].second - g[0][1].second + g[1][1].second;
    if (std::fabs(row_den) < 1e-300 || std::fabs(col_den) < 1e-300)
        throw ConsistencyError("solve_2x2_by_indifference: degenerate payoff matrix");
    Mixed2x2 out;
    out.col_second = (g[0][0].first - g[1][0].first) / row_den;
    out.row_first = (g[1][1].second - g[1][0].second) / col_den;
    if (out.col_second < -kEps || out.col_second > 1.0 + kEps || out.row_first < -kEps ||
        out.row_first > 1.0 + kEps)
        throw ConsistencyError("solve_2x2_by_indifference: mixing probabilities left [0,1]");
    out.col_second = std::clamp(out.col_second, 0.0, 1.0);
    out.row_first = std::clamp(out.row_first, 0.0, 1.0);
    return out;
}

namespace {

constexpr std::uint64_t kBatch = 1 << 14;

struct BatchMoments {
    double sum_b = 0.0, sumsq_b = 0.0;
    double sum_s = 0.0, sumsq_s = 0.0;
};

McEstimate finalize(double sum, double sumsq, std::uint64_t n, std::uint64_t seed) {
    McEstimate est;
    est.samples = n;
    est.seed = seed;
    est.mean = sum / static_cast<double>(n);
    const double var =
        std::max(0.0, (sumsq - sum * sum / static_cast<double>(n)) / std::max<double>(1.0, n - 1));
    est.std_error = std::sqrt(var / static_cast<double>(n));
    return est;
}

} // namespace

std::pair<McEstimate, McEstimate> simulate_trade(const MarketConfig& config,
                                                 const MixedTradeStrategy& strategy,
                                                 std::uint64_t samples, std::uint64_t seed,
                                                 Exec exec) {
    if (samples < 1) throw InvalidInputError("simulate_trade: needs at least one sample");
    const int r = strategy.order;
    if (r < 1 || r > config.size())
        throw InvalidInputError("simulate_trade: order out of range");
    if (strategy.prob_deliver_low < 0.0 || strategy.prob_deliver_low > 1.0 ||
        strategy.prob_verify < 0.0 || strategy.prob_verify > 1.0)
        throw InvalidInputError("simulate_trade: probabilities must lie in [0,1]");
    const int T = config.test_size();
    if (strategy.criterion < 0 || strategy.criterion > T + 1)
        throw InvalidInputError("simulate_trade: criterion out of [0, T+1]");

    const double p = config.model(r).price;
    const double ct = config.verification_cost();
    const int n_batches = static_cast<int>((samples + kBatch - 1) / kBatch);
    std::vector<BatchMoments> batches(n_batches);

    // Fixed-size batches with per-batch derived engines keep the result
    // identical across execution policies and thread counts.
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (int b = 0; b < n_batches; ++b) {
        std::mt19937_64 rng = make_engine(seed, static_cast<std::uint64_t>(b));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBatch;
        const std::uint64_t hi = std::min(samples, lo + kBatch);
        BatchMoments m;
        for (std::uint64_t k = lo; k < hi; ++k) {
            const int s = unit(rng) < strategy.prob_deliver_low ? 1 : r;
            const bool verify = unit(rng) < strategy.prob_verify;
            bool accepted = true;
            if (verify) {
                std::binomial_distribution<int> passes(T, config.model(s).alpha);
                accepted = passes(rng) >= strategy.criterion;
            }
            double payoff_b = verify ? -ct : 0.0;
            double payoff_s = 0.0;
            if (accepted) {
                payoff_b += config.model(s).utility - p;
                payoff_s += p - config.model(s).cost;
            }
            m.sum_b += payoff_b;
            m.sumsq_b += payoff_b * payoff_b;
            m.sum_s += payoff_s;
            m.sumsq_s += payoff_s * payoff_s;
        }
        batches[b] = m;
    }

    BatchMoments total;
    for (const BatchMoments& m : batches) {
        total.sum_b += m.sum_b;
        total.sumsq_b += m.sumsq_b;
        total.sum_s += m.sum_s;
        total.sumsq_s += m.sumsq_s;
    }
    return {finalize(total.sum_b, total.sumsq_b, samples, seed),
            finalize(total.sum_s, total.sumsq_s, samples, seed)};
}

McEstimate mc_integrate(const UtilityDensity& density,
                        const std::function<double(double, double)>& integrand,
                        std::uint64_t samples, std::uint64_t seed, Exec exec) {
    if (samples < 1) throw InvalidInputError("mc_integrate: needs at least one sample");
    const int n_batches = static_cast<int>((samples + kBatch - 1) / kBatch);
    std::vector<std::pair<double, double>> batches(n_batches);
    bool failed = false;
    std::string failure;

#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (int b = 0; b < n_batches; ++b) {
        if (failed) continue;
        std::mt19937_64 rng = make_engine(seed, static_cast<std::uint64_t>(b));
        const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBatch;
        const std::uint64_t hi = std::min(samples, lo + kBatch);
        double sum = 0.0, sumsq = 0.0;
        try {
            for (std::uint64_t k = lo; k < hi; ++k) {
                const auto [u1, u2] = density.sample(rng);
                const double v = integrand(u1, u2);
                sum += v;
                sumsq += v * v;
            }
        } catch (const Error& e) {
#pragma omp critical
            {
                failed = true;
                failure = e.what();
            }
        }
        batches[b] = {sum, sumsq};
    }
    if (failed) throw EfficiencyError(failure);

    double sum = 0.0, sumsq = 0.0;
    for (const auto& [s, sq] : batches) {
        sum += s;
        sumsq += sq;
    }
    return finalize(sum, sumsq, samples, seed);
}

} // namespace mmt
