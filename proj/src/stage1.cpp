#include "mmt/stage1.hpp"

#include <algorithm>
#include <cmath>

#include "mmt/common.hpp"
#include "mmt/stage2.hpp"
#include "mmt/stage3.hpp"
#include "mmt/verification.hpp"

namespace mmt {

namespace {

// Seller payoff of the mixed-equilibrium sale of model n at price p.
double mixed_sale_payoff(double p, double c1, double cn, double dlow, double dhigh) {
    const double den = (1.0 - dlow) * (p - c1) - (1.0 - dhigh) * (p - cn);
    return (p - cn) * (dhigh - dlow) * (p - c1) / den;
}

std::vector<double> deterrent_price_base(const UnpricedMarket& market,
                                         const std::vector<std::optional<double>>& bounds) {
    // A price strictly above the model's own bound deters the buyer; where no
    // bound exists any price does, so scale off the utility/cost level.
    std::vector<double> prices(market.size());
    for (int n = 1; n <= market.size(); ++n) {
        const auto& b = bounds[n - 1];
        const double scale = std::max(market.model(n).utility, market.model(n).cost);
        prices[n - 1] = b ? std::max(*b * 1.10, *b + 1e-6 * std::max(1.0, scale))
                          : 1.10 * std::max(1.0, scale);
    }
    return prices;
}

} // namespace

std::optional<double> price_upper_bound(const UnpricedMarket& market, int n, double delta_low,
                                        double delta_high) {
    const double u1 = market.model(1).utility;
    if (n == 1) return u1;
    const double un = market.model(n).utility;
    if (!(delta_high > delta_low))
        throw InvalidInputError("price_upper_bound: needs delta_high > delta_low for n > 1");
    const double gap = un - u1;
    const double disc = gap * gap / 4.0 - gap * market.verification_cost() / (delta_high - delta_low);
    if (disc < 0.0) return std::nullopt;
    return (un + u1) / 2.0 + std::sqrt(disc);
}

std::optional<BoundCandidate> consistent_price_bound(const UnpricedMarket& market, int n) {
    if (n < 2 || n > market.size())
        throw InvalidInputError("consistent_price_bound: defined for n >= 2");
    const UnpricedModel& low = market.model(1);
    const UnpricedModel& high = market.model(n);
    if (low.alpha <= 0.0 || low.alpha >= 1.0 || high.alpha <= 0.0 || high.alpha >= 1.0)
        return std::nullopt;
    if (!(high.utility > low.utility)) return std::nullopt;

    const int T = market.test_size();
    const std::vector<double> prof1 = acceptance_profile(low.alpha, T);
    const std::vector<double> profn = acceptance_profile(high.alpha, T);

    // Reference price vector to host the candidate; only p_n matters for the
    // criterion of order n.
    std::vector<double> probe(market.size());
    for (int m = 1; m <= market.size(); ++m) probe[m - 1] = market.model(m).utility;

    std::optional<BoundCandidate> best;
    for (int theta = 1; theta <= T; ++theta) {
        const double dlow = prof1[theta];
        const double dhigh = profn[theta];
        if (!(dhigh > dlow)) continue;
        const std::optional<double> pbar = price_upper_bound(market, n, dlow, dhigh);
        if (!pbar) continue;
        if (*pbar <= low.utility + kEps || *pbar >= high.utility - kEps) continue;

        // Self-consistency: the criterion recomputed at this price must be
        // the theta that produced the price.
        std::vector<double> prices = probe;
        prices[n - 1] = *pbar;
        for (int m = n + 1; m <= market.size(); ++m)
            prices[m - 1] = std::max(prices[m - 1], *pbar);
        for (int m = n - 1; m >= 1; --m)
            prices[m - 1] = std::min(prices[m - 1], prices[m]);
        const MarketConfig probe_config = market.with_prices(prices);
        const std::optional<int> recomputed = equilibrium_criterion(probe_config, n);
        if (!recomputed || *recomputed != theta) continue;

        BoundCandidate cand;
        cand.model_index = n;
        cand.theta_star = theta;
        cand.delta_low = dlow;
        cand.delta_high = dhigh;
        cand.price = *pbar;
        cand.effective = dlow * (*pbar - low.cost) < dhigh * (*pbar - high.cost);
        cand.sale_payoff = mixed_sale_payoff(*pbar, low.cost, high.cost, dlow, dhigh);
        if (!best || cand.price > best->price) best = cand;
    }
    return best;
}

namespace {

struct PsiSystem {
    std::vector<std::optional<BoundCandidate>> candidates; // index n-1, n >= 2 entries used
    std::vector<bool> qualifies;                           // clauses (a)+(b) hold and payoff >= 0 denominator sane
    int argmax = 0;                                        // qualifying index with the largest sale payoff
    double argmax_payoff = 0.0;
};

PsiSystem evaluate_psi_system(const UnpricedMarket& market) {
    PsiSystem sys;
    const int N = market.size();
    sys.candidates.assign(N, std::nullopt);
    sys.qualifies.assign(N, false);
    const double u1 = market.model(1).utility;
    const double ct = market.verification_cost();
    for (int n = 2; n <= N; ++n) {
        auto cand = consistent_price_bound(market, n);
        if (!cand) continue;
        sys.candidates[n - 1] = cand;
        const double gap = market.model(n).utility - u1;
        const bool ir = 4.0 * ct <= (cand->delta_high - cand->delta_low) * gap + kEps;
        if (ir && cand->effective) sys.qualifies[n - 1] = true;
    }
    for (int n = 2; n <= N; ++n) {
        if (!sys.qualifies[n - 1]) continue;
        const double payoff = sys.candidates[n - 1]->sale_payoff;
        if (sys.argmax == 0 || payoff > sys.argmax_payoff + kEps) {
            sys.argmax = n;
            sys.argmax_payoff = payoff;
        }
    }
    return sys;
}

} // namespace

bool psi_condition(const UnpricedMarket& market, int n) {
    if (n < 1 || n > market.size()) throw InvalidInputError("psi_condition: index out of range");
    const PsiSystem sys = evaluate_psi_system(market);
    const double lowest_margin = market.model(1).utility - market.model(1).cost;
    if (n == 1) {
        if (lowest_margin < 0.0) return false;
        return sys.argmax == 0 || sys.argmax_payoff < lowest_margin;
    }
    if (!sys.qualifies[n - 1] || sys.argmax != n) return false;
    const double payoff = sys.candidates[n - 1]->sale_payoff;
    return payoff >= 0.0 && lowest_margin <= payoff;
}

PricingScheme optimal_pricing(const UnpricedMarket& market) {
    const int N = market.size();
    const PsiSystem sys = evaluate_psi_system(market);
    const double lowest_margin = market.model(1).utility - market.model(1).cost;

    int target = 0;
    if (sys.argmax != 0 && sys.argmax_payoff >= 0.0 && lowest_margin <= sys.argmax_payoff) {
        target = sys.argmax;
    } else if (lowest_margin >= 0.0) {
        target = 1;
    }

    std::vector<std::optional<double>> bounds(N);
    bounds[0] = market.model(1).utility;
    for (int n = 2; n <= N; ++n)
        if (sys.candidates[n - 1]) bounds[n - 1] = sys.candidates[n - 1]->price;

    PricingScheme scheme;
    scheme.benchmark_payoff = benchmark_pricing(market).seller_payoff;
    scheme.prices = deterrent_price_base(market, bounds);

    if (target > 0) {
        const double target_price =
            target == 1 ? market.model(1).utility : sys.candidates[target - 1]->price;
        scheme.target_model = target;
        scheme.prices[target - 1] = target_price;
        // Models above the target only need to stay above their own bound
        // and keep the vector nondecreasing.
        for (int m = target + 1; m <= N; ++m)
            scheme.prices[m - 1] = std::max(scheme.prices[m - 1], target_price);
        // Models below the target must stay above their own bound without
        // exceeding the target's price.
        for (int m = target - 1; m >= 1; --m) {
            const double ceiling = scheme.prices[m]; // price of model m+1
            if (scheme.prices[m - 1] > ceiling) {
                const double floor = bounds[m - 1] ? *bounds[m - 1] : 0.0;
                if (floor >= ceiling - kEps)
                    throw ConstructionError(
                        "optimal_pricing: cannot exceed the bound of model " + std::to_string(m) +
                        " while keeping prices nondecreasing");
                scheme.prices[m - 1] = 0.5 * (floor + ceiling);
            }
        }
        scheme.seller_payoff = target == 1 ? lowest_margin : sys.argmax_payoff;
    }

    // Final monotonicity repair for the no-sale tail (never touches the
    // target price: only raises prices above it).
    for (int m = 1; m < N; ++m)
        scheme.prices[m] = std::max(scheme.prices[m], scheme.prices[m - 1]);
    return scheme;
}

PricingScheme benchmark_pricing(const UnpricedMarket& market) {
    PricingScheme scheme;
    scheme.prices.resize(market.size());
    int best = 0;
    double best_margin = 0.0;
    for (int n = 1; n <= market.size(); ++n) {
        scheme.prices[n - 1] = market.model(n).utility;
        const double margin = market.model(n).utility - market.model(n).cost;
        if (margin > best_margin + kEps) {
            best = n;
            best_margin = margin;
        }
    }
    scheme.target_model = best;
    scheme.seller_payoff = best == 0 ? 0.0 : best_margin;
    scheme.benchmark_payoff = scheme.seller_payoff;
    return scheme;
}

} // namespace mmt
