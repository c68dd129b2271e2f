#include "mmt/stage3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmt/common.hpp"
#include "mmt/verification.hpp"

namespace mmt {

std::string to_string(Regime regime) {
    switch (regime) {
    case Regime::OrderedLowest: return "ordered-lowest";
    case Regime::PriceExceedsUtility: return "price-exceeds-utility";
    case Regime::Uneconomical: return "uneconomical";
    case Regime::EconomicalIneffective: return "economical-ineffective";
    case Regime::EconomicalEffective: return "economical-effective";
    }
    return "unknown";
}

std::vector<int> reduced_delivery_set(const MarketConfig& config, int r) {
    if (r < 1 || r > config.size())
        throw InvalidInputError("reduced_delivery_set: order must reference a model");
    if (r == 1) return {1};
    return {1, r};
}

namespace detail {

GammaContext::GammaContext(double a1, double ar, int T_) : alpha1(a1), alphar(ar), T(T_) {
    prof1 = acceptance_profile(alpha1, T);
    profr = acceptance_profile(alphar, T);
    lchoose.resize(T + 1);
    for (int i = 0; i <= T; ++i)
        lchoose[i] = std::lgamma(T + 1.0) - std::lgamma(i + 1.0) - std::lgamma(T - i + 1.0);
    if (alpha1 > 0.0 && alpha1 < 1.0) log_rho1 = std::log(alpha1) - std::log1p(-alpha1);
    if (alphar > 0.0 && alphar < 1.0) log_rhor = std::log(alphar) - std::log1p(-alphar);
}

namespace {

// Clause (a): verification at theta is economical against deception.
bool clause_economical(const GammaEconomy& e, double delta_low) {
    return e.ct < (e.p - e.u1) * (1.0 - delta_low);
}

// Clause (b): at theta, honest delivery beats deception for the seller.
bool clause_effective(const GammaEconomy& e, double delta_low, double delta_high) {
    return (e.p - e.c1) * delta_low < (e.p - e.cr) * delta_high;
}

double logsumexp2(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Clause (c) compares a positive pair of terms against the (negative) theta
// partial sum. alpha^(-theta) explodes long before theta reaches desk-scale
// T, so both groups are accumulated in log space and compared by magnitude.
bool clause_criterion_optimal(const GammaContext& ctx, const GammaEconomy& e, int theta) {
    if (theta == 0) return false; // empty sum leaves only the positive terms
    const double drho = ctx.log_rhor - ctx.log_rho1;
    if (!(drho > 0.0)) return false; // equal qualities never satisfy (b) anyway

    const double log_pos_r = -theta * std::log(ctx.alphar) +
                             (theta - 1.0) * std::log1p(-ctx.alphar) - std::log(e.ur - e.p);
    const double log_pos_1 = -theta * std::log(ctx.alpha1) +
                             (theta - 1.0) * std::log1p(-ctx.alpha1) - std::log(e.p - e.u1);
    const double log_pos = logsumexp2(log_pos_r, log_pos_1);

    // Negative group: sum_{i < theta} C(T,i) (rho_1^(i-theta) - rho_r^(i-theta)) / C_T,
    // each term positive once its sign is pulled out. The largest exponent is
    // at i = theta-1, so accumulate relative to it.
    const double log_ct = std::log(e.ct);
    double max_log = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < theta; ++i) {
        const double l = ctx.lchoose[i] + (i - theta) * ctx.log_rho1 +
                         std::log1p(-std::exp(-(theta - i) * drho)) - log_ct;
        if (l > max_log) max_log = l;
    }
    double sum = 0.0;
    for (int i = 0; i < theta; ++i) {
        const double l = ctx.lchoose[i] + (i - theta) * ctx.log_rho1 +
                         std::log1p(-std::exp(-(theta - i) * drho)) - log_ct;
        sum += std::exp(l - max_log);
    }
    const double log_neg = max_log + std::log(sum);
    return log_pos <= log_neg;
}

} // namespace

bool gamma_at(const GammaContext& ctx, const GammaEconomy& e, int theta) {
    if (!clause_economical(e, ctx.prof1[theta])) return false;
    if (!clause_effective(e, ctx.prof1[theta], ctx.profr[theta])) return false;
    return clause_criterion_optimal(ctx, e, theta);
}

std::optional<int> criterion_scan(const GammaContext& ctx, const GammaEconomy& e) {
    for (int theta = 0; theta <= ctx.T + 1; ++theta) {
        if (gamma_at(ctx, e, theta)) return theta;
    }
    return std::nullopt;
}

} // namespace detail

namespace {

detail::GammaEconomy make_economy(const MarketConfig& config, int r) {
    const ModelSpec& low = config.model(1);
    const ModelSpec& high = config.model(r);
    return {low.cost, high.cost, low.utility, high.utility, high.price,
            config.verification_cost()};
}

void check_gamma_preconditions(const MarketConfig& config, int r) {
    if (r < 2 || r > config.size())
        throw InvalidInputError("gamma_condition: requires an order above the lowest model");
    const ModelSpec& low = config.model(1);
    const ModelSpec& high = config.model(r);
    if (low.alpha <= 0.0 || low.alpha >= 1.0 || high.alpha <= 0.0 || high.alpha >= 1.0)
        throw SingularityError("gamma_condition: qualities must lie strictly inside (0,1)");
    if (high.price >= high.utility - kEps)
        throw SingularityError("gamma_condition: requires p_r < U_r");
    if (high.price <= low.utility + kEps)
        throw SingularityError("gamma_condition: requires p_r > U_1");
}

} // namespace

bool gamma_condition(const MarketConfig& config, int r, int theta) {
    if (theta < 0 || theta > config.test_size() + 1)
        throw InvalidInputError("gamma_condition: theta out of [0, T+1]");
    check_gamma_preconditions(config, r);
    const detail::GammaContext ctx(config.model(1).alpha, config.model(r).alpha,
                                   config.test_size());
    return detail::gamma_at(ctx, make_economy(config, r), theta);
}

std::optional<int> equilibrium_criterion(const MarketConfig& config, int r) {
    check_gamma_preconditions(config, r);
    const detail::GammaContext ctx(config.model(1).alpha, config.model(r).alpha,
                                   config.test_size());
    return detail::criterion_scan(ctx, make_economy(config, r));
}

Regime classify_regime(const MarketConfig& config, int r) {
    if (r < 1 || r > config.size())
        throw InvalidInputError("classify_regime: order must reference a model");
    if (r == 1) return Regime::OrderedLowest;
    const detail::GammaEconomy e = make_economy(config, r);
    if (e.p >= e.ur) return Regime::PriceExceedsUtility;
    if (e.ct >= e.p - e.u1) return Regime::Uneconomical;
    const int T = config.test_size();
    const std::vector<double> prof1 = acceptance_profile(config.model(1).alpha, T);
    const std::vector<double> profr = acceptance_profile(config.model(r).alpha, T);
    for (int theta = 0; theta <= T + 1; ++theta) {
        if (e.ct < (e.p - e.u1) * (1.0 - prof1[theta]) &&
            (e.p - e.c1) * prof1[theta] < (e.p - e.cr) * profr[theta])
            return Regime::EconomicalEffective;
    }
    return Regime::EconomicalIneffective;
}

Stage3Equilibrium solve_stage3(const MarketConfig& config, int r) {
    const Regime regime = classify_regime(config, r);
    Stage3Equilibrium eq;
    switch (regime) {
    case Regime::OrderedLowest:
    case Regime::Uneconomical:
        eq.kind = Stage3Equilibrium::Kind::Pure;
        eq.delivery = 1;
        eq.verification = Verify::NotVerify;
        return eq;
    case Regime::PriceExceedsUtility: {
        // Off the equilibrium path of the outer game. Against guaranteed
        // deception the buyer prefers NV when verification is dearer than the
        // price premium, and reject-all verification otherwise.
        const detail::GammaEconomy e = make_economy(config, r);
        eq.kind = Stage3Equilibrium::Kind::Pure;
        eq.delivery = 1;
        if (e.ct >= e.p - e.u1) {
            eq.verification = Verify::NotVerify;
        } else {
            eq.verification = Verify::Verify;
            eq.criterion = config.test_size() + 1;
        }
        return eq;
    }
    case Regime::EconomicalIneffective:
        eq.kind = Stage3Equilibrium::Kind::Pure;
        eq.delivery = 1;
        eq.verification = Verify::Verify;
        eq.criterion = config.test_size() + 1;
        return eq;
    case Regime::EconomicalEffective:
        break;
    }

    check_gamma_preconditions(config, r);
    const detail::GammaContext ctx(config.model(1).alpha, config.model(r).alpha,
                                   config.test_size());
    const detail::GammaEconomy e = make_economy(config, r);
    const std::optional<int> theta = detail::criterion_scan(ctx, e);
    if (!theta)
        throw ConsistencyError("solve_stage3: effective regime but no criterion satisfies the "
                               "gamma condition for order " + std::to_string(r));
    const double dlow = ctx.prof1[*theta];
    const double dhigh = ctx.profr[*theta];

    const double q = ((1.0 - dhigh) * (e.ur - e.p) + e.ct) /
                     ((1.0 - dlow) * (e.p - e.u1) + (1.0 - dhigh) * (e.ur - e.p));
    const double w = (e.cr - e.c1) /
                     ((1.0 - dlow) * (e.p - e.c1) - (1.0 - dhigh) * (e.p - e.cr));
    if (!(q >= -kEps && q <= 1.0 + kEps && w >= -kEps && w <= 1.0 + kEps))
        throw ConsistencyError("solve_stage3: mixed probabilities left [0,1]; regime "
                               "misclassification for order " + std::to_string(r));

    eq.kind = Stage3Equilibrium::Kind::Mixed;
    eq.prob_deliver_low = std::clamp(q, 0.0, 1.0);
    eq.prob_verify = std::clamp(w, 0.0, 1.0);
    eq.theta_star = *theta;
    eq.delta_low = dlow;
    eq.delta_high = dhigh;
    return eq;
}

StagePayoffs equilibrium_payoffs(const MarketConfig& config, int r, const Stage3Equilibrium& eq) {
    if (eq.kind == Stage3Equilibrium::Kind::Pure) {
        StrategyProfile profile;
        if (eq.verification == Verify::Verify)
            profile = StrategyProfile::verified(r, eq.delivery, *eq.criterion);
        else
            profile = StrategyProfile::unverified(r, eq.delivery);
        return {buyer_payoff(config, profile), seller_payoff(config, profile)};
    }
    const double q = eq.prob_deliver_low;
    const double w = eq.prob_verify;
    StagePayoffs out;
    const int deliveries[2] = {1, r};
    const double sprob[2] = {q, 1.0 - q};
    for (int i = 0; i < 2; ++i) {
        const StrategyProfile nv = StrategyProfile::unverified(r, deliveries[i]);
        const StrategyProfile vf = StrategyProfile::verified(r, deliveries[i], eq.theta_star);
        out.buyer += sprob[i] * ((1.0 - w) * buyer_payoff(config, nv) + w * buyer_payoff(config, vf));
        out.seller += sprob[i] * ((1.0 - w) * seller_payoff(config, nv) + w * seller_payoff(config, vf));
    }
    return out;
}

} // namespace mmt
