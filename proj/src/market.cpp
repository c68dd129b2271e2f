#include "mmt/market.hpp"

#include <string>

#include "mmt/verification.hpp"

namespace mmt {

namespace {

void check_common(int n_models, int test_size, double verification_cost) {
    if (n_models < 1) throw InvalidInputError("market: needs at least one model");
    if (test_size < 1) throw InvalidInputError("market: test size T must be >= 1");
    if (!(verification_cost > 0.0))
        throw InvalidInputError("market: verification cost C_T must be > 0");
}

template <typename M>
void check_model(const M& m, int expected_index) {
    const std::string tag = "model " + std::to_string(expected_index) + ": ";
    if (m.index != expected_index) throw InvalidInputError("market: " + tag + "index out of order");
    if (m.alpha < 0.0 || m.alpha > 1.0)
        throw InvalidInputError("market: " + tag + "quality must lie in [0,1]");
    if (!(m.cost > 0.0)) throw InvalidInputError("market: " + tag + "cost must be > 0");
    if (m.utility < 0.0) throw InvalidInputError("market: " + tag + "utility must be >= 0");
}

template <typename M>
void check_ordering(const std::vector<M>& models) {
    for (std::size_t i = 1; i < models.size(); ++i) {
        const auto& lo = models[i - 1];
        const auto& hi = models[i];
        if (lo.alpha > hi.alpha)
            throw InvalidInputError("market: qualities must be nondecreasing in index");
        if (lo.utility > hi.utility)
            throw InvalidInputError("market: utilities must be nondecreasing in index");
        if (!(lo.cost < hi.cost))
            throw InvalidInputError("market: costs must be strictly increasing in index");
    }
}

} // namespace

MarketConfig::MarketConfig(std::vector<ModelSpec> models, int test_size, double verification_cost)
    : models_(std::move(models)), test_size_(test_size), verification_cost_(verification_cost) {
    check_common(static_cast<int>(models_.size()), test_size_, verification_cost_);
    for (std::size_t i = 0; i < models_.size(); ++i) {
        check_model(models_[i], static_cast<int>(i) + 1);
        if (models_[i].price < 0.0)
            throw InvalidInputError("market: prices must be >= 0");
    }
    check_ordering(models_);
    for (std::size_t i = 1; i < models_.size(); ++i) {
        if (models_[i - 1].price > models_[i].price)
            throw InvalidInputError("market: prices must be nondecreasing in index");
    }
}

const ModelSpec& MarketConfig::model(int n) const {
    if (n < 1 || n > size())
        throw InvalidInputError("market: model index " + std::to_string(n) + " out of range");
    return models_[n - 1];
}

UnpricedMarket::UnpricedMarket(std::vector<UnpricedModel> models, int test_size,
                               double verification_cost)
    : models_(std::move(models)), test_size_(test_size), verification_cost_(verification_cost) {
    check_common(static_cast<int>(models_.size()), test_size_, verification_cost_);
    for (std::size_t i = 0; i < models_.size(); ++i)
        check_model(models_[i], static_cast<int>(i) + 1);
    check_ordering(models_);
}

const UnpricedModel& UnpricedMarket::model(int n) const {
    if (n < 1 || n > size())
        throw InvalidInputError("market: model index " + std::to_string(n) + " out of range");
    return models_[n - 1];
}

MarketConfig UnpricedMarket::with_prices(const std::vector<double>& prices) const {
    if (static_cast<int>(prices.size()) != size())
        throw InvalidInputError("with_prices: need one price per model");
    std::vector<ModelSpec> specs;
    specs.reserve(models_.size());
    for (std::size_t i = 0; i < models_.size(); ++i) {
        const auto& m = models_[i];
        specs.push_back({m.index, m.alpha, m.cost, m.utility, prices[i]});
    }
    return MarketConfig(std::move(specs), test_size_, verification_cost_);
}

UnpricedMarket strip_prices(const MarketConfig& config) {
    std::vector<UnpricedModel> models;
    models.reserve(config.size());
    for (const ModelSpec& m : config.models())
        models.push_back({m.index, m.alpha, m.cost, m.utility});
    return UnpricedMarket(std::move(models), config.test_size(), config.verification_cost());
}

StrategyProfile StrategyProfile::no_order() { return StrategyProfile{}; }

StrategyProfile StrategyProfile::unverified(int order, int delivery) {
    StrategyProfile p;
    p.order = order;
    p.delivery = delivery;
    p.verification = Verify::NotVerify;
    return p;
}

StrategyProfile StrategyProfile::verified(int order, int delivery, int criterion) {
    StrategyProfile p;
    p.order = order;
    p.delivery = delivery;
    p.verification = Verify::Verify;
    p.criterion = criterion;
    return p;
}

void validate_profile(const MarketConfig& config, const StrategyProfile& profile) {
    const int N = config.size();
    if (profile.order < 0 || profile.order > N)
        throw InvalidInputError("profile: order out of range");
    if (profile.order == 0) {
        if (profile.delivery || profile.verification != Verify::NotApplicable || profile.criterion)
            throw InvalidInputError("profile: no order implies delivery/verification/criterion NA");
        return;
    }
    if (!profile.delivery || *profile.delivery < 1 || *profile.delivery > N)
        throw InvalidInputError("profile: delivery index out of range");
    switch (profile.verification) {
    case Verify::NotVerify:
        if (profile.criterion)
            throw InvalidInputError("profile: criterion must be NA when not verifying");
        break;
    case Verify::Verify:
        if (!profile.criterion || *profile.criterion < 0 ||
            *profile.criterion > config.test_size() + 1)
            throw InvalidInputError("profile: criterion must lie in [0, T+1] when verifying");
        break;
    case Verify::NotApplicable:
        throw InvalidInputError("profile: verification required once a model is ordered");
    }
}

namespace {

// Shared case split of the three expected-value primitives: zero without an
// order, the raw quantity without verification, the delta-weighted quantity
// with verification.
double expected_value(const MarketConfig& config, const StrategyProfile& profile,
                      double per_trade) {
    if (profile.order == 0) return 0.0;
    if (profile.verification == Verify::NotVerify) return per_trade;
    const double delta = acceptance_probability(config.model(*profile.delivery).alpha,
                                                *profile.criterion, config.test_size());
    return delta * per_trade;
}

} // namespace

double expected_utility(const MarketConfig& config, const StrategyProfile& profile) {
    validate_profile(config, profile);
    if (profile.order == 0) return 0.0;
    return expected_value(config, profile, config.model(*profile.delivery).utility);
}

double expected_payment(const MarketConfig& config, const StrategyProfile& profile) {
    validate_profile(config, profile);
    if (profile.order == 0) return 0.0;
    // The buyer pays the *ordered* price; acceptance follows the *delivered* model.
    return expected_value(config, profile, config.model(profile.order).price);
}

double expected_model_cost(const MarketConfig& config, const StrategyProfile& profile) {
    validate_profile(config, profile);
    if (profile.order == 0) return 0.0;
    return expected_value(config, profile, config.model(*profile.delivery).cost);
}

double buyer_payoff(const MarketConfig& config, const StrategyProfile& profile) {
    const double verification_fee =
        profile.verification == Verify::Verify ? config.verification_cost() : 0.0;
    return expected_utility(config, profile) - expected_payment(config, profile) -
           verification_fee;
}

double seller_payoff(const MarketConfig& config, const StrategyProfile& profile) {
    return expected_payment(config, profile) - expected_model_cost(config, profile);
}

} // namespace mmt
