#pragma once

#include <optional>
#include <vector>

#include "mmt/common.hpp"
#include "mmt/errors.hpp"

namespace mmt {

// One published model: quality is the per-sample probability that the model
// meets the buyer's criterion on a test draw.
struct ModelSpec {
    int index = 0;        // 1-based
    double alpha = 0.0;   // quality in [0,1]
    double cost = 0.0;    // seller's cost of a sale, > 0
    double utility = 0.0; // buyer's utility if deployed, >= 0
    double price = 0.0;   // published price, >= 0
};

// The published market. Index order carries the quality ordering:
// alpha, utility and price nondecreasing, cost strictly increasing.
// Immutable after construction; every solver relies on the ordering.
class MarketConfig {
public:
    MarketConfig(std::vector<ModelSpec> models, int test_size, double verification_cost);

    int size() const { return static_cast<int>(models_.size()); }
    const ModelSpec& model(int n) const; // 1-based, validated
    const std::vector<ModelSpec>& models() const { return models_; }
    int test_size() const { return test_size_; }
    double verification_cost() const { return verification_cost_; }

private:
    std::vector<ModelSpec> models_;
    int test_size_;
    double verification_cost_;
};

// Market description before Stage-1 prices are chosen.
struct UnpricedModel {
    int index = 0;
    double alpha = 0.0;
    double cost = 0.0;
    double utility = 0.0;
};

class UnpricedMarket {
public:
    UnpricedMarket(std::vector<UnpricedModel> models, int test_size, double verification_cost);

    int size() const { return static_cast<int>(models_.size()); }
    const UnpricedModel& model(int n) const;
    const std::vector<UnpricedModel>& models() const { return models_; }
    int test_size() const { return test_size_; }
    double verification_cost() const { return verification_cost_; }

    MarketConfig with_prices(const std::vector<double>& prices) const;

private:
    std::vector<UnpricedModel> models_;
    int test_size_;
    double verification_cost_;
};

UnpricedMarket strip_prices(const MarketConfig& config);

enum class Verify { NotVerify, Verify, NotApplicable };

// A joint decision point of the trading game. Absent decisions are explicit:
// delivery/criterion use empty optionals, verification uses NotApplicable.
struct StrategyProfile {
    int order = 0;                      // 0 = no order, else model index
    std::optional<int> delivery;        // model index
    Verify verification = Verify::NotApplicable;
    std::optional<int> criterion;       // theta in [0, T+1]

    static StrategyProfile no_order();
    static StrategyProfile unverified(int order, int delivery);
    static StrategyProfile verified(int order, int delivery, int criterion);
};

// Throws InvalidInputError if the profile violates its structural invariants
// or references a model outside the market.
void validate_profile(const MarketConfig& config, const StrategyProfile& profile);

// Expected-value primitives of a single trade.
double expected_utility(const MarketConfig& config, const StrategyProfile& profile);
double expected_payment(const MarketConfig& config, const StrategyProfile& profile);
double expected_model_cost(const MarketConfig& config, const StrategyProfile& profile);

double buyer_payoff(const MarketConfig& config, const StrategyProfile& profile);
double seller_payoff(const MarketConfig& config, const StrategyProfile& profile);

} // namespace mmt
