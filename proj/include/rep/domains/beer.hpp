#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "rep/client.hpp"
#include "rep/rng.hpp"
#include "rep/types.hpp"

namespace rep::beer {

struct Params {
    int n_stages = 4;
    int shipping_delay = 2;
    int order_delay = 1;
    int initial_inventory = 12;
    int base_demand = 4;
    int shock_round = 4;  // customer demand doubles from this round on
    int shock_demand = 8;
    int demand_noise = 1;  // uniform in [-noise, +noise], seeded
    double holding_cost = 0.5;
    double backlog_cost = 1.0;
    double alpha = 0.5;  // anchor-and-adjust gain on the inventory gap

    double initial_target_inventory = 12.0;
    double initial_adjustment_factor = 1.0;
    double target_min = 4.0, target_max = 16.0;
    double factor_min = 0.2, factor_max = 2.0;

    // Units-to-variable scale for "order" clauses (order units onto
    // ORDER_ADJUSTMENT_FACTOR).
    double order_clause_scale = 0.01;

    int lead_time() const { return shipping_delay + order_delay; }
};

inline constexpr const char* kTargetInventory = "TARGET_INVENTORY";
inline constexpr const char* kAdjustmentFactor = "ORDER_ADJUSTMENT_FACTOR";

CoordinationState initial_state(const Params& p);
UpdaterConfig updater_config(const Params& p, UpdaterKind kind, double eta);

struct StageState {
    int inventory = 0;
    int backlog = 0;
    int on_order = 0;             // ordered upstream, not yet arrived
    std::deque<int> supply_pipe;  // in-transit shipments, front arrives next
};

struct StepResult {
    std::vector<double> stage_costs;
    std::vector<int> shipped;  // index 0 = units served to the customer
};

// Four-stage (retailer .. manufacturer) chain with fixed lead times. Call
// begin_round() once per round, read observations, then step(orders).
class BeerGame {
public:
    BeerGame(Params params, std::uint64_t seed);

    void begin_round();
    int round() const { return round_; }
    int current_demand() const { return current_demand_; }
    int incoming_order(int stage) const { return incoming_orders_.at(stage); }

    Observation observe(int stage) const;
    Signals signals() const { return signals_; }

    StepResult step(const std::vector<int>& orders);

    const StageState& stage(int i) const { return stages_.at(i); }
    int total_backlog() const;
    int total_inventory() const;

    // Conservation accounting.
    long long total_customer_demand() const { return total_demand_; }
    long long total_customer_served() const { return total_served_; }

private:
    Params params_;
    Rng rng_;
    std::vector<StageState> stages_;
    std::vector<std::deque<int>> order_pipes_;  // order_pipes_[i]: stage i -> i+1
    int round_ = 0;
    bool round_open_ = false;
    int current_demand_ = 0;
    double demand_baseline_ = 0.0;  // slow EMA of customer demand
    std::vector<int> incoming_orders_;
    Signals signals_;
    std::vector<int> demand_history_;
    std::vector<int> backlog_history_;
    long long total_demand_ = 0;
    long long total_served_ = 0;
};

enum class Mode { rep, a2a };

// Base-stock policy shared by both protocol variants; the variants differ
// only in what sensitivity they emit (theta updating differs through the
// client's updater configuration).
class BeerPolicy : public AgentPolicy {
public:
    BeerPolicy(int stage, Params params, Mode mode, SensitivityKind style);

    // order = max(0, demand + alpha * F * (T - inventory_position))
    static int decision_core(const CoordinationState& state, const Observation& obs,
                             const Params& params);

    std::pair<Decision, Sensitivity> decide(const CoordinationState& state,
                                            const Observation& obs) override;

private:
    std::vector<TextualClause> sensitivity_rules(const CoordinationState& state,
                                                 const Observation& obs);

    int stage_;
    Params params_;
    Mode mode_;
    SensitivityKind style_;
    double demand_ema_;
};

}  // namespace rep::beer
