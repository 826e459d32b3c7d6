#include "rep/domains/beer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rep/errors.hpp"

namespace rep::beer {

CoordinationState initial_state(const Params& p) {
    return CoordinationState(
        {{kTargetInventory, p.initial_target_inventory},
         {kAdjustmentFactor, p.initial_adjustment_factor}},
        {{kTargetInventory, {p.target_min, p.target_max}},
         {kAdjustmentFactor, {p.factor_min, p.factor_max}}});
}

UpdaterConfig updater_config(const Params& p, UpdaterKind kind, double eta) {
    UpdaterConfig cfg;
    cfg.kind = kind;
    cfg.step_size = eta;
    cfg.clause_bindings["target_inventory"] = {kTargetInventory, 1.0};
    cfg.clause_bindings["order"] = {kAdjustmentFactor, p.order_clause_scale};
    return cfg;
}

BeerGame::BeerGame(Params params, std::uint64_t seed)
    : params_(params), rng_(seed), demand_baseline_(params.base_demand) {
    if (params_.n_stages < 2) throw ConfigError("beer: need at least 2 stages");
    stages_.resize(params_.n_stages);
    order_pipes_.resize(params_.n_stages - 1);
    for (int i = 0; i < params_.n_stages; ++i) {
        StageState& s = stages_[i];
        s.inventory = params_.initial_inventory;
        const bool is_top = (i == params_.n_stages - 1);
        const int pipe_len =
            params_.shipping_delay + (is_top ? params_.order_delay : 0);
        s.supply_pipe.assign(pipe_len, params_.base_demand);
        s.on_order = pipe_len * params_.base_demand;
        if (!is_top) {
            order_pipes_[i].assign(params_.order_delay, params_.base_demand);
            s.on_order += params_.order_delay * params_.base_demand;
        }
    }
    incoming_orders_.assign(params_.n_stages, 0);
}

void BeerGame::begin_round() {
    if (round_open_) throw ProtocolError("beer: begin_round called twice");
    round_open_ = true;

    // Rounds are reported 1-based; the shock lands on round `shock_round`.
    int demand = round_ + 1 < params_.shock_round ? params_.base_demand
                                                  : params_.shock_demand;
    if (params_.demand_noise > 0)
        demand += static_cast<int>(rng_.uniform_int(-params_.demand_noise, params_.demand_noise));
    current_demand_ = std::max(0, demand);

    incoming_orders_[0] = current_demand_;
    for (int i = 1; i < params_.n_stages; ++i)
        incoming_orders_[i] = order_pipes_[i - 1].front();

    // Published movement flags: customer demand vs its trailing mean, and
    // total chain backlog vs the previous round.
    signals_.clear();
    // Deadband of 2 units against a slow baseline: the +/-1 demand noise
    // alone never trips a flag, while a level shift keeps the flag raised
    // until the baseline catches up.
    if (current_demand_ > demand_baseline_ + 2.0)
        signals_["demand"] = Direction::increase;
    else if (current_demand_ < demand_baseline_ - 2.0)
        signals_["demand"] = Direction::decrease;
    demand_baseline_ = 0.9 * demand_baseline_ + 0.1 * current_demand_;
    if (backlog_history_.size() >= 2) {
        const int prev = backlog_history_[backlog_history_.size() - 1];
        const int prev2 = backlog_history_[backlog_history_.size() - 2];
        if (prev > prev2 + 2) signals_["backlog"] = Direction::increase;
        else if (prev < prev2 - 2) signals_["backlog"] = Direction::decrease;
    }
}

Observation BeerGame::observe(int stage) const {
    if (!round_open_) throw ProtocolError("beer: observe before begin_round");
    const StageState& s = stages_.at(stage);
    Observation obs;
    obs.values["incoming_demand"] = incoming_orders_.at(stage);
    obs.values["inventory"] = s.inventory;
    obs.values["backlog"] = s.backlog;
    obs.values["on_order"] = s.on_order;
    obs.signals = signals_;
    return obs;
}

StepResult BeerGame::step(const std::vector<int>& orders) {
    if (!round_open_) throw ProtocolError("beer: step before begin_round");
    if (static_cast<int>(orders.size()) != params_.n_stages)
        throw ConfigError("beer: wrong order count");
    for (int o : orders)
        if (o < 0) throw ConfigError("beer: negative order");

    const int n = params_.n_stages;

    // Arrivals.
    for (int i = 0; i < n; ++i) {
        const int arrival = stages_[i].supply_pipe.front();
        stages_[i].supply_pipe.pop_front();
        stages_[i].inventory += arrival;
        stages_[i].on_order -= arrival;
    }
    // Consume the order pipes that fed this round's incoming orders.
    for (int i = 0; i + 1 < n; ++i) order_pipes_[i].pop_front();

    // Fulfillment; stage i ships downstream into supply_pipe[i-1].
    StepResult result;
    result.stage_costs.resize(n);
    result.shipped.resize(n);
    for (int i = 0; i < n; ++i) {
        StageState& s = stages_[i];
        const int due = incoming_orders_[i] + s.backlog;
        const int shipped = std::min(s.inventory, due);
        s.inventory -= shipped;
        s.backlog = due - shipped;
        result.shipped[i] = shipped;
        if (i == 0) total_served_ += shipped;
        else stages_[i - 1].supply_pipe.push_back(shipped);
    }
    total_demand_ += current_demand_;

    // Orders placed; the manufacturer's orders feed its own production pipe.
    for (int i = 0; i < n; ++i) {
        if (i + 1 < n) order_pipes_[i].push_back(orders[i]);
        else stages_[i].supply_pipe.push_back(orders[i]);
        stages_[i].on_order += orders[i];
    }

    for (int i = 0; i < n; ++i)
        result.stage_costs[i] = params_.holding_cost * stages_[i].inventory +
                                params_.backlog_cost * stages_[i].backlog;

    demand_history_.push_back(current_demand_);
    backlog_history_.push_back(total_backlog());
    ++round_;
    round_open_ = false;
    return result;
}

int BeerGame::total_backlog() const {
    int total = 0;
    for (const auto& s : stages_) total += s.backlog;
    return total;
}

int BeerGame::total_inventory() const {
    int total = 0;
    for (const auto& s : stages_) total += s.inventory;
    return total;
}

BeerPolicy::BeerPolicy(int stage, Params params, Mode mode, SensitivityKind style)
    : stage_(stage), params_(params), mode_(mode), style_(style),
      demand_ema_(params.base_demand) {}

int BeerPolicy::decision_core(const CoordinationState& state, const Observation& obs,
                              const Params& params) {
    if (!state.has(kTargetInventory) || !state.has(kAdjustmentFactor))
        throw ConfigError("beer policy: missing coordination variables");
    const double demand = obs.values.at("incoming_demand");
    // Net inventory counts backlog as negative stock; the pipeline term is
    // the surplus over the primed level lead*demand, so a chain at target
    // with primed pipelines orders exactly its incoming demand.
    const double net_inventory = obs.values.at("inventory") - obs.values.at("backlog");
    const double pipeline_surplus =
        obs.values.at("on_order") - params.lead_time() * demand;
    const double gap = state.at(kTargetInventory) - net_inventory - pipeline_surplus;
    const double order =
        demand + params.alpha * state.at(kAdjustmentFactor) * gap;
    return std::max(0, static_cast<int>(std::llround(order)));
}

std::vector<TextualClause> BeerPolicy::sensitivity_rules(const CoordinationState& state,
                                                         const Observation& obs) {
    const double demand = obs.values.at("incoming_demand");
    const double dev = demand - demand_ema_;
    demand_ema_ = 0.7 * demand_ema_ + 0.3 * demand;

    std::vector<TextualClause> rules;
    // Proportional pull toward the base-stock level that covers the pipeline
    // at the newly observed demand; the delta vanishes once theta gets there,
    // so the ripple is self-limiting.
    const double desired = 2.0 * demand;  // safety stock sized to throughput
    const double target_delta =
        std::clamp(desired - state.at(kTargetInventory), -24.0, 24.0);
    const double magnitude =
        demand_ema_ > 0 ? std::fabs(dev) / demand_ema_ * 100.0 : 0.0;
    if (dev > 1.5) {
        if (target_delta > 0)
            rules.push_back({"demand", Direction::increase, magnitude,
                             "target_inventory", target_delta});
        // Shift detected: stop amplifying the correction while the chain
        // re-anchors.
        rules.push_back({"demand", Direction::increase, magnitude, "order", -40.0});
    } else if (dev < -1.5 && target_delta < 0) {
        rules.push_back({"demand", Direction::decrease, magnitude,
                         "target_inventory", target_delta});
    }
    // Distress buffer while backlogs build, and a collapse of the adjustment
    // gain in the same breath: refill, then stop amplifying.
    rules.push_back({"backlog", Direction::increase, std::nullopt,
                     "target_inventory", 4.0});
    rules.push_back({"backlog", Direction::increase, std::nullopt, "order", -40.0});
    rules.push_back({"backlog", Direction::decrease, std::nullopt, "order", -40.0});
    return rules;
}

std::pair<Decision, Sensitivity> BeerPolicy::decide(const CoordinationState& state,
                                                    const Observation& obs) {
    const int order = decision_core(state, obs, params_);
    Decision decision;
    decision.payload["order_quantity"] = order;

    if (mode_ == Mode::a2a) {
        // Decision-only baseline: free-form rationale, not aggregatable.
        std::ostringstream text;
        text << "Ordering " << order << " units because inventory is "
             << (obs.values.at("backlog") > 0 ? "backlogged" : "low");
        return {decision, Sensitivity::make_textual({text.str()})};
    }

    const auto rules = sensitivity_rules(state, obs);
    std::vector<std::string> clauses;
    clauses.reserve(rules.size());
    for (const auto& r : rules) clauses.push_back(format_clause(r));
    Sensitivity textual = Sensitivity::make_textual(std::move(clauses));
    if (style_ == SensitivityKind::textual) return {decision, textual};

    // Numeric twin: the same rules, gated by the current signals.
    StubSynthesizer stub;
    const UpdaterConfig cfg = updater_config(params_, UpdaterKind::numerical_grad, 1.0);
    return {decision, textual_to_numeric(textual, state, cfg, stub, obs.signals)};
}

}  // namespace rep::beer
