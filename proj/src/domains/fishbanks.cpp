#include "rep/domains/fishbanks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rep/errors.hpp"

namespace rep::fishbanks {

CoordinationState initial_state(const Params& p) {
    return CoordinationState({{kSustainableQuota, p.initial_quota}},
                             {{kSustainableQuota, {p.quota_min, p.quota_max}}});
}

UpdaterConfig updater_config(const Params& p, UpdaterKind kind, double eta) {
    UpdaterConfig cfg;
    cfg.kind = kind;
    cfg.step_size = eta;
    cfg.clause_bindings["quota"] = {kSustainableQuota, 1.0};
    cfg.clause_bindings["boats"] = {kSustainableQuota, 1.0};
    (void)p;
    return cfg;
}

Fishbanks::Fishbanks(Params params, std::uint64_t seed) : params_(params) {
    (void)seed;  // environment dynamics are deterministic; seeding is policy-side
    if (params_.n_companies < 2) throw ConfigError("fishbanks: need >= 2 companies");
    if (params_.n_zones < 1) throw ConfigError("fishbanks: need >= 1 zone");
    populations_.assign(params_.n_zones, params_.carrying_capacity);
    profits_.assign(params_.n_companies, 0.0);
    last_catch_per_boat_.assign(params_.n_companies, -1.0);
}

void Fishbanks::begin_season() {
    if (season_open_) throw ProtocolError("fishbanks: begin_season called twice");
    season_open_ = true;

    signals_.clear();
    if (mean_cpb_prev_ >= 0.0 && mean_cpb_prev2_ > 0.0) {
        const double rel = (mean_cpb_prev_ - mean_cpb_prev2_) / mean_cpb_prev2_;
        if (rel < -0.05) signals_["catch_rate"] = Direction::decrease;
        else if (rel > 0.05) signals_["catch_rate"] = Direction::increase;
    }
    if (season_ >= 2) {
        if (last_total_fleet_ > prev_total_fleet_ + 0.5)
            signals_["fleet_total"] = Direction::increase;
        else if (last_total_fleet_ < prev_total_fleet_ - 0.5)
            signals_["fleet_total"] = Direction::decrease;
    }
}

Observation Fishbanks::observe(int company) const {
    if (!season_open_) throw ProtocolError("fishbanks: observe before begin_season");
    Observation obs;
    for (int z = 0; z < params_.n_zones; ++z)
        obs.values["zone_pop_" + std::to_string(z)] = populations_[z];
    obs.values["own_cpb"] = last_catch_per_boat_.at(company);
    obs.values["mean_cpb"] = mean_cpb_prev_;
    obs.values["mean_cpb_prev"] = mean_cpb_prev2_;
    obs.values["fleet_rose"] =
        (season_ >= 1 && last_total_fleet_ > prev_total_fleet_ + 0.5) ? 1.0 : 0.0;
    obs.signals = signals_;
    return obs;
}

SeasonResult Fishbanks::step(const std::vector<std::vector<int>>& deployments) {
    if (!season_open_) throw ProtocolError("fishbanks: step before begin_season");
    if (static_cast<int>(deployments.size()) != params_.n_companies)
        throw ConfigError("fishbanks: wrong company count");

    std::vector<double> zone_boats(params_.n_zones, 0.0);
    std::vector<double> company_boats(params_.n_companies, 0.0);
    for (int c = 0; c < params_.n_companies; ++c) {
        if (static_cast<int>(deployments[c].size()) != params_.n_zones)
            throw ConfigError("fishbanks: wrong zone count");
        for (int z = 0; z < params_.n_zones; ++z) {
            if (deployments[c][z] < 0) throw ConfigError("fishbanks: negative boats");
            zone_boats[z] += deployments[c][z];
            company_boats[c] += deployments[c][z];
        }
    }

    SeasonResult result;
    result.company_catch.assign(params_.n_companies, 0.0);
    result.company_profit.assign(params_.n_companies, 0.0);

    double total_catch = 0.0, total_boats = 0.0;
    for (int z = 0; z < params_.n_zones; ++z) {
        const double pop = populations_[z];
        const double effort_catch = pop * params_.catchability * zone_boats[z];
        const double zone_catch =
            std::min(effort_catch, pop * params_.max_harvest_fraction);
        // Pro-rata apportionment by boats in the zone.
        if (zone_boats[z] > 0.0)
            for (int c = 0; c < params_.n_companies; ++c)
                result.company_catch[c] += zone_catch * deployments[c][z] / zone_boats[z];
        const double growth =
            params_.growth_rate * pop * (1.0 - pop / params_.carrying_capacity);
        populations_[z] = std::max(0.0, pop + growth - zone_catch);
        total_catch += zone_catch;
        total_boats += zone_boats[z];
    }

    for (int c = 0; c < params_.n_companies; ++c) {
        result.company_profit[c] = params_.price * result.company_catch[c] -
                                   params_.cost_per_boat * company_boats[c];
        profits_[c] += result.company_profit[c];
        last_catch_per_boat_[c] =
            company_boats[c] > 0.0 ? result.company_catch[c] / company_boats[c] : 0.0;
    }

    mean_cpb_prev2_ = mean_cpb_prev_;
    mean_cpb_prev_ = total_boats > 0.0 ? total_catch / total_boats : 0.0;
    prev_total_fleet_ = last_total_fleet_;
    last_total_fleet_ = total_boats;
    ++season_;
    season_open_ = false;
    return result;
}

double Fishbanks::sustainability_index() const {
    const double total = std::accumulate(populations_.begin(), populations_.end(), 0.0);
    return total / (params_.carrying_capacity * params_.n_zones);
}

FishbanksPolicy::FishbanksPolicy(int company, Params params, Mode mode,
                                 SensitivityKind style, int desired_jitter)
    : company_(company), params_(params), mode_(mode), style_(style),
      desired_jitter_(desired_jitter) {}

std::vector<int> FishbanksPolicy::decision_core(const CoordinationState& state,
                                                const Observation& obs,
                                                const Params& params,
                                                int desired_jitter) {
    if (!state.has(kSustainableQuota))
        throw ConfigError("fishbanks policy: missing SUSTAINABLE_QUOTA");
    // desired_jitter carries both the per-company variation and the
    // accumulated defensive escalation. The quota cap is where the protocols
    // diverge, purely through theta.
    const int desired = params.base_desired_boats + desired_jitter;
    const int quota = static_cast<int>(std::floor(state.at(kSustainableQuota) + 1e-9));
    const int total = std::clamp(std::min(desired, quota), 0, params.fleet_max);

    // Allocate across zones proportionally to observed populations
    // (largest-remainder rounding).
    std::vector<double> pops(params.n_zones);
    double pop_total = 0.0;
    for (int z = 0; z < params.n_zones; ++z) {
        pops[z] = obs.values.at("zone_pop_" + std::to_string(z));
        pop_total += pops[z];
    }
    std::vector<int> alloc(params.n_zones, 0);
    if (total > 0 && pop_total > 0.0) {
        std::vector<std::pair<double, int>> remainders;
        int assigned = 0;
        for (int z = 0; z < params.n_zones; ++z) {
            const double exact = total * pops[z] / pop_total;
            alloc[z] = static_cast<int>(std::floor(exact));
            assigned += alloc[z];
            remainders.emplace_back(exact - alloc[z], z);
        }
        std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
            return a.first != b.first ? a.first > b.first : a.second < b.second;
        });
        for (int i = 0; i < total - assigned; ++i) alloc[remainders[i].second] += 1;
    }
    return alloc;
}

std::pair<Decision, Sensitivity> FishbanksPolicy::decide(const CoordinationState& state,
                                                         const Observation& obs) {
    // Defensive escalation is part of the shared core: a company ratchets its
    // desired fleet up every season the total fleet grew, and never backs off.
    if (obs.values.at("fleet_rose") > 0.5) escalation_ += params_.escalation_boats;
    const auto alloc = decision_core(state, obs, params_, desired_jitter_ + escalation_);
    Decision decision;
    int total = 0;
    for (int z = 0; z < params_.n_zones; ++z) {
        decision.payload["boats_zone" + std::to_string(z)] = alloc[z];
        total += alloc[z];
    }

    if (mode_ == Mode::a2a) {
        std::ostringstream text;
        text << "Deploying " << total << " boats to stay competitive with the fleet";
        return {decision, Sensitivity::make_textual({text.str()})};
    }

    // Conditional-cooperation sensitivities: push the shared quota down when
    // catch rates degrade, ease it back up on recovery, and offer further
    // restraint if the rest of the fleet shrinks.
    std::vector<TextualClause> rules;
    const double cpb = obs.values.at("mean_cpb");
    const double cpb_prev = obs.values.at("mean_cpb_prev");
    if (cpb >= 0.0 && cpb_prev > 0.0) {
        const double rel = (cpb - cpb_prev) / cpb_prev;
        if (rel < -0.05) {
            const double drop_pct = -rel * 100.0;
            rules.push_back({"catch_rate", Direction::decrease, drop_pct, "quota",
                             -params_.quota_elasticity * drop_pct});
        } else if (rel > 0.05) {
            rules.push_back({"catch_rate", Direction::increase, rel * 100.0, "quota", 0.5});
        }
    }
    rules.push_back({"fleet_total", Direction::decrease, std::nullopt, "boats", -2.0});

    std::vector<std::string> clauses;
    for (const auto& r : rules) clauses.push_back(format_clause(r));
    Sensitivity textual = Sensitivity::make_textual(std::move(clauses));
    if (style_ == SensitivityKind::textual) return {decision, textual};

    StubSynthesizer stub;
    const UpdaterConfig cfg = updater_config(params_, UpdaterKind::numerical_grad, 1.0);
    return {decision, textual_to_numeric(textual, state, cfg, stub, obs.signals)};
}

}  // namespace rep::fishbanks
