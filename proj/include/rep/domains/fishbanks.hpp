#pragma once

#include <cstdint>
#include <vector>

#include "rep/client.hpp"
#include "rep/rng.hpp"
#include "rep/types.hpp"

namespace rep::fishbanks {

struct Params {
    int n_companies = 12;
    int n_zones = 3;
    int seasons = 8;
    double growth_rate = 0.3;        // logistic r, per season
    double carrying_capacity = 1000; // K per zone
    double catchability = 0.02;      // q: fraction of zone biomass per boat
    double max_harvest_fraction = 0.5;
    double price = 15.0;
    double cost_per_boat = 60.0;
    int fleet_max = 10;
    int base_desired_boats = 3;
    int escalation_boats = 1;  // defensive +1 when the total fleet grew
    double sustainability_threshold = 0.35;

    double initial_quota = 10.0;
    double quota_min = 1.0;
    double quota_max = 12.0;

    // Quota elasticity: clause delta per percent drop in catch-per-boat.
    double quota_elasticity = 0.25;
};

inline constexpr const char* kSustainableQuota = "SUSTAINABLE_QUOTA";

CoordinationState initial_state(const Params& p);
UpdaterConfig updater_config(const Params& p, UpdaterKind kind, double eta);

struct SeasonResult {
    std::vector<double> company_catch;
    std::vector<double> company_profit;  // this season
};

// Shared-waters harvest simulation: logistic growth per zone, pro-rata catch
// apportionment, profit accounting, and a published sustainability index.
class Fishbanks {
public:
    Fishbanks(Params params, std::uint64_t seed);

    void begin_season();
    int season() const { return season_; }

    Observation observe(int company) const;
    Signals signals() const { return signals_; }

    // deployments[c][z] = boats of company c in zone z.
    SeasonResult step(const std::vector<std::vector<int>>& deployments);

    double population(int zone) const { return populations_.at(zone); }
    double sustainability_index() const;
    double cumulative_profit(int company) const { return profits_.at(company); }
    double total_fleet_last_season() const { return last_total_fleet_; }

private:
    Params params_;
    std::vector<double> populations_;
    std::vector<double> profits_;
    std::vector<double> last_catch_per_boat_;  // per company, 0 if no boats
    double mean_cpb_prev_ = -1.0;
    double mean_cpb_prev2_ = -1.0;
    double last_total_fleet_ = 0.0;
    double prev_total_fleet_ = 0.0;
    int season_ = 0;
    bool season_open_ = false;
    Signals signals_;
};

enum class Mode { rep, a2a };

// Deployment policy: deploy min(desired, quota) boats, allocated across
// zones proportionally to observed populations. REP and the baseline share
// this core; they differ in the sensitivity they emit and in whether the
// quota variable ever moves.
class FishbanksPolicy : public AgentPolicy {
public:
    FishbanksPolicy(int company, Params params, Mode mode, SensitivityKind style,
                    int desired_jitter = 0);

    static std::vector<int> decision_core(const CoordinationState& state,
                                          const Observation& obs, const Params& params,
                                          int desired_jitter);

    std::pair<Decision, Sensitivity> decide(const CoordinationState& state,
                                            const Observation& obs) override;

private:
    int company_;
    Params params_;
    Mode mode_;
    SensitivityKind style_;
    int desired_jitter_;
    int escalation_ = 0;  // cumulative defensive response
};

}  // namespace rep::fishbanks
