#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "rep/client.hpp"
#include "rep/rng.hpp"
#include "rep/types.hpp"

namespace rep::movie {

struct Params {
    double initial_price = 16.0;
    double initial_time = 22.0;  // hour of day
    double price_min = 5.0, price_max = 25.0;
    double time_min = 0.0, time_max = 24.0;

    // Preference sampling ranges.
    double ideal_price_min = 8.0, ideal_price_max = 16.0;
    double ideal_time_min = 17.0, ideal_time_max = 21.0;
    double price_weight_min = 0.5, price_weight_max = 1.5;
    double time_weight_min = 0.2, time_weight_max = 1.0;
    double tolerance_min = 3.0, tolerance_max = 6.0;  // u_min = -tolerance
};

inline constexpr const char* kPrice = "PRICE";
inline constexpr const char* kTime = "TIME";

CoordinationState initial_state(const Params& p);
UpdaterConfig updater_config(UpdaterKind kind, double eta);

// Piecewise-linear utility over (PRICE, TIME) with a circular 24h time axis.
struct MoviePreference {
    double ideal_price = 12.0;   // p*
    double ideal_time = 19.0;    // t*
    double price_weight = 1.0;   // w_p
    double time_weight = 0.5;    // w_t
    double utility_threshold = -3.0;  // u_min: participate iff U >= u_min
};

MoviePreference sample_preference(const Params& p, Rng& rng);

double circular_distance(double a, double b, double period = 24.0);

// U = -w_p|PRICE - p*| - w_t * circ(TIME, t*); the sensitivity carries the
// signed subgradients dU/dPRICE and dU/dTIME (0 at kinks).
std::tuple<double, bool, Sensitivity> movie_utility(const MoviePreference& pref,
                                                    const CoordinationState& state);

enum class Mode { rep, a2a };

class MoviePolicy : public AgentPolicy {
public:
    MoviePolicy(MoviePreference pref, Mode mode, SensitivityKind style);

    static Decision decision_core(const MoviePreference& pref,
                                  const CoordinationState& state);

    std::pair<Decision, Sensitivity> decide(const CoordinationState& state,
                                            const Observation& obs) override;

    const MoviePreference& preference() const { return pref_; }

private:
    MoviePreference pref_;
    Mode mode_;
    SensitivityKind style_;
};

}  // namespace rep::movie
