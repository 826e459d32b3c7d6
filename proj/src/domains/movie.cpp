#include "rep/domains/movie.hpp"

#include <cmath>
#include <sstream>

#include "rep/errors.hpp"

namespace rep::movie {

CoordinationState initial_state(const Params& p) {
    return CoordinationState({{kPrice, p.initial_price}, {kTime, p.initial_time}},
                             {{kPrice, {p.price_min, p.price_max}},
                              {kTime, {p.time_min, p.time_max}}});
}

UpdaterConfig updater_config(UpdaterKind kind, double eta) {
    UpdaterConfig cfg;
    cfg.kind = kind;
    cfg.step_size = eta;
    // Clause effect names bind 1:1 to the coordination variables.
    cfg.clause_bindings[kPrice] = {kPrice, 1.0};
    cfg.clause_bindings[kTime] = {kTime, 1.0};
    return cfg;
}

MoviePreference sample_preference(const Params& p, Rng& rng) {
    MoviePreference pref;
    pref.ideal_price = rng.uniform(p.ideal_price_min, p.ideal_price_max);
    pref.ideal_time = rng.uniform(p.ideal_time_min, p.ideal_time_max);
    pref.price_weight = rng.uniform(p.price_weight_min, p.price_weight_max);
    pref.time_weight = rng.uniform(p.time_weight_min, p.time_weight_max);
    pref.utility_threshold = -rng.uniform(p.tolerance_min, p.tolerance_max);
    return pref;
}

double circular_distance(double a, double b, double period) {
    const double d = std::fabs(std::fmod(a - b, period));
    return std::min(d, period - d);
}

namespace {

// Signed circular offset of `a` ahead of `b`, in (-period/2, period/2].
double circular_offset(double a, double b, double period = 24.0) {
    double d = std::fmod(a - b, period);
    if (d <= -period / 2) d += period;
    if (d > period / 2) d -= period;
    return d;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::tuple<double, bool, Sensitivity> movie_utility(const MoviePreference& pref,
                                                    const CoordinationState& state) {
    if (!state.has(kPrice) || !state.has(kTime))
        throw ConfigError("movie_utility: missing PRICE/TIME");
    const double price = state.at(kPrice);
    const double time = state.at(kTime);

    const double utility = -pref.price_weight * std::fabs(price - pref.ideal_price) -
                           pref.time_weight * circular_distance(time, pref.ideal_time);
    const bool participate = utility >= pref.utility_threshold;

    // Subgradients; 0 at the kinks (price == p*, time == t* or antipode).
    const double du_dprice = -pref.price_weight * sign_of(price - pref.ideal_price);
    const double offset = circular_offset(time, pref.ideal_time);
    const double du_dtime =
        std::fabs(offset) == 12.0 ? 0.0 : -pref.time_weight * sign_of(offset);

    Sensitivity s = Sensitivity::make_numeric({{kPrice, du_dprice}, {kTime, du_dtime}});
    return {utility, participate, s};
}

MoviePolicy::MoviePolicy(MoviePreference pref, Mode mode, SensitivityKind style)
    : pref_(pref), mode_(mode), style_(style) {}

Decision MoviePolicy::decision_core(const MoviePreference& pref,
                                    const CoordinationState& state) {
    const auto [utility, participate, _] = movie_utility(pref, state);
    Decision d;
    d.payload["participate"] = participate ? 1.0 : 0.0;
    (void)utility;
    return d;
}

std::pair<Decision, Sensitivity> MoviePolicy::decide(const CoordinationState& state,
                                                     const Observation& obs) {
    (void)obs;
    Decision decision = decision_core(pref_, state);

    if (mode_ == Mode::a2a) {
        std::ostringstream text;
        text << (decision.payload.at("participate") > 0.5 ? "In" : "Out")
             << " at this price and time; price matters more than timing for me";
        return {decision, Sensitivity::make_textual({text.str()})};
    }

    const auto [utility, participate, numeric] = movie_utility(pref_, state);
    (void)utility;
    (void)participate;
    if (style_ == SensitivityKind::numeric) return {decision, numeric};

    // Textual variant: clauses encoding exactly the same per-variable deltas,
    // conditioned on the always-advancing round counter.
    std::vector<std::string> clauses;
    for (const auto& [variable, delta] : numeric.numeric) {
        TextualClause clause{"round", Direction::increase, std::nullopt, variable, delta};
        clauses.push_back(format_clause(clause));
    }
    return {decision, Sensitivity::make_textual(std::move(clauses))};
}

}  // namespace rep::movie
