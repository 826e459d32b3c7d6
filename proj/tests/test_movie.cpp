#include <doctest.h>

#include <cmath>

#include "rep/clause.hpp"
#include "rep/domains/movie.hpp"
#include "rep/rng.hpp"

using namespace rep;
using namespace rep::movie;

namespace {

CoordinationState state_at(double price, double time) {
    return CoordinationState({{kPrice, price}, {kTime, time}});
}

double utility_of(const MoviePreference& pref, double price, double time) {
    return std::get<0>(movie_utility(pref, state_at(price, time)));
}

}  // namespace

TEST_CASE("the ideal point has zero disutility and a zero subgradient") {
    MoviePreference pref;
    pref.ideal_price = 12.0;
    pref.ideal_time = 19.0;
    const auto [utility, participate, s] = movie_utility(pref, state_at(12.0, 19.0));
    CHECK(utility == 0.0);
    CHECK(participate);
    REQUIRE(s.kind == SensitivityKind::numeric);
    for (const auto& [_, value] : s.numeric) CHECK(value == 0.0);
}

TEST_CASE("price above the ideal yields dU/dPRICE = -w_p") {
    MoviePreference pref;
    pref.ideal_price = 12.0;
    pref.price_weight = 0.8;
    const auto [u, in, s] = movie_utility(pref, state_at(15.0, pref.ideal_time));
    (void)u;
    (void)in;
    double du_dprice = 0.0;
    for (const auto& [name, value] : s.numeric)
        if (name == kPrice) du_dprice = value;
    CHECK(du_dprice == -0.8);
}

TEST_CASE("time distance wraps around midnight") {
    CHECK(circular_distance(23.0, 1.0) == doctest::Approx(2.0));
    CHECK(circular_distance(1.0, 23.0) == doctest::Approx(2.0));
    CHECK(circular_distance(6.0, 18.0) == doctest::Approx(12.0));
    CHECK(circular_distance(19.0, 19.0) == 0.0);

    MoviePreference pref;
    pref.ideal_time = 23.0;
    pref.time_weight = 0.5;
    // 1am is only two hours past 11pm.
    CHECK(utility_of(pref, pref.ideal_price, 1.0) == doctest::Approx(-1.0));

    // At the antipode the subgradient is zero by convention.
    const auto [u, in, s] = movie_utility(pref, state_at(pref.ideal_price, 11.0));
    (void)u;
    (void)in;
    for (const auto& [name, value] : s.numeric)
        if (name == kTime) CHECK(value == 0.0);
}

TEST_CASE("subgradients match central finite differences away from kinks") {
    Rng rng(12);
    const Params params;
    const double h = 1e-4;
    for (int i = 0; i < 50; ++i) {
        MoviePreference pref = sample_preference(params, rng);
        const double price = rng.uniform(params.price_min, params.price_max);
        const double time = rng.uniform(params.time_min, params.time_max);
        if (std::fabs(price - pref.ideal_price) < 1e-2) continue;
        const double offset = circular_distance(time, pref.ideal_time);
        if (offset < 1e-2 || offset > 12.0 - 1e-2) continue;

        const auto [u, in, s] = movie_utility(pref, state_at(price, time));
        (void)u;
        (void)in;
        std::map<std::string, double> grad(s.numeric.begin(), s.numeric.end());
        const double fd_price =
            (utility_of(pref, price + h, time) - utility_of(pref, price - h, time)) /
            (2 * h);
        const double fd_time =
            (utility_of(pref, price, time + h) - utility_of(pref, price, time - h)) /
            (2 * h);
        CHECK(grad.at(kPrice) == doctest::Approx(fd_price).epsilon(1e-6));
        CHECK(grad.at(kTime) == doctest::Approx(fd_time).epsilon(1e-6));
    }
}

TEST_CASE("sampled preferences respect the configured ranges") {
    const Params p;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const MoviePreference pref = sample_preference(p, rng);
        CHECK(pref.ideal_price >= p.ideal_price_min);
        CHECK(pref.ideal_price < p.ideal_price_max);
        CHECK(pref.ideal_time >= p.ideal_time_min);
        CHECK(pref.ideal_time < p.ideal_time_max);
        CHECK(pref.price_weight >= p.price_weight_min);
        CHECK(pref.time_weight >= p.time_weight_min);
        CHECK(pref.utility_threshold <= -p.tolerance_min);
        CHECK(pref.utility_threshold >= -p.tolerance_max);
    }
}

TEST_CASE("participation is the thresholded utility, in both modes") {
    MoviePreference pref;
    pref.ideal_price = 12.0;
    pref.ideal_time = 19.0;
    pref.utility_threshold = -3.0;

    CHECK(MoviePolicy::decision_core(pref, state_at(12.0, 19.0)).payload.at("participate") == 1.0);
    CHECK(MoviePolicy::decision_core(pref, state_at(25.0, 7.0)).payload.at("participate") == 0.0);

    MoviePolicy rep_policy(pref, Mode::rep, SensitivityKind::numeric);
    MoviePolicy a2a_policy(pref, Mode::a2a, SensitivityKind::numeric);
    const CoordinationState state = state_at(14.0, 20.0);
    CHECK(rep_policy.decide(state, Observation{}).first ==
          a2a_policy.decide(state, Observation{}).first);
}

TEST_CASE("textual clauses carry exactly the numeric deltas") {
    Rng rng(8);
    const Params params;
    for (int i = 0; i < 20; ++i) {
        const MoviePreference pref = sample_preference(params, rng);
        const CoordinationState state =
            state_at(rng.uniform(6.0, 24.0), rng.uniform(0.0, 24.0));

        MoviePolicy textual(pref, Mode::rep, SensitivityKind::textual);
        const auto [d1, s1] = textual.decide(state, Observation{});
        (void)d1;
        REQUIRE(s1.kind == SensitivityKind::textual);

        const auto numeric = std::get<2>(movie_utility(pref, state));
        std::map<std::string, double> expected(numeric.numeric.begin(),
                                               numeric.numeric.end());
        REQUIRE(s1.textual.size() == expected.size());
        for (const auto& text : s1.textual) {
            const auto r = parse_clause(text);
            REQUIRE(clause_ok(r));
            const TextualClause& c = clause_get(r);
            CHECK(c.condition_variable == "round");
            // Bit-exact delta transport through the clause grammar.
            CHECK(c.effect_delta == expected.at(c.effect_variable));
        }
    }
}
