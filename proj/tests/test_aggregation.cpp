#include <doctest.h>

#include <cmath>

#include "rep/aggregation.hpp"
#include "rep/errors.hpp"
#include "rep/rng.hpp"

using namespace rep;

namespace {

CoordinationState price_time_state() {
    return CoordinationState({{"PRICE", 12.0}, {"TIME", 19.0}},
                             {{"PRICE", {5.0, 25.0}}, {"TIME", {0.0, 24.0}}});
}

}  // namespace

TEST_CASE("a single neighbor passes through; unmentioned variables get zero") {
    const auto g = aggregate_numeric({Sensitivity::make_numeric({{"PRICE", -0.8}})},
                                     price_time_state(), UpdaterConfig{});
    CHECK(g.deltas.at("PRICE") == -0.8);
    CHECK(g.deltas.at("TIME") == 0.0);
}

TEST_CASE("two uniform neighbors average per variable") {
    const auto g = aggregate_numeric({Sensitivity::make_numeric({{"PRICE", -0.8}}),
                                      Sensitivity::make_numeric({{"PRICE", 0.4}})},
                                     price_time_state(), UpdaterConfig{});
    CHECK(g.deltas.at("PRICE") == doctest::Approx(-0.2));
}

TEST_CASE("no neighbors yields the zero signal") {
    const auto g = aggregate_numeric({}, price_time_state(), UpdaterConfig{});
    CHECK(g.is_zero());
    CHECK(g.deltas.size() == 2);
}

TEST_CASE("random neighbor sets match a brute-force weighted oracle") {
    Rng rng(99);
    const char* vars[] = {"PRICE", "TIME"};
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Sensitivity> sens;
        std::vector<double> weights;
        for (int j = 0; j < 5; ++j) {
            std::vector<std::pair<std::string, double>> entries;
            for (const char* v : vars)
                if (rng.uniform() < 0.7) entries.emplace_back(v, rng.uniform(-2.0, 2.0));
            sens.push_back(Sensitivity::make_numeric(entries));
            weights.push_back(rng.uniform(0.1, 3.0));
        }
        const auto g = aggregate_numeric(sens, price_time_state(), UpdaterConfig{}, weights);
        for (const char* v : vars) {
            double sum = 0.0, total = 0.0;
            for (std::size_t j = 0; j < sens.size(); ++j)
                for (const auto& [name, value] : sens[j].numeric)
                    if (name == v) {
                        sum += weights[j] * value;
                        total += weights[j];
                    }
            const double expected = total > 0.0 ? sum / total : 0.0;
            CHECK(g.deltas.at(v) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("input validation on the numeric path") {
    CHECK_THROWS_AS(aggregate_numeric({Sensitivity::make_textual({"x"})},
                                      price_time_state(), UpdaterConfig{}),
                    ConfigError);
    CHECK_THROWS_AS(
        aggregate_numeric({Sensitivity::make_numeric({{"PRICE", 1.0}})},
                          price_time_state(), UpdaterConfig{}, {1.0, 2.0}),
        ConfigError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(aggregate_numeric({Sensitivity::make_numeric({{"PRICE", nan}})},
                                      price_time_state(), UpdaterConfig{}),
                    ConfigError);
}

TEST_CASE("a matching clause lands on its bound variable, scaled") {
    CoordinationState state({{"ORDER_ADJUSTMENT_FACTOR", 1.0}});
    UpdaterConfig cfg;
    cfg.clause_bindings["order_adjustment"] = {"ORDER_ADJUSTMENT_FACTOR", 0.01};
    StubSynthesizer stub;
    const Signals signals = {{"demand", Direction::increase}};

    const auto g = aggregate_textual(
        {Sensitivity::make_textual({"IF demand increase 10% THEN order_adjustment +15"})},
        state, cfg, stub, signals);
    CHECK(g.deltas.at("ORDER_ADJUSTMENT_FACTOR") == doctest::Approx(15.0 * 0.01));

    // Unmatched direction: the clause is inert.
    const auto g2 = aggregate_textual(
        {Sensitivity::make_textual({"IF demand increase 10% THEN order_adjustment +15"})},
        state, cfg, stub, {{"demand", Direction::decrease}});
    CHECK(g2.is_zero());

    // No signal at all: also inert.
    const auto g3 = aggregate_textual(
        {Sensitivity::make_textual({"IF demand increase 10% THEN order_adjustment +15"})},
        state, cfg, stub, {});
    CHECK(g3.is_zero());
}

TEST_CASE("empty clause lists produce the zero signal") {
    StubSynthesizer stub;
    const auto g = aggregate_textual({Sensitivity::make_textual({})},
                                     price_time_state(), UpdaterConfig{}, stub,
                                     {{"demand", Direction::increase}});
    CHECK(g.is_zero());
}

TEST_CASE("unparseable clauses fall back to the synthesizer and drop out") {
    CoordinationState state({{"PRICE", 12.0}});
    UpdaterConfig cfg;
    StubSynthesizer stub;
    const Signals signals = {{"demand", Direction::increase}};

    const auto mixed = aggregate_textual(
        {Sensitivity::make_textual({"IF demand increase THEN PRICE +2",
                                    "please just lower the price a bit"})},
        state, cfg, stub, signals);
    const auto clean = aggregate_textual(
        {Sensitivity::make_textual({"IF demand increase THEN PRICE +2"})},
        state, cfg, stub, signals);
    CHECK(mixed == clean);
    CHECK(stub.dropped_count() == 1);
}

TEST_CASE("textual_to_numeric averages matching clauses per variable") {
    CoordinationState state({{"PRICE", 12.0}});
    UpdaterConfig cfg;
    StubSynthesizer stub;
    const auto s = textual_to_numeric(
        Sensitivity::make_textual({"IF demand increase THEN PRICE +2",
                                   "IF demand increase THEN PRICE +4",
                                   "IF demand increase THEN UNKNOWN_VAR +9"}),
        state, cfg, stub, {{"demand", Direction::increase}});
    REQUIRE(s.kind == SensitivityKind::numeric);
    REQUIRE(s.numeric.size() == 1);
    CHECK(s.numeric[0].first == "PRICE");
    CHECK(s.numeric[0].second == doctest::Approx(3.0));
}

TEST_CASE("apply_update is descent-form with clamping") {
    UpdaterConfig cfg;
    cfg.step_size = 1.0;

    CoordinationState state({{"PRICE", 12.0}});
    GradientSignal zero;
    zero.deltas["PRICE"] = 0.0;
    CHECK(apply_update(state, zero, cfg).at("PRICE") == 12.0);

    GradientSignal g;
    g.deltas["PRICE"] = -0.2;
    CHECK(apply_update(state, g, cfg).at("PRICE") == doctest::Approx(12.2));

    CoordinationState bounded({{"PRICE", 10.1}}, {{"PRICE", {10.0, 20.0}}});
    GradientSignal push;
    push.deltas["PRICE"] = 1.0;
    CHECK(apply_update(bounded, push, cfg).at("PRICE") == 10.0);

    // Unknown variables in the signal are ignored.
    GradientSignal stray;
    stray.deltas["ELSEWHERE"] = 5.0;
    CHECK(apply_update(state, stray, cfg) == state);
}
