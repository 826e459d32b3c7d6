#include <doctest.h>

#include "rep/clause.hpp"
#include "rep/rng.hpp"

using namespace rep;

TEST_CASE("demand spike example parses to its structured form") {
    const auto r = parse_clause("IF demand increase 10% THEN order +15");
    REQUIRE(clause_ok(r));
    const TextualClause& c = clause_get(r);
    CHECK(c.condition_variable == "demand");
    CHECK(c.condition_direction == Direction::increase);
    REQUIRE(c.condition_magnitude.has_value());
    CHECK(*c.condition_magnitude == 10.0);
    CHECK(c.effect_variable == "order");
    CHECK(c.effect_delta == 15.0);
}

TEST_CASE("negative delta and omitted magnitude") {
    const auto r = parse_clause("IF upstream_capacity increase THEN order -5");
    REQUIRE(clause_ok(r));
    const TextualClause& c = clause_get(r);
    CHECK(!c.condition_magnitude.has_value());
    CHECK(c.effect_delta == -5.0);
}

TEST_CASE("keywords are case-insensitive and whitespace collapses") {
    const auto r = parse_clause("  if   Demand   INCREASE  10%  then   order   +15 ");
    REQUIRE(clause_ok(r));
    CHECK(format_clause(clause_get(r)) == "IF Demand increase 10% THEN order +15");
}

TEST_CASE("a UTF-8 minus sign is tolerated in the delta") {
    const auto r = parse_clause("IF catch_rate decrease THEN quota −3.5");
    REQUIRE(clause_ok(r));
    CHECK(clause_get(r).effect_delta == -3.5);
}

TEST_CASE("non-clauses report the offending token") {
    const auto r = parse_clause("hello world");
    REQUIRE(!clause_ok(r));
    CHECK(clause_error(r).token_index == 0);
    CHECK(clause_error(r).position == 0);
    CHECK(clause_error(r).expected == "keyword 'IF'");
}

TEST_CASE("each grammar slot reports a targeted error") {
    auto expect_fail = [](const std::string& text, std::size_t token_index) {
        const auto r = parse_clause(text);
        REQUIRE(!clause_ok(r));
        CHECK(clause_error(r).token_index == token_index);
    };
    expect_fail("", 0);
    expect_fail("IF", 1);                                   // missing variable
    expect_fail("IF demand sideways THEN order +1", 2);     // bad direction
    expect_fail("IF demand increase banana THEN order +1", 3);
    expect_fail("IF demand increase 10%", 4);               // missing THEN
    expect_fail("IF demand increase THEN", 4);              // missing effect var
    expect_fail("IF demand increase THEN order", 5);        // missing delta
    expect_fail("IF demand increase THEN order 5", 5);      // unsigned delta
    expect_fail("IF demand increase THEN order +5 junk", 6);
}

TEST_CASE("format_clause emits the canonical rendering") {
    TextualClause c{"backlog", Direction::decrease, std::nullopt, "order", -40.0};
    CHECK(format_clause(c) == "IF backlog decrease THEN order -40");
    c.condition_magnitude = 12.5;
    c.effect_delta = 0.25;
    CHECK(format_clause(c) == "IF backlog decrease 12.5% THEN order +0.25");
}

TEST_CASE("randomized clauses survive a format/parse round trip") {
    Rng rng(2024);
    const char* vars[] = {"demand", "backlog", "catch_rate", "fleet_total",
                          "PRICE", "TIME", "order", "quota", "target_inventory"};
    for (int i = 0; i < 1000; ++i) {
        TextualClause c;
        c.condition_variable = vars[rng.uniform_int(0, 8)];
        c.condition_direction =
            rng.uniform() < 0.5 ? Direction::increase : Direction::decrease;
        if (rng.uniform() < 0.5) c.condition_magnitude = rng.uniform(0.0, 200.0);
        c.effect_variable = vars[rng.uniform_int(0, 8)];
        c.effect_delta = rng.uniform(-50.0, 50.0);

        const auto r = parse_clause(format_clause(c));
        REQUIRE(clause_ok(r));
        CHECK(clause_get(r) == c);
    }
}
