#include <doctest.h>

#include <cmath>

#include "rep/errors.hpp"
#include "rep/topology.hpp"

using namespace rep;

TEST_CASE("the four-stage chain is a path with role names") {
    const auto ids = domain_agent_ids(Domain::beer, 4);
    REQUIRE(ids.size() == 4);
    CHECK(ids[0] == "retailer");
    CHECK(ids[1] == "wholesaler");
    CHECK(ids[2] == "distributor");
    CHECK(ids[3] == "manufacturer");

    const NetworkTopology t = make_topology(Domain::beer, 4, 0.0, 1);
    CHECK(t.edges().size() == 3);
    CHECK(t.degree("retailer") == 1);
    CHECK(t.degree("wholesaler") == 2);
    CHECK(t.degree("distributor") == 2);
    CHECK(t.degree("manufacturer") == 1);
    CHECK(t.has_edge("retailer", "wholesaler"));
    CHECK(!t.has_edge("retailer", "manufacturer"));
}

TEST_CASE("twelve companies share a complete graph") {
    const NetworkTopology t = make_topology(Domain::fishbanks, 12, 0.0, 1);
    CHECK(t.edges().size() == 66);
    for (const auto& id : t.agents()) CHECK(t.degree(id) == 11);
}

TEST_CASE("zero sparsity means fully connected for preference aggregation") {
    const NetworkTopology t = make_topology(Domain::movie, 20, 0.0, 1);
    CHECK(t.edges().size() == 190);
}

TEST_CASE("sparsification deletes the requested edge fraction, deterministically") {
    const auto ids = domain_agent_ids(Domain::movie, 20);
    // Ring lattice k=4: |E| = n*k/2 = 40; 60% deleted leaves round(0.4*40).
    const NetworkTopology base = small_world_topology(ids, 4, 0.1, 0.0, 3);
    CHECK(base.edges().size() == 40);

    const NetworkTopology sparse = small_world_topology(ids, 4, 0.1, 0.6, 3);
    CHECK(sparse.edges().size() ==
          static_cast<std::size_t>(std::llround(0.4 * base.edges().size())));

    const NetworkTopology again = make_topology(Domain::movie, 20, 0.6, 3);
    const NetworkTopology same = make_topology(Domain::movie, 20, 0.6, 3);
    CHECK(again.edges() == same.edges());

    const NetworkTopology other = make_topology(Domain::movie, 20, 0.6, 4);
    CHECK(other.edges() != again.edges());
}

TEST_CASE("graph primitives reject degenerate input") {
    NetworkTopology t;
    t.add_agent("a");
    CHECK_THROWS_AS(t.add_edge("a", "a"), ConfigError);
    CHECK_THROWS_AS(t.add_edge("a", "ghost"), ConfigError);
    CHECK_THROWS_AS(small_world_topology({"a"}, 4, 0.1, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(make_topology(Domain::movie, 20, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(make_topology(Domain::movie, 20, -0.1, 1), ConfigError);
    CHECK_THROWS_AS(domain_from_string("chess"), ConfigError);
}

TEST_CASE("non-beer agent ids are zero-padded and sorted") {
    const auto ids = domain_agent_ids(Domain::movie, 12);
    REQUIRE(ids.size() == 12);
    CHECK(ids.front() < ids.back());
    CHECK(ids[0].size() == ids[11].size());
}
