#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rep/types.hpp"

namespace rep {

enum class Domain { beer, fishbanks, movie };

const char* to_string(Domain d);
Domain domain_from_string(const std::string& name);

// Chain order == vector order.
NetworkTopology path_topology(const std::vector<AgentId>& ids);
NetworkTopology complete_topology(const std::vector<AgentId>& ids);

// Watts-Strogatz ring lattice (k neighbors, rewire probability p) followed by
// random deletion of a `sparsity` fraction of edges. Deterministic by seed.
NetworkTopology small_world_topology(const std::vector<AgentId>& ids, int k,
                                     double rewire_p, double sparsity,
                                     std::uint64_t seed);

// Canonical agent ids for a domain (beer: stage roles; others: padded index).
std::vector<AgentId> domain_agent_ids(Domain domain, int n);

// beer -> path; fishbanks -> complete; movie -> complete when sparsity == 0,
// otherwise small-world (k=4, p=0.1) sparsified by edge deletion.
NetworkTopology make_topology(Domain domain, int n, double sparsity,
                              std::uint64_t seed);

}  // namespace rep
