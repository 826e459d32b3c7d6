#include "rep/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rep/errors.hpp"
#include "rep/rng.hpp"

namespace rep {

const char* to_string(Domain d) {
    switch (d) {
        case Domain::beer: return "beer";
        case Domain::fishbanks: return "fishbanks";
        case Domain::movie: return "movie";
    }
    return "?";
}

Domain domain_from_string(const std::string& name) {
    if (name == "beer") return Domain::beer;
    if (name == "fishbanks") return Domain::fishbanks;
    if (name == "movie") return Domain::movie;
    throw ConfigError("unknown domain '" + name + "'");
}

NetworkTopology path_topology(const std::vector<AgentId>& ids) {
    NetworkTopology t;
    for (const auto& id : ids) t.add_agent(id);
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) t.add_edge(ids[i], ids[i + 1]);
    return t;
}

NetworkTopology complete_topology(const std::vector<AgentId>& ids) {
    NetworkTopology t;
    for (const auto& id : ids) t.add_agent(id);
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) t.add_edge(ids[i], ids[j]);
    return t;
}

NetworkTopology small_world_topology(const std::vector<AgentId>& ids, int k,
                                     double rewire_p, double sparsity,
                                     std::uint64_t seed) {
    const int n = static_cast<int>(ids.size());
    if (n < 2) throw ConfigError("small_world_topology: need at least 2 agents");
    if (sparsity < 0.0 || sparsity >= 1.0)
        throw ConfigError("small_world_topology: sparsity must be in [0, 1)");
    Rng rng(seed);

    // Ring lattice: each node linked to its k/2 nearest neighbors per side.
    std::vector<std::pair<int, int>> edges;
    auto has = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        return std::find(edges.begin(), edges.end(), std::make_pair(a, b)) != edges.end();
    };
    for (int j = 1; j <= k / 2; ++j)
        for (int i = 0; i < n; ++i) {
            int a = i, b = (i + j) % n;
            if (a == b || has(a, b)) continue;
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }

    // Watts-Strogatz rewiring.
    for (auto& edge : edges) {
        if (rng.uniform() >= rewire_p) continue;
        for (int attempt = 0; attempt < 32; ++attempt) {
            const int target = static_cast<int>(rng.uniform_int(0, n - 1));
            if (target == edge.first || has(edge.first, target)) continue;
            edge = {std::min(edge.first, target), std::max(edge.first, target)};
            break;
        }
    }

    // Sparsify: delete round(sparsity * |E|) edges at random (Fisher-Yates
    // prefix), keeping the rest.
    const int remove = static_cast<int>(std::llround(sparsity * edges.size()));
    for (int i = 0; i < remove; ++i) {
        const auto j = rng.uniform_int(i, static_cast<std::int64_t>(edges.size()) - 1);
        std::swap(edges[i], edges[j]);
    }
    NetworkTopology t;
    for (const auto& id : ids) t.add_agent(id);
    for (std::size_t i = remove; i < edges.size(); ++i)
        t.add_edge(ids[edges[i].first], ids[edges[i].second]);
    return t;
}

std::vector<AgentId> domain_agent_ids(Domain domain, int n) {
    if (n < 2) throw ConfigError("domain_agent_ids: need at least 2 agents");
    if (domain == Domain::beer && n == 4)
        return {"retailer", "wholesaler", "distributor", "manufacturer"};
    const char* prefix = domain == Domain::beer ? "stage"
                        : domain == Domain::fishbanks ? "company"
                                                      : "agent";
    const int width = n > 100 ? 3 : 2;
    std::vector<AgentId> ids;
    ids.reserve(n);
    char buf[32];
    for (int i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, i);
        ids.emplace_back(buf);
    }
    return ids;
}

NetworkTopology make_topology(Domain domain, int n, double sparsity,
                              std::uint64_t seed) {
    if (sparsity < 0.0 || sparsity >= 1.0)
        throw ConfigError("make_topology: sparsity must be in [0, 1)");
    const auto ids = domain_agent_ids(domain, n);
    switch (domain) {
        case Domain::beer: return path_topology(ids);
        case Domain::fishbanks: return complete_topology(ids);
        case Domain::movie:
            // The fully-connected regime is the sparsity == 0 endpoint.
            if (sparsity == 0.0) return complete_topology(ids);
            return small_world_topology(ids, 4, 0.1, sparsity, seed);
    }
    throw ConfigError("make_topology: bad domain");
}

}  // namespace rep
