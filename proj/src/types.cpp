#include "rep/types.hpp"

#include "rep/errors.hpp"

namespace rep {

void NetworkTopology::add_edge(const AgentId& a, const AgentId& b) {
    if (a == b) throw ConfigError("topology: self-loop on agent '" + a + "'");
    if (!agents_.count(a) || !agents_.count(b))
        throw ConfigError("topology: edge references unknown agent '" +
                          (agents_.count(a) ? b : a) + "'");
    edges_.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
}

bool NetworkTopology::has_edge(const AgentId& a, const AgentId& b) const {
    return edges_.count(a < b ? std::make_pair(a, b) : std::make_pair(b, a)) > 0;
}

std::set<AgentId> NetworkTopology::neighbors(const AgentId& id) const {
    std::set<AgentId> out;
    for (const auto& [u, v] : edges_) {
        if (u == id) out.insert(v);
        else if (v == id) out.insert(u);
    }
    return out;
}

}  // namespace rep
