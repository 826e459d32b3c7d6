#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rep {

using AgentId = std::string;

inline constexpr const char* kProtocolVersion = "1.0.0";

// Direction of an environment signal over the last round; used to gate
// conditional textual sensitivities.
enum class Direction { increase, decrease };

// Per-round published movement flags, e.g. {"demand": increase}.
using Signals = std::map<std::string, Direction>;

struct Bounds {
    double min;
    double max;
};

// The named coordination variables an agent maintains (theta). Iteration is
// name-sorted, so transcripts are deterministic.
class CoordinationState {
public:
    CoordinationState() = default;
    explicit CoordinationState(std::map<std::string, double> variables,
                               std::map<std::string, Bounds> bounds = {})
        : variables_(std::move(variables)), bounds_(std::move(bounds)) {}

    const std::map<std::string, double>& variables() const { return variables_; }
    const std::map<std::string, Bounds>& bounds() const { return bounds_; }

    bool has(const std::string& name) const { return variables_.count(name) > 0; }
    double at(const std::string& name) const { return variables_.at(name); }

    // Sets a value, clamping to the variable's bounds when present.
    void set(const std::string& name, double value) {
        if (auto it = bounds_.find(name); it != bounds_.end()) {
            if (value < it->second.min) value = it->second.min;
            if (value > it->second.max) value = it->second.max;
        }
        variables_[name] = value;
    }

    bool empty() const { return variables_.empty(); }
    std::size_t size() const { return variables_.size(); }

    bool same_variables(const CoordinationState& other) const {
        if (variables_.size() != other.variables_.size()) return false;
        auto a = variables_.begin();
        auto b = other.variables_.begin();
        for (; a != variables_.end(); ++a, ++b)
            if (a->first != b->first) return false;
        return true;
    }

    friend bool operator==(const CoordinationState& a, const CoordinationState& b) {
        return a.variables_ == b.variables_;
    }

private:
    std::map<std::string, double> variables_;
    std::map<std::string, Bounds> bounds_;
};

// A domain action: ordered name -> scalar payload (order_quantity, boats, ...).
struct Decision {
    std::map<std::string, double> payload;

    friend bool operator==(const Decision& a, const Decision& b) {
        return a.payload == b.payload;
    }
};

enum class SensitivityKind { numeric, textual };

// One agent's per-round signal describing how its decision would change.
// Numeric: (variable, partial-derivative) pairs. Textual: clause strings.
struct Sensitivity {
    SensitivityKind kind = SensitivityKind::numeric;
    std::vector<std::pair<std::string, double>> numeric;  // iff kind == numeric
    std::vector<std::string> textual;                     // iff kind == textual

    static Sensitivity make_numeric(std::vector<std::pair<std::string, double>> v) {
        Sensitivity s;
        s.kind = SensitivityKind::numeric;
        s.numeric = std::move(v);
        return s;
    }
    static Sensitivity make_textual(std::vector<std::string> clauses) {
        Sensitivity s;
        s.kind = SensitivityKind::textual;
        s.textual = std::move(clauses);
        return s;
    }

    friend bool operator==(const Sensitivity& a, const Sensitivity& b) {
        return a.kind == b.kind && a.numeric == b.numeric && a.textual == b.textual;
    }
};

// The per-round broadcast: decision plus sensitivity, stamped with the
// protocol version and round index.
struct SensitivityMessage {
    std::string protocol_version = kProtocolVersion;
    int round = 0;
    AgentId sender;
    Decision decision;
    Sensitivity sensitivity;

    friend bool operator==(const SensitivityMessage& a, const SensitivityMessage& b) {
        return a.protocol_version == b.protocol_version && a.round == b.round &&
               a.sender == b.sender && a.decision == b.decision &&
               a.sensitivity == b.sensitivity;
    }
};

// Undirected graph over agents; no self-loops.
class NetworkTopology {
public:
    void add_agent(const AgentId& id) { agents_.insert(id); }

    void add_edge(const AgentId& a, const AgentId& b);

    const std::set<AgentId>& agents() const { return agents_; }
    const std::set<std::pair<AgentId, AgentId>>& edges() const { return edges_; }

    bool has_edge(const AgentId& a, const AgentId& b) const;

    // N_i: the neighbor set of `id`.
    std::set<AgentId> neighbors(const AgentId& id) const;

    std::size_t degree(const AgentId& id) const { return neighbors(id).size(); }

private:
    std::set<AgentId> agents_;
    // Stored with first < second.
    std::set<std::pair<AgentId, AgentId>> edges_;
};

}  // namespace rep
