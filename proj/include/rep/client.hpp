#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "rep/aggregation.hpp"
#include "rep/bus.hpp"
#include "rep/consensus.hpp"
#include "rep/types.hpp"

namespace rep {

// What an agent sees of its environment this round, plus the environment's
// published movement flags.
struct Observation {
    std::map<std::string, double> values;
    Signals signals;
};

// Domain reasoning lives behind this interface: given the coordination state
// and a local observation, produce the round's action and sensitivity.
// Implementations must be deterministic for identical inputs.
class AgentPolicy {
public:
    virtual ~AgentPolicy() = default;
    virtual std::pair<Decision, Sensitivity> decide(const CoordinationState& state,
                                                    const Observation& obs) = 0;
};

enum class Validation {
    ok,
    version_mismatch,
    stale_round,
    future_round,
    unknown_sender,
    unknown_variable,
    malformed,
};

const char* to_string(Validation v);

// Accepts iff the version's major component matches ours, the round matches,
// the sender is known, and any numeric sensitivity names only known variables.
Validation validate_message(const SensitivityMessage& msg, int expected_round,
                            const std::set<AgentId>& known_agents,
                            const std::set<std::string>& known_variables);

struct ClientConfig {
    AgentId id;
    std::shared_ptr<AgentPolicy> policy;
    Bus* bus = nullptr;
    UpdaterConfig updater;
    ConsensusRule consensus = ConsensusRule::none;
    CoordinationState initial_state;
    std::set<AgentId> neighbors;  // N_i
    // When set, the agent's own last-sent sensitivity joins the aggregate at
    // unit weight. Useful on sparse graphs where a low-degree agent would
    // otherwise be steered entirely by a single peer.
    bool include_own_sensitivity = false;
    std::shared_ptr<Synthesizer> synthesizer;  // default: StubSynthesizer
    std::map<AgentId, double> neighbor_degrees;  // used for degree weighting
};

struct RoundOutput {
    Decision decision;
    CoordinationState state;
};

// Per-agent protocol state machine: receive round t-1 messages, aggregate
// them into theta, decide, broadcast. One instance must not be driven from
// two threads at once; distinct instances may run concurrently.
class RepClient {
public:
    explicit RepClient(ClientConfig cfg);

    // Executes one synchronous round. `message_signals` are the environment
    // flags published for the round whose messages are being consumed
    // (round t-1); they gate conditional clauses.
    RoundOutput run_round(const Observation& obs, const Signals& message_signals = {});

    int round() const { return round_; }
    const AgentId& id() const { return cfg_.id; }
    const CoordinationState& state() const { return state_; }
    const std::set<AgentId>& neighbors() const { return cfg_.neighbors; }
    ConsensusRule consensus_rule() const { return cfg_.consensus; }
    const UpdaterConfig& updater() const { return cfg_.updater; }

    // Consensus write-back: replaces theta with the shared proposal.
    void overwrite_state(const CoordinationState& shared);

private:
    ClientConfig cfg_;
    CoordinationState state_;
    std::set<std::string> variable_names_;
    std::optional<SensitivityMessage> last_sent_;
    int round_ = 0;
};

// Validating constructor wrapper; checks the configuration and registers the
// agent on the bus.
RepClient configure(ClientConfig cfg);

}  // namespace rep
