#include "rep/client.hpp"

#include <algorithm>

#include "rep/errors.hpp"

namespace rep {

const char* to_string(Validation v) {
    switch (v) {
        case Validation::ok: return "ok";
        case Validation::version_mismatch: return "version_mismatch";
        case Validation::stale_round: return "stale_round";
        case Validation::future_round: return "future_round";
        case Validation::unknown_sender: return "unknown_sender";
        case Validation::unknown_variable: return "unknown_variable";
        case Validation::malformed: return "malformed";
    }
    return "?";
}

namespace {

int major_version(const std::string& v) {
    try {
        return std::stoi(v.substr(0, v.find('.')));
    } catch (...) {
        return -1;
    }
}

}  // namespace

Validation validate_message(const SensitivityMessage& msg, int expected_round,
                            const std::set<AgentId>& known_agents,
                            const std::set<std::string>& known_variables) {
    if (major_version(msg.protocol_version) != major_version(kProtocolVersion))
        return Validation::version_mismatch;
    if (msg.round < expected_round) return Validation::stale_round;
    if (msg.round > expected_round) return Validation::future_round;
    if (!known_agents.count(msg.sender)) return Validation::unknown_sender;
    if (msg.sensitivity.kind == SensitivityKind::numeric) {
        for (const auto& [name, _] : msg.sensitivity.numeric)
            if (!known_variables.count(name)) return Validation::unknown_variable;
    } else if (msg.sensitivity.numeric.size() > 0) {
        return Validation::malformed;
    }
    return Validation::ok;
}

RepClient::RepClient(ClientConfig cfg) : cfg_(std::move(cfg)), state_(cfg_.initial_state) {
    if (cfg_.id.empty()) throw ConfigError("configure: empty agent id");
    if (!cfg_.policy) throw ConfigError("configure: null policy");
    if (!cfg_.bus) throw ConfigError("configure: null bus");
    if (cfg_.initial_state.empty())
        throw ConfigError("configure: empty coordination variable set");
    if (cfg_.updater.step_size <= 0.0)
        throw ConfigError("configure: step size must be positive");
    if (cfg_.neighbors.count(cfg_.id))
        throw ConfigError("configure: agent listed as its own neighbor");
    if (!cfg_.synthesizer) cfg_.synthesizer = std::make_shared<StubSynthesizer>();
    for (const auto& [name, _] : state_.variables()) variable_names_.insert(name);
    cfg_.bus->register_agent(cfg_.id);
}

RepClient configure(ClientConfig cfg) {
    RepClient client(std::move(cfg));
    client.state();  // no-op; client is live at round 0 with an empty inbox
    return client;
}

void RepClient::overwrite_state(const CoordinationState& shared) {
    if (!shared.same_variables(state_))
        throw ProtocolError("overwrite_state: variable set mismatch");
    CoordinationState next = state_;
    for (const auto& [name, value] : shared.variables()) next.set(name, value);
    state_ = next;
}

RoundOutput RepClient::run_round(const Observation& obs, const Signals& message_signals) {
    // Receive + sync: aggregate neighbor sensitivities from round t-1.
    if (round_ > 0 && cfg_.updater.kind != UpdaterKind::none) {
        const int message_round = round_ - 1;
        auto messages = cfg_.bus->drain_inbox(cfg_.id, message_round);

        std::set<AgentId> seen;
        for (const auto& m : messages) seen.insert(m.sender);
        for (const AgentId& n : cfg_.neighbors)
            if (!seen.count(n))
                throw ProtocolError("agent '" + cfg_.id + "': missing round " +
                                    std::to_string(message_round) + " message from '" +
                                    n + "'");

        // An agent may weigh its own last-sent sensitivity alongside its
        // neighbors', so chain endpoints are not driven by one peer alone.
        if (cfg_.include_own_sensitivity && last_sent_) messages.push_back(*last_sent_);

        std::vector<Sensitivity> numeric;
        std::vector<double> weights;
        for (const auto& m : messages) {
            if (m.sender == cfg_.id) {
                numeric.push_back(
                    m.sensitivity.kind == SensitivityKind::numeric
                        ? m.sensitivity
                        : textual_to_numeric(m.sensitivity, state_, cfg_.updater,
                                             *cfg_.synthesizer, message_signals));
                if (cfg_.updater.neighbor_weights == NeighborWeights::degree)
                    weights.push_back(1.0);
                continue;
            }
            const Validation v =
                validate_message(m, message_round, cfg_.neighbors, variable_names_);
            if (v == Validation::version_mismatch)
                throw ProtocolError("agent '" + cfg_.id + "': incompatible peer '" +
                                    m.sender + "' (version " + m.protocol_version + ")");
            if (v != Validation::ok)
                throw ProtocolError("agent '" + cfg_.id + "': rejected message from '" +
                                    m.sender + "': " + to_string(v));
            numeric.push_back(m.sensitivity.kind == SensitivityKind::numeric
                                  ? m.sensitivity
                                  : textual_to_numeric(m.sensitivity, state_, cfg_.updater,
                                                       *cfg_.synthesizer, message_signals));
            if (cfg_.updater.neighbor_weights == NeighborWeights::degree) {
                auto it = cfg_.neighbor_degrees.find(m.sender);
                weights.push_back(it != cfg_.neighbor_degrees.end() ? it->second : 1.0);
            }
        }
        const GradientSignal raw = aggregate_numeric(numeric, state_, cfg_.updater, weights);
        // Sensitivities carry desired-change (ascent) directions; the update
        // rule is descent-form, so the signal is oriented here.
        state_ = apply_update(state_, negate(raw), cfg_.updater);
    } else if (round_ > 0) {
        // Decision-only baseline: drain so the inbox does not grow, no update.
        cfg_.bus->drain_inbox(cfg_.id, round_ - 1);
    }

    // Decide from the synced state; round-t messages do not exist yet.
    auto [decision, sensitivity] = cfg_.policy->decide(state_, obs);

    // Send to neighbors.
    SensitivityMessage msg;
    msg.round = round_;
    msg.sender = cfg_.id;
    msg.decision = decision;
    msg.sensitivity = sensitivity;
    cfg_.bus->multicast(cfg_.id, cfg_.neighbors, msg);
    if (cfg_.include_own_sensitivity) last_sent_ = msg;

    ++round_;
    return RoundOutput{std::move(decision), state_};
}

}  // namespace rep
