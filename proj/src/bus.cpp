#include "rep/bus.hpp"

#include <algorithm>
#include <sstream>

#include "rep/errors.hpp"
#include "rep/wire.hpp"

namespace rep {

void Bus::register_agent(const AgentId& id) {
    if (id.empty()) throw ConfigError("bus: empty agent id");
    std::lock_guard lock(registry_mutex_);
    if (!inboxes_.count(id)) inboxes_[id] = std::make_unique<Inbox>();
}

bool Bus::is_registered(const AgentId& id) const {
    std::lock_guard lock(registry_mutex_);
    return inboxes_.count(id) > 0;
}

Bus::Inbox& Bus::inbox_of(const AgentId& id) {
    std::lock_guard lock(registry_mutex_);
    auto it = inboxes_.find(id);
    if (it == inboxes_.end())
        throw ProtocolError("bus: unknown recipient '" + id + "'");
    return *it->second;
}

std::size_t Bus::multicast(const AgentId& sender, const std::set<AgentId>& recipients,
                           const SensitivityMessage& msg) {
    const std::string frame = wire::encode(msg);
    for (const AgentId& recipient : recipients) {
        {
            Inbox& inbox = inbox_of(recipient);
            std::lock_guard lock(inbox.mutex);
            inbox.frames.push_back(frame);
        }
        std::lock_guard lock(log_mutex_);
        log_.push_back({msg.round, sender, recipient, frame.size()});
        if (capture_transcript_) transcript_ += frame + "\n";
    }
    return recipients.size();
}

std::vector<SensitivityMessage> Bus::drain_inbox(const AgentId& agent, int round) {
    Inbox& inbox = inbox_of(agent);
    std::vector<SensitivityMessage> out;
    {
        std::lock_guard lock(inbox.mutex);
        std::deque<std::string> keep;
        for (const std::string& frame : inbox.frames) {
            auto decoded = wire::decode(frame);
            if (!wire::ok(decoded))
                throw ProtocolError("bus: undecodable frame in inbox of '" + agent +
                                    "': " + wire::error(decoded).what);
            if (wire::get(decoded).round == round) out.push_back(wire::get(decoded));
            else keep.push_back(frame);
        }
        inbox.frames = std::move(keep);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.sender < b.sender; });
    return out;
}

std::vector<Bus::LogEntry> Bus::delivery_log() const {
    std::lock_guard lock(log_mutex_);
    return log_;
}

std::size_t Bus::delivered_count() const {
    std::lock_guard lock(log_mutex_);
    return log_.size();
}

std::size_t Bus::delivered_bytes() const {
    std::lock_guard lock(log_mutex_);
    std::size_t total = 0;
    for (const auto& e : log_) total += e.bytes;
    return total;
}

std::string Bus::delivery_log_csv() const {
    std::lock_guard lock(log_mutex_);
    std::ostringstream out;
    out << "round,sender,recipient,bytes\n";
    for (const auto& e : log_)
        out << e.round << ',' << e.sender << ',' << e.recipient << ',' << e.bytes << '\n';
    return out.str();
}

std::string Bus::transcript() const {
    std::lock_guard lock(log_mutex_);
    return transcript_;
}

}  // namespace rep
