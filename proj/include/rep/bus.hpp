#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "rep/types.hpp"

namespace rep {

// In-process multicast bus with topic-per-agent semantics: each registered
// agent owns the topic "inbox/<id>", and a "consensus" pseudo-agent may be
// registered for the global reduction phase. Messages cross the bus in wire
// format, so the encode/decode path is exercised on every delivery.
class Bus {
public:
    struct LogEntry {
        int round;
        AgentId sender;
        AgentId recipient;
        std::size_t bytes;
    };

    explicit Bus(bool capture_transcript = false)
        : capture_transcript_(capture_transcript) {}

    void register_agent(const AgentId& id);
    bool is_registered(const AgentId& id) const;

    static std::string topic_name(const AgentId& id) { return "inbox/" + id; }

    // Enqueues one copy per recipient inbox; returns the delivery count.
    std::size_t multicast(const AgentId& sender, const std::set<AgentId>& recipients,
                          const SensitivityMessage& msg);

    // Removes and returns all messages for `round`, sender-name-sorted.
    std::vector<SensitivityMessage> drain_inbox(const AgentId& agent, int round);

    std::vector<LogEntry> delivery_log() const;
    std::size_t delivered_count() const;
    std::size_t delivered_bytes() const;
    std::string delivery_log_csv() const;  // round,sender,recipient,bytes

    // Concatenated wire frames in delivery order; empty unless capturing.
    std::string transcript() const;

private:
    struct Inbox {
        std::mutex mutex;
        std::deque<std::string> frames;  // encoded messages
    };

    Inbox& inbox_of(const AgentId& id);

    bool capture_transcript_;
    mutable std::mutex registry_mutex_;
    std::map<AgentId, std::unique_ptr<Inbox>> inboxes_;

    mutable std::mutex log_mutex_;
    std::vector<LogEntry> log_;
    std::string transcript_;
};

}  // namespace rep
