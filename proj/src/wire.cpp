#include "rep/wire.hpp"

#include <cmath>

#include <json.hpp>

namespace rep::wire {

using nlohmann::json;

std::string encode(const SensitivityMessage& msg) {
    json j;
    j["v"] = msg.protocol_version;
    j["round"] = msg.round;
    j["sender"] = msg.sender;
    json dec = json::object();
    for (const auto& [name, value] : msg.decision.payload) dec[name] = value;
    j["decision"] = dec;
    json sens;
    if (msg.sensitivity.kind == SensitivityKind::numeric) {
        sens["kind"] = "numeric";
        json arr = json::array();
        for (const auto& [name, value] : msg.sensitivity.numeric)
            arr.push_back(json::array({name, value}));
        sens["numeric"] = arr;
    } else {
        sens["kind"] = "textual";
        sens["textual"] = msg.sensitivity.textual;
    }
    j["sensitivity"] = sens;
    return j.dump();
}

namespace {

FormatError err(std::size_t offset, std::string what) {
    return FormatError{offset, std::move(what)};
}

}  // namespace

DecodeResult decode(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        return err(e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    if (!j.is_object()) return err(0, "message is not a JSON object");

    static const std::set<std::string> kTopFields = {"v", "round", "sender",
                                                     "decision", "sensitivity"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kTopFields.count(it.key()))
            return err(0, "unknown field '" + it.key() + "'");
    for (const auto& f : kTopFields)
        if (!j.contains(f)) return err(0, "missing field '" + f + "'");

    SensitivityMessage msg;
    if (!j["v"].is_string()) return err(0, "'v' must be a string");
    msg.protocol_version = j["v"].get<std::string>();
    if (!j["round"].is_number_integer() || j["round"].get<long long>() < 0)
        return err(0, "'round' must be a non-negative integer");
    msg.round = j["round"].get<int>();
    if (!j["sender"].is_string() || j["sender"].get<std::string>().empty())
        return err(0, "'sender' must be a non-empty string");
    msg.sender = j["sender"].get<std::string>();

    if (!j["decision"].is_object()) return err(0, "'decision' must be an object");
    for (auto it = j["decision"].begin(); it != j["decision"].end(); ++it) {
        if (!it.value().is_number())
            return err(0, "decision field '" + it.key() + "' must be a number");
        msg.decision.payload[it.key()] = it.value().get<double>();
    }

    const json& sens = j["sensitivity"];
    if (!sens.is_object()) return err(0, "'sensitivity' must be an object");
    if (!sens.contains("kind") || !sens["kind"].is_string())
        return err(0, "sensitivity missing 'kind'");
    const std::string kind = sens["kind"].get<std::string>();
    for (auto it = sens.begin(); it != sens.end(); ++it)
        if (it.key() != "kind" && it.key() != kind)
            return err(0, "unknown sensitivity field '" + it.key() + "'");
    if (kind == "numeric") {
        msg.sensitivity.kind = SensitivityKind::numeric;
        if (!sens.contains("numeric") || !sens["numeric"].is_array())
            return err(0, "numeric sensitivity missing 'numeric' array");
        for (const auto& entry : sens["numeric"]) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_number())
                return err(0, "numeric entry must be [name, value]");
            const double value = entry[1].get<double>();
            if (!std::isfinite(value)) return err(0, "non-finite sensitivity value");
            msg.sensitivity.numeric.emplace_back(entry[0].get<std::string>(), value);
        }
    } else if (kind == "textual") {
        msg.sensitivity.kind = SensitivityKind::textual;
        if (!sens.contains("textual") || !sens["textual"].is_array())
            return err(0, "textual sensitivity missing 'textual' array");
        for (const auto& entry : sens["textual"]) {
            if (!entry.is_string()) return err(0, "textual entry must be a string");
            msg.sensitivity.textual.push_back(entry.get<std::string>());
        }
    } else {
        return err(0, "unknown sensitivity kind '" + kind + "'");
    }
    return msg;
}

}  // namespace rep::wire
