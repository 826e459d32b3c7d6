#include "rep/aggregation.hpp"

#include <cmath>
#include <iostream>

#include "rep/errors.hpp"

namespace rep {

GradientSignal negate(GradientSignal g) {
    for (auto& [_, v] : g.deltas) v = -v;
    return g;
}

std::optional<std::vector<std::pair<std::string, double>>> StubSynthesizer::synthesize(
    const std::string& clause, const CoordinationState&, const Signals&) {
    ++dropped_;
    if (verbose_)
        std::cerr << "warning: dropping unparseable sensitivity clause: \"" << clause
                  << "\"\n";
    return std::nullopt;
}

GradientSignal aggregate_numeric(const std::vector<Sensitivity>& sensitivities,
                                 const CoordinationState& state,
                                 const UpdaterConfig&,
                                 const std::vector<double>& raw_weights) {
    if (!raw_weights.empty() && raw_weights.size() != sensitivities.size())
        throw ConfigError("aggregate_numeric: weight/sensitivity length mismatch");
    for (const auto& s : sensitivities) {
        if (s.kind != SensitivityKind::numeric)
            throw ConfigError("aggregate_numeric: non-numeric sensitivity");
        for (const auto& [name, value] : s.numeric)
            if (!std::isfinite(value))
                throw ConfigError("aggregate_numeric: non-finite value for '" + name + "'");
    }

    GradientSignal g;
    for (const auto& [name, _] : state.variables()) {
        double weighted_sum = 0.0;
        double weight_total = 0.0;
        for (std::size_t j = 0; j < sensitivities.size(); ++j) {
            const double w = raw_weights.empty() ? 1.0 : raw_weights[j];
            for (const auto& [var, value] : sensitivities[j].numeric) {
                if (var == name) {
                    weighted_sum += w * value;
                    weight_total += w;
                    break;
                }
            }
        }
        g.deltas[name] = weight_total > 0.0 ? weighted_sum / weight_total : 0.0;
    }
    return g;
}

Sensitivity textual_to_numeric(const Sensitivity& sensitivity,
                               const CoordinationState& state,
                               const UpdaterConfig& cfg, Synthesizer& synthesizer,
                               const Signals& signals) {
    std::map<std::string, double> sums;
    std::map<std::string, int> counts;
    auto add = [&](const std::string& var, double delta) {
        sums[var] += delta;
        counts[var] += 1;
    };

    for (const std::string& text : sensitivity.textual) {
        const auto parsed = parse_clause(text);
        if (!clause_ok(parsed)) {
            if (auto deltas = synthesizer.synthesize(text, state, signals))
                for (const auto& [var, delta] : *deltas) add(var, delta);
            continue;
        }
        const TextualClause& clause = clause_get(parsed);
        const auto sig = signals.find(clause.condition_variable);
        if (sig == signals.end() || sig->second != clause.condition_direction) continue;

        std::string variable = clause.effect_variable;
        double scale = 1.0;
        if (auto it = cfg.clause_bindings.find(clause.effect_variable);
            it != cfg.clause_bindings.end()) {
            variable = it->second.variable;
            scale = it->second.scale;
        }
        if (!state.has(variable)) continue;  // schema closure: unknown vars ignored
        add(variable, clause.effect_delta * scale);
    }

    std::vector<std::pair<std::string, double>> numeric;
    for (const auto& [var, sum] : sums) numeric.emplace_back(var, sum / counts[var]);
    return Sensitivity::make_numeric(std::move(numeric));
}

GradientSignal aggregate_textual(const std::vector<Sensitivity>& sensitivities,
                                 const CoordinationState& state,
                                 const UpdaterConfig& cfg, Synthesizer& synthesizer,
                                 const Signals& signals,
                                 const std::vector<double>& raw_weights) {
    std::vector<Sensitivity> numeric;
    numeric.reserve(sensitivities.size());
    for (const auto& s : sensitivities) {
        if (s.kind != SensitivityKind::textual)
            throw ConfigError("aggregate_textual: non-textual sensitivity");
        numeric.push_back(textual_to_numeric(s, state, cfg, synthesizer, signals));
    }
    return aggregate_numeric(numeric, state, cfg, raw_weights);
}

CoordinationState apply_update(const CoordinationState& state, const GradientSignal& g,
                               const UpdaterConfig& cfg) {
    for (const auto& [name, value] : g.deltas)
        if (!std::isfinite(value))
            throw ConfigError("apply_update: non-finite delta for '" + name + "'");
    CoordinationState next = state;
    for (const auto& [name, delta] : g.deltas) {
        if (!state.has(name)) continue;
        next.set(name, state.at(name) - cfg.step_size * delta);
    }
    return next;
}

}  // namespace rep
