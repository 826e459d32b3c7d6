#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rep/clause.hpp"
#include "rep/types.hpp"

namespace rep {

// Aggregated influence of neighbor sensitivities, per coordination variable.
struct GradientSignal {
    std::map<std::string, double> deltas;

    bool is_zero() const {
        for (const auto& [_, v] : deltas)
            if (v != 0.0) return false;
        return true;
    }

    friend bool operator==(const GradientSignal& a, const GradientSignal& b) {
        return a.deltas == b.deltas;
    }
};

GradientSignal negate(GradientSignal g);

enum class UpdaterKind { numerical_grad, textual_grad, none };
enum class NeighborWeights { uniform, degree };

// Mapping from a clause's effect-variable name onto a coordination variable,
// with a domain units-to-variable scale.
struct ClauseBinding {
    std::string variable;
    double scale = 1.0;
};

struct UpdaterConfig {
    UpdaterKind kind = UpdaterKind::numerical_grad;
    double step_size = 0.3;  // eta
    NeighborWeights neighbor_weights = NeighborWeights::uniform;
    // Clause effect-name -> coordination-variable binding. Effect names equal
    // to a coordination-variable name bind 1:1 implicitly.
    std::map<std::string, ClauseBinding> clause_bindings;
};

// Escape hatch for clause strings the grammar cannot parse. The default stub
// drops them with a warning; an LLM-backed adapter would plug in here.
class Synthesizer {
public:
    virtual ~Synthesizer() = default;
    // Returns per-variable deltas, or nullopt when the text is unusable.
    virtual std::optional<std::vector<std::pair<std::string, double>>> synthesize(
        const std::string& clause, const CoordinationState& state,
        const Signals& signals) = 0;
};

class StubSynthesizer : public Synthesizer {
public:
    explicit StubSynthesizer(bool verbose = false) : verbose_(verbose) {}
    std::optional<std::vector<std::pair<std::string, double>>> synthesize(
        const std::string& clause, const CoordinationState& state,
        const Signals& signals) override;

    int dropped_count() const { return dropped_; }

private:
    bool verbose_;
    int dropped_ = 0;
};

// Weighted per-variable combination of numeric sensitivities. `raw_weights`
// is parallel to `sensitivities` (empty -> uniform); weights are renormalized
// per variable over the neighbors that actually mention it.
GradientSignal aggregate_numeric(const std::vector<Sensitivity>& sensitivities,
                                 const CoordinationState& state,
                                 const UpdaterConfig& cfg,
                                 const std::vector<double>& raw_weights = {});

// Parses clause sensitivities, keeps clauses whose condition matches the
// published environment signals, converts them to per-variable deltas and
// combines them as in aggregate_numeric. Unparseable clauses go to the
// synthesizer.
GradientSignal aggregate_textual(const std::vector<Sensitivity>& sensitivities,
                                 const CoordinationState& state,
                                 const UpdaterConfig& cfg, Synthesizer& synthesizer,
                                 const Signals& signals,
                                 const std::vector<double>& raw_weights = {});

// theta'[v] = clamp(theta[v] - eta * g[v]); variables absent from g unchanged.
CoordinationState apply_update(const CoordinationState& state, const GradientSignal& g,
                               const UpdaterConfig& cfg);

// Reduces one textual sensitivity to its numeric equivalent under the given
// signals: per effect variable, the mean delta of the matching clauses.
Sensitivity textual_to_numeric(const Sensitivity& sensitivity,
                               const CoordinationState& state,
                               const UpdaterConfig& cfg, Synthesizer& synthesizer,
                               const Signals& signals);

}  // namespace rep
