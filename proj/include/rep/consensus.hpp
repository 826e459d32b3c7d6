#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "rep/types.hpp"

namespace rep {

enum class ConsensusRule { median_coordinate, none };

struct ConsensusResult {
    std::optional<CoordinationState> shared_state;  // absent when rule == none
    double agreement_fraction = 0.0;                // in [0, 1]
};

// Per-variable median over all states; even count -> mean of the two middle
// values. All states must share the same variable set.
CoordinationState median_coordinatewise(const std::vector<CoordinationState>& states);

// Domain-supplied endorsement test: does this agent's decision endorse the
// shared proposal (or, with no proposal, count as agreement on its own)?
using EndorsementPredicate = std::function<bool(
    const Decision&, const std::optional<CoordinationState>& shared)>;

ConsensusResult run_consensus(const std::vector<CoordinationState>& all_states,
                              const std::vector<Decision>& decisions,
                              ConsensusRule rule, const EndorsementPredicate& endorses);

}  // namespace rep
