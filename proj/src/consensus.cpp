#include "rep/consensus.hpp"

#include <algorithm>

#include "rep/errors.hpp"

namespace rep {

CoordinationState median_coordinatewise(const std::vector<CoordinationState>& states) {
    if (states.empty()) throw ConfigError("median_coordinatewise: empty input");
    for (const auto& s : states)
        if (!s.same_variables(states.front()))
            throw ConfigError("median_coordinatewise: heterogeneous variable sets");

    std::map<std::string, double> medians;
    std::vector<double> column(states.size());
    for (const auto& [name, _] : states.front().variables()) {
        for (std::size_t i = 0; i < states.size(); ++i) column[i] = states[i].at(name);
        std::sort(column.begin(), column.end());
        const std::size_t n = column.size();
        medians[name] = (n % 2 == 1) ? column[n / 2]
                                     : 0.5 * (column[n / 2 - 1] + column[n / 2]);
    }
    return CoordinationState(std::move(medians), states.front().bounds());
}

ConsensusResult run_consensus(const std::vector<CoordinationState>& all_states,
                              const std::vector<Decision>& decisions,
                              ConsensusRule rule, const EndorsementPredicate& endorses) {
    if (all_states.size() != decisions.size())
        throw ConfigError("run_consensus: states/decisions misaligned");
    if (all_states.empty()) throw ConfigError("run_consensus: empty input");

    ConsensusResult result;
    if (rule == ConsensusRule::median_coordinate)
        result.shared_state = median_coordinatewise(all_states);

    std::size_t endorsing = 0;
    for (const auto& d : decisions)
        if (endorses(d, result.shared_state)) ++endorsing;
    result.agreement_fraction =
        static_cast<double>(endorsing) / static_cast<double>(decisions.size());
    return result;
}

}  // namespace rep
