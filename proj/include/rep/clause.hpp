#pragma once

#include <optional>
#include <string>
#include <variant>

#include "rep/types.hpp"

namespace rep {

// Structured form of a conditional sensitivity sentence, e.g.
//   "IF demand increase 10% THEN order +15"
struct TextualClause {
    std::string condition_variable;
    Direction condition_direction = Direction::increase;
    std::optional<double> condition_magnitude;  // percent, optional
    std::string effect_variable;
    double effect_delta = 0.0;  // signed, domain units

    friend bool operator==(const TextualClause& a, const TextualClause& b) {
        return a.condition_variable == b.condition_variable &&
               a.condition_direction == b.condition_direction &&
               a.condition_magnitude == b.condition_magnitude &&
               a.effect_variable == b.effect_variable &&
               a.effect_delta == b.effect_delta;
    }
};

struct ClauseParseError {
    std::size_t token_index = 0;  // 0-based index of the offending token
    std::size_t position = 0;     // byte offset of that token in the input
    std::string expected;         // human-readable expected-token set
};

using ClauseParseResult = std::variant<TextualClause, ClauseParseError>;

// Grammar: IF <var> (increase|decrease) [<num>%] THEN <var> (+|-)<num>
// Keywords are case-insensitive; whitespace is collapsed.
ClauseParseResult parse_clause(const std::string& text);

// Canonical rendering; format_clause(parse_clause(x)) is the canonical form
// of any grammar-valid x.
std::string format_clause(const TextualClause& clause);

inline bool clause_ok(const ClauseParseResult& r) {
    return std::holds_alternative<TextualClause>(r);
}
inline const TextualClause& clause_get(const ClauseParseResult& r) {
    return std::get<TextualClause>(r);
}
inline const ClauseParseError& clause_error(const ClauseParseResult& r) {
    return std::get<ClauseParseError>(r);
}

}  // namespace rep
