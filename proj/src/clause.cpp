#include "rep/clause.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace rep {

namespace {

struct Token {
    std::string text;
    std::size_t position;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        out.push_back({text.substr(start, i - start), start});
    }
    return out;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stod(s, &pos);
    } catch (...) {
        return false;
    }
    return pos == s.size();
}

std::string format_number(double v) {
    // Shortest representation that round-trips exactly, so clause encoding
    // is lossless.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ClauseParseError fail(const std::vector<Token>& toks, std::size_t index,
                      std::string expected) {
    ClauseParseError e;
    e.token_index = index;
    e.position = index < toks.size() ? toks[index].position
                                     : (toks.empty() ? 0 : toks.back().position + toks.back().text.size());
    e.expected = std::move(expected);
    return e;
}

}  // namespace

ClauseParseResult parse_clause(const std::string& text) {
    const auto toks = tokenize(text);
    std::size_t i = 0;
    auto have = [&] { return i < toks.size(); };

    if (!have() || lower(toks[i].text) != "if") return fail(toks, i, "keyword 'IF'");
    ++i;

    if (!have()) return fail(toks, i, "condition variable name");
    TextualClause clause;
    clause.condition_variable = toks[i].text;
    ++i;

    if (!have()) return fail(toks, i, "'increase' or 'decrease'");
    {
        const std::string dir = lower(toks[i].text);
        if (dir == "increase") clause.condition_direction = Direction::increase;
        else if (dir == "decrease") clause.condition_direction = Direction::decrease;
        else return fail(toks, i, "'increase' or 'decrease'");
    }
    ++i;

    // Optional "<num>%" magnitude.
    if (have() && lower(toks[i].text) != "then") {
        const std::string& t = toks[i].text;
        double mag = 0;
        if (t.size() >= 2 && t.back() == '%' && parse_number(t.substr(0, t.size() - 1), mag)) {
            clause.condition_magnitude = mag;
            ++i;
        } else {
            return fail(toks, i, "'<num>%' or keyword 'THEN'");
        }
    }

    if (!have() || lower(toks[i].text) != "then") return fail(toks, i, "keyword 'THEN'");
    ++i;

    if (!have()) return fail(toks, i, "effect variable name");
    clause.effect_variable = toks[i].text;
    ++i;

    if (!have()) return fail(toks, i, "signed delta '(+|-)<num>'");
    {
        std::string t = toks[i].text;
        // Tolerate a UTF-8 minus sign.
        if (t.rfind("−", 0) == 0) t = "-" + t.substr(3);
        double delta = 0;
        if ((t[0] != '+' && t[0] != '-') || !parse_number(t, delta))
            return fail(toks, i, "signed delta '(+|-)<num>'");
        clause.effect_delta = delta;
    }
    ++i;

    if (have()) return fail(toks, i, "end of clause");
    return clause;
}

std::string format_clause(const TextualClause& clause) {
    std::string out = "IF " + clause.condition_variable + " ";
    out += clause.condition_direction == Direction::increase ? "increase" : "decrease";
    if (clause.condition_magnitude)
        out += " " + format_number(*clause.condition_magnitude) + "%";
    out += " THEN " + clause.effect_variable + " ";
    out += clause.effect_delta < 0 ? "-" : "+";
    out += format_number(clause.effect_delta < 0 ? -clause.effect_delta : clause.effect_delta);
    return out;
}

}  // namespace rep
