#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "rep/types.hpp"

namespace rep::wire {

struct FormatError {
    std::size_t offset = 0;  // byte offset into the input, where known
    std::string what;
};

using DecodeResult = std::variant<SensitivityMessage, FormatError>;

// One message = one UTF-8 JSON object, keys sorted, no extra whitespace.
// decode(encode(m)) == m; unknown fields and wrong versions are rejected.
std::string encode(const SensitivityMessage& msg);
DecodeResult decode(const std::string& bytes);

inline bool ok(const DecodeResult& r) {
    return std::holds_alternative<SensitivityMessage>(r);
}
inline const SensitivityMessage& get(const DecodeResult& r) {
    return std::get<SensitivityMessage>(r);
}
inline const FormatError& error(const DecodeResult& r) {
    return std::get<FormatError>(r);
}

}  // namespace rep::wire
