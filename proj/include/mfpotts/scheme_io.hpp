#pragma once

#include <istream>
#include <optional>
#include <string>

#include "mfpotts/scheme.hpp"

namespace mfpotts {

/// A scheme file: {"q": int, "z": real, "partitions": [[[int, ...], ...], ...]}.
struct SchemeDocument {
    CollapsingScheme scheme;
    std::optional<double> z;
};

/// Parses and validates a scheme document. Structural JSON problems raise
/// DomainError; scheme violations raise SchemeError with the offending t.
SchemeDocument parse_scheme(std::istream& in);
SchemeDocument parse_scheme(const std::string& text);

std::string to_json(const CollapsingScheme& scheme, std::optional<double> z = std::nullopt);

}  // namespace mfpotts
