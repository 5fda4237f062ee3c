#pragma once

#include <string>

#include "json.hpp"

namespace hire {

using Json = nlohmann::ordered_json;

/// Deterministic JSON text: object keys in insertion order, two-space
/// indentation, arrays of scalars on one line, and every floating-point value
/// printed with 17 significant digits so that it parses back bit for bit.
std::string dump_json(const Json& value);

/// "%.17g", or null for non-finite values.
std::string format_double(double x);

}  // namespace hire
