#pragma once

#include <string>

#include "json.hpp"

namespace minimax {

// Sorted-key JSON with every floating-point number printed as %.12e, so
// reports are byte-stable for golden-file comparisons.
std::string canonical_dump(const nlohmann::json& j);

}  // namespace minimax
