#pragma once

// Byte-stable JSON: keys sorted, floats as %.6g, two-space indentation.

#include <json.hpp>

#include <string>

namespace bertini::cli {

std::string canonical_dump(const nlohmann::json& j);

}  // namespace bertini::cli
