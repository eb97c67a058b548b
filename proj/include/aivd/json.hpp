#pragma once

#include <json.hpp>

namespace aivd {

// Canonical documents preserve insertion order; serializers emit keys in
// the order the format fixes.
using Json = nlohmann::ordered_json;

// Canonical document rendering: two-space indent, trailing newline.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace aivd
