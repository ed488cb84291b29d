#pragma once

#include <json.hpp>

namespace nilmeval {

// Ordered so that emitted documents are byte-stable across runs.
using Json = nlohmann::ordered_json;

} // namespace nilmeval
