#pragma once

#include "nilmeval/errors.hpp"
#include "nilmeval/json.hpp"

#include <cstdint>
#include <string>

namespace nilmeval::jsonutil {

inline const Json& require(const Json& j, const char* key, const std::string& context) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(context + ": missing field '" + key + "'");
    }
    return j.at(key);
}

inline std::string require_string(const Json& j, const char* key, const std::string& context) {
    const Json& v = require(j, key, context);
    if (!v.is_string()) {
        throw ParseError(context + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

inline double require_number(const Json& j, const char* key, const std::string& context) {
    const Json& v = require(j, key, context);
    if (!v.is_number()) {
        throw ParseError(context + ": field '" + key + "' must be a number");
    }
    return v.get<double>();
}

inline std::int64_t require_int(const Json& j, const char* key, const std::string& context) {
    const Json& v = require(j, key, context);
    if (!v.is_number_integer()) {
        throw ParseError(context + ": field '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

inline double number_or(const Json& j, const char* key, double fallback, const std::string& context) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_number()) {
        throw ParseError(context + ": field '" + key + "' must be a number");
    }
    return v.get<double>();
}

inline std::string string_or(const Json& j, const char* key, std::string fallback,
                             const std::string& context) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (!v.is_string()) {
        throw ParseError(context + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

} // namespace nilmeval::jsonutil
