#pragma once

// Internal decoding helpers shared by the document parsers. All shape
// mismatches surface as BAD_FIELD_TYPE with the offending path.

#include <map>
#include <string>
#include <vector>

#include "aivd/error.hpp"
#include "aivd/json.hpp"

namespace aivd::detail {

inline const Json* find(const Json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline std::string get_string(const Json& obj, const std::string& key,
                              const std::string& path) {
    const Json* f = find(obj, key);
    if (!f || f->is_null()) return {};
    if (!f->is_string()) fail("BAD_FIELD_TYPE", path + " must be a string");
    return f->get<std::string>();
}

inline std::vector<std::string> get_string_list(const Json& obj, const std::string& key,
                                                const std::string& path) {
    const Json* f = find(obj, key);
    if (!f || f->is_null()) return {};
    if (!f->is_array()) fail("BAD_FIELD_TYPE", path + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : *f) {
        if (!e.is_string()) fail("BAD_FIELD_TYPE", path + " entries must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

inline std::map<std::string, std::string> get_string_map(const Json& obj,
                                                         const std::string& key,
                                                         const std::string& path) {
    const Json* f = find(obj, key);
    if (!f || f->is_null()) return {};
    if (!f->is_object()) fail("BAD_FIELD_TYPE", path + " must be an object");
    std::map<std::string, std::string> out;
    for (const auto& [k, v] : f->items()) {
        if (!v.is_string()) fail("BAD_FIELD_TYPE", path + "." + k + " must be a string");
        out[k] = v.get<std::string>();
    }
    return out;
}

inline std::map<std::string, double> get_number_map(const Json& obj, const std::string& key,
                                                    const std::string& path) {
    const Json* f = find(obj, key);
    if (!f || f->is_null()) return {};
    if (!f->is_object()) fail("BAD_FIELD_TYPE", path + " must be an object");
    std::map<std::string, double> out;
    for (const auto& [k, v] : f->items()) {
        if (!v.is_number()) fail("BAD_FIELD_TYPE", path + "." + k + " must be a number");
        out[k] = v.get<double>();
    }
    return out;
}

inline const Json& require_object(const Json& j, const std::string& what) {
    if (!j.is_object()) fail("MALFORMED_DOCUMENT", what + " must be a JSON object");
    return j;
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("MALFORMED_DOCUMENT", what + " is not valid JSON");
    return j;
}

}  // namespace aivd::detail
