#pragma once

// Minimal JSON-Schema checker covering the subset used by the schemas in
// schemas/: type, properties, required, items, enum, minItems, maxItems,
// minimum, maximum, additionalProperties (boolean form).  Returns a list of
// violations as "pointer: message" strings.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace trisum::testing {

inline bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    if (type == "null") return value.is_null();
    return false;
}

inline void schema_check_impl(const nlohmann::json& schema, const nlohmann::json& value,
                              const std::string& where, std::vector<std::string>& out) {
    if (schema.contains("type")) {
        const auto& t = schema.at("type");
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(value, t.get<std::string>());
        } else {
            for (const auto& alt : t)
                if (type_matches(value, alt.get<std::string>())) ok = true;
        }
        if (!ok) {
            out.push_back(where + ": type mismatch (want " + t.dump() + ")");
            return;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& alt : schema.at("enum"))
            if (alt == value) ok = true;
        if (!ok) out.push_back(where + ": not in enum");
    }
    if (value.is_number() && schema.contains("minimum") &&
        value.get<double>() < schema.at("minimum").get<double>())
        out.push_back(where + ": below minimum");
    if (value.is_number() && schema.contains("maximum") &&
        value.get<double>() > schema.at("maximum").get<double>())
        out.push_back(where + ": above maximum");
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required"))
                if (!value.contains(key.get<std::string>()))
                    out.push_back(where + ": missing required key " + key.get<std::string>());
        if (schema.contains("properties")) {
            for (const auto& [key, subschema] : schema.at("properties").items())
                if (value.contains(key))
                    schema_check_impl(subschema, value.at(key), where + "/" + key, out);
            if (schema.contains("additionalProperties") &&
                schema.at("additionalProperties").is_boolean() &&
                !schema.at("additionalProperties").get<bool>()) {
                for (const auto& [key, sub] : value.items())
                    if (!schema.at("properties").contains(key))
                        out.push_back(where + ": unexpected key " + key);
            }
        }
    }
    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>())
            out.push_back(where + ": too few items");
        if (schema.contains("maxItems") && value.size() > schema.at("maxItems").get<std::size_t>())
            out.push_back(where + ": too many items");
        if (schema.contains("items")) {
            for (std::size_t i = 0; i < value.size(); ++i)
                schema_check_impl(schema.at("items"), value[i],
                                  where + "/" + std::to_string(i), out);
        }
    }
}

inline std::vector<std::string> schema_check(const nlohmann::json& schema,
                                             const nlohmann::json& value) {
    std::vector<std::string> out;
    schema_check_impl(schema, value, "", out);
    return out;
}

}  // namespace trisum::testing
