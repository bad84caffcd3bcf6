#pragma once

// Validator for the JSON-Schema subset used by the bundled schemas:
// type (string or list), properties, required, items, enum, minimum, maximum.

#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace schema_check {

using nlohmann::json;

inline bool type_matches(const json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "number") return value.is_number();
    throw std::runtime_error("schema: unknown type '" + type + "'");
}

inline void validate(const json& value, const json& schema, const std::string& where) {
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string())
            ok = type_matches(value, t.get<std::string>());
        else
            for (const auto& alt : t) ok = ok || type_matches(value, alt.get<std::string>());
        if (!ok)
            throw std::runtime_error(where + ": type mismatch, got " +
                                     std::string(value.type_name()));
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& alt : schema["enum"]) ok = ok || (value == alt);
        if (!ok) throw std::runtime_error(where + ": value not in enum");
    }
    if (value.is_number()) {
        if (schema.contains("minimum") && value.get<double>() < schema["minimum"].get<double>())
            throw std::runtime_error(where + ": below minimum");
        if (schema.contains("maximum") && value.get<double>() > schema["maximum"].get<double>())
            throw std::runtime_error(where + ": above maximum");
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!value.contains(key.get<std::string>()))
                    throw std::runtime_error(where + ": missing required key '" +
                                             key.get<std::string>() + "'");
        if (schema.contains("properties"))
            for (const auto& [key, sub] : schema["properties"].items())
                if (value.contains(key)) validate(value[key], sub, where + "." + key);
    }
    if (value.is_array() && schema.contains("items")) {
        std::size_t i = 0;
        for (const auto& item : value)
            validate(item, schema["items"], where + "[" + std::to_string(i++) + "]");
    }
}

inline json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema '" + path + "'");
    json j;
    in >> j;
    return j;
}

}  // namespace schema_check
