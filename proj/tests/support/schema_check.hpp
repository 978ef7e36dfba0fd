#pragma once

// Validator for the JSON-schema subset used by the files under schema/:
// type, enum, required, properties, additionalProperties (bool), items,
// minItems, minimum and local "#/definitions/..." references.

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

namespace schema_check {

using nlohmann::json;

inline bool type_matches(const json& v, const std::string& t)
{
    if (t == "object")
        return v.is_object();
    if (t == "array")
        return v.is_array();
    if (t == "string")
        return v.is_string();
    if (t == "boolean")
        return v.is_boolean();
    if (t == "null")
        return v.is_null();
    if (t == "integer")
        return v.is_number_integer() || (v.is_number_float() && v.get<double>() == static_cast<long long>(v.get<double>()));
    if (t == "number")
        return v.is_number();
    return false;
}

inline void validate(const json& v, const json& s, const json& root, const std::string& path,
                     std::vector<std::string>& errors)
{
    if (s.contains("$ref")) {
        const std::string ref = s["$ref"];
        const std::string prefix = "#/definitions/";
        if (ref.rfind(prefix, 0) != 0 || !root["definitions"].contains(ref.substr(prefix.size()))) {
            errors.push_back(path + ": unresolvable $ref " + ref);
            return;
        }
        validate(v, root["definitions"][ref.substr(prefix.size())], root, path, errors);
        return;
    }
    if (s.contains("type")) {
        bool ok = false;
        if (s["type"].is_array()) {
            for (const auto& t : s["type"])
                ok = ok || type_matches(v, t.get<std::string>());
        } else {
            ok = type_matches(v, s["type"].get<std::string>());
        }
        if (!ok) {
            errors.push_back(path + ": wrong type " + std::string(v.type_name()));
            return;
        }
    }
    if (s.contains("enum")) {
        bool found = false;
        for (const auto& e : s["enum"])
            found = found || e == v;
        if (!found)
            errors.push_back(path + ": value not in enum");
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
        errors.push_back(path + ": below minimum");
    if (v.is_object()) {
        if (s.contains("required"))
            for (const auto& k : s["required"])
                if (!v.contains(k.get<std::string>()))
                    errors.push_back(path + ": missing " + k.get<std::string>());
        const json props = s.value("properties", json::object());
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (props.contains(it.key()))
                validate(it.value(), props[it.key()], root, path + "/" + it.key(), errors);
            else if (s.contains("additionalProperties") && s["additionalProperties"] == false)
                errors.push_back(path + ": unexpected property " + it.key());
        }
    }
    if (v.is_array()) {
        if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
            errors.push_back(path + ": too few items");
        if (s.contains("items"))
            for (std::size_t i = 0; i < v.size(); ++i)
                validate(v[i], s["items"], root, path + "/" + std::to_string(i), errors);
    }
}

inline json load(const std::string& file)
{
    std::ifstream in(file);
    return json::parse(in);
}

inline std::vector<std::string> check(const json& doc, const json& schema)
{
    std::vector<std::string> errors;
    validate(doc, schema, schema, "", errors);
    return errors;
}

} // namespace schema_check
