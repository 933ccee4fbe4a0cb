#pragma once

// A small JSON Schema checker covering the keywords used by
// docs/catalog.schema.json: type, enum, const, required, properties,
// additionalProperties, items, minimum, pattern, oneOf and local $ref.

#include <regex>
#include <string>

#include "json.hpp"

namespace schema {

using nlohmann::ordered_json;

class Validator {
 public:
  explicit Validator(ordered_json root) : root_(std::move(root)) {}

  /// Empty when valid, otherwise the first violation with its JSON path.
  std::string check(const ordered_json& value) const { return check(root_, value, "$"); }

 private:
  std::string check(const ordered_json& s, const ordered_json& v, const std::string& path) const {
    if (s.contains("$ref")) return check(resolve(s["$ref"].get<std::string>()), v, path);
    if (s.contains("type") && !type_ok(s["type"], v)) return path + ": wrong type";
    if (s.contains("const") && s["const"] != v) return path + ": const mismatch";
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found |= e == v;
      if (!found) return path + ": not in enum";
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
      return path + ": below minimum";
    }
    if (s.contains("pattern") && v.is_string() &&
        !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) {
      return path + ": pattern mismatch";
    }
    if (s.contains("oneOf")) {
      int matches = 0;
      for (const auto& alt : s["oneOf"]) matches += check(alt, v, path).empty();
      if (matches != 1) return path + ": oneOf matched " + std::to_string(matches);
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& k : s["required"]) {
          if (!v.contains(k.get<std::string>())) return path + ": missing " + k.get<std::string>();
        }
      }
      for (const auto& [k, child] : v.items()) {
        const auto sub = path + "." + k;
        if (s.contains("properties") && s["properties"].contains(k)) {
          if (auto e = check(s["properties"][k], child, sub); !e.empty()) return e;
        } else if (s.contains("additionalProperties")) {
          const auto& ap = s["additionalProperties"];
          if (ap.is_boolean()) {
            if (!ap.get<bool>()) return sub + ": not allowed";
          } else if (auto e = check(ap, child, sub); !e.empty()) {
            return e;
          }
        }
      }
    }
    if (v.is_array() && s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (auto e = check(s["items"], v[i], path + "[" + std::to_string(i) + "]"); !e.empty()) return e;
      }
    }
    return {};
  }

  static bool type_ok(const ordered_json& t, const ordered_json& v) {
    if (t.is_array()) {
      for (const auto& x : t)
        if (type_ok(x, v)) return true;
      return false;
    }
    const auto name = t.get<std::string>();
    if (name == "object") return v.is_object();
    if (name == "array") return v.is_array();
    if (name == "string") return v.is_string();
    if (name == "boolean") return v.is_boolean();
    if (name == "null") return v.is_null();
    if (name == "integer") return v.is_number_integer();
    if (name == "number") return v.is_number();
    return false;
  }

  const ordered_json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    return root_.at("$defs").at(ref.substr(prefix.size()));
  }

  ordered_json root_;
};

}  // namespace schema
