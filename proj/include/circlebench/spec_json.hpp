#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "circlebench/circle_map.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/homeo.hpp"

// JSON ingestion for map and homeomorphism specs:
//   {"kind":"piecewise_linear_full_branch","cuts":[0.6]}
//   {"kind":"linear","degree":2}
//   {"kind":"smooth_sine","degree":2,"epsilon":0.5}
//   {"kind":"conjugated","base":{...},"homeo":{"kind":"sine_homeo","c":0.5}}
// Homeomorphisms: {"kind":"identity"}, {"kind":"sine_homeo","c":0.5},
//   {"kind":"composition","factors":[h0, h1, ...]} meaning h0 o h1 o ...
namespace circlebench {

using json = nlohmann::json;

namespace detail {

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path + ": expected an object");
}

inline void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw SchemaError(path + "." + key + ": unknown field");
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key + ": missing required field");
  return *it;
}

inline double number_field(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_number()) throw SchemaError(path + "." + key + ": expected a number");
  return v.get<double>();
}

inline int integer_field(const json& j, const std::string& path, const char* key) {
  const json& v = field(j, path, key);
  if (!v.is_number_integer()) throw SchemaError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::string kind_field(const json& j, const std::string& path) {
  const json& v = field(j, path, "kind");
  if (!v.is_string()) throw SchemaError(path + ".kind: expected a string");
  return v.get<std::string>();
}

inline void collect_factors(const json& j, const std::string& path, std::vector<SineHomeo>& out) {
  require_object(j, path);
  const std::string kind = kind_field(j, path);
  if (kind == "identity") {
    allow_keys(j, path, {"kind"});
  } else if (kind == "sine_homeo") {
    allow_keys(j, path, {"kind", "c"});
    out.push_back({number_field(j, path, "c")});
  } else if (kind == "composition") {
    allow_keys(j, path, {"kind", "factors"});
    const json& factors = field(j, path, "factors");
    if (!factors.is_array()) throw SchemaError(path + ".factors: expected an array");
    for (std::size_t i = 0; i < factors.size(); ++i)
      collect_factors(factors[i], path + ".factors[" + std::to_string(i) + "]", out);
  } else {
    throw SchemaError(path + ".kind: unknown homeo kind \"" + kind + "\"");
  }
}

}  // namespace detail

inline CircleHomeoSpec homeo_from_json(const json& j, const std::string& path = "$") {
  std::vector<SineHomeo> factors;
  detail::collect_factors(j, path, factors);
  return CircleHomeoSpec::composition(std::move(factors));
}

inline CircleMapSpec map_from_json(const json& j, const std::string& path = "$") {
  detail::require_object(j, path);
  const std::string kind = detail::kind_field(j, path);
  if (kind == "piecewise_linear_full_branch") {
    if (j.contains("degree"))
      throw SchemaError(path + ".degree: must not be given; the degree is len(cuts) + 1");
    detail::allow_keys(j, path, {"kind", "cuts"});
    const json& cuts = detail::field(j, path, "cuts");
    if (!cuts.is_array()) throw SchemaError(path + ".cuts: expected an array");
    std::vector<double> values;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      if (!cuts[i].is_number()) throw SchemaError(path + ".cuts[" + std::to_string(i) + "]: expected a number");
      values.push_back(cuts[i].get<double>());
    }
    return CircleMapSpec::piecewise_linear(std::move(values));
  }
  if (kind == "linear") {
    detail::allow_keys(j, path, {"kind", "degree"});
    return CircleMapSpec::linear(detail::integer_field(j, path, "degree"));
  }
  if (kind == "smooth_sine") {
    detail::allow_keys(j, path, {"kind", "degree", "epsilon"});
    return CircleMapSpec::smooth_sine(detail::integer_field(j, path, "degree"),
                                      detail::number_field(j, path, "epsilon"));
  }
  if (kind == "conjugated") {
    detail::allow_keys(j, path, {"kind", "base", "homeo"});
    return CircleMapSpec::conjugated(map_from_json(detail::field(j, path, "base"), path + ".base"),
                                     homeo_from_json(detail::field(j, path, "homeo"), path + ".homeo"));
  }
  throw SchemaError(path + ".kind: unknown map kind \"" + kind + "\"");
}

inline json to_json(const CircleHomeoSpec& h) {
  if (h.factors().empty()) return {{"kind", "identity"}};
  if (h.factors().size() == 1) return {{"kind", "sine_homeo"}, {"c", h.factors()[0].c}};
  json factors = json::array();
  for (const auto& f : h.factors()) factors.push_back({{"kind", "sine_homeo"}, {"c", f.c}});
  return {{"kind", "composition"}, {"factors", factors}};
}

inline json to_json(const CircleMapSpec& spec) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PiecewiseLinearParams>) {
          return {{"kind", "piecewise_linear_full_branch"}, {"cuts", p.cuts}};
        } else if constexpr (std::is_same_v<T, LinearParams>) {
          return {{"kind", "linear"}, {"degree", p.degree}};
        } else if constexpr (std::is_same_v<T, SmoothSineParams>) {
          return {{"kind", "smooth_sine"}, {"degree", p.degree}, {"epsilon", p.epsilon}};
        } else {
          return {{"kind", "conjugated"}, {"base", to_json(*p.base)}, {"homeo", to_json(p.homeo)}};
        }
      },
      spec.params());
}

/// Parse text; syntax errors become SchemaError with the parser's line/column.
inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(origin + ": " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return buf.str();
}

inline CircleMapSpec load_map_spec(const std::string& path) {
  try {
    return map_from_json(parse_json_text(read_text_file(path), path));
  } catch (const SchemaError& e) {
    const std::string msg = e.what();
    throw SchemaError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
  }
}

inline CircleHomeoSpec load_homeo_spec(const std::string& path) {
  try {
    return homeo_from_json(parse_json_text(read_text_file(path), path));
  } catch (const SchemaError& e) {
    const std::string msg = e.what();
    throw SchemaError(msg.rfind(path, 0) == 0 ? msg : path + ": " + msg);
  }
}

}  // namespace circlebench
