#ifndef KGEOM_JSON_IO_HPP
#define KGEOM_JSON_IO_HPP

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kgeom/spaces.hpp"

namespace kgeom {

using Json = nlohmann::ordered_json;

inline Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const std::vector<Vec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

/// Exponent encoding: numbers, or the string "inf".
inline Json exponent_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

inline double exponent_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
    throw ValidationError(field + ": expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw ValidationError(field + ": expected a number or \"inf\"");
  return j.get<double>();
}

inline Vec vec_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ValidationError(field + "[" + std::to_string(i) + "]: expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline std::vector<Vec> vecs_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ValidationError(field + ": expected an array of arrays");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json to_json(const NormDescriptor& d) {
  Json j;
  j["variant"] = variant_name(d.variant);
  switch (d.variant) {
    case Variant::Lp:
      j["p"] = exponent_to_json(d.p);
      j["dim"] = d.dim;
      break;
    case Variant::SullivanSum:
      j["dim"] = d.dim;
      j["indices"] = d.indices;
      break;
    case Variant::SmithTurett:
      j["dim"] = d.dim;
      if (d.weights.empty()) j["weightRule"] = "2^(-n/2)";
      else j["weights"] = d.weights;
      break;
    case Variant::Polyhedral: j["vertices"] = to_json(d.vertices); break;
    case Variant::Product: {
      j["p"] = exponent_to_json(d.p);
      Json f = Json::array();
      for (const auto& c : d.children) f.push_back(to_json(c));
      j["factors"] = f;
      break;
    }
    case Variant::Quotient:
      j["base"] = to_json(d.children.front());
      j["basis"] = to_json(d.basis);
      break;
  }
  return j;
}

namespace detail {

inline const Json& require(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw ValidationError(path + "." + key + ": missing field");
  return j.at(key);
}

inline int int_field(const Json& j, const char* key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

inline NormDescriptor descriptor_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path + ": expected an object");
  const Json& v = require(j, "variant", path);
  if (!v.is_string()) throw ValidationError(path + ".variant: expected a string");
  const std::string name = v.get<std::string>();
  if (name == "Lp") {
    return NormDescriptor::lp(exponent_from_json(require(j, "p", path), path + ".p"), int_field(j, "dim", path));
  }
  if (name == "SullivanSum") {
    const Json& idx = require(j, "indices", path);
    if (!idx.is_array()) throw ValidationError(path + ".indices: expected an array of integers");
    std::vector<int> indices;
    for (const auto& i : idx) {
      if (!i.is_number_integer()) throw ValidationError(path + ".indices: expected integers");
      indices.push_back(i.get<int>());
    }
    return NormDescriptor::sullivan(int_field(j, "dim", path), indices);
  }
  if (name == "SmithTurett") {
    std::vector<double> w;
    if (j.contains("weights")) {
      const Vec wv = vec_from_json(j.at("weights"), path + ".weights");
      w.assign(wv.data(), wv.data() + wv.size());
    } else if (j.contains("weightRule") && j.at("weightRule") != "2^(-n/2)") {
      throw ValidationError(path + ".weightRule: only \"2^(-n/2)\" is supported");
    }
    return NormDescriptor::smith_turett(int_field(j, "dim", path), w);
  }
  if (name == "Polyhedral") return NormDescriptor::polyhedral(vecs_from_json(require(j, "vertices", path), path + ".vertices"));
  if (name == "Product") {
    const Json& f = require(j, "factors", path);
    if (!f.is_array()) throw ValidationError(path + ".factors: expected an array");
    std::vector<NormDescriptor> factors;
    for (std::size_t i = 0; i < f.size(); ++i)
      factors.push_back(descriptor_from_json(f[i], path + ".factors[" + std::to_string(i) + "]"));
    return NormDescriptor::product(exponent_from_json(require(j, "p", path), path + ".p"), factors);
  }
  if (name == "Quotient") {
    return NormDescriptor::quotient(descriptor_from_json(require(j, "base", path), path + ".base"),
                                    vecs_from_json(require(j, "basis", path), path + ".basis"));
  }
  throw ValidationError(path + ".variant: unknown variant \"" + name + "\"");
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline double parse_number(const std::string& s, const std::string& field) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ValidationError(field + ": trailing characters in \"" + s + "\"");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError(field + ": cannot parse number \"" + s + "\"");
  }
}

inline int parse_int(const std::string& s, const std::string& field) {
  const double v = parse_number(s, field);
  if (v != std::floor(v) || std::isinf(v)) throw ValidationError(field + ": expected an integer, got \"" + s + "\"");
  return static_cast<int>(v);
}

}  // namespace detail

inline NormDescriptor descriptor_from_json(const Json& j) { return detail::descriptor_from_json(j, "descriptor"); }

/// Compact spellings used on the command line:
///   lp:<p>:<dim>   sullivan:<dim>:<i1,i2,..>   smith-turett:<dim>
inline NormDescriptor descriptor_from_shorthand(const std::string& s) {
  const auto parts = detail::split(s, ':');
  if (parts.empty()) throw ValidationError("space: empty descriptor");
  if (parts[0] == "lp" && parts.size() == 3)
    return NormDescriptor::lp(detail::parse_number(parts[1], "space.p"), detail::parse_int(parts[2], "space.dim"));
  if (parts[0] == "sullivan" && parts.size() == 3) {
    std::vector<int> idx;
    for (const auto& t : detail::split(parts[2], ',')) idx.push_back(detail::parse_int(t, "space.indices"));
    return NormDescriptor::sullivan(detail::parse_int(parts[1], "space.dim"), idx);
  }
  if (parts[0] == "smith-turett" && parts.size() == 2)
    return NormDescriptor::smith_turett(detail::parse_int(parts[1], "space.dim"));
  throw ValidationError("space: unrecognised shorthand \"" + s + "\"");
}

/// Accepts inline JSON, a path to a JSON file, or a shorthand spelling.
inline NormDescriptor parse_descriptor(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ValidationError(std::string("space: malformed JSON: ") + e.what());
    }
    return descriptor_from_json(j);
  }
  std::ifstream in(text);
  if (in) {
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw ValidationError("space: malformed JSON in " + text + ": " + e.what());
    }
    return descriptor_from_json(j);
  }
  return descriptor_from_shorthand(text);
}

}  // namespace kgeom

#endif  // KGEOM_JSON_IO_HPP
