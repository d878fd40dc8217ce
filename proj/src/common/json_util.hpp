#pragma once

#include <json.hpp>
#include <string>

#include "tropic/errors.hpp"
#include "tropic/rational.hpp"

namespace tropic::jsonutil {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

inline json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

inline Rational scalar(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.dump());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InputError& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected an integer or a \"p/q\" string");
}

inline Vector vector_of(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of scalars");
  Vector out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scalar(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing \"") + key + "\"");
  return *it;
}

inline std::size_t positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1) fail(path, "expected a positive integer");
  return j.get<std::size_t>();
}

/// Integers that fit a machine word as JSON numbers, everything else as
/// "p/q" strings.
inline json encode(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return format_rational(q);
}

inline json encode(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline json encode(const Vector& v) {
  json arr = json::array();
  for (const auto& q : v) arr.push_back(encode(q));
  return arr;
}

}  // namespace tropic::jsonutil
