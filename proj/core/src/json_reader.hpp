#pragma once

// Strict JSON field access with dotted-path error messages. Private to the
// core library.

#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <string_view>

#include <fmt/format.h>
#include <json.hpp>

#include "subrad/errors.hpp"

namespace subrad::detail {

using json = nlohmann::ordered_json;

class Reader {
 public:
  Reader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(fmt::format("{}: expected an object", label()));
  }

  [[nodiscard]] bool has(std::string_view key) const { return object_.contains(key); }

  [[nodiscard]] std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
  }

  const json& raw(std::string_view key) {
    seen_.emplace(key);
    if (!object_.contains(key)) throw ConfigError(fmt::format("{}: missing required field", field(key)));
    return object_.at(std::string(key));
  }

  Reader child(std::string_view key) { return Reader(raw(key), field(key)); }

  double number(std::string_view key) { return as_number(raw(key), field(key)); }
  double number(std::string_view key, double fallback) {
    return has(key) ? number(key) : (seen_.emplace(key), fallback);
  }

  long long integer(std::string_view key) { return as_integer(raw(key), field(key)); }
  long long integer(std::string_view key, long long fallback) {
    return has(key) ? integer(key) : (seen_.emplace(key), fallback);
  }

  bool boolean(std::string_view key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(fmt::format("{}: expected true or false", field(key)));
    return v.get<bool>();
  }

  std::string string(std::string_view key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(fmt::format("{}: expected a string", field(key)));
    return v.get<std::string>();
  }
  std::string string(std::string_view key, std::string fallback) {
    return has(key) ? string(key) : std::move(fallback);
  }

  std::complex<double> complex(std::string_view key, std::complex<double> fallback) {
    if (!has(key)) return fallback;
    return as_complex(raw(key), field(key));
  }

  /// Rejects keys that were never looked at.
  void finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.contains(item.key())) {
        throw ConfigError(fmt::format("{}: unknown field", field(item.key())));
      }
    }
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(fmt::format("{}: expected a number", where));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(fmt::format("{}: must be finite", where));
    return x;
  }

  static long long as_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
    }
    throw ConfigError(fmt::format("{}: expected an integer", where));
  }

  /// A number or a [re, im] pair.
  static std::complex<double> as_complex(const json& v, const std::string& where) {
    if (v.is_number()) return {as_number(v, where), 0.0};
    if (v.is_array() && v.size() == 2) {
      return {as_number(v[0], where + "[0]"), as_number(v[1], where + "[1]")};
    }
    throw ConfigError(fmt::format("{}: expected a number or [re, im]", where));
  }

 private:
  [[nodiscard]] std::string label() const { return path_.empty() ? std::string("<root>") : path_; }

  const json& object_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

inline json complex_to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("malformed JSON: {}", e.what()));
  }
}

}  // namespace subrad::detail
