#pragma once

// JSON configuration files.
//
//   {
//     "market":  {"s0": 100, "sigma": 2, "T": 1, "dt": 0.005, "A": 140, "k": 1.5},
//     "dealers": [{"gamma": 0.1, "beta": 0.5, "q0": 0, "x0": 0}, ...],
//     "runs": 1000,
//     "seed": 42,
//     "flags": {"beta_sum_override": false, "trace": false, "alt_denominator": false}
//   }
//
// Every market key and each dealer's gamma are required. A missing beta
// defaults to 1/N, a missing q0 or x0 to 0, runs to 1000 and seed to 42.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dealerfield/model.hpp"

namespace dealerfield::io {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError(where + ": missing required key '" + key + "'");
  return obj.at(key);
}

inline double number(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
  return v.get<double>();
}

inline bool flag(const json& flags, const char* key) {
  if (!flags.contains(key)) return false;
  const auto& v = flags.at(key);
  if (!v.is_boolean()) throw ParseError(std::string("flags.") + key + ": expected true/false");
  return v.get<bool>();
}

}  // namespace detail

/// Parses a config document without validating it.
inline SimConfig parse_config_text(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config root must be an object");

  SimConfig config;
  const auto& m = detail::require(doc, "market", "config");
  config.market.s0 = detail::number(m, "s0", "market");
  config.market.sigma = detail::number(m, "sigma", "market");
  config.market.horizon = detail::number(m, "T", "market");
  config.market.dt = detail::number(m, "dt", "market");
  config.market.a_rate = detail::number(m, "A", "market");
  config.market.k = detail::number(m, "k", "market");

  const auto& dealers = detail::require(doc, "dealers", "config");
  if (!dealers.is_array()) throw ParseError("dealers: expected an array");
  const double default_beta = dealers.empty() ? 1.0 : 1.0 / static_cast<double>(dealers.size());
  for (std::size_t i = 0; i < dealers.size(); ++i) {
    const auto& d = dealers[i];
    const auto where = "dealers[" + std::to_string(i) + "]";
    DealerSpec spec;
    spec.gamma = detail::number(d, "gamma", where);
    spec.beta = d.contains("beta") ? detail::number(d, "beta", where) : default_beta;
    if (d.contains("q0")) {
      if (!d.at("q0").is_number_integer()) throw ParseError(where + ".q0: expected an integer");
      spec.q0 = d.at("q0").get<long>();
    }
    spec.x0 = d.contains("x0") ? detail::number(d, "x0", where) : 0.0;
    config.dealers.push_back(spec);
  }

  if (doc.contains("runs")) {
    const auto& r = doc.at("runs");
    if (!r.is_number_integer() || r.get<long long>() < 0)
      throw ParseError("runs: expected a non-negative integer");
    config.runs = r.get<std::size_t>();
  }
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0))
      throw ParseError("seed: expected an unsigned 64-bit integer");
    config.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("flags")) {
    const auto& f = doc.at("flags");
    if (!f.is_object()) throw ParseError("flags: expected an object");
    config.flags.beta_sum_override = detail::flag(f, "beta_sum_override");
    config.flags.trace = detail::flag(f, "trace");
    config.flags.alt_denominator = detail::flag(f, "alt_denominator");
  }
  return config;
}

/// Reads, parses and validates a config file. Throws IoError, ParseError or
/// ConfigError.
inline SimConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return validate(parse_config_text(buf.str()));
}

inline std::string to_json(const SimConfig& config) {
  using detail::json;
  json doc;
  doc["market"] = {{"s0", config.market.s0}, {"sigma", config.market.sigma},
                   {"T", config.market.horizon}, {"dt", config.market.dt},
                   {"A", config.market.a_rate}, {"k", config.market.k}};
  doc["dealers"] = json::array();
  for (const auto& d : config.dealers)
    doc["dealers"].push_back({{"gamma", d.gamma}, {"beta", d.beta}, {"q0", d.q0}, {"x0", d.x0}});
  doc["runs"] = config.runs;
  doc["seed"] = config.seed;
  doc["flags"] = {{"beta_sum_override", config.flags.beta_sum_override},
                  {"trace", config.flags.trace},
                  {"alt_denominator", config.flags.alt_denominator}};
  return doc.dump(2) + "\n";
}

}  // namespace dealerfield::io
