#pragma once

// Named experiment presets, one per results table. All share the
// baseline market (s0 = 100, sigma = 2, T = 1, dt = 0.005, A = 140, k = 1.5)
// and 1000 runs; they differ only in the dealer line-up.

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dealerfield/model.hpp"

namespace dealerfield::io {

class UnknownPreset : public std::invalid_argument {
 public:
  explicit UnknownPreset(const std::string& name)
      : std::invalid_argument("unknown preset '" + name + "'") {}
};

struct ExperimentPreset {
  std::string name;
  std::string caption;
  SimConfig config;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

inline MarketParams baseline_market() { return MarketParams{100.0, 2.0, 1.0, 0.005, 140.0, 1.5}; }

namespace detail {

inline SimConfig lineup(std::vector<double> gammas, std::vector<long> q0s = {}) {
  SimConfig config;
  config.market = baseline_market();
  config.runs = 1000;
  config.seed = kDefaultSeed;
  const double beta = 1.0 / static_cast<double>(gammas.size());
  for (std::size_t i = 0; i < gammas.size(); ++i)
    config.dealers.push_back({gammas[i], beta, q0s.empty() ? 0 : q0s[i], 0.0});
  return validate(std::move(config));
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"table1", "table2", "table3", "table4", "table5",
                                                 "table6", "table7", "table8", "table9"};
  return names;
}

inline ExperimentPreset make_preset(std::string_view name) {
  using detail::lineup;
  if (name == "table1") return {"table1", "one dealer, gamma = 0.1, beta = 1", lineup({0.1})};
  if (name == "table2")
    return {"table2", "two dealers, gamma = 0.1, beta = 0.5", lineup({0.1, 0.1})};
  if (name == "table3")
    return {"table3", "three dealers, gamma = 0.1, beta = 1/3", lineup({0.1, 0.1, 0.1})};
  if (name == "table4")
    return {"table4", "seven dealers, gamma = 0.1, beta = 1/7", lineup(std::vector<double>(7, 0.1))};
  if (name == "table5")
    return {"table5", "two dealers, gamma = (0.01, 1), beta = 0.5", lineup({0.01, 1.0})};
  if (name == "table6")
    return {"table6", "three dealers, gamma = (0.01, 0.1, 1), beta = 1/3", lineup({0.01, 0.1, 1.0})};
  if (name == "table7")
    return {"table7", "two dealers, gamma = 0.1, beta = 0.5, q0 = (10, 1)",
            lineup({0.1, 0.1}, {10, 1})};
  if (name == "table8")
    return {"table8", "two dealers, gamma = 0.1, beta = 0.5, q0 = (50, 0)",
            lineup({0.1, 0.1}, {50, 0})};
  if (name == "table9")
    return {"table9", "two dealers, gamma = 0.01, beta = 0.5, q0 = (50, 0)",
            lineup({0.01, 0.01}, {50, 0})};
  throw UnknownPreset(std::string(name));
}

}  // namespace dealerfield::io
