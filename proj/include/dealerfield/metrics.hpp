#pragma once

// Ensemble statistics (one row per dealer) and the analytic average spread.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "dealerfield/engine.hpp"
#include "dealerfield/model.hpp"
#include "dealerfield/quoting.hpp"

namespace dealerfield::metrics {

class EmptyEnsemble : public std::invalid_argument {
 public:
  EmptyEnsemble() : std::invalid_argument("ensemble statistics need at least one run") {}
};

/// Mark-to-market gain of dealer i: x_T + q_T s_T - (x_0 + q_0 s_0).
inline double profit(const engine::RunResult& run, std::size_t i) {
  const auto& d = run.dealers.at(i);
  const double start = d.spec.x0 + static_cast<double>(d.spec.q0) * run.mid.first;
  return d.terminal.x + static_cast<double>(d.terminal.q) * run.mid.last - start;
}

/// Exponential utility of terminal mark-to-market wealth.
inline double terminal_utility(const engine::RunResult& run, std::size_t i) {
  const auto& d = run.dealers.at(i);
  const double wealth = d.terminal.x + static_cast<double>(d.terminal.q) * run.mid.last;
  return -std::exp(-d.spec.gamma * wealth);
}

/// Continuous time average of the quoted spread over [0, T]:
/// (2/gamma) ln(1 + gamma / ((k + 1 - 1/N) beta)) + gamma sigma^2 T / 2.
inline double analytic_average_spread(const DealerSpec& dealer, const MarketParams& market,
                                      std::size_t n_dealers) {
  return 2.0 * quoting::competition_offset(dealer.gamma, dealer.beta, market.k, n_dealers) +
         0.5 * dealer.gamma * market.sigma * market.sigma * market.horizon;
}

/// Equal-weight average of the quoted spread over the left-endpoint quoting
/// grid t_0 .. t_{n-1}. Exceeds the continuous average by gamma sigma^2 dt / 2.
inline double grid_average_spread(const DealerSpec& dealer, const MarketParams& market,
                                  std::size_t n_dealers) {
  const double n = static_cast<double>(market.n_steps());
  const double mean_tau = market.horizon - 0.5 * (n - 1.0) * market.dt;
  return 2.0 * quoting::competition_offset(dealer.gamma, dealer.beta, market.k, n_dealers) +
         dealer.gamma * market.sigma * market.sigma * mean_tau;
}

struct DealerStats {
  double average_spread = 0.0;
  double mean_profit = 0.0;
  double std_profit = 0.0;
  double mean_qT = 0.0;
  double std_qT = 0.0;
};

struct EnsembleStats {
  std::vector<DealerStats> dealers;
  std::size_t runs = 0;
  std::size_t clamp_total = 0;
  bool std_defined = false;  // false for a single run (std reported as 0)
};

/// Welford accumulator; order of folding does not matter beyond rounding.
class Moments {
 public:
  void add(double v) {
    ++n_;
    const double d = v - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (v - mean_);
  }
  [[nodiscard]] std::size_t count() const { return n_; }
  [[nodiscard]] double mean() const { return mean_; }
  /// Unbiased (n - 1) standard deviation; 0 when n < 2.
  [[nodiscard]] double stddev() const {
    return n_ < 2 ? 0.0 : std::sqrt(m2_ / static_cast<double>(n_ - 1));
  }
  [[nodiscard]] double std_error() const {
    return n_ < 2 ? 0.0 : stddev() / std::sqrt(static_cast<double>(n_));
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline EnsembleStats ensemble_stats(std::span<const engine::RunResult> results) {
  if (results.empty()) throw EmptyEnsemble();
  const std::size_t n_dealers = results.front().dealers.size();
  std::vector<Moments> spread(n_dealers), prof(n_dealers), inv(n_dealers);
  EnsembleStats out;
  out.runs = results.size();
  for (const auto& run : results) {
    if (run.dealers.size() != n_dealers)
      throw std::invalid_argument("ensemble mixes runs with different dealer counts");
    out.clamp_total += run.clamp_count;
    for (std::size_t i = 0; i < n_dealers; ++i) {
      spread[i].add(run.dealers[i].average_spread);
      prof[i].add(profit(run, i));
      inv[i].add(static_cast<double>(run.dealers[i].terminal.q));
    }
  }
  out.std_defined = results.size() > 1;
  out.dealers.resize(n_dealers);
  for (std::size_t i = 0; i < n_dealers; ++i)
    out.dealers[i] = {spread[i].mean(), prof[i].mean(), prof[i].stddev(), inv[i].mean(),
                      inv[i].stddev()};
  return out;
}

}  // namespace dealerfield::metrics
