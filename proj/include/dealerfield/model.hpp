#pragma once

// Domain types shared by every dealerfield module: market constants, dealer
// profiles, per-run dealer state, quotes, and the simulation config with its
// validation rules.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dealerfield {

/// Global market constants. The mid-price is a driftless random walk with
/// volatility `sigma`; order flow arrives at `a_rate * exp(-k * offset)`.
struct MarketParams {
  double s0 = 100.0;
  double sigma = 2.0;
  double horizon = 1.0;
  double dt = 0.005;
  double a_rate = 140.0;
  double k = 1.5;

  /// Number of quoting steps, round(horizon / dt).
  [[nodiscard]] std::size_t n_steps() const {
    if (!(dt > 0.0) || !(horizon > 0.0)) return 0;
    return static_cast<std::size_t>(std::llround(horizon / dt));
  }
};

/// Static profile of one dealer.
struct DealerSpec {
  double gamma = 0.1;  // risk aversion
  double beta = 1.0;   // influence weight on aggregate order flow
  long q0 = 0;         // initial inventory (shares)
  double x0 = 0.0;     // initial cash

  friend bool operator==(const DealerSpec&, const DealerSpec&) = default;
};

/// Evolving state of one dealer inside a single run.
struct DealerState {
  long q = 0;
  double x = 0.0;
  long fills_ask = 0;
  long fills_bid = 0;

  static DealerState from_spec(const DealerSpec& spec) {
    return DealerState{spec.q0, spec.x0, 0, 0};
  }

  friend bool operator==(const DealerState&, const DealerState&) = default;
};

/// Offsets of a dealer's bid and ask from the mid-price:
/// bid = s - delta_b, ask = s + delta_a. Either offset may be negative.
struct QuotePair {
  double delta_b = 0.0;
  double delta_a = 0.0;

  [[nodiscard]] double spread() const { return delta_b + delta_a; }
  friend bool operator==(const QuotePair&, const QuotePair&) = default;
};

struct SimFlags {
  bool beta_sum_override = false;
  bool trace = false;
  bool alt_denominator = false;
};

struct SimConfig {
  MarketParams market;
  std::vector<DealerSpec> dealers;
  std::size_t runs = 1000;
  std::uint64_t seed = 42;
  SimFlags flags;
  std::size_t n_steps = 0;  // derived by validate()

  [[nodiscard]] std::size_t n_dealers() const { return dealers.size(); }
};

enum class IssueCode {
  NonPositiveGamma,
  NonPositiveBeta,
  BetaSumViolation,
  BadTimeGrid,
  BadMarketParams,
  EmptyDealerList,
  BadRunCount,
};

inline const char* to_string(IssueCode code) {
  switch (code) {
    case IssueCode::NonPositiveGamma: return "NonPositiveGamma";
    case IssueCode::NonPositiveBeta: return "NonPositiveBeta";
    case IssueCode::BetaSumViolation: return "BetaSumViolation";
    case IssueCode::BadTimeGrid: return "BadTimeGrid";
    case IssueCode::BadMarketParams: return "BadMarketParams";
    case IssueCode::EmptyDealerList: return "EmptyDealerList";
    case IssueCode::BadRunCount: return "BadRunCount";
  }
  return "Unknown";
}

struct ConfigIssue {
  IssueCode code;
  std::string message;
};

/// Thrown by validate() with the complete list of violated invariants.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

  [[nodiscard]] const std::vector<ConfigIssue>& issues() const { return issues_; }

  [[nodiscard]] bool has(IssueCode code) const {
    for (const auto& issue : issues_)
      if (issue.code == code) return true;
    return false;
  }

 private:
  static std::string summarize(const std::vector<ConfigIssue>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& issue : issues) {
      out += "\n  ";
      out += to_string(issue.code);
      out += ": ";
      out += issue.message;
    }
    return out;
  }

  std::vector<ConfigIssue> issues_;
};

inline constexpr double kBetaSumTolerance = 1e-9;

/// Market-level checks only; used by validate() and by modules that take a
/// bare MarketParams.
inline std::vector<ConfigIssue> check_market(const MarketParams& m) {
  std::vector<ConfigIssue> issues;
  if (!(m.sigma >= 0.0))
    issues.push_back({IssueCode::BadMarketParams, "sigma must be >= 0"});
  if (!(m.a_rate >= 0.0))
    issues.push_back({IssueCode::BadMarketParams, "A must be >= 0"});
  if (!(m.k > 0.0))
    issues.push_back({IssueCode::BadMarketParams, "k must be > 0"});
  if (!(m.horizon > 0.0) || !(m.dt > 0.0) || m.dt > m.horizon) {
    issues.push_back({IssueCode::BadTimeGrid, "need horizon > 0 and 0 < dt <= horizon"});
  } else {
    const auto n = m.n_steps();
    const double gap = std::abs(static_cast<double>(n) * m.dt - m.horizon);
    if (n < 1 || gap > 1e-9 * m.horizon)
      issues.push_back({IssueCode::BadTimeGrid, "horizon must be an integer multiple of dt"});
  }
  return issues;
}

inline std::vector<ConfigIssue> check_config(const SimConfig& config) {
  auto issues = check_market(config.market);
  if (config.runs < 1)
    issues.push_back({IssueCode::BadRunCount, "runs must be >= 1"});
  if (config.dealers.empty()) {
    issues.push_back({IssueCode::EmptyDealerList, "at least one dealer is required"});
    return issues;
  }
  double beta_sum = 0.0;
  for (std::size_t i = 0; i < config.dealers.size(); ++i) {
    const auto& d = config.dealers[i];
    const auto who = "dealer " + std::to_string(i + 1);
    if (!(d.gamma > 0.0))
      issues.push_back({IssueCode::NonPositiveGamma, who + ": gamma must be > 0"});
    if (!(d.beta > 0.0))
      issues.push_back({IssueCode::NonPositiveBeta, who + ": beta must be > 0"});
    beta_sum += d.beta;
  }
  if (!config.flags.beta_sum_override && std::abs(beta_sum - 1.0) > kBetaSumTolerance)
    issues.push_back({IssueCode::BetaSumViolation,
                      "betas sum to " + std::to_string(beta_sum) + ", expected 1"});
  return issues;
}

/// Returns the config with `n_steps` filled in, or throws ConfigError listing
/// every violated invariant. Idempotent.
inline SimConfig validate(SimConfig config) {
  auto issues = check_config(config);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  config.n_steps = config.market.n_steps();
  return config;
}

/// Uniform quoting grid. Quotes are posted at t_0 .. t_{n-1}; t_n = T is the
/// terminal mark.
class TimeGrid {
 public:
  TimeGrid(double horizon, double dt, std::size_t n_steps)
      : horizon_(horizon), dt_(dt), n_(n_steps) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] bool empty() const { return n_ == 0; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] double time(std::size_t l) const { return static_cast<double>(l) * dt_; }
  [[nodiscard]] double remaining(std::size_t l) const { return horizon_ - time(l); }

  [[nodiscard]] std::vector<double> quoting_times() const {
    std::vector<double> out(n_);
    for (std::size_t l = 0; l < n_; ++l) out[l] = time(l);
    return out;
  }

 private:
  double horizon_;
  double dt_;
  std::size_t n_;
};

inline TimeGrid time_grid(const MarketParams& market) {
  auto issues = check_market(market);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return TimeGrid(market.horizon, market.dt, market.n_steps());
}

/// (k + 1 - 1/N) * beta: the effective intensity decay a dealer faces on its
/// own quote once competition is accounted for.
inline double effective_decay(double k, double beta, std::size_t n_dealers) {
  return (k + (1.0 - 1.0 / static_cast<double>(n_dealers))) * beta;
}

}  // namespace dealerfield
