#pragma once

// Seeded Monte Carlo simulation of N dealers quoting the closed form on a
// fixed time grid.
//
// Each step: every dealer quotes from its current inventory; the ask and bid
// intensities are computed from all dealers' quotes; each dealer's ask and
// bid fill is an independent Bernoulli(min(lambda dt, 1)) draw; finally the
// mid moves by +/- sigma sqrt(dt).
//
// Randomness: one std::mt19937_64 per replication, seeded with
// replication_seed(master, r) = master ^ splitmix64(r). Within a step the
// draws are taken in the order ask_1, bid_1, ..., ask_N, bid_N, then one draw
// for the mid-price sign. Uniforms use the top 53 bits of each output.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <thread>
#include <vector>

#include "dealerfield/model.hpp"
#include "dealerfield/orderflow.hpp"
#include "dealerfield/quoting.hpp"

namespace dealerfield::engine {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t replication_seed(std::uint64_t master, std::size_t replication) {
  return master ^ splitmix64(static_cast<std::uint64_t>(replication));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  double sign() { return (gen_() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 gen_;
};

struct DealerStep {
  QuotePair quote;
  long q = 0;     // inventory at the quoting instant
  double x = 0.0; // cash at the quoting instant
  bool fill_a = false;
  bool fill_b = false;
};

struct StepTrace {
  double t = 0.0;
  double s = 0.0;
  std::vector<DealerStep> dealers;
};

using TraceSink = std::function<void(const StepTrace&)>;

/// Running per-dealer bookkeeping that is not part of DealerState.
struct DealerLedger {
  double spread_sum = 0.0;      // sum of quoted spreads over steps
  double captured = 0.0;        // sum of offsets earned on fills
  double inventory_pnl = 0.0;   // sum of q_t * (s_{t+1} - s_t)
};

struct PathSummary {
  double first = 0.0;
  double last = 0.0;
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const PathSummary&, const PathSummary&) = default;
};

struct DealerOutcome {
  DealerSpec spec;
  DealerState terminal;
  double average_spread = 0.0;
  double captured = 0.0;
  double inventory_pnl = 0.0;

  friend bool operator==(const DealerOutcome&, const DealerOutcome&) = default;
};

struct RunResult {
  std::vector<DealerOutcome> dealers;
  PathSummary mid;
  std::size_t n_steps = 0;
  std::size_t clamp_count = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Work arrays reused across steps of one run.
struct StepScratch {
  std::vector<QuotePair> quotes;
  std::vector<double> asks, bids, betas;

  explicit StepScratch(std::span<const DealerSpec> dealers)
      : quotes(dealers.size()), asks(dealers.size()), bids(dealers.size()), betas(dealers.size()) {
    for (std::size_t j = 0; j < dealers.size(); ++j) betas[j] = dealers[j].beta;
  }
};

/// Advances every dealer and the mid-price by one grid step starting at
/// time t. Returns the new mid-price.
inline double step(std::span<DealerState> states, std::span<DealerLedger> ledgers, double s,
                   double t, const MarketParams& market, std::span<const DealerSpec> dealers,
                   Rng& rng, StepScratch& scratch, std::size_t& clamp_count,
                   StepTrace* trace = nullptr) {
  const std::size_t n = dealers.size();
  const double tau = market.horizon - t;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ctx = quoting::QuoteContext::make(dealers[i], market, n, states[i].q, tau);
    scratch.quotes[i] = quoting::optimal_quotes(ctx);
    scratch.asks[i] = scratch.quotes[i].delta_a;
    scratch.bids[i] = scratch.quotes[i].delta_b;
  }
  const orderflow::IntensityInputs ask_in{scratch.asks, scratch.betas, market.a_rate, market.k};
  const orderflow::IntensityInputs bid_in{scratch.bids, scratch.betas, market.a_rate, market.k};

  if (trace) {
    trace->t = t;
    trace->s = s;
    trace->dealers.resize(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& quote = scratch.quotes[i];
    const double p_a = orderflow::fill_probability(orderflow::dealer_rate(i, ask_in), market.dt, clamp_count);
    const double p_b = orderflow::fill_probability(orderflow::dealer_rate(i, bid_in), market.dt, clamp_count);
    const bool fill_a = rng.bernoulli(p_a);
    const bool fill_b = rng.bernoulli(p_b);
    if (trace) trace->dealers[i] = {quote, states[i].q, states[i].x, fill_a, fill_b};

    auto& st = states[i];
    auto& led = ledgers[i];
    led.spread_sum += quote.spread();
    if (fill_a) {
      st.x += s + quote.delta_a;
      st.q -= 1;
      st.fills_ask += 1;
      led.captured += quote.delta_a;
    }
    if (fill_b) {
      st.x -= s - quote.delta_b;
      st.q += 1;
      st.fills_bid += 1;
      led.captured += quote.delta_b;
    }
  }
  const double ds = rng.sign() * market.sigma * std::sqrt(market.dt);
  for (std::size_t i = 0; i < n; ++i) ledgers[i].inventory_pnl += static_cast<double>(states[i].q) * ds;
  return s + ds;
}

/// One replication over `grid`. Deterministic in (config, grid, seed).
inline RunResult simulate_path(const SimConfig& config, const TimeGrid& grid, std::uint64_t seed,
                               const TraceSink& sink = {}) {
  const auto& market = config.market;
  const auto& dealers = config.dealers;
  const std::size_t n = dealers.size();

  std::vector<DealerState> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i] = DealerState::from_spec(dealers[i]);
  std::vector<DealerLedger> ledgers(n);
  StepScratch scratch(dealers);
  Rng rng(seed);

  RunResult result;
  result.seed = seed;
  result.n_steps = grid.size();
  double s = market.s0;
  result.mid = {s, s, s, s};
  StepTrace trace;
  for (std::size_t l = 0; l < grid.size(); ++l) {
    s = step(states, ledgers, s, grid.time(l), market, dealers, rng, scratch, result.clamp_count,
             sink ? &trace : nullptr);
    if (sink) sink(trace);
    result.mid.min = std::min(result.mid.min, s);
    result.mid.max = std::max(result.mid.max, s);
  }
  result.mid.last = s;

  result.dealers.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& out = result.dealers[i];
    out.spec = dealers[i];
    out.terminal = states[i];
    out.average_spread = grid.empty() ? 0.0 : ledgers[i].spread_sum / static_cast<double>(grid.size());
    out.captured = ledgers[i].captured;
    out.inventory_pnl = ledgers[i].inventory_pnl;
  }
  return result;
}

inline RunResult simulate_run(const SimConfig& config, std::uint64_t seed, const TraceSink& sink = {}) {
  return simulate_path(config, time_grid(config.market), seed, sink);
}

/// Resolves a requested thread count: 0 means hardware concurrency.
inline std::size_t resolve_threads(std::size_t requested, std::size_t work) {
  std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return std::max<std::size_t>(1, std::min(n, work));
}

/// `config.runs` independent replications; entry r uses
/// replication_seed(config.seed, r) regardless of which thread ran it.
inline std::vector<RunResult> simulate_ensemble(const SimConfig& config, std::size_t threads = 1) {
  const auto grid = time_grid(config.market);
  std::vector<RunResult> results(config.runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < results.size(); r = next++)
      results[r] = simulate_path(config, grid, replication_seed(config.seed, r));
  };
  const std::size_t n_threads = resolve_threads(threads, results.size());
  if (n_threads == 1) {
    worker();
    return results;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  pool.clear();
  return results;
}

}  // namespace dealerfield::engine
