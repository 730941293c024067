#pragma once

// The `check` gate: oracle comparisons and structural invariants, each
// reported as (name, expected, actual, tolerance, pass).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dealerfield/dp_ladder.hpp"
#include "dealerfield/engine.hpp"
#include "dealerfield/metrics.hpp"
#include "dealerfield/model.hpp"
#include "dealerfield/presets.hpp"
#include "dealerfield/quoting.hpp"

namespace dealerfield::checks {

struct CheckRow {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckOptions {
  std::size_t runs = 200;      // replications for the Monte Carlo checks
  std::uint64_t seed = io::kDefaultSeed;
  std::size_t threads = 1;
  bool alt_denominator = false;  // add bracket-form comparison rows
};

inline CheckRow within(std::string name, double expected, double actual, double tol) {
  return {std::move(name), expected, actual, tol, std::abs(actual - expected) <= tol};
}

/// Worst deviation between the brute-force one-period maximizer and the
/// closed-form quotes, over inventories -5..5, three risk aversions and three
/// quoting times, for N dealers with equal weights.
inline double oracle_sweep_max_error(std::size_t n_dealers, const MarketParams& market) {
  const double beta = 1.0 / static_cast<double>(n_dealers);
  const std::vector<double> times = {0.0, 0.5 * market.horizon, market.horizon - market.dt};
  dp::OracleOptions opts;
  opts.widen_on_boundary = true;
  double worst = 0.0;
  for (double gamma : {0.01, 0.1, 1.0}) {
    std::vector<DealerSpec> dealers(n_dealers, DealerSpec{gamma, beta, 0, 0.0});
    for (double t : times) {
      const double tau = market.horizon - t;
      std::vector<long> inventories(n_dealers, 0);
      for (long q = -5; q <= 5; ++q) {
        inventories[0] = q;
        const auto quotes = dp::closed_form_quotes(inventories, tau, market, dealers);
        const auto found = dp::oracle_one_period_argmax(0, q, quotes, t, market, dealers, opts);
        worst = std::max({worst, std::abs(found.argmax.delta_a - quotes[0].delta_a),
                          std::abs(found.argmax.delta_b - quotes[0].delta_b)});
      }
    }
  }
  return worst;
}

inline void add_oracle_checks(std::vector<CheckRow>& rows) {
  const auto market = io::baseline_market();
  for (std::size_t n : {1u, 2u, 3u, 7u})
    rows.push_back(within("oracle_argmax_vs_closed_form_N" + std::to_string(n), 0.0,
                          oracle_sweep_max_error(n, market), 1e-3));

  // Competitors' quotes scale the objective but must not move the argmax.
  std::vector<DealerSpec> dealers(3, DealerSpec{0.1, 1.0 / 3.0, 0, 0.0});
  std::vector<long> inventories = {2, -1, 4};
  auto quotes = dp::closed_form_quotes(inventories, 0.5, market, dealers);
  const auto base = dp::oracle_one_period_argmax(0, 2, quotes, 0.5, market, dealers);
  quotes[1] = {quotes[1].delta_b + 0.7, quotes[1].delta_a - 0.4};
  quotes[2] = {quotes[2].delta_b - 1.1, quotes[2].delta_a + 0.9};
  const auto moved = dp::oracle_one_period_argmax(0, 2, quotes, 0.5, market, dealers);
  rows.push_back(within("best_response_independent_of_competitors", 0.0,
                        std::max(std::abs(base.argmax.delta_a - moved.argmax.delta_a),
                                 std::abs(base.argmax.delta_b - moved.argmax.delta_b)),
                        1e-5));
}

inline void add_formula_checks(std::vector<CheckRow>& rows) {
  const auto market = io::baseline_market();
  const auto grid = time_grid(market);

  // N = 1 spread against gamma sigma^2 (T - t) + (2/gamma) ln(1 + gamma/k).
  double reduction = 0.0;
  for (double gamma : {0.01, 0.1, 1.0}) {
    for (std::size_t l = 0; l < grid.size(); ++l) {
      const double tau = grid.remaining(l);
      const quoting::QuoteContext ctx{0, gamma, 1.0, market.k, 1, market.sigma, tau};
      const double classic = gamma * market.sigma * market.sigma * tau +
                             2.0 / gamma * std::log(1.0 + gamma / market.k);
      reduction = std::max(reduction, std::abs(quoting::spread(ctx) - classic));
    }
  }
  rows.push_back(within("single_dealer_spread_reduction", 0.0, reduction, 1e-12));

  // The spread formula itself must not see q at all (bit-exact). Summing the
  // two separately rounded offsets is checked to a relative 1e-12.
  double spread_gap = 0.0, offset_sum_gap = 0.0, mirror_gap = 0.0, chain_gap = 0.0;
  for (const auto& name : io::preset_names()) {
    const auto preset = io::make_preset(name);
    const auto n = preset.config.n_dealers();
    for (const auto& d : preset.config.dealers) {
      for (std::size_t l = 0; l < grid.size(); l += 7) {
        const double tau = grid.remaining(l);
        const double flat = quoting::spread(quoting::QuoteContext::make(d, market, n, 0, tau));
        for (long q = -60; q <= 60; ++q) {
          const auto ctx = quoting::QuoteContext::make(d, market, n, q, tau);
          auto mirrored = ctx;
          mirrored.q = -q;
          auto next = ctx;
          next.q = q + 1;
          const auto quote = quoting::optimal_quotes(ctx);
          spread_gap = std::max(spread_gap, std::abs(quoting::spread(ctx) - flat));
          offset_sum_gap = std::max(offset_sum_gap, std::abs(quote.spread() - flat) /
                                                        (flat + std::abs(quote.delta_b) + std::abs(quote.delta_a)));
          mirror_gap = std::max(mirror_gap,
                                std::abs(quote.delta_a - quoting::optimal_quotes(mirrored).delta_b));
          chain_gap = std::max(chain_gap, std::abs(quoting::reservation_prices(market.s0, ctx).bid -
                                                   quoting::reservation_prices(market.s0, next).ask));
        }
      }
    }
  }
  rows.push_back(within("spread_independent_of_inventory", 0.0, spread_gap, 0.0));
  rows.push_back(within("offsets_sum_to_spread_relative", 0.0, offset_sum_gap, 1e-12));
  rows.push_back(within("quote_mirror_symmetry", 0.0, mirror_gap, 0.0));
  rows.push_back(within("reservation_chaining", 0.0, chain_gap, 0.0));
}

inline void add_engine_checks(std::vector<CheckRow>& rows, const CheckOptions& opts) {
  double spread_gap = 0.0, pnl_gap = 0.0, inventory_gap = 0.0;
  bool deterministic = true;
  for (const auto& name : io::preset_names()) {
    auto config = io::make_preset(name).config;
    config.runs = std::min<std::size_t>(opts.runs, 50);
    config.seed = opts.seed;
    const auto results = engine::simulate_ensemble(config, opts.threads);
    for (std::size_t r = results.size(); r-- > 0;)
      deterministic = deterministic &&
                      results[r] == engine::simulate_run(config, engine::replication_seed(config.seed, r));
    for (const auto& run : results) {
      for (std::size_t i = 0; i < run.dealers.size(); ++i) {
        const auto& d = run.dealers[i];
        spread_gap = std::max(spread_gap, std::abs(d.average_spread - metrics::grid_average_spread(
                                                                          d.spec, config.market,
                                                                          run.dealers.size())));
        pnl_gap = std::max(pnl_gap, std::abs(metrics::profit(run, i) - (d.captured + d.inventory_pnl)));
        inventory_gap = std::max(
            inventory_gap, std::abs(static_cast<double>((d.terminal.q - d.spec.q0) -
                                                        (d.terminal.fills_bid - d.terminal.fills_ask))));
      }
    }
  }
  rows.push_back(within("simulated_spread_matches_grid_average", 0.0, spread_gap, 1e-9));
  rows.push_back(within("pnl_decomposition", 0.0, pnl_gap, 1e-9));
  rows.push_back(within("inventory_conservation", 0.0, inventory_gap, 0.0));
  rows.push_back(within("replication_order_determinism", 1.0, deterministic ? 1.0 : 0.0, 0.0));

  // Active quoting beats holding the initial inventory, in expected utility.
  auto config = io::make_preset("table1").config;
  config.runs = std::max<std::size_t>(opts.runs, 2);
  config.seed = opts.seed;
  const auto results = engine::simulate_ensemble(config, opts.threads);
  metrics::Moments utility;
  for (const auto& run : results) utility.add(metrics::terminal_utility(run, 0));
  const auto& d = config.dealers[0];
  const auto ctx = quoting::QuoteContext::make(d, config.market, 1, d.q0, config.market.horizon);
  const double inactive = quoting::inactive_value(d.x0, config.market.s0, ctx);
  const double z = utility.std_error() > 0.0 ? (utility.mean() - inactive) / utility.std_error()
                                             : (utility.mean() > inactive ? INFINITY : -INFINITY);
  rows.push_back({"active_utility_exceeds_inactive_zscore", 3.0, z, 0.0, z > 3.0});
}

inline void add_ladder_checks(std::vector<CheckRow>& rows, const CheckOptions& opts) {
  // Last 20 steps of the baseline horizon.
  MarketParams market = io::baseline_market();
  market.horizon = 0.1;
  const std::vector<DealerSpec> solo = {{0.1, 1.0, 0, 0.0}};
  const auto ladder = dp::make_ladder(market, solo);

  double h_min = INFINITY, h_max = -INFINITY;
  for (double h : ladder.h[0]) {
    h_min = std::min(h_min, h);
    h_max = std::max(h_max, h);
  }
  rows.push_back({"h_factor_in_unit_interval", 1.0, h_max, 0.0, h_min > 0.0 && h_max <= 1.0});

  const long q_max = 30;
  const auto table = dp::exact_small_dp(0, q_max, ladder);
  double worst_margin = INFINITY;  // min over cells of (inactive kernel - G)/kernel
  for (std::size_t l = 0; l < ladder.n_steps(); ++l)
    for (long q = -q_max; q <= q_max; ++q)
      if (table.resolved(q, l)) {
        const double kernel = quoting::inventory_kernel(0.1, market.sigma, q, ladder.grid.remaining(l));
        worst_margin = std::min(worst_margin, (kernel - table.factor(q, l)) / kernel);
      }
  rows.push_back({"exact_dp_beats_inactive_all_cells", 0.0, worst_margin, 0.0, worst_margin > 0.0});

  // Linearized ladder against the exact value from q = 0 at t = 0.
  dp::LadderState state{0.0, market.s0, {0}};
  const double approx = dp::n_period_value(0, state, 0, ladder);
  const double exact = table.value(0.0, market.s0, 0, 0, 0.1);
  const auto ctx = quoting::QuoteContext::make(solo[0], market, 1, 0, market.horizon);
  const double inactive = quoting::inactive_value(0.0, market.s0, ctx);
  rows.push_back({"linearized_ladder_beats_inactive", inactive, approx, 0.0, approx > inactive});
  rows.push_back({"linearized_vs_exact_value", exact, approx, 0.0, true});

  // Ladder recursion: the last step equals the one-period value.
  const std::size_t last = ladder.n_steps() - 1;
  double recursion_gap = 0.0;
  for (long q = -5; q <= 5; ++q) {
    dp::LadderState st{1.5, market.s0, {q}};
    const double t = ladder.grid.time(last);
    const long inv[] = {q};
    const auto quotes = dp::closed_form_quotes(inv, market.horizon - t, market, solo);
    const double one = dp::one_period_value(0, st.x, st.s, q, quotes, t, market, solo);
    recursion_gap = std::max(recursion_gap, std::abs(dp::n_period_value(0, st, last, ladder) - one) /
                                                std::abs(one));
  }
  rows.push_back(within("ladder_last_step_equals_one_period", 0.0, recursion_gap, 1e-12));

  if (opts.alt_denominator) {
    const auto alt = dp::make_ladder(market, solo, dp::BracketForm::without_gamma);
    const double alt_value = dp::n_period_value(0, state, 0, alt);
    rows.push_back({"bracket_form_without_gamma_vs_with_gamma", approx, alt_value, 0.0, true});
  }
}

inline std::vector<CheckRow> run_checks(const CheckOptions& opts = {}) {
  std::vector<CheckRow> rows;
  add_formula_checks(rows);
  add_oracle_checks(rows);
  add_engine_checks(rows, opts);
  add_ladder_checks(rows, opts);
  return rows;
}

}  // namespace dealerfield::checks
