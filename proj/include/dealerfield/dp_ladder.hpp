#pragma once

// Discrete-period value ladder for competing dealers.
//
// A dealer quoting at step l and then following the closed-form policy has
// (under the first-order arrival linearization) value
//
//   -exp(-gamma (x + q s)) exp(gamma^2 q^2 sigma^2 (T - t_l) / 2)
//     * [1 - gamma dt_l / (c beta + gamma) * (lambda_a + lambda_b)]
//     * prod_{m > l} h_m,        c = k + 1 - 1/N.
//
// This header provides that ladder, the h correction factors, a brute-force
// maximizer of the exact one-period expected utility (used to check the
// closed-form quotes), and an exact backward induction over a bounded
// inventory grid that keeps the arrival terms unlinearized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dealerfield/model.hpp"
#include "dealerfield/orderflow.hpp"
#include "dealerfield/quoting.hpp"

namespace dealerfield::dp {

enum class DpErrorCode { BracketOutOfRange, MaximumOnBoundary, InventoryBoundHit, BadInput };

class DpError : public std::runtime_error {
 public:
  DpError(DpErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] DpErrorCode code() const { return code_; }

 private:
  DpErrorCode code_;
};

/// Which denominator multiplies the arrival term of the period bracket.
/// `with_gamma` is (c beta + gamma); `without_gamma` is c beta, kept only for
/// comparison runs.
enum class BracketForm { with_gamma, without_gamma };

namespace detail {

inline void require_dealer(std::size_t i, std::span<const DealerSpec> dealers) {
  if (i >= dealers.size()) throw DpError(DpErrorCode::BadInput, "dealer index out of range");
}

struct SideRates {
  double ask;
  double bid;
};

/// Exact intensities seen by dealer i when every dealer posts `quotes`.
inline SideRates rates_for(std::size_t i, std::span<const QuotePair> quotes,
                           std::span<const DealerSpec> dealers, const MarketParams& market) {
  const std::size_t n = dealers.size();
  std::vector<double> asks(n), bids(n), betas(n);
  for (std::size_t j = 0; j < n; ++j) {
    asks[j] = quotes[j].delta_a;
    bids[j] = quotes[j].delta_b;
    betas[j] = dealers[j].beta;
  }
  const orderflow::IntensityInputs ask_in{asks, betas, market.a_rate, market.k};
  const orderflow::IntensityInputs bid_in{bids, betas, market.a_rate, market.k};
  return {orderflow::dealer_rate(i, ask_in), orderflow::dealer_rate(i, bid_in)};
}

inline double bracket(double gamma, double decay, double period, double rate_sum, BracketForm form) {
  const double denom = form == BracketForm::with_gamma ? decay + gamma : decay;
  const double b = 1.0 - gamma * period / denom * rate_sum;
  if (!(b > 0.0) || b > 1.0)
    throw DpError(DpErrorCode::BracketOutOfRange,
                  "period bracket " + std::to_string(b) + " outside (0, 1]; step too long");
  return b;
}

}  // namespace detail

/// Correction factor for one period of the linearized ladder.
inline double h_factor(std::size_t i, double t_l, double period, const MarketParams& market,
                       std::span<const DealerSpec> dealers) {
  detail::require_dealer(i, dealers);
  const std::size_t n = dealers.size();
  const double tau = market.horizon - t_l;
  const double sig2 = market.sigma * market.sigma;
  auto quoted_spread = [&](const DealerSpec& d) {
    return 2.0 * quoting::competition_offset(d.gamma, d.beta, market.k, n) + d.gamma * sig2 * tau;
  };
  const auto& me = dealers[i];
  const double decay = effective_decay(market.k, me.beta, n);
  double others = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) others += dealers[j].beta * quoted_spread(dealers[j]);
  const double linear = 2.0 - decay * quoted_spread(me) - market.k * others;
  return 1.0 - market.a_rate * me.gamma * period / (decay + me.gamma) * linear;
}

/// Everything needed to value a position at any step of the ladder.
struct PeriodLadder {
  MarketParams market;
  std::vector<DealerSpec> dealers;
  TimeGrid grid{1.0, 1.0, 0};
  std::vector<std::vector<double>> h;  // h[i][l]
  BracketForm form = BracketForm::with_gamma;

  [[nodiscard]] std::size_t n_steps() const { return grid.size(); }
  [[nodiscard]] std::size_t n_dealers() const { return dealers.size(); }

  /// prod_{m=first}^{n-1} h[i][m]; empty product is 1.
  [[nodiscard]] double h_product(std::size_t i, std::size_t first) const {
    double p = 1.0;
    for (std::size_t m = first; m < n_steps(); ++m) p *= h[i][m];
    return p;
  }
};

inline PeriodLadder make_ladder(const MarketParams& market, std::vector<DealerSpec> dealers,
                                BracketForm form = BracketForm::with_gamma) {
  if (dealers.empty()) throw DpError(DpErrorCode::BadInput, "ladder needs at least one dealer");
  PeriodLadder ladder;
  ladder.market = market;
  ladder.dealers = std::move(dealers);
  ladder.grid = time_grid(market);
  ladder.form = form;
  ladder.h.assign(ladder.n_dealers(), std::vector<double>(ladder.n_steps()));
  for (std::size_t i = 0; i < ladder.n_dealers(); ++i)
    for (std::size_t l = 0; l < ladder.n_steps(); ++l)
      ladder.h[i][l] = h_factor(i, ladder.grid.time(l), ladder.grid.dt(), market, ladder.dealers);
  return ladder;
}

/// Mark-to-market state of dealer i plus the inventories of every dealer
/// (needed because competitors' quotes enter the arrival rates).
struct LadderState {
  double x = 0.0;
  double s = 100.0;
  std::vector<long> inventories;
};

inline std::vector<QuotePair> closed_form_quotes(std::span<const long> inventories, double tau,
                                                 const MarketParams& market,
                                                 std::span<const DealerSpec> dealers) {
  std::vector<QuotePair> out(dealers.size());
  for (std::size_t j = 0; j < dealers.size(); ++j)
    out[j] = quoting::optimal_quotes(
        quoting::QuoteContext::make(dealers[j], market, dealers.size(), inventories[j], tau));
  return out;
}

/// Value of dealer i's last trading period starting at time t (period length
/// T - t) when all dealers post `quotes`.
inline double one_period_value(std::size_t i, double x, double s, long q,
                               std::span<const QuotePair> quotes, double t,
                               const MarketParams& market, std::span<const DealerSpec> dealers) {
  detail::require_dealer(i, dealers);
  if (quotes.size() != dealers.size())
    throw DpError(DpErrorCode::BadInput, "one quote pair per dealer required");
  const double tau = market.horizon - t;
  const auto& me = dealers[i];
  const auto ctx = quoting::QuoteContext::make(me, market, dealers.size(), q, tau);
  const auto rates = detail::rates_for(i, quotes, dealers, market);
  const double b = detail::bracket(me.gamma, effective_decay(market.k, me.beta, dealers.size()),
                                   tau, rates.ask + rates.bid, BracketForm::with_gamma);
  return quoting::inactive_value(x, s, ctx) * b;
}

/// Linearized ladder value of dealer i at step l when every dealer quotes the
/// closed form from the inventories in `state`.
inline double n_period_value(std::size_t i, const LadderState& state, std::size_t l,
                             const PeriodLadder& ladder) {
  detail::require_dealer(i, ladder.dealers);
  if (l >= ladder.n_steps()) throw DpError(DpErrorCode::BadInput, "step index past last quoting time");
  if (state.inventories.size() != ladder.n_dealers())
    throw DpError(DpErrorCode::BadInput, "one inventory per dealer required");
  const auto& me = ladder.dealers[i];
  const double tau = ladder.grid.remaining(l);
  const auto quotes = closed_form_quotes(state.inventories, tau, ladder.market, ladder.dealers);
  const auto rates = detail::rates_for(i, quotes, ladder.dealers, ladder.market);
  const double decay = effective_decay(ladder.market.k, me.beta, ladder.n_dealers());
  const double b =
      detail::bracket(me.gamma, decay, ladder.grid.dt(), rates.ask + rates.bid, ladder.form);
  const auto ctx = quoting::QuoteContext::make(me, ladder.market, ladder.n_dealers(),
                                               state.inventories[i], tau);
  return quoting::inactive_value(state.x, state.s, ctx) * b * ladder.h_product(i, l + 1);
}

// ---------------------------------------------------------------------------
// Brute-force one-period best response

struct OracleOptions {
  double window = 10.0;         // search delta in [-window, window]
  std::size_t grid_points = 401;
  double tolerance = 1e-6;      // final pattern-search step
  bool widen_on_boundary = false;
  double max_window = 1280.0;
};

struct OracleResult {
  QuotePair argmax;
  bool degenerate = false;  // objective constant in both offsets
  double window = 0.0;      // window the maximum was found in
};

/// Exact expected utility of dealer i over one period of length `period`
/// starting at time t, with no trading afterwards, when dealer i posts `mine`
/// and the others keep `quotes` (entry i is ignored). Terms: an ask fill, a
/// bid fill, or no fill, each followed by holding the new inventory to T.
inline double one_period_objective(std::size_t i, double x, double s, long q, QuotePair mine,
                                   std::span<const QuotePair> quotes, double t, double period,
                                   const MarketParams& market, std::span<const DealerSpec> dealers) {
  detail::require_dealer(i, dealers);
  std::vector<QuotePair> all(quotes.begin(), quotes.end());
  all[i] = mine;
  const auto rates = detail::rates_for(i, all, dealers, market);
  const double g = dealers[i].gamma;
  const double tau = market.horizon - t;
  const double wealth = std::exp(-g * (x + static_cast<double>(q) * s));
  const double p_a = rates.ask * period;
  const double p_b = rates.bid * period;
  const double k_sell = quoting::inventory_kernel(g, market.sigma, q - 1, tau);
  const double k_buy = quoting::inventory_kernel(g, market.sigma, q + 1, tau);
  const double k_hold = quoting::inventory_kernel(g, market.sigma, q, tau);
  return -wealth * (p_a * std::exp(-g * mine.delta_a) * k_sell +
                    p_b * std::exp(-g * mine.delta_b) * k_buy + (1.0 - p_a - p_b) * k_hold);
}

namespace detail {

/// Minimizes a 1-D function on [-window, window]: coarse grid, then compass
/// search down to `tol`. Returns NaN position if the objective is flat.
template <typename F>
double minimize_on_window(F&& f, double window, std::size_t points, double tol, bool& flat,
                          bool& on_boundary) {
  const double h0 = 2.0 * window / static_cast<double>(points - 1);
  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  double worst_val = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < points; ++p) {
    const double v = f(-window + h0 * static_cast<double>(p));
    if (v < best_val) {
      best_val = v;
      best = p;
    }
    worst_val = std::max(worst_val, v);
  }
  flat = best_val == worst_val;
  on_boundary = !flat && (best == 0 || best == points - 1);
  if (flat || on_boundary) return -window + h0 * static_cast<double>(best);

  double x = -window + h0 * static_cast<double>(best);
  double fx = best_val;
  for (double step = h0; step >= tol; step *= 0.5) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (double cand : {x - step, x + step}) {
        const double fc = f(cand);
        if (fc < fx) {
          x = cand;
          fx = fc;
          moved = true;
        }
      }
    }
  }
  return x;
}

}  // namespace detail

/// Numerically maximizes one_period_objective over dealer i's own offsets
/// with the competitors' quotes held fixed.
///
/// The ask fill, bid fill and no-fill terms make the objective a constant
/// plus an ask-only part plus a bid-only part, so each offset is searched on
/// its own: the exact same maximizer, without the cancellation that summing
/// terms of wildly different magnitude would cause.
inline OracleResult oracle_one_period_argmax(std::size_t i, long q, std::span<const QuotePair> quotes,
                                             double t, const MarketParams& market,
                                             std::span<const DealerSpec> dealers,
                                             const OracleOptions& opts = {}) {
  detail::require_dealer(i, dealers);
  if (quotes.size() != dealers.size())
    throw DpError(DpErrorCode::BadInput, "one quote pair per dealer required");
  if (opts.grid_points < 3) throw DpError(DpErrorCode::BadInput, "oracle grid needs >= 3 points");

  const double g = dealers[i].gamma;
  const double tau = market.horizon - t;
  const double k_hold = quoting::inventory_kernel(g, market.sigma, q, tau);
  const double sell_ratio = quoting::inventory_kernel(g, market.sigma, q - 1, tau) / k_hold;
  const double buy_ratio = quoting::inventory_kernel(g, market.sigma, q + 1, tau) / k_hold;

  std::vector<QuotePair> all(quotes.begin(), quotes.end());
  // Each side's contribution to -E[U] / (wealth * k_hold * period), minus the
  // constant 1. Smaller is better.
  auto ask_term = [&](double d) {
    all[i].delta_a = d;
    const double rate = detail::rates_for(i, all, dealers, market).ask;
    return rate * (std::exp(-g * d) * sell_ratio - 1.0);
  };
  auto bid_term = [&](double d) {
    all[i].delta_b = d;
    const double rate = detail::rates_for(i, all, dealers, market).bid;
    return rate * (std::exp(-g * d) * buy_ratio - 1.0);
  };

  double window = opts.window;
  while (true) {
    bool flat_a = false, flat_b = false, edge_a = false, edge_b = false;
    all = std::vector<QuotePair>(quotes.begin(), quotes.end());
    const double da =
        detail::minimize_on_window(ask_term, window, opts.grid_points, opts.tolerance, flat_a, edge_a);
    all = std::vector<QuotePair>(quotes.begin(), quotes.end());
    const double db =
        detail::minimize_on_window(bid_term, window, opts.grid_points, opts.tolerance, flat_b, edge_b);
    if (flat_a && flat_b) return {{0.0, 0.0}, true, window};
    if (edge_a || edge_b) {
      if (opts.widen_on_boundary && window * 2.0 <= opts.max_window) {
        window *= 2.0;
        continue;
      }
      throw DpError(DpErrorCode::MaximumOnBoundary,
                    "one-period maximum on search window edge +/-" + std::to_string(window));
    }
    return {{db, da}, false, window};
  }
}

// ---------------------------------------------------------------------------
// Exact backward induction on a bounded inventory grid

/// Inventory-dependent factor G_l(q) of the exact policy value
/// V = -exp(-gamma (x + q s)) G_l(q), for |q| <= q_max and l = 0..n.
/// Cells whose reachable inventories leave the grid are unresolved.
class ExactValueTable {
 public:
  ExactValueTable(long q_max, std::size_t n_steps)
      : q_max_(q_max), n_(n_steps),
        g_((n_steps + 1) * static_cast<std::size_t>(2 * q_max + 1),
           std::numeric_limits<double>::quiet_NaN()) {}

  [[nodiscard]] long q_max() const { return q_max_; }
  [[nodiscard]] std::size_t n_steps() const { return n_; }

  [[nodiscard]] bool resolved(long q, std::size_t l) const {
    return in_grid(q) && l <= n_ && std::abs(q) + static_cast<long>(n_ - l) <= q_max_;
  }

  /// G_l(q); throws InventoryBoundHit for unresolved cells.
  [[nodiscard]] double factor(long q, std::size_t l) const {
    if (!resolved(q, l))
      throw DpError(DpErrorCode::InventoryBoundHit,
                    "inventory " + std::to_string(q) + " at step " + std::to_string(l) +
                        " can reach the grid bound " + std::to_string(q_max_) + "; enlarge it");
    return at(q, l);
  }

  [[nodiscard]] double value(double x, double s, long q, std::size_t l, double gamma) const {
    return -std::exp(-gamma * (x + static_cast<double>(q) * s)) * factor(q, l);
  }

  double& at(long q, std::size_t l) { return g_[index(q, l)]; }
  [[nodiscard]] double at(long q, std::size_t l) const { return g_[index(q, l)]; }

 private:
  [[nodiscard]] bool in_grid(long q) const { return q >= -q_max_ && q <= q_max_; }
  [[nodiscard]] std::size_t index(long q, std::size_t l) const {
    return l * static_cast<std::size_t>(2 * q_max_ + 1) + static_cast<std::size_t>(q + q_max_);
  }

  long q_max_;
  std::size_t n_;
  std::vector<double> g_;
};

inline constexpr std::size_t kExactDpMaxSteps = 50;

/// Policy evaluation of the closed-form quotes for dealer i with exact
/// (non-linearized) arrival probabilities. Competitors quote the closed form
/// at their initial inventories, which stay frozen.
inline ExactValueTable exact_small_dp(std::size_t i, long q_max, const PeriodLadder& ladder) {
  detail::require_dealer(i, ladder.dealers);
  const std::size_t n = ladder.n_steps();
  if (n > kExactDpMaxSteps)
    throw DpError(DpErrorCode::BadInput, "exact DP limited to " + std::to_string(kExactDpMaxSteps) +
                                             " steps, got " + std::to_string(n));
  if (q_max < 0) throw DpError(DpErrorCode::BadInput, "q_max must be >= 0");

  const auto& market = ladder.market;
  const auto& me = ladder.dealers[i];
  const double g = me.gamma;
  const double dt = ladder.grid.dt();
  std::vector<long> inventories(ladder.n_dealers());
  for (std::size_t j = 0; j < inventories.size(); ++j) inventories[j] = ladder.dealers[j].q0;

  ExactValueTable table(q_max, n);
  for (long q = -q_max; q <= q_max; ++q) table.at(q, n) = 1.0;
  // Holding q' across one step multiplies the factor by exp(gamma^2 q'^2 sigma^2 dt / 2).
  auto diffuse = [&](long qq) { return quoting::inventory_kernel(g, market.sigma, qq, dt); };

  for (std::size_t l = n; l-- > 0;) {
    const double tau = ladder.grid.remaining(l);
    const long reach = q_max - static_cast<long>(n - l);
    for (long q = -reach; q <= reach; ++q) {
      inventories[i] = q;
      const auto quotes = closed_form_quotes(inventories, tau, market, ladder.dealers);
      const auto rates = detail::rates_for(i, quotes, ladder.dealers, market);
      const double p_a = rates.ask * dt;
      const double p_b = rates.bid * dt;
      if (p_a + p_b > 1.0)
        throw DpError(DpErrorCode::BracketOutOfRange,
                      "fill probabilities exceed 1 at q=" + std::to_string(q) + ", step " +
                          std::to_string(l));
      const auto& mine = quotes[i];
      table.at(q, l) = p_a * std::exp(-g * mine.delta_a) * diffuse(q - 1) * table.at(q - 1, l + 1) +
                       p_b * std::exp(-g * mine.delta_b) * diffuse(q + 1) * table.at(q + 1, l + 1) +
                       (1.0 - p_a - p_b) * diffuse(q) * table.at(q, l + 1);
    }
  }
  return table;
}

}  // namespace dealerfield::dp
