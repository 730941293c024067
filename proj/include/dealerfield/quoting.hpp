#pragma once

// Closed-form quoting: the frozen-inventory value function, reservation
// prices, and the competitive optimal bid/ask offsets.

#include <cmath>
#include <cstddef>

#include "dealerfield/model.hpp"

namespace dealerfield::quoting {

/// Everything the closed-form quotes depend on for one dealer at one instant.
struct QuoteContext {
  long q = 0;
  double gamma = 0.1;
  double beta = 1.0;
  double k = 1.5;
  std::size_t n_dealers = 1;
  double sigma = 2.0;
  double tau = 1.0;  // time remaining, T - t

  static QuoteContext make(const DealerSpec& dealer, const MarketParams& market,
                           std::size_t n_dealers, long q, double tau) {
    return QuoteContext{q, dealer.gamma, dealer.beta, market.k, n_dealers, market.sigma, tau};
  }

  /// gamma * sigma^2 * tau: the inventory risk carried per unit of q.
  [[nodiscard]] double risk() const { return gamma * sigma * sigma * tau; }
};

/// Value of holding inventory q to the horizon without quoting:
/// -exp(-gamma x) exp(-gamma q s) exp(gamma^2 q^2 sigma^2 tau / 2).
inline double inactive_value(double x, double s, const QuoteContext& c) {
  const double q = static_cast<double>(c.q);
  return -std::exp(-c.gamma * (x + q * s) +
                   0.5 * c.gamma * c.gamma * q * q * c.sigma * c.sigma * c.tau);
}

/// exp(gamma^2 q^2 sigma^2 tau / 2), the inventory part of inactive_value.
inline double inventory_kernel(double gamma, double sigma, long q, double tau) {
  const double qd = static_cast<double>(q);
  return std::exp(0.5 * gamma * gamma * qd * qd * sigma * sigma * tau);
}

struct ReservationPrices {
  double bid;
  double ask;
  double mid;
};

inline ReservationPrices reservation_prices(double s, const QuoteContext& c) {
  const double q = static_cast<double>(c.q);
  const double half_risk = 0.5 * c.risk();
  return {s - (1.0 + 2.0 * q) * half_risk, s + (1.0 - 2.0 * q) * half_risk, s - q * c.risk()};
}

/// (1/gamma) ln(1 + gamma / ((k + 1 - 1/N) beta)); half the inventory-free
/// part of the spread.
inline double competition_offset(double gamma, double beta, double k, std::size_t n_dealers) {
  return std::log1p(gamma / effective_decay(k, beta, n_dealers)) / gamma;
}

inline double competition_offset(const QuoteContext& c) {
  return competition_offset(c.gamma, c.beta, c.k, c.n_dealers);
}

/// Midpoint of the two offsets, (1/gamma) ln(...) + gamma sigma^2 tau / 2;
/// the quotes sit at this distance plus or minus q gamma sigma^2 tau.
inline double half_spread(const QuoteContext& c) {
  return competition_offset(c) + 0.5 * c.risk();
}

inline QuotePair optimal_quotes(const QuoteContext& c) {
  const double center = half_spread(c);
  const double skew = static_cast<double>(c.q) * c.risk();
  return {center + skew, center - skew};
}

inline double spread(const QuoteContext& c) { return 2.0 * half_spread(c); }

/// Skew of the quotes around the mid, delta_a - delta_b = -2 q gamma sigma^2 tau.
inline double price_adjustment(const QuoteContext& c) {
  return -2.0 * static_cast<double>(c.q) * c.risk();
}

}  // namespace dealerfield::quoting
