#pragma once

// Competitive order-arrival intensities. The aggregate market-order rate on
// one side of the book is A * exp(-k * sum_j beta_j * delta_j); dealer i sees
// that rate further damped by exp(-(1 - 1/N) * beta_i * delta_i).

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace dealerfield::orderflow {

/// One side of the book (all bids or all asks) for every dealer.
struct IntensityInputs {
  std::span<const double> deltas;
  std::span<const double> betas;
  double a_rate = 0.0;
  double k = 0.0;

  [[nodiscard]] std::size_t n_dealers() const { return deltas.size(); }
};

inline void require_consistent(const IntensityInputs& in) {
  if (in.deltas.empty() || in.deltas.size() != in.betas.size())
    throw std::invalid_argument("intensity inputs need N >= 1 deltas and betas of equal length");
}

inline double aggregate_rate(const IntensityInputs& in) {
  require_consistent(in);
  double weighted = 0.0;
  for (std::size_t j = 0; j < in.deltas.size(); ++j) weighted += in.betas[j] * in.deltas[j];
  return in.a_rate * std::exp(-in.k * weighted);
}

inline double dealer_rate(std::size_t i, const IntensityInputs& in) {
  require_consistent(in);
  if (i >= in.n_dealers()) throw std::out_of_range("dealer index out of range");
  const double n = static_cast<double>(in.n_dealers());
  return aggregate_rate(in) * std::exp(-(1.0 - 1.0 / n) * in.betas[i] * in.deltas[i]);
}

struct FillProbability {
  double p = 0.0;
  bool clamped = false;
};

/// Per-step Bernoulli fill probability rate*dt, clamped to 1.
inline FillProbability fill_probability(double rate, double dt) {
  const double raw = rate * dt;
  if (raw > 1.0) return {1.0, true};
  return {raw < 0.0 ? 0.0 : raw, false};
}

/// Same as above, bumping `clamp_count` whenever the clamp engages.
inline double fill_probability(double rate, double dt, std::size_t& clamp_count) {
  const auto fp = fill_probability(rate, dt);
  if (fp.clamped) ++clamp_count;
  return fp.p;
}

}  // namespace dealerfield::orderflow
