#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dealerfield/orderflow.hpp"
#include "oracles.hpp"

using namespace dealerfield::orderflow;

TEST(AggregateRate, ZeroOffsetsGiveA) {
  const std::vector<double> d = {0.0, 0.0, 0.0}, b = {0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(aggregate_rate({d, b, 140.0, 1.5}), 140.0);
}

TEST(AggregateRate, FrozenValues) {
  const std::vector<double> d1 = {1.0}, b1 = {1.0};
  EXPECT_NEAR(aggregate_rate({d1, b1, 140.0, 1.5}), 31.2382224207801760, 1e-12);
  const std::vector<double> d2 = {1.0, 2.0}, b2 = {0.5, 0.5};
  EXPECT_NEAR(aggregate_rate({d2, b2, 140.0, 1.5}), 14.7558914386610071, 1e-12);
}

TEST(DealerRate, SingleDealerEqualsAggregate) {
  const std::vector<double> d = {0.7}, b = {1.0};
  const IntensityInputs in{d, b, 140.0, 1.5};
  EXPECT_EQ(dealer_rate(0, in), aggregate_rate(in));
}

TEST(DealerRate, FrozenTwoDealerValues) {
  const std::vector<double> d = {1.0, 2.0}, b = {0.5, 0.5};
  const IntensityInputs in{d, b, 140.0, 1.5};
  EXPECT_NEAR(dealer_rate(0, in), 11.4918998073458313, 1e-12);
  EXPECT_NEAR(dealer_rate(1, in), 8.94990056893906018, 1e-12);
}

TEST(DealerRate, OutOfRangeAndMismatchedInputs) {
  const std::vector<double> d = {1.0, 2.0}, b = {0.5, 0.5}, short_b = {1.0};
  EXPECT_THROW(dealer_rate(2, {d, b, 140.0, 1.5}), std::out_of_range);
  EXPECT_THROW(aggregate_rate({d, short_b, 140.0, 1.5}), std::invalid_argument);
  EXPECT_THROW(aggregate_rate({{}, {}, 140.0, 1.5}), std::invalid_argument);
}

TEST(DealerRate, MatchesDirectFormula) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> offset(-3.0, 5.0), weight(0.05, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 7;
    std::vector<double> d(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
      d[j] = offset(gen);
      b[j] = weight(gen);
    }
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(dealer_rate(i, {d, b, 140.0, 1.5}) / oracle::intensity(d, b, i, 140.0, 1.5), 1.0, 1e-13);
  }
}

// Widening any quote lowers every dealer's flow; widening one's own quote
// lowers one's own flow faster than a competitor's widening does.
TEST(DealerRate, MonotoneInEveryOffset) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> offset(-2.0, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 6;
    std::vector<double> d(n), b(n, 1.0 / static_cast<double>(n));
    for (auto& v : d) v = offset(gen);
    for (std::size_t i = 0; i < n; ++i) {
      const double before = dealer_rate(i, {d, b, 140.0, 1.5});
      for (std::size_t j = 0; j < n; ++j) {
        auto wider = d;
        wider[j] += 0.1;
        const double after = dealer_rate(i, {wider, b, 140.0, 1.5});
        EXPECT_LT(after, before);
        if (j != i) {
          auto own = d;
          own[i] += 0.1;
          EXPECT_LT(dealer_rate(i, {own, b, 140.0, 1.5}), after);
        }
      }
    }
  }
}

TEST(DealerRate, SeparableRatio) {
  const std::vector<double> b = {0.2, 0.3, 0.5};
  const std::vector<double> d1 = {1.0, 0.4, -0.3}, d2 = {1.0, 2.5, 3.0};
  const IntensityInputs in1{d1, b, 140.0, 1.5}, in2{d2, b, 140.0, 1.5};
  EXPECT_NEAR(dealer_rate(0, in1) / aggregate_rate(in1), dealer_rate(0, in2) / aggregate_rate(in2), 1e-14);
}

TEST(AggregateRate, SymmetricQuotesReduceToSingleDealer) {
  for (std::size_t n : {1u, 2u, 3u, 7u, 20u}) {
    const std::vector<double> d(n, 0.83), b(n, 1.0 / static_cast<double>(n));
    EXPECT_NEAR(aggregate_rate({d, b, 140.0, 1.5}), 140.0 * std::exp(-1.5 * 0.83), 1e-11);
  }
}

TEST(FillProbability, Basic) {
  EXPECT_NEAR(fill_probability(140.0, 0.005).p, 0.7, 1e-15);
  EXPECT_FALSE(fill_probability(140.0, 0.005).clamped);
  EXPECT_EQ(fill_probability(0.0, 0.005).p, 0.0);
}

TEST(FillProbability, ClampsAndCounts) {
  std::size_t clamps = 0;
  EXPECT_EQ(fill_probability(300.0, 0.005, clamps), 1.0);
  EXPECT_EQ(clamps, 1u);
  EXPECT_NEAR(fill_probability(100.0, 0.005, clamps), 0.5, 1e-15);
  EXPECT_EQ(clamps, 1u);
  EXPECT_TRUE(fill_probability(300.0, 0.005).clamped);
}
