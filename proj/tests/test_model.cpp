#include <gtest/gtest.h>

#include <cmath>

#include "dealerfield/model.hpp"

using namespace dealerfield;

namespace {

SimConfig two_dealers(double b1, double b2) {
  SimConfig c;
  c.dealers = {{0.1, b1, 0, 0.0}, {0.1, b2, 0, 0.0}};
  return c;
}

}  // namespace

TEST(Validate, EqualWeightsAccepted) {
  const auto c = validate(two_dealers(0.5, 0.5));
  EXPECT_EQ(c.n_steps, 200u);
}

TEST(Validate, SingleDealerWithUnitWeight) {
  SimConfig c;
  c.dealers = {{0.1, 1.0, 0, 0.0}};
  EXPECT_NO_THROW(validate(c));
}

TEST(Validate, BetaSumViolationUnlessOverridden) {
  auto c = two_dealers(0.5, 0.6);
  try {
    validate(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(e.has(IssueCode::BetaSumViolation));
    EXPECT_EQ(e.issues().size(), 1u);
  }
  c.flags.beta_sum_override = true;
  EXPECT_NO_THROW(validate(c));
}

TEST(Validate, ReportsEveryViolation) {
  SimConfig c;
  c.market.dt = 0.003;  // 1 / 0.003 is not an integer
  c.runs = 0;
  c.dealers = {{0.0, 0.5, 0, 0.0}, {-1.0, 0.5, 0, 0.0}};
  try {
    validate(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_TRUE(e.has(IssueCode::BadTimeGrid));
    EXPECT_TRUE(e.has(IssueCode::BadRunCount));
    EXPECT_TRUE(e.has(IssueCode::NonPositiveGamma));
    EXPECT_EQ(e.issues().size(), 4u);  // both gammas flagged
  }
}

TEST(Validate, EmptyDealerList) {
  SimConfig c;
  EXPECT_THROW(
      {
        try {
          validate(c);
        } catch (const ConfigError& e) {
          EXPECT_TRUE(e.has(IssueCode::EmptyDealerList));
          throw;
        }
      },
      ConfigError);
}

TEST(Validate, BadMarketParams) {
  auto c = two_dealers(0.5, 0.5);
  c.market.k = 0.0;
  c.market.sigma = -1.0;
  c.market.a_rate = -3.0;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.issues().size(), 3u);
    EXPECT_TRUE(e.has(IssueCode::BadMarketParams));
  }
  c = two_dealers(0.5, 0.5);
  c.market.dt = 2.0;  // longer than the horizon
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Validate, Idempotent) {
  const auto once = validate(two_dealers(0.25, 0.75));
  const auto twice = validate(once);
  EXPECT_EQ(once.n_steps, twice.n_steps);
  EXPECT_EQ(once.dealers, twice.dealers);
  EXPECT_EQ(once.runs, twice.runs);
  EXPECT_EQ(once.seed, twice.seed);
}

TEST(TimeGrid, BaselineHasTwoHundredQuotingTimes) {
  const auto g = time_grid(MarketParams{});
  EXPECT_EQ(g.size(), 200u);
  const auto times = g.quoting_times();
  ASSERT_EQ(times.size(), 200u);
  EXPECT_EQ(times.front(), 0.0);
  EXPECT_NEAR(times.back(), 0.995, 1e-15);
}

TEST(TimeGrid, OnePeriod) {
  MarketParams m;
  m.dt = 1.0;
  const auto times = time_grid(m).quoting_times();
  ASSERT_EQ(times.size(), 1u);
  EXPECT_EQ(times[0], 0.0);
}

TEST(TimeGrid, TwoPeriods) {
  MarketParams m;
  m.horizon = 0.01;
  const auto times = time_grid(m).quoting_times();
  ASSERT_EQ(times.size(), 2u);
  EXPECT_EQ(times[0], 0.0);
  EXPECT_NEAR(times[1], 0.005, 1e-15);
}

TEST(TimeGrid, UniformSpacing) {
  for (double dt : {0.001, 0.005, 0.01, 0.1, 0.25}) {
    MarketParams m;
    m.dt = dt;
    const auto g = time_grid(m);
    EXPECT_EQ(g.size(), static_cast<std::size_t>(std::llround(1.0 / dt)));
    for (std::size_t l = 1; l < g.size(); ++l)
      EXPECT_NEAR(g.time(l) - g.time(l - 1), dt, 1e-12 * dt);
  }
}

TEST(TimeGrid, RejectsInvalidMarket) {
  MarketParams m;
  m.horizon = -1.0;
  EXPECT_THROW(time_grid(m), ConfigError);
}

TEST(EffectiveDecay, SingleDealerIsK) {
  EXPECT_EQ(effective_decay(1.5, 1.0, 1), 1.5);
  EXPECT_EQ(effective_decay(0.1, 1.0, 1), 0.1);
  EXPECT_DOUBLE_EQ(effective_decay(1.5, 0.5, 2), 1.0);
}
