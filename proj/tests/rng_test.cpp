#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "parisian/rng.hpp"
#include "parisian/stats.hpp"

namespace parisian {
namespace {

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0u, 0u, 0u, 0u}, {0u, 0u}),
            (PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(philox4x32_10({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}),
            (PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, ReplicationsAndStreamsAreDistinct) {
  PhiloxEngine a({42, 0}, Stream::Path), b({42, 1}, Stream::Path), c({42, 0}, Stream::Window),
      d({43, 0}, Stream::Path);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Philox, DeterministicGivenSeedSpec) {
  PhiloxEngine a({7, 123}, Stream::Path), b({7, 123}, Stream::Path);
  std::vector<double> x(100), y(100);
  fill_standard_normal(a, x);
  fill_standard_normal(b, y);
  EXPECT_EQ(x, y);
}

TEST(Philox, NormalMomentsWithinMonteCarloError) {
  PhiloxEngine eng({2024, 0}, Stream::Path);
  stats::RunningStats s;
  const int n = 200000;
  for (int i = 0; i < n; ++i) s.push(standard_normal(eng));
  EXPECT_LT(std::abs(s.mean()), 4.0 / std::sqrt(n));
  EXPECT_LT(std::abs(s.variance() - 1.0), 4.0 * std::sqrt(2.0 / n));
}

TEST(Philox, UniformIsOpenInterval) {
  PhiloxEngine eng({1, 1}, Stream::Tilt);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform01(eng);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Philox, ExponentialMean) {
  PhiloxEngine eng({5, 0}, Stream::Window);
  stats::RunningStats s;
  for (int i = 0; i < 100000; ++i) s.push(exponential(eng, 2.0));
  EXPECT_NEAR(s.mean(), 0.5, 4.0 * s.stderr_of_mean());
}

}  // namespace
}  // namespace parisian
