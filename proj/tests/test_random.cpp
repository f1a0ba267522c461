#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "panotrack/random.hpp"

namespace panotrack {
namespace {

// Known-answer vectors of the reference Philox4x32-10 implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(KeyedRng, PureFunctionOfKey) {
  const KeyedRng a(42);
  const KeyedRng b(42);
  EXPECT_EQ(a.uniform(7, 3), b.uniform(7, 3));
  EXPECT_NE(a.uniform(7, 3), a.uniform(7, 4));
  EXPECT_NE(a.uniform(7, 3), a.uniform(8, 3));
  EXPECT_NE(a.uniform(7, 3), KeyedRng(43).uniform(7, 3));
  EXPECT_NE(a.derive(0, 1), a.derive(1, 1));
}

TEST(KeyedRng, UniformRangeAndMean) {
  const KeyedRng rng(5);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const double u = rng.uniform(i, 0);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 20000.0, 0.5, 0.01);
}

TEST(KeyedRng, UniformIntCoversInclusiveRange) {
  const KeyedRng rng(9);
  std::set<std::int64_t> seen;
  for (std::uint64_t i = 0; i < 2000; ++i) {
    const auto v = rng.uniform_int(-2, 2, i, 1);
    ASSERT_GE(v, -2);
    ASSERT_LE(v, 2);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
  EXPECT_EQ(rng.uniform_int(3, 3, 0, 0), 3);
}

TEST(KeyedRng, NormalMoments) {
  const KeyedRng rng(11);
  double s = 0.0;
  double s2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(static_cast<std::uint64_t>(i), 2);
    ASSERT_TRUE(std::isfinite(z));
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.03);
  EXPECT_NEAR(s2 / n, 1.0, 0.05);
}

}  // namespace
}  // namespace panotrack
