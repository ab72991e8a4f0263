// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>

#include "runsort/gen.hpp"
#include "runsort/node_power.hpp"

using namespace runsort;

TEST(NodePower, SixRunExampleValues) {
  EXPECT_EQ(node_power_def(1, 5, 6, 8, 28), 3u);
  EXPECT_EQ(node_power_def(9, 11, 12, 25, 28), 1u);
  EXPECT_EQ(node_power_def(26, 26, 27, 28, 28), 4u);
  EXPECT_EQ(node_power_bitwise(1, 5, 6, 8, 28), 3u);
  EXPECT_EQ(node_power_bitwise(26, 26, 27, 28, 28), 4u);
}

TEST(NodePower, SymmetricHalves) {
  EXPECT_EQ(node_power_def(1, 1, 2, 2, 2), 1u);
  EXPECT_EQ(node_power_bitwise(1, 1, 2, 2, 2), 1u);
}

TEST(NodePower, RejectsInvalidTuples) {
  EXPECT_THROW(node_power_def(0, 1, 2, 2, 2), std::invalid_argument);
  EXPECT_THROW(node_power_def(1, 2, 2, 3, 3), std::invalid_argument);
  EXPECT_THROW(node_power_def(1, 1, 2, 4, 3), std::invalid_argument);
  EXPECT_THROW(node_power_def(2, 1, 3, 3, 3), std::invalid_argument);
  EXPECT_THROW(node_power_bitwise(1, 1, 2, 2, std::uint64_t{1} << 31), std::out_of_range);
}

TEST(NodePower, ExhaustiveAgreementUpTo64) {
  std::uint64_t tuples = 0;
  for (std::uint64_t n = 2; n <= 64; ++n) {
    const auto cap = static_cast<power_t>(std::bit_width(n));  // floor(lg n) + 1
    for (std::uint64_t s1 = 1; s1 <= n; ++s1) {
      for (std::uint64_t e1 = s1; e1 < n; ++e1) {
        for (std::uint64_t s2 = e1 + 1; s2 <= n; ++s2) {
          for (std::uint64_t e2 = s2; e2 <= n; ++e2) {
            const auto d = node_power_def(s1, e1, s2, e2, n);
            ASSERT_EQ(d, node_power_bitwise(s1, e1, s2, e2, n))
                << s1 << "," << e1 << "," << s2 << "," << e2 << "," << n;
            ASSERT_GE(d, 1u);
            if (s2 == e1 + 1) {
              ASSERT_LE(d, cap);
            }
            ++tuples;
          }
        }
      }
    }
  }
  EXPECT_GT(tuples, 0u);
}

TEST(NodePower, RandomLargeTuples) {
  Rng rng(2024, 5);
  for (int t = 0; t < 100000; ++t) {
    const std::uint64_t n = 2 + rng.below((std::uint64_t{1} << 30) - 1);
    const std::uint64_t s1 = 1 + rng.below(n - 1);
    const std::uint64_t e1 = s1 + rng.below(n - s1);
    const std::uint64_t s2 = e1 + 1 + rng.below(n - e1);
    const std::uint64_t e2 = s2 + rng.below(n - s2 + 1);
    ASSERT_EQ(node_power_def(s1, e1, s2, e2, n), node_power_bitwise(s1, e1, s2, e2, n))
        << s1 << "," << e1 << "," << s2 << "," << e2 << "," << n;
  }
}

TEST(NodePower, AdjacentWrapperMatchesDefinition) {
  // 0-based [0..4], [5..7] of n=28 is the first boundary of the six-run example.
  EXPECT_EQ(node_power(0, 4, 7, 28), 3u);
  const std::uint64_t big = std::uint64_t{1} << 33;
  EXPECT_EQ(node_power(0, big / 2 - 1, big - 1, big), 1u);
}
