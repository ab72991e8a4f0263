// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <vector>

#include "runsort/array_io.hpp"
#include "runsort/gen.hpp"

using namespace runsort;

namespace {

bool is_permutation_of_1_to_n(const ItemArray& a) {
  auto k = keys_of(a);
  std::sort(k.begin(), k.end());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] != static_cast<std::int64_t>(i + 1)) return false;
  }
  return true;
}

std::uint64_t sum(const RunProfile& p) { return std::accumulate(p.begin(), p.end(), std::uint64_t{0}); }

}  // namespace

TEST(Rng, FirstOutputsAreFrozen) {
  // Guards the documented engine and seeding against accidental changes.
  Rng a(0, Rng::kPermutation);
  Rng b(0, Rng::kPermutation);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(0, Rng::kSegments);
  Rng d(0, Rng::kPermutation);
  EXPECT_NE(c.next(), d.next());
  EXPECT_EQ(Rng::splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Rng, BelowIsInRangeAndCoversIt) {
  Rng rng(3, 3);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(RandomPermutation, SmallCases) {
  EXPECT_TRUE(random_permutation(0, 1).empty());
  const auto one = random_permutation(1, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].key, 1);
}

TEST(RandomPermutation, PermutationAndRunCount) {
  // Expected run count of a random permutation is (n+1)/2 for ascending runs;
  // with strictly decreasing runs taken as runs it is about n/3. Check the
  // ascending count against n/2 within 5 sigma (variance (n+1)/12).
  const std::size_t n = 10000;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = random_permutation(n, seed);
    ASSERT_TRUE(is_permutation_of_1_to_n(a));
    const auto r = run_profile(std::span<const SortItem>(a), RunConvention::ascending).size();
    EXPECT_NEAR(static_cast<double>(r), (n + 1) / 2.0, 5 * std::sqrt((n + 1) / 12.0));
  }
}

TEST(RandomPermutation, Deterministic) {
  EXPECT_EQ(random_permutation(1000, 42), random_permutation(1000, 42));
  EXPECT_NE(random_permutation(1000, 42), random_permutation(1000, 43));
}

TEST(RandomRuns, MeanOneIsAPermutation) {
  EXPECT_EQ(random_runs(500, 1, 9), random_permutation(500, 9));
}

TEST(RandomRuns, SegmentMeanMatches) {
  std::uint64_t segments = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto seg = geometric_segments(500, 20, seed);
    ASSERT_EQ(sum(seg), 500u);
    segments += seg.size();
    ASSERT_TRUE(is_permutation_of_1_to_n(random_runs(500, 20, seed)));
  }
  const double mean = 500.0 * 100 / static_cast<double>(segments);
  EXPECT_GE(mean, 15.0);
  EXPECT_LE(mean, 25.0);
}

TEST(RandomRuns, SegmentsSortedAndRunsFollowThem) {
  const auto a = random_runs(20000, 50, 4);
  const auto seg = geometric_segments(20000, 50, 4);
  std::size_t start = 0;
  for (auto len : seg) {
    EXPECT_TRUE(std::is_sorted(a.begin() + static_cast<std::ptrdiff_t>(start),
                               a.begin() + static_cast<std::ptrdiff_t>(start + len)));
    start += len;
  }
  // Runs can only fuse segments, never split them.
  EXPECT_LE(run_profile(std::span<const SortItem>(a)).size(), seg.size());
}

TEST(RandomRuns, FullScaleSegmentCount) {
  // n = 10^7, mean 3000: n-1 independent cut decisions with p = 1/3000.
  const std::uint64_t n = 10000000;
  const double p = 1.0 / 3000;
  const double mean = 1 + (n - 1) * p;
  const double sigma = std::sqrt((n - 1) * p * (1 - p));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const double r = static_cast<double>(geometric_segments(n, 3000, seed).size());
    EXPECT_NEAR(r, mean, 3 * sigma);
  }
}

TEST(RunProfile, Examples) {
  const std::vector<std::int64_t> a = {1, 2, 2, 1, 3};
  EXPECT_EQ(run_profile(a), (RunProfile{3, 2}));
  const std::vector<std::int64_t> b = {5, 4, 3};
  EXPECT_EQ(run_profile(b), (RunProfile{3}));
  EXPECT_EQ(run_profile(b, RunConvention::ascending), (RunProfile{1, 1, 1}));
  const std::vector<std::int64_t> c = {1, 2, 3, 4};
  EXPECT_EQ(run_profile(c), (RunProfile{4}));
  EXPECT_TRUE(run_profile(std::vector<std::int64_t>{}).empty());
}

TEST(FromRunLengths, Examples) {
  const std::vector<std::uint64_t> whole = {6};
  const auto s = from_run_lengths(whole, 1);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  const std::vector<std::uint64_t> two = {2, 2};
  EXPECT_EQ(run_profile(std::span<const SortItem>(from_run_lengths(two, 5))), (RunProfile{2, 2}));
  const std::vector<std::uint64_t> ones(9, 1);
  const auto saw = from_run_lengths(ones, 1, RunConvention::ascending);
  EXPECT_EQ(run_profile(std::span<const SortItem>(saw), RunConvention::ascending), RunProfile(ones));
}

TEST(FromRunLengths, Rejections) {
  const std::vector<std::uint64_t> zero = {3, 0, 2};
  EXPECT_THROW(from_run_lengths(zero), std::invalid_argument);
  const std::vector<std::uint64_t> inner_single = {3, 1, 2};
  EXPECT_THROW(from_run_lengths(inner_single), std::invalid_argument);
  const std::vector<std::uint64_t> last_single = {3, 2, 1};
  EXPECT_NO_THROW(from_run_lengths(last_single));
}

TEST(FromRunLengths, RoundTripsRandomProfiles) {
  Rng rng(8, 8);
  for (int t = 0; t < 1000; ++t) {
    const bool asc = t % 2 == 0;
    const auto conv = asc ? RunConvention::ascending : RunConvention::timsort;
    RunProfile l(1 + rng.below(64));
    for (std::size_t i = 0; i < l.size(); ++i) {
      const bool last = i + 1 == l.size();
      l[i] = (asc || last) ? 1 + rng.below(30) : 2 + rng.below(29);
    }
    const auto a = from_run_lengths(l, t, conv);
    ASSERT_TRUE(is_permutation_of_1_to_n(a));
    ASSERT_EQ(run_profile(std::span<const SortItem>(a), conv), l) << "trial " << t;
  }
}

TEST(TimsortDrag, Lengths) {
  EXPECT_EQ(timsort_drag_lengths(3), (RunProfile{3}));
  EXPECT_EQ(timsort_drag_lengths(4), (RunProfile{2, 1, 1}));
  EXPECT_EQ(timsort_drag_lengths(8), (RunProfile{2, 1, 1, 3, 1}));
  for (std::uint64_t n = 1; n < 3000; ++n) EXPECT_EQ(sum(timsort_drag_lengths(n)), n);
}

TEST(TimsortDrag, ScaledProfileRoundTrips) {
  const std::uint64_t n = std::uint64_t{1} << 15;
  const auto a = timsort_drag(n, 32, 0);
  EXPECT_EQ(a.size(), n);
  RunProfile expected = timsort_drag_lengths(n / 32);
  for (auto& l : expected) l *= 32;
  EXPECT_EQ(run_profile(std::span<const SortItem>(a)), expected);
  EXPECT_THROW(timsort_drag(1000, 32), std::invalid_argument);
  EXPECT_THROW(timsort_drag(0, 32), std::invalid_argument);
}

TEST(TimsortDrag, SuppliedLengthsReplaceRtim) {
  const std::vector<std::uint64_t> base = {3, 1, 4};
  const auto a = timsort_drag(16, 2, 0, base);
  EXPECT_EQ(run_profile(std::span<const SortItem>(a)), (RunProfile{6, 2, 8}));
  EXPECT_THROW(timsort_drag(32, 2, 0, base), std::invalid_argument);
}

TEST(ArrayIo, RoundTripBothFormats) {
  const auto dir = std::filesystem::temp_directory_path() / "runsort_io_test";
  std::filesystem::create_directories(dir);
  const std::vector<std::int64_t> keys = {5, -3, 0, 9223372036854775807LL, -9223372036854775807LL - 1};
  for (const char* name : {"a.bin", "a.txt"}) {
    write_keys(dir / name, keys);
    EXPECT_EQ(read_keys(dir / name), keys);
    const auto items = read_items(dir / name);
    EXPECT_EQ(items[2].tag, 2u);
  }
  EXPECT_THROW(write_keys(dir / "a.csv", keys), std::invalid_argument);
  std::filesystem::remove_all(dir);
}
