// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_GEN_HPP
#define RUNSORT_GEN_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "runsort/runcore.hpp"
#include "runsort/sort_item.hpp"

namespace runsort {

/// Lengths L_1..L_r of the maximal runs of an array.
using RunProfile = std::vector<std::uint64_t>;

/// Seeded random source used by all generators.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each generator call draws from its own stream: the engine is
/// seeded with splitmix64(seed ^ splitmix64(stream)). Bounded integers use
/// Lemire's multiply-and-reject method rather than std::uniform_int_distribution
/// (whose algorithm is implementation-defined), so outputs are identical on
/// every conforming platform.
class Rng {
 public:
  enum Stream : std::uint64_t {
    kPermutation = 1,
    kSegments = 2,
    kRunValues = 3,
  };

  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform value in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    using u128 = unsigned __int128;
    u128 m = static_cast<u128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<u128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  template <class T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Uniformly random permutation of 1..n (Fisher-Yates); tags are positions.
inline ItemArray random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::int64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = static_cast<std::int64_t>(i + 1);
  Rng rng(seed, Rng::kPermutation);
  rng.shuffle(std::span<std::int64_t>(keys));
  return make_items(keys);
}

/// Lengths of the segments random_runs cuts its permutation into: i.i.d.
/// geometric with support 1, 2, ... and mean `mean_len`, the last one
/// truncated so the lengths sum to n.
inline std::vector<std::uint64_t> geometric_segments(std::size_t n, std::uint64_t mean_len,
                                                     std::uint64_t seed) {
  if (mean_len < 1) throw std::invalid_argument("random_runs: mean_len must be >= 1");
  std::vector<std::uint64_t> out;
  Rng rng(seed, Rng::kSegments);
  // Each element closes its segment with probability 1/mean_len.
  const std::uint64_t threshold =
      mean_len == 1 ? 0 : static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) /
                                                     mean_len);
  std::uint64_t len = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ++len;
    if (mean_len == 1 || rng.next() < threshold || i + 1 == n) {
      out.push_back(len);
      len = 0;
    }
  }
  return out;
}

/// Random permutation cut into geometric_segments, each sorted ascending.
inline ItemArray random_runs(std::size_t n, std::uint64_t mean_len, std::uint64_t seed) {
  const auto segments = geometric_segments(n, mean_len, seed);
  ItemArray a = random_permutation(n, seed);
  auto start = a.begin();
  for (const auto len : segments) {
    std::sort(start, start + static_cast<std::ptrdiff_t>(len));
    start += static_cast<std::ptrdiff_t>(len);
  }
  retag(a);
  return a;
}

/// Maximal-run decomposition of `keys`, scanning left to right.
inline RunProfile run_profile(std::span<const std::int64_t> keys,
                              RunConvention conv = RunConvention::timsort) {
  RunProfile out;
  const std::size_t n = keys.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    if (j + 1 < n && keys[j + 1] < keys[j] && conv == RunConvention::timsort) {
      while (j + 1 < n && keys[j + 1] < keys[j]) ++j;
    } else {
      while (j + 1 < n && keys[j + 1] >= keys[j]) ++j;
    }
    out.push_back(j - i + 1);
    i = j + 1;
  }
  return out;
}

inline RunProfile run_profile(std::span<const SortItem> a,
                              RunConvention conv = RunConvention::timsort) {
  return run_profile(keys_of(a), conv);
}

/// Permutation of 1..n whose maximal runs have exactly the given lengths.
///
/// Keys are split into three value tiers, low < mid < high. The first key of
/// every run of length >= 2 comes from the low tier and its last key from the
/// high tier; interior keys and length-one runs take mid-tier keys. Tier keys
/// are dealt out at random, interiors are sorted within their run and the
/// length-one runs get their keys in decreasing order, so every boundary
/// descends and no run extends past its prescribed end.
///
/// Under the timsort convention a length-one run followed by another run would
/// open a decreasing run, so length one is only allowed for the last run.
inline ItemArray from_run_lengths(std::span<const std::uint64_t> lengths, std::uint64_t seed = 0,
                                  RunConvention conv = RunConvention::timsort) {
  std::uint64_t n = 0;
  std::uint64_t low = 0;
  std::uint64_t singles = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] == 0) throw std::invalid_argument("from_run_lengths: zero run length");
    if (lengths[i] == 1 && conv == RunConvention::timsort && i + 1 != lengths.size()) {
      throw std::invalid_argument(
          "from_run_lengths: under the timsort run rule only the last run may have length 1 "
          "(run " + std::to_string(i) + ")");
    }
    n += lengths[i];
    if (lengths[i] >= 2) {
      ++low;
    } else {
      ++singles;
    }
  }
  const std::uint64_t mid = n - 2 * low;

  Rng rng(seed, Rng::kRunValues);
  auto tier = [&](std::uint64_t first, std::uint64_t count) {
    std::vector<std::int64_t> v(count);
    for (std::uint64_t k = 0; k < count; ++k) v[k] = static_cast<std::int64_t>(first + k);
    rng.shuffle(std::span<std::int64_t>(v));
    return v;
  };
  const auto low_keys = tier(1, low);
  auto mid_keys = tier(1 + low, mid);
  const auto high_keys = tier(1 + low + mid, low);

  std::vector<std::int64_t> keys(n);
  std::vector<std::size_t> single_pos;
  single_pos.reserve(singles);
  std::size_t pos = 0;
  std::size_t next_low = 0;
  std::size_t next_mid = 0;
  std::size_t next_high = 0;
  for (const std::uint64_t len : lengths) {
    if (len == 1) {
      single_pos.push_back(pos);
      keys[pos++] = mid_keys[next_mid++];
      continue;
    }
    keys[pos] = low_keys[next_low++];
    const std::size_t inner = pos + 1;
    for (std::uint64_t k = 1; k + 1 < len; ++k) keys[pos + k] = mid_keys[next_mid++];
    std::sort(keys.begin() + static_cast<std::ptrdiff_t>(inner),
              keys.begin() + static_cast<std::ptrdiff_t>(pos + len - 1));
    keys[pos + len - 1] = high_keys[next_high++];
    pos += len;
  }
  std::vector<std::int64_t> single_keys;
  single_keys.reserve(single_pos.size());
  for (std::size_t p : single_pos) single_keys.push_back(keys[p]);
  std::sort(single_keys.begin(), single_keys.end(), std::greater<>());
  for (std::size_t k = 0; k < single_pos.size(); ++k) keys[single_pos[k]] = single_keys[k];

  return make_items(keys);
}

/// Run lengths R_tim(n) of the Timsort bad case (Buss and Knop): sequences of
/// length at most 3 are a single run; otherwise, with n' = floor(n/2),
/// R_tim(n) = R_tim(n') ++ R_tim(n'-1) ++ <n - 2n' + 1>.
inline RunProfile timsort_drag_lengths(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("timsort_drag_lengths: n must be positive");
  RunProfile out;
  // Iterative expansion keeps deep recursions off the call stack.
  struct Item { std::uint64_t n; bool literal; };
  std::vector<Item> work{{n, false}};
  while (!work.empty()) {
    const Item it = work.back();
    work.pop_back();
    if (it.literal || it.n <= 3) {
      out.push_back(it.n);
      continue;
    }
    const std::uint64_t h = it.n / 2;
    work.push_back({it.n - 2 * h + 1, true});
    work.push_back({h - 1, false});
    work.push_back({h, false});
  }
  return out;
}

/// Array with run lengths R_tim(n / run_scale), each multiplied by run_scale.
/// `base_lengths`, when non-empty, replaces the R_tim sequence.
inline ItemArray timsort_drag(std::uint64_t n, std::uint64_t run_scale = 32,
                              std::uint64_t seed = 0, std::span<const std::uint64_t> base_lengths = {},
                              RunConvention conv = RunConvention::timsort) {
  if (run_scale == 0) throw std::invalid_argument("timsort_drag: run_scale must be positive");
  if (n == 0 || n % run_scale != 0) {
    throw std::invalid_argument("timsort_drag: n must be a positive multiple of run_scale (n=" +
                                std::to_string(n) + ", run_scale=" + std::to_string(run_scale) +
                                ")");
  }
  RunProfile lengths = base_lengths.empty()
                           ? timsort_drag_lengths(n / run_scale)
                           : RunProfile(base_lengths.begin(), base_lengths.end());
  std::uint64_t total = 0;
  for (auto& l : lengths) {
    l *= run_scale;
    total += l;
  }
  if (total != n) {
    throw std::invalid_argument("timsort_drag: supplied run lengths sum to " +
                                std::to_string(total) + " after scaling, expected " +
                                std::to_string(n));
  }
  return from_run_lengths(lengths, seed, conv);
}

}  // namespace runsort

#endif  // RUNSORT_GEN_HPP
