// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_RUNCORE_HPP
#define RUNSORT_RUNCORE_HPP

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>

#include "runsort/metrics.hpp"

namespace runsort {

/// How an array is cut into runs.
///
/// `timsort`: a run is a maximal weakly increasing segment or a maximal
/// strictly decreasing one (reversed in place when found). Runs of length one
/// can then only occur at the very end of an array.
///
/// `ascending`: a run is a maximal weakly increasing segment. Every run-length
/// vector is realizable under this rule.
enum class RunConvention { timsort, ascending };

/// Inclusive index range of a run. `descending` records that the run was
/// strictly decreasing and has been reversed.
struct Run {
  std::size_t start = 0;
  std::size_t end = 0;
  bool descending = false;

  std::size_t length() const noexcept { return end - start + 1; }
  friend bool operator==(const Run&, const Run&) = default;
};

namespace detail {

template <class Compare>
struct CountingLess {
  Compare& comp;
  std::uint64_t& count;

  template <class A, class B>
  bool operator()(const A& a, const B& b) {
    ++count;
    return comp(a, b);
  }
};

template <class Compare>
CountingLess<Compare> counting(Compare& comp, Metrics& metrics) {
  return CountingLess<Compare>{comp, metrics.comparisons};
}

}  // namespace detail

/// Reverses a[i..j] in place.
template <class T>
void reverse_range(std::span<T> a, std::size_t i, std::size_t j) {
  assert(i <= j && j < a.size());
  std::reverse(a.begin() + static_cast<std::ptrdiff_t>(i),
               a.begin() + static_cast<std::ptrdiff_t>(j) + 1);
}

/// Maximal run starting at i and ending at or before hi.
template <class T, class Compare = std::less<>>
Run find_run_right(std::span<T> a, std::size_t i, std::size_t hi, Metrics& metrics,
                   RunConvention conv = RunConvention::timsort, Compare comp = {}) {
  assert(i <= hi && hi < a.size());
  auto less = detail::counting(comp, metrics);
  if (i == hi) return {i, i, false};
  std::size_t j = i + 1;
  if (conv == RunConvention::timsort && less(a[j], a[j - 1])) {
    while (j < hi && less(a[j + 1], a[j])) ++j;
    reverse_range(a, i, j);
    return {i, j, true};
  }
  if (conv == RunConvention::ascending && less(a[j], a[j - 1])) return {i, i, false};
  while (j < hi && !less(a[j + 1], a[j])) ++j;
  return {i, j, false};
}

/// Maximal run within [lo, hi] that contains m.
///
/// When a[m] > a[m+1] the element m either ends a weakly increasing run (if
/// a[m-1] <= a[m]) or sits inside a strictly decreasing one; the increasing
/// reading is preferred, which makes the result agree with a left-to-right
/// scan whenever the interior runs are increasing. Decreasing runs are
/// reversed. Every adjacent pair is compared at most once.
template <class T, class Compare = std::less<>>
Run extend_run_around(std::span<T> a, std::size_t m, std::size_t lo, std::size_t hi,
                      Metrics& metrics, RunConvention conv = RunConvention::timsort,
                      Compare comp = {}) {
  assert(lo <= m && m <= hi && hi < a.size());
  auto less = detail::counting(comp, metrics);

  auto extend_inc_left = [&](std::size_t i) {
    while (i > lo && !less(a[i], a[i - 1])) --i;
    return i;
  };
  auto extend_inc_right = [&](std::size_t j) {
    while (j < hi && !less(a[j + 1], a[j])) ++j;
    return j;
  };
  auto extend_dec_left = [&](std::size_t i) {
    while (i > lo && less(a[i], a[i - 1])) --i;
    return i;
  };
  auto extend_dec_right = [&](std::size_t j) {
    while (j < hi && less(a[j + 1], a[j])) ++j;
    return j;
  };

  if (lo == hi) return {m, m, false};

  if (m < hi) {
    const bool descent_after = less(a[m + 1], a[m]);
    if (!descent_after) {
      return {extend_inc_left(m), extend_inc_right(m + 1), false};
    }
    if (m == lo) {
      if (conv == RunConvention::ascending) return {m, m, false};
      const std::size_t j = extend_dec_right(m + 1);
      reverse_range(a, m, j);
      return {m, j, true};
    }
    const bool descent_before = less(a[m], a[m - 1]);
    if (!descent_before || conv == RunConvention::ascending) {
      const std::size_t i = descent_before ? m : extend_inc_left(m - 1);
      return {i, m, false};
    }
    const std::size_t i = extend_dec_left(m - 1);
    const std::size_t j = extend_dec_right(m + 1);
    reverse_range(a, i, j);
    return {i, j, true};
  }

  // m == hi: only a left neighbour exists.
  const bool descent_before = less(a[m], a[m - 1]);
  if (!descent_before) return {extend_inc_left(m - 1), m, false};
  if (conv == RunConvention::ascending) return {m, m, false};
  const std::size_t i = extend_dec_left(m - 1);
  reverse_range(a, i, m);
  return {i, m, true};
}

/// Straight insertion sort of a[lo..hi] given that a[lo..lo+n_presorted-1]
/// is already sorted. Stable.
template <class T, class Compare = std::less<>>
void insertionsort_presorted(std::span<T> a, std::size_t lo, std::size_t hi,
                             std::size_t n_presorted, Metrics& metrics, Compare comp = {}) {
  assert(lo <= hi && hi < a.size());
  assert(n_presorted >= 1 && n_presorted <= hi - lo + 1);
  auto less = detail::counting(comp, metrics);
  for (std::size_t i = lo + n_presorted; i <= hi; ++i) {
    T v = std::move(a[i]);
    std::size_t j = i;
    while (j > lo && less(v, a[j - 1])) {
      a[j] = std::move(a[j - 1]);
      --j;
    }
    a[j] = std::move(v);
  }
}

/// Merges the sorted runs a[l..m-1] and a[m..r] through `buf`, which is
/// indexed with absolute positions and must hold at least r+1 elements.
///
/// The right run is copied reversed behind the left one so the main loop
/// needs no bounds checks on the keys; it performs exactly one comparison per
/// output element. Ties go to the left run. Once the left run is used up the
/// left cursor walks into the reversed right run, so it is explicitly held
/// off there to keep equal right-run keys in order.
template <class T, class Compare = std::less<>>
void merge_runs_bitonic(std::span<T> a, std::size_t l, std::size_t m, std::size_t r,
                        std::span<T> buf, Metrics& metrics, Compare comp = {}) {
  assert(l < m && m <= r && r < a.size() && buf.size() > r);
  auto less = detail::counting(comp, metrics);
  for (std::size_t k = l; k < m; ++k) buf[k] = std::move(a[k]);
  for (std::size_t k = m; k <= r; ++k) buf[r + m - k] = std::move(a[k]);
  std::size_t i = l;
  std::size_t j = r;
  for (std::size_t k = l; k <= r; ++k) {
    const bool right_smaller = less(buf[j], buf[i]);
    if (right_smaller || i >= m) {
      a[k] = std::move(buf[j--]);
    } else {
      a[k] = std::move(buf[i++]);
    }
  }
  metrics.merge_cost += r - l + 1;
  ++metrics.merges;
}

/// Two-pointer merge of a[l..m-1] and a[m..r]. Only the left run goes through
/// `buf` (absolute indexing); the right remainder is already in place when the
/// left run runs out. At most r-l comparisons.
template <class T, class Compare = std::less<>>
void merge_runs_classic(std::span<T> a, std::size_t l, std::size_t m, std::size_t r,
                        std::span<T> buf, Metrics& metrics, Compare comp = {}) {
  assert(l < m && m <= r && r < a.size() && buf.size() > r);
  auto less = detail::counting(comp, metrics);
  for (std::size_t k = l; k < m; ++k) buf[k] = std::move(a[k]);
  std::size_t i = l;
  std::size_t j = m;
  std::size_t k = l;
  while (i < m && j <= r) {
    if (less(a[j], buf[i])) {
      a[k++] = std::move(a[j++]);
    } else {
      a[k++] = std::move(buf[i++]);
    }
  }
  while (i < m) a[k++] = std::move(buf[i++]);
  metrics.merge_cost += r - l + 1;
  ++metrics.merges;
}

}  // namespace runsort

#endif  // RUNSORT_RUNCORE_HPP
