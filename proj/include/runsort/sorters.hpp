// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_SORTERS_HPP
#define RUNSORT_SORTERS_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "runsort/merge_tree.hpp"
#include "runsort/metrics.hpp"
#include "runsort/node_power.hpp"
#include "runsort/runcore.hpp"

namespace runsort {

enum class MergeKind { bitonic, classic };

struct SortConfig {
  /// Minimal run length / insertion-sort cutoff (w).
  std::size_t min_run_len = 24;
  MergeKind merge_kind = MergeKind::bitonic;
  /// Fill Metrics::merge_tree (natural mergesorts only).
  bool record_tree = false;
  /// Growth factor for the alpha-stack and alpha-merge baselines.
  double alpha = 2.0;
  RunConvention runs = RunConvention::timsort;

  void validate() const {
    if (min_run_len < 1) throw std::invalid_argument("min_run_len must be >= 1");
    if (!(alpha > 1.0)) throw std::invalid_argument("alpha must be > 1");
  }
};

enum class Algorithm { peeksort, powersort, top_down, bottom_up, alpha_stack, alpha_merge };

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::peeksort,  Algorithm::powersort,   Algorithm::top_down,
    Algorithm::bottom_up, Algorithm::alpha_stack, Algorithm::alpha_merge};

inline std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::peeksort: return "peeksort";
    case Algorithm::powersort: return "powersort";
    case Algorithm::top_down: return "top-down";
    case Algorithm::bottom_up: return "bottom-up";
    case Algorithm::alpha_stack: return "alpha-stack";
    case Algorithm::alpha_merge: return "alpha-merge";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (auto a : kAllAlgorithms)
    if (algorithm_name(a) == name) return a;
  return std::nullopt;
}

namespace detail {

/// Per-call state shared by the merge-based sorters.
template <class T, class Compare>
class SortContext {
 public:
  SortContext(std::span<T> a, const SortConfig& cfg, Metrics& metrics, Compare comp,
              bool record)
      : a_(a), cfg_(cfg), metrics_(metrics), comp_(std::move(comp)), buf_(a.size()) {
    if (record) recorder_.emplace(a.size());
  }

  std::span<T> array() const { return a_; }
  const SortConfig& cfg() const { return cfg_; }
  Metrics& metrics() { return metrics_; }
  Compare& comp() { return comp_; }

  bool less(const T& x, const T& y) {
    ++metrics_.comparisons;
    return comp_(x, y);
  }

  /// Merges a[l..m-1] with a[m..r].
  void merge(std::size_t l, std::size_t m, std::size_t r, power_t power = 0) {
    const std::span<T> buf(buf_);
    if (cfg_.merge_kind == MergeKind::classic) {
      merge_runs_classic(a_, l, m, r, buf, metrics_, comp_);
    } else {
      merge_runs_bitonic(a_, l, m, r, buf, metrics_, comp_);
    }
    if (recorder_) recorder_->on_merge(l, m, r, power);
  }

  Run run_right(std::size_t i, std::size_t hi) {
    ++metrics_.runs_detected;
    return find_run_right(a_, i, hi, metrics_, cfg_.runs, comp_);
  }

  Run run_around(std::size_t m, std::size_t lo, std::size_t hi) {
    ++metrics_.runs_detected;
    return extend_run_around(a_, m, lo, hi, metrics_, cfg_.runs, comp_);
  }

  /// Extends a detected run [start..end] to the minimal run length.
  std::size_t extend_to_min_run(std::size_t start, std::size_t end, std::size_t hi) {
    const std::size_t len = end - start + 1;
    if (len >= cfg_.min_run_len || end == hi) return end;
    const std::size_t new_end = std::min(hi, start + cfg_.min_run_len - 1);
    insertionsort_presorted(a_, start, new_end, len, metrics_, comp_);
    return new_end;
  }

  void insertion_sort(std::size_t lo, std::size_t hi, std::size_t presorted) {
    insertionsort_presorted(a_, lo, hi, presorted, metrics_, comp_);
  }

  void note_stack_height(std::size_t h) {
    metrics_.max_stack_height = std::max<std::uint64_t>(metrics_.max_stack_height, h);
  }

  void finish() {
    if (recorder_) metrics_.merge_tree = std::move(*recorder_).finish();
  }

 private:
  std::span<T> a_;
  const SortConfig& cfg_;
  Metrics& metrics_;
  Compare comp_;
  std::vector<T> buf_;
  std::optional<TreeRecorder> recorder_;
};

/// Sorts a[l..r] given that a[l..e] and a[s..r] are runs.
///
/// A prefix or suffix of length one may just be a placeholder (the part of a
/// run that is left after cutting), so the middle-run search may extend into
/// it; a longer one is a maximal run and bounds the search.
template <class T, class Compare>
void peeksort_rec(SortContext<T, Compare>& ctx, std::size_t l, std::size_t r, std::size_t e,
                  std::size_t s) {
  if (e >= r || s <= l) return;
  const std::size_t w = ctx.cfg().min_run_len;
  if (r - l + 1 <= w) {
    ctx.insertion_sort(l, r, e - l + 1);
    return;
  }
  if (r - l == 1) {
    // Both ends are placeholders; one comparison decides whether the pair is
    // one run or two.
    auto run = ctx.run_around(l, l, r);
    if (run.end == r) return;
    ctx.merge(l, r, r);
    return;
  }
  const std::size_t m = l + (r - l) / 2;
  if (m <= e) {
    peeksort_rec(ctx, e + 1, r, e + 1, s);
    ctx.merge(l, e + 1, r);
  } else if (m >= s) {
    peeksort_rec(ctx, l, s - 1, e, s - 1);
    ctx.merge(l, s, r);
  } else {
    const std::size_t lo = (e == l) ? l : e + 1;
    const std::size_t hi = (s == r) ? r : s - 1;
    const Run run = ctx.run_around(m, lo, hi);
    const std::size_t i = run.start;
    const std::size_t j = run.end;
    if (i == l && j == r) return;
    if (i == l) {
      peeksort_rec(ctx, j + 1, r, j + 1, s);
      ctx.merge(l, j + 1, r);
    } else if (j == r) {
      peeksort_rec(ctx, l, i - 1, e, i - 1);
      ctx.merge(l, i, r);
    } else if (m - i < j - m) {
      peeksort_rec(ctx, l, i - 1, e, i - 1);
      peeksort_rec(ctx, i, r, j, s);
      ctx.merge(l, i, r);
    } else {
      peeksort_rec(ctx, l, j, e, i);
      peeksort_rec(ctx, j + 1, r, j + 1, s);
      ctx.merge(l, j + 1, r);
    }
  }
}

template <class T, class Compare>
void top_down_rec(SortContext<T, Compare>& ctx, std::size_t l, std::size_t r) {
  if (r - l + 1 <= ctx.cfg().min_run_len) {
    if (r > l) ctx.insertion_sort(l, r, 1);
    return;
  }
  const std::size_t m = l + (r - l) / 2;
  top_down_rec(ctx, l, m);
  top_down_rec(ctx, m + 1, r);
  auto a = ctx.array();
  if (!ctx.less(a[m + 1], a[m])) return;
  ctx.merge(l, m + 1, r);
}

}  // namespace detail

/// Top-down nearly-optimal natural mergesort.
///
/// Finds the run containing the middle element and cuts at whichever of its
/// ends is closer to the middle, then recurses on both sides. The initial
/// call knows the leftmost and rightmost maximal runs. Subproblems of at most
/// `min_run_len` elements are finished by insertion sort.
template <class T, class Compare = std::less<>>
void peeksort(std::span<T> a, const SortConfig& cfg, Metrics& metrics, Compare comp = {}) {
  cfg.validate();
  const std::size_t n = a.size();
  if (n < 2) {
    if (cfg.record_tree && n == 1) metrics.merge_tree = TreeRecorder(1).finish();
    if (n == 1) ++metrics.runs_detected;
    return;
  }
  detail::SortContext<T, Compare> ctx(a, cfg, metrics, std::move(comp), cfg.record_tree);
  const std::size_t e = ctx.run_right(0, n - 1).end;
  if (e < n - 1) {
    const std::size_t s = ctx.run_around(n - 1, e + 1, n - 1).start;
    detail::peeksort_rec(ctx, 0, n - 1, e, s);
  }
  ctx.finish();
}

/// One-pass stack-based nearly-optimal natural mergesort.
///
/// The run stack is an array indexed by node power; a slot with start
/// `kEmpty` is unused. Powers on the stack strictly increase from bottom to
/// top, so at most floor(lg n) + 1 slots are ever occupied.
template <class T, class Compare = std::less<>>
void powersort(std::span<T> a, const SortConfig& cfg, Metrics& metrics, Compare comp = {}) {
  cfg.validate();
  const std::size_t n = a.size();
  if (n < 2) {
    if (cfg.record_tree && n == 1) metrics.merge_tree = TreeRecorder(1).finish();
    if (n == 1) ++metrics.runs_detected;
    return;
  }
  detail::SortContext<T, Compare> ctx(a, cfg, metrics, std::move(comp), cfg.record_tree);

  constexpr std::size_t kEmpty = std::numeric_limits<std::size_t>::max();
  const std::size_t max_power = static_cast<std::size_t>(std::bit_width(n) - 1) + 1;
  std::vector<std::size_t> slot_start(max_power + 1, kEmpty);
  std::vector<std::size_t> slot_end(max_power + 1, 0);
  std::size_t top = 0;
  std::size_t height = 0;

  std::size_t start_a = 0;
  std::size_t end_a = ctx.extend_to_min_run(0, ctx.run_right(0, n - 1).end, n - 1);
  while (end_a < n - 1) {
    const std::size_t start_b = end_a + 1;
    const std::size_t end_b =
        ctx.extend_to_min_run(start_b, ctx.run_right(start_b, n - 1).end, n - 1);
    const std::size_t k = node_power(start_a, end_a, end_b, n);
    if (k == top || k == 0 || k > max_power) {
      ++metrics.invariant_violations;
      throw std::logic_error("powersort: node power " + std::to_string(k) +
                             " breaks the run-stack invariant");
    }
    for (std::size_t p = top; p > k; --p) {
      if (slot_start[p] == kEmpty) continue;
      ctx.merge(slot_start[p], slot_end[p] + 1, end_a, static_cast<power_t>(p));
      start_a = slot_start[p];
      slot_start[p] = kEmpty;
      --height;
    }
    if (slot_start[k] != kEmpty) {
      ++metrics.invariant_violations;
      throw std::logic_error("powersort: two stack entries with equal power");
    }
    slot_start[k] = start_a;
    slot_end[k] = end_a;
    ++height;
    ctx.note_stack_height(height);
    top = k;
    start_a = start_b;
    end_a = end_b;
  }
  for (std::size_t p = top; p > 0; --p) {
    if (slot_start[p] == kEmpty) continue;
    ctx.merge(slot_start[p], slot_end[p] + 1, n - 1, static_cast<power_t>(p));
  }
  ctx.finish();
}

/// Top-down mergesort splitting at the midpoint; a merge is skipped when the
/// halves are already in order. Does not detect runs.
template <class T, class Compare = std::less<>>
void top_down_mergesort(std::span<T> a, const SortConfig& cfg, Metrics& metrics,
                        Compare comp = {}) {
  cfg.validate();
  if (a.size() < 2) return;
  SortConfig local = cfg;
  local.record_tree = false;
  detail::SortContext<T, Compare> ctx(a, local, metrics, std::move(comp), false);
  detail::top_down_rec(ctx, 0, a.size() - 1);
}

/// Bottom-up mergesort: insertion-sorts chunks of `min_run_len`, then merges
/// passes of doubling width with the same skip check as top-down.
template <class T, class Compare = std::less<>>
void bottom_up_mergesort(std::span<T> a, const SortConfig& cfg, Metrics& metrics,
                         Compare comp = {}) {
  cfg.validate();
  const std::size_t n = a.size();
  if (n < 2) return;
  SortConfig local = cfg;
  local.record_tree = false;
  detail::SortContext<T, Compare> ctx(a, local, metrics, std::move(comp), false);
  const std::size_t w = cfg.min_run_len;
  if (w > 1) {
    for (std::size_t lo = 0; lo < n; lo += w) {
      const std::size_t hi = std::min(n - 1, lo + w - 1);
      if (hi > lo) ctx.insertion_sort(lo, hi, 1);
    }
  }
  for (std::size_t width = w; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(n - 1, lo + 2 * width - 1);
      if (ctx.less(a[mid], a[mid - 1])) ctx.merge(lo, mid, hi);
    }
  }
}

namespace detail {

struct StackRun {
  std::size_t start;
  std::size_t end;
  std::size_t length() const { return end - start + 1; }
};

template <class T, class Compare>
void merge_top_two(SortContext<T, Compare>& ctx, std::vector<StackRun>& stack) {
  const StackRun y = stack.back();
  stack.pop_back();
  StackRun& x = stack.back();
  ctx.merge(x.start, y.start, y.end);
  x.end = y.end;
}

template <class T, class Compare>
void alpha_sort_impl(std::span<T> a, const SortConfig& cfg, Metrics& metrics, Compare comp,
                     bool merge_before_push) {
  cfg.validate();
  const std::size_t n = a.size();
  if (n < 2) {
    if (cfg.record_tree && n == 1) metrics.merge_tree = TreeRecorder(1).finish();
    if (n == 1) ++metrics.runs_detected;
    return;
  }
  SortContext<T, Compare> ctx(a, cfg, metrics, std::move(comp), cfg.record_tree);
  std::vector<StackRun> stack;
  std::size_t pos = 0;
  while (pos < n) {
    const std::size_t end = ctx.extend_to_min_run(pos, ctx.run_right(pos, n - 1).end, n - 1);
    const StackRun run{pos, end};
    if (merge_before_push) {
      while (stack.size() >= 2 && stack.back().length() < run.length()) merge_top_two(ctx, stack);
    }
    stack.push_back(run);
    ctx.note_stack_height(stack.size());
    while (stack.size() >= 2 &&
           static_cast<double>(stack[stack.size() - 2].length()) <
               cfg.alpha * static_cast<double>(stack.back().length())) {
      merge_top_two(ctx, stack);
    }
    pos = end + 1;
  }
  while (stack.size() >= 2) merge_top_two(ctx, stack);
  ctx.finish();
}

}  // namespace detail

/// Stack-based natural mergesort that merges the top two runs until run
/// lengths grow by at least a factor alpha from top to bottom.
template <class T, class Compare = std::less<>>
void alpha_stack_sort(std::span<T> a, const SortConfig& cfg, Metrics& metrics,
                      Compare comp = {}) {
  detail::alpha_sort_impl(a, cfg, metrics, std::move(comp), false);
}

/// alpha_stack_sort that, before pushing a run, first merges stack entries
/// until the top one is at least as long as the new run.
template <class T, class Compare = std::less<>>
void alpha_merge_sort(std::span<T> a, const SortConfig& cfg, Metrics& metrics,
                      Compare comp = {}) {
  detail::alpha_sort_impl(a, cfg, metrics, std::move(comp), true);
}

template <class T, class Compare = std::less<>>
void sort_with(Algorithm algo, std::span<T> a, const SortConfig& cfg, Metrics& metrics,
               Compare comp = {}) {
  switch (algo) {
    case Algorithm::peeksort: return peeksort(a, cfg, metrics, std::move(comp));
    case Algorithm::powersort: return powersort(a, cfg, metrics, std::move(comp));
    case Algorithm::top_down: return top_down_mergesort(a, cfg, metrics, std::move(comp));
    case Algorithm::bottom_up: return bottom_up_mergesort(a, cfg, metrics, std::move(comp));
    case Algorithm::alpha_stack: return alpha_stack_sort(a, cfg, metrics, std::move(comp));
    case Algorithm::alpha_merge: return alpha_merge_sort(a, cfg, metrics, std::move(comp));
  }
}

}  // namespace runsort

#endif  // RUNSORT_SORTERS_HPP
