// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_OPTTREE_HPP
#define RUNSORT_OPTTREE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "runsort/merge_tree.hpp"
#include "runsort/node_power.hpp"

namespace runsort {

/// Leaf probabilities alpha_0..alpha_m of an alphabetic tree (no internal
/// weights).
///
/// Built either from positive run lengths, in which case all tree algorithms
/// use exact integer arithmetic on the lengths, or from real probabilities
/// summing to one. Prefix sums of real weights use compensated summation.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  static WeightVector from_lengths(std::span<const std::uint64_t> lengths) {
    if (lengths.empty()) throw std::invalid_argument("weights: need at least one leaf");
    WeightVector w;
    w.lengths_.assign(lengths.begin(), lengths.end());
    w.int_prefix_.assign(lengths.size() + 1, 0);
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      if (lengths[i] == 0) throw std::invalid_argument("weights: run lengths must be positive");
      w.int_prefix_[i + 1] = w.int_prefix_[i] + lengths[i];
    }
    w.total_ = w.int_prefix_.back();
    if (w.total_ >= (std::uint64_t{1} << 50)) {
      throw std::invalid_argument("weights: total length must be below 2^50");
    }
    w.alphas_.resize(lengths.size());
    w.prefix_.resize(lengths.size() + 1);
    const auto n = static_cast<double>(w.total_);
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      w.alphas_[i] = static_cast<double>(lengths[i]) / n;
    }
    for (std::size_t i = 0; i <= lengths.size(); ++i) {
      w.prefix_[i] = static_cast<double>(w.int_prefix_[i]) / n;
    }
    return w;
  }

  static WeightVector from_probabilities(std::vector<double> alphas) {
    if (alphas.empty()) throw std::invalid_argument("weights: need at least one leaf");
    for (double a : alphas) {
      if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::invalid_argument("weights: probabilities must be positive and finite");
      }
    }
    WeightVector w;
    w.alphas_ = std::move(alphas);
    w.prefix_.assign(w.alphas_.size() + 1, 0.0);
    // Neumaier summation.
    double sum = 0.0;
    double carry = 0.0;
    for (std::size_t i = 0; i < w.alphas_.size(); ++i) {
      const double x = w.alphas_[i];
      const double t = sum + x;
      carry += (std::abs(sum) >= std::abs(x)) ? (sum - t) + x : (x - t) + sum;
      sum = t;
      w.prefix_[i + 1] = sum + carry;
    }
    if (std::abs(w.prefix_.back() - 1.0) > kSumTolerance) {
      throw std::invalid_argument("weights: probabilities must sum to 1 (got " +
                                  std::to_string(w.prefix_.back()) + ")");
    }
    return w;
  }

  /// Number of leaves, m + 1.
  std::size_t size() const noexcept { return alphas_.size(); }
  /// Number of internal nodes (keys), m.
  std::size_t key_count() const noexcept { return alphas_.size() - 1; }

  double alpha(std::size_t i) const { return alphas_.at(i); }
  const std::vector<double>& alphas() const noexcept { return alphas_; }
  double alpha_min() const { return *std::min_element(alphas_.begin(), alphas_.end()); }

  /// alpha_0 + ... + alpha_{k-1}; k in [0, size()].
  double prefix(std::size_t k) const { return prefix_.at(k); }
  /// Cumulative sum alpha_0 + ... + alpha_i.
  double cumulative(std::size_t i) const { return prefix_.at(i + 1); }
  /// Midpoint of leaf i on the unit interval.
  double midpoint(std::size_t i) const { return prefix_.at(i) + alphas_.at(i) / 2; }

  bool has_lengths() const noexcept { return !lengths_.empty(); }
  const std::vector<std::uint64_t>& lengths() const noexcept { return lengths_; }
  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t int_prefix(std::size_t k) const { return int_prefix_.at(k); }

  /// Sign of (midpoint(i) - q / 2^level).
  int compare_midpoint(std::size_t i, std::uint64_t q, unsigned level) const {
    if (has_lengths()) {
      using i128 = __int128;
      const i128 lhs = static_cast<i128>(2 * int_prefix_[i] + lengths_[i]) << level;
      const i128 rhs = static_cast<i128>(q) * static_cast<i128>(2 * total_);
      return (lhs > rhs) - (lhs < rhs);
    }
    const double c = std::ldexp(static_cast<double>(q), -static_cast<int>(level));
    const double m = midpoint(i);
    return (m > c) - (m < c);
  }

 private:
  WeightVector() = default;

  std::vector<double> alphas_;
  std::vector<double> prefix_;
  std::vector<std::uint64_t> lengths_;
  std::vector<std::uint64_t> int_prefix_;
  std::uint64_t total_ = 0;
};

/// Expected search depth C = sum d_i alpha_i, and (when the weights come
/// from run lengths) the merge cost M = sum d_i L_i = C n.
struct TreeCost {
  double search_cost = 0.0;
  std::optional<std::uint64_t> merge_cost;
};

/// Binary Shannon entropy of the leaf probabilities, in bits.
inline double entropy(const WeightVector& w) {
  double h = 0.0;
  for (double a : w.alphas()) h += a * std::log2(1.0 / a);
  return h;
}

/// Entropy of (L_1/n, ..., L_r/n). Zero-length runs are rejected.
inline double run_length_entropy(std::span<const std::uint64_t> lengths) {
  if (lengths.empty()) return 0.0;
  return entropy(WeightVector::from_lengths(lengths));
}

namespace detail {

constexpr unsigned kMaxBisectionLevel = 62;

inline MergeTree::NodeId leaf_node(MergeTree& t, const WeightVector& w, std::size_t i) {
  return t.add_leaf(w.has_lengths() ? w.lengths()[i] : 0);
}

/// First k in (i, j] whose leaf midpoint is at or beyond q / 2^level.
inline std::size_t first_at_or_after_cut(const WeightVector& w, std::size_t i, std::size_t j,
                                         std::uint64_t q, unsigned level) {
  std::size_t lo = i + 1;
  std::size_t hi = j;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (w.compare_midpoint(mid, q, level) >= 0) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

// Leaves i..j all have midpoints in the cell [cell, cell+1) * 2^-(level-1);
// the cut point tried at this level is (2 cell + 1) / 2^level.
inline MergeTree::NodeId bisection_rec(MergeTree& t, const WeightVector& w, std::size_t i,
                                       std::size_t j, std::uint64_t cell, unsigned level,
                                       bool skip_void_cuts) {
  if (i == j) return leaf_node(t, w, i);
  if (level > kMaxBisectionLevel) {
    throw std::domain_error("bisection: leaf midpoints too close to separate");
  }
  const std::uint64_t cut = 2 * cell + 1;
  const bool all_left = w.compare_midpoint(j, cut, level) < 0;
  const bool all_right = w.compare_midpoint(i, cut, level) >= 0;
  if (skip_void_cuts) {
    if (all_left) return bisection_rec(t, w, i, j, 2 * cell, level + 1, true);
    if (all_right) return bisection_rec(t, w, i, j, 2 * cell + 1, level + 1, true);
  }
  std::size_t k;
  if (all_left) {
    k = j;
  } else if (all_right) {
    k = i + 1;
  } else {
    k = first_at_or_after_cut(w, i, j, cut, level);
  }
  MergeTree::NodeId left;
  MergeTree::NodeId right;
  if (all_left) {
    left = bisection_rec(t, w, i, k - 1, 2 * cell, level + 1, skip_void_cuts);
    right = leaf_node(t, w, k);
  } else if (all_right) {
    left = leaf_node(t, w, i);
    right = bisection_rec(t, w, k, j, 2 * cell + 1, level + 1, skip_void_cuts);
  } else {
    left = bisection_rec(t, w, i, k - 1, 2 * cell, level + 1, skip_void_cuts);
    right = bisection_rec(t, w, k, j, 2 * cell + 1, level + 1, skip_void_cuts);
  }
  return t.add_internal(left, right, skip_void_cuts ? level : 0);
}

// Cut position k (node between leaf k-1 and leaf k) for leaves i..j, i < j.
inline std::size_t weight_balanced_cut(const WeightVector& w, std::size_t i, std::size_t j) {
  if (w.has_lengths()) {
    // Locate the run holding the lower-middle element and cut at whichever
    // end of it is closer to that element; equal distances cut after it.
    const std::uint64_t from = w.int_prefix(i);
    const std::uint64_t count = w.int_prefix(j + 1) - from;
    const std::uint64_t q = from + (count - 1) / 2;
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi) {  // largest t in [i, j] with prefix(t) <= q
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      if (w.int_prefix(mid) <= q) {
        lo = mid;
      } else {
        hi = mid - 1;
      }
    }
    const std::size_t t = lo;
    if (t == i) return t + 1;
    if (t == j) return t;
    const std::uint64_t run_start = w.int_prefix(t);
    const std::uint64_t run_last = w.int_prefix(t + 1) - 1;
    return (q - run_start < run_last - q) ? t : t + 1;
  }
  const double target = (w.prefix(i) + w.prefix(j + 1)) / 2;
  std::size_t best = i + 1;
  double best_dist = std::abs(w.prefix(best) - target);
  // Prefix sums are monotone: only the boundaries around the target matter.
  std::size_t lo = i + 1;
  std::size_t hi = j;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (w.prefix(mid) < target) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  for (std::size_t k : {lo > i + 1 ? lo - 1 : lo, lo}) {
    const double d = std::abs(w.prefix(k) - target);
    if (d < best_dist || (d == best_dist && k < best)) {
      best = k;
      best_dist = d;
    }
  }
  return best;
}

inline MergeTree::NodeId weight_balanced_rec(MergeTree& t, const WeightVector& w,
                                             std::size_t i, std::size_t j) {
  if (i == j) return leaf_node(t, w, i);
  const std::size_t k = weight_balanced_cut(w, i, j);
  const auto left = weight_balanced_rec(t, w, i, k - 1);
  const auto right = weight_balanced_rec(t, w, k, j);
  return t.add_internal(left, right);
}

}  // namespace detail

/// Weight-balancing heuristic ("Method 1"): the root splits at the boundary
/// closest to the middle of the total weight, recursively.
///
/// With real weights, equidistant boundaries resolve to the left one. With
/// run lengths, the boundary is picked the way a top-down natural mergesort
/// does it: look at the run holding the lower-middle element and cut at its
/// nearer end, cutting after the run on a tie.
inline MergeTree method1_tree(const WeightVector& w) {
  MergeTree t;
  t.finalize(detail::weight_balanced_rec(t, w, 0, w.size() - 1));
  return t;
}

/// Bisection heuristic ("Method 2"): cuts the original unit interval in
/// halves, irrespective of subtree weights. When a subtree lies entirely on
/// one side of the cut, its outermost key on that side becomes the root.
inline MergeTree method2_tree(const WeightVector& w) {
  MergeTree t;
  t.finalize(detail::bisection_rec(t, w, 0, w.size() - 1, 0, 1, false));
  return t;
}

/// Bisection with void cut points skipped ("Method 2'"). A node created at
/// bisection level l gets power l; powers strictly increase downward.
inline MergeTree method2prime_tree(const WeightVector& w) {
  MergeTree t;
  t.finalize(detail::bisection_rec(t, w, 0, w.size() - 1, 0, 1, true));
  return t;
}

/// Node powers P_1..P_m: P_j is the first bit where the binary fractions of
/// the midpoints of leaves j-1 and j differ.
inline std::vector<power_t> node_powers(const WeightVector& w) {
  std::vector<power_t> out;
  out.reserve(w.key_count());
  for (std::size_t j = 1; j < w.size(); ++j) {
    if (w.has_lengths()) {
      out.push_back(node_power_def(w.int_prefix(j - 1) + 1, w.int_prefix(j),
                                   w.int_prefix(j) + 1, w.int_prefix(j + 1), w.total()));
      continue;
    }
    const double a = w.midpoint(j - 1);
    const double b = w.midpoint(j);
    int l = 1;
    while (std::floor(std::ldexp(a, l)) == std::floor(std::ldexp(b, l))) {
      if (++l > 1100) throw std::domain_error("node_powers: equal midpoints");
    }
    out.push_back(static_cast<power_t>(l));
  }
  return out;
}

/// Min-oriented Cartesian tree over `powers`, built left to right with a
/// stack. Internal node j sits between leaf j-1 and leaf j; a later node with
/// an equal power becomes a right descendant of the earlier one. Leaf sizes
/// come from `leaf_lengths` when given (powers.size() + 1 entries), else 0.
inline MergeTree cartesian_tree_min(std::span<const power_t> powers,
                                    std::span<const std::uint64_t> leaf_lengths = {}) {
  if (powers.empty()) throw std::invalid_argument("cartesian_tree_min: empty power sequence");
  const std::size_t m = powers.size();
  if (!leaf_lengths.empty() && leaf_lengths.size() != m + 1) {
    throw std::invalid_argument("cartesian_tree_min: need powers.size() + 1 leaf lengths");
  }
  constexpr std::size_t kNil = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> left(m, kNil);
  std::vector<std::size_t> right(m, kNil);
  std::vector<std::size_t> stack;
  for (std::size_t j = 0; j < m; ++j) {
    std::size_t last = kNil;
    while (!stack.empty() && powers[stack.back()] > powers[j]) {
      last = stack.back();
      stack.pop_back();
    }
    left[j] = last;
    if (!stack.empty()) right[stack.back()] = j;
    stack.push_back(j);
  }
  const std::size_t root = stack.front();

  // Post-order construction with an explicit stack.
  MergeTree t;
  auto leaf = [&](std::size_t i) {
    return t.add_leaf(leaf_lengths.empty() ? 0 : leaf_lengths[i]);
  };
  std::vector<MergeTree::NodeId> built(m, MergeTree::kNone);
  struct Frame { std::size_t j; bool children_done; };
  std::vector<Frame> work{{root, false}};
  while (!work.empty()) {
    Frame f = work.back();
    work.pop_back();
    if (!f.children_done) {
      work.push_back({f.j, true});
      if (right[f.j] != kNil) work.push_back({right[f.j], false});
      if (left[f.j] != kNil) work.push_back({left[f.j], false});
      continue;
    }
    const auto l = left[f.j] != kNil ? built[left[f.j]] : leaf(f.j);
    const auto r = right[f.j] != kNil ? built[right[f.j]] : leaf(f.j + 1);
    built[f.j] = t.add_internal(l, r, powers[f.j]);
  }
  t.finalize(built[root]);
  return t;
}

/// C = sum d_i alpha_i; M = sum d_i L_i when the weights carry lengths.
inline TreeCost tree_cost(const MergeTree& tree, const WeightVector& w) {
  const auto depths = tree.leaf_depths();
  if (depths.size() != w.size()) {
    throw std::invalid_argument("tree_cost: tree has " + std::to_string(depths.size()) +
                                " leaves but weights have " + std::to_string(w.size()));
  }
  TreeCost c;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    c.search_cost += static_cast<double>(depths[i]) * w.alpha(i);
  }
  if (w.has_lengths()) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < depths.size(); ++i) m += depths[i] * w.lengths()[i];
    c.merge_cost = m;
  }
  return c;
}

/// Sum over internal nodes of the total run length below them.
inline std::uint64_t merge_cost_of_tree(const MergeTree& tree,
                                        std::span<const std::uint64_t> run_lengths) {
  if (tree.leaf_count() != run_lengths.size()) {
    throw std::invalid_argument("merge_cost_of_tree: leaf count does not match run lengths");
  }
  // Post-order accumulation keyed by node id.
  std::vector<std::uint64_t> below(tree.node_count(), 0);
  std::uint64_t total = 0;
  struct Frame { MergeTree::NodeId id; bool done; };
  std::vector<Frame> work{{tree.root(), false}};
  while (!work.empty()) {
    Frame f = work.back();
    work.pop_back();
    const auto& nd = tree.node(f.id);
    if (nd.is_leaf()) {
      below[f.id] = run_lengths[nd.leaf_index];
      continue;
    }
    if (!f.done) {
      work.push_back({f.id, true});
      work.push_back({nd.right, false});
      work.push_back({nd.left, false});
      continue;
    }
    below[f.id] = below[nd.left] + below[nd.right];
    total += below[f.id];
  }
  return total;
}

/// Sum over leaves of depth times run length; equals merge_cost_of_tree.
inline std::uint64_t weighted_depth_sum(const MergeTree& tree,
                                        std::span<const std::uint64_t> run_lengths) {
  const auto depths = tree.leaf_depths();
  if (depths.size() != run_lengths.size()) {
    throw std::invalid_argument("weighted_depth_sum: leaf count does not match run lengths");
  }
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) s += depths[i] * run_lengths[i];
  return s;
}

/// Minimum expected search depth over all alphabetic trees, by dynamic
/// programming over contiguous leaf intervals (cubic time).
inline TreeCost optimal_tree_cost(const WeightVector& w, std::size_t max_keys = 200) {
  if (w.key_count() > max_keys) {
    throw std::invalid_argument("optimal_tree_cost: " + std::to_string(w.key_count()) +
                                " keys exceed the limit of " + std::to_string(max_keys));
  }
  const std::size_t k = w.size();
  TreeCost out;
  if (w.has_lengths()) {
    // cost[i][j] = min merge cost of leaves i..j (integer, exact).
    std::vector<std::uint64_t> cost(k * k, 0);
    for (std::size_t len = 2; len <= k; ++len) {
      for (std::size_t i = 0; i + len <= k; ++i) {
        const std::size_t j = i + len - 1;
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::size_t c = i + 1; c <= j; ++c) {
          best = std::min(best, cost[i * k + c - 1] + cost[c * k + j]);
        }
        cost[i * k + j] = best + (w.int_prefix(j + 1) - w.int_prefix(i));
      }
    }
    out.merge_cost = cost[k - 1];
    out.search_cost = static_cast<double>(cost[k - 1]) / static_cast<double>(w.total());
    return out;
  }
  std::vector<double> cost(k * k, 0.0);
  for (std::size_t len = 2; len <= k; ++len) {
    for (std::size_t i = 0; i + len <= k; ++i) {
      const std::size_t j = i + len - 1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = i + 1; c <= j; ++c) {
        best = std::min(best, cost[i * k + c - 1] + cost[c * k + j]);
      }
      cost[i * k + j] = best + (w.prefix(j + 1) - w.prefix(i));
    }
  }
  out.search_cost = cost[k - 1];
  return out;
}

}  // namespace runsort

#endif  // RUNSORT_OPTTREE_HPP
