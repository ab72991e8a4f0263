// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_MERGE_TREE_HPP
#define RUNSORT_MERGE_TREE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace runsort {

/// Binary tree over runs. Leaves are runs in left-to-right order; an internal
/// node stands for the merge of its two children.
///
/// `size` is the run length (leaf) or the merged length (internal). Trees built
/// from real-valued weights have no lengths and store size 0. `power` is 0 when
/// a node carries no power annotation.
class MergeTree {
 public:
  using NodeId = std::int32_t;
  static constexpr NodeId kNone = -1;

  struct Node {
    NodeId left = kNone;
    NodeId right = kNone;
    std::uint64_t size = 0;
    std::uint32_t power = 0;
    std::uint32_t leaf_index = 0;  // meaningful for leaves only

    bool is_leaf() const noexcept { return left == kNone; }
  };

  MergeTree() = default;

  NodeId add_leaf(std::uint64_t size) {
    nodes_.push_back(Node{kNone, kNone, size, 0, 0});
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  NodeId add_internal(NodeId left, NodeId right, std::uint32_t power = 0) {
    const std::uint64_t size = nodes_.at(left).size + nodes_.at(right).size;
    nodes_.push_back(Node{left, right, size, power, 0});
    return static_cast<NodeId>(nodes_.size() - 1);
  }

  /// Sets the root and numbers leaves 0..r-1 in in-order.
  void finalize(NodeId root) {
    root_ = root;
    std::uint32_t next = 0;
    for_each_inorder([&](NodeId id, std::size_t) {
      if (nodes_[id].is_leaf()) nodes_[id].leaf_index = next++;
    });
  }

  bool empty() const noexcept { return root_ == kNone; }
  NodeId root() const noexcept { return root_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  std::size_t leaf_count() const {
    std::size_t c = 0;
    for_each_inorder([&](NodeId id, std::size_t) { c += nodes_[id].is_leaf(); });
    return c;
  }

  std::vector<std::uint64_t> leaf_sizes() const {
    std::vector<std::uint64_t> out;
    for_each_inorder([&](NodeId id, std::size_t) {
      if (nodes_[id].is_leaf()) out.push_back(nodes_[id].size);
    });
    return out;
  }

  /// Edge count from the root to each leaf, in leaf order.
  std::vector<std::size_t> leaf_depths() const {
    std::vector<std::size_t> out;
    for_each_inorder([&](NodeId id, std::size_t depth) {
      if (nodes_[id].is_leaf()) out.push_back(depth);
    });
    return out;
  }

  /// Powers of internal nodes in in-order (node between leaf j-1 and leaf j).
  std::vector<std::uint32_t> internal_powers() const {
    std::vector<std::uint32_t> out;
    for_each_inorder([&](NodeId id, std::size_t) {
      if (!nodes_[id].is_leaf()) out.push_back(nodes_[id].power);
    });
    return out;
  }

  /// Sum of internal node sizes.
  std::uint64_t internal_size_sum() const {
    std::uint64_t s = 0;
    for (const auto& nd : reachable_nodes())
      if (!nd.is_leaf()) s += nd.size;
    return s;
  }

  /// True if powers strictly increase along every root-to-leaf path.
  bool powers_increase_downward() const {
    if (empty()) return true;
    struct Frame { NodeId id; std::uint32_t parent_power; };
    std::vector<Frame> stack{{root_, 0}};
    while (!stack.empty()) {
      auto [id, pp] = stack.back();
      stack.pop_back();
      const Node& nd = nodes_[id];
      if (nd.is_leaf()) continue;
      if (nd.power <= pp) return false;
      stack.push_back({nd.left, nd.power});
      stack.push_back({nd.right, nd.power});
    }
    return true;
  }

  /// Visits nodes in in-order with their depth. Iterative; trees may be deep.
  template <class F>
  void for_each_inorder(F&& visit) const {
    if (root_ == kNone) return;
    struct Frame { NodeId id; std::size_t depth; bool expanded; };
    std::vector<Frame> stack{{root_, 0, false}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      const Node& nd = nodes_[f.id];
      if (nd.is_leaf() || f.expanded) {
        visit(f.id, f.depth);
        continue;
      }
      stack.push_back({nd.right, f.depth + 1, false});
      stack.push_back({f.id, f.depth, true});
      stack.push_back({nd.left, f.depth + 1, false});
    }
  }

  /// Indented one-node-per-line rendering, for diagnostics.
  std::string to_string() const {
    std::string out;
    for_each_inorder([&](NodeId id, std::size_t depth) {
      const Node& nd = nodes_[id];
      out.append(depth * 2, ' ');
      if (nd.is_leaf()) {
        out += "leaf#" + std::to_string(nd.leaf_index) + " size=" + std::to_string(nd.size);
      } else {
        out += "node size=" + std::to_string(nd.size);
        if (nd.power != 0) out += " power=" + std::to_string(nd.power);
      }
      out += '\n';
    });
    return out;
  }

 private:
  std::vector<Node> reachable_nodes() const {
    std::vector<Node> out;
    for_each_inorder([&](NodeId id, std::size_t) { out.push_back(nodes_[id]); });
    return out;
  }

  std::vector<Node> nodes_;
  NodeId root_ = kNone;
};

namespace detail {

inline bool tree_equal_rec(const MergeTree& a, MergeTree::NodeId x, const MergeTree& b,
                           MergeTree::NodeId y, bool sizes, bool powers) {
  // Explicit stack keeps this safe for degenerate (path-like) trees.
  std::vector<std::pair<MergeTree::NodeId, MergeTree::NodeId>> stack{{x, y}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    const auto& nu = a.node(u);
    const auto& nv = b.node(v);
    if (nu.is_leaf() != nv.is_leaf()) return false;
    if (sizes && nu.size != nv.size) return false;
    if (nu.is_leaf()) continue;
    if (powers && nu.power != nv.power) return false;
    stack.emplace_back(nu.left, nv.left);
    stack.emplace_back(nu.right, nv.right);
  }
  return true;
}

}  // namespace detail

/// Same branching structure, ignoring sizes and powers.
inline bool same_shape(const MergeTree& a, const MergeTree& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return detail::tree_equal_rec(a, a.root(), b, b.root(), false, false);
}

/// Same structure, node sizes and powers.
inline bool operator==(const MergeTree& a, const MergeTree& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return detail::tree_equal_rec(a, a.root(), b, b.root(), true, true);
}

/// Same structure and node sizes; powers are not compared.
inline bool same_shape_and_sizes(const MergeTree& a, const MergeTree& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return detail::tree_equal_rec(a, a.root(), b, b.root(), true, false);
}

/// Same structure and powers; sizes are not compared.
inline bool same_shape_and_powers(const MergeTree& a, const MergeTree& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return detail::tree_equal_rec(a, a.root(), b, b.root(), false, true);
}

/// Records the merges a sorter performs over an array of length n.
///
/// A segment is created as a leaf the first time it takes part in a merge;
/// every natural mergesort merges whole runs, so leaves come out as exactly
/// the runs the sorter worked with.
class TreeRecorder {
 public:
  explicit TreeRecorder(std::size_t n) : n_(n), live_(n, MergeTree::kNone), end_(n, 0) {}

  /// Merge of [l, m) and [m, r]; inclusive right end as in the merge routines.
  void on_merge(std::size_t l, std::size_t m, std::size_t r, std::uint32_t power = 0) {
    const auto left = segment(l, m - 1);
    const auto right = segment(m, r);
    live_[m] = MergeTree::kNone;
    live_[l] = tree_.add_internal(left, right, power);
    end_[l] = r;
  }

  MergeTree finish() && {
    if (n_ == 0) return MergeTree{};
    tree_.finalize(segment(0, n_ - 1));
    return std::move(tree_);
  }

 private:
  MergeTree::NodeId segment(std::size_t start, std::size_t end) {
    auto id = live_[start];
    if (id == MergeTree::kNone) {
      id = tree_.add_leaf(end - start + 1);
      live_[start] = id;
      end_[start] = end;
    } else if (end_[start] != end) {
      throw std::logic_error("merge tree recorder: merge does not align with recorded segment");
    }
    return id;
  }

  std::size_t n_;
  MergeTree tree_;
  std::vector<MergeTree::NodeId> live_;
  std::vector<std::size_t> end_;
};

}  // namespace runsort

#endif  // RUNSORT_MERGE_TREE_HPP
