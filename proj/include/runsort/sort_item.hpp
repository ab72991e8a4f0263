// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_SORT_ITEM_HPP
#define RUNSORT_SORT_ITEM_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace runsort {

/// A key with its original position attached.
///
/// Ordering looks at `key` only; `tag` is payload that lets tests observe
/// whether equal keys kept their input order. Equality compares both fields.
struct SortItem {
  std::int64_t key = 0;
  std::uint64_t tag = 0;

  friend constexpr bool operator<(const SortItem& a, const SortItem& b) noexcept {
    return a.key < b.key;
  }
  friend constexpr bool operator==(const SortItem&, const SortItem&) noexcept = default;
};

using ItemArray = std::vector<SortItem>;

/// Builds items from keys, tagging each with its index.
inline ItemArray make_items(std::span<const std::int64_t> keys) {
  ItemArray out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) out[i] = {keys[i], i};
  return out;
}

inline std::vector<std::int64_t> keys_of(std::span<const SortItem> items) {
  std::vector<std::int64_t> out(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) out[i] = items[i].key;
  return out;
}

/// Rewrites tags to 0..n-1 in array order.
inline void retag(std::span<SortItem> items) noexcept {
  for (std::size_t i = 0; i < items.size(); ++i) items[i].tag = i;
}

/// True if keys are weakly increasing and equal keys carry increasing tags.
inline bool is_stably_sorted(std::span<const SortItem> items) noexcept {
  for (std::size_t i = 1; i < items.size(); ++i) {
    const auto& a = items[i - 1];
    const auto& b = items[i];
    if (b.key < a.key) return false;
    if (a.key == b.key && !(a.tag < b.tag)) return false;
  }
  return true;
}

}  // namespace runsort

#endif  // RUNSORT_SORT_ITEM_HPP
