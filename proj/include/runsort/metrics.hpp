// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_METRICS_HPP
#define RUNSORT_METRICS_HPP

#include <cstdint>
#include <optional>

#include "runsort/merge_tree.hpp"

namespace runsort {

/// Instrumentation counters filled in by every sorter.
///
/// `merge_cost` is the sum of output sizes over all executed merges.
/// Insertion-sort and run-detection comparisons count towards `comparisons`
/// but never towards `merge_cost`.
struct Metrics {
  std::uint64_t merge_cost = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t runs_detected = 0;
  std::uint64_t max_stack_height = 0;
  std::uint64_t merges = 0;
  // Run-stack invariant breaches observed by powersort (expected: always 0).
  std::uint64_t invariant_violations = 0;
  std::optional<MergeTree> merge_tree;
};

}  // namespace runsort

#endif  // RUNSORT_METRICS_HPP
