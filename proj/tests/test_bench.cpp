// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "runsort/bench.hpp"

using namespace runsort;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.algorithms = {Algorithm::powersort};
  spec.generator = Generator::permutation;
  spec.n = 1000;
  spec.warmup = 0;
  return spec;
}

std::vector<ResultRow> without_time(std::vector<ResultRow> rows) {
  for (auto& r : rows) r.time_ns = 0;
  return rows;
}

}  // namespace

TEST(RunExperiment, SingleRow) {
  const auto res = run_experiment(small_spec());
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_EQ(res.rows[0].algo, "powersort");
  EXPECT_EQ(res.rows[0].generator, "permutation");
  EXPECT_GT(res.rows[0].merge_cost, 0u);
  EXPECT_GT(res.rows[0].normalized_cost, 0.0);
  ASSERT_EQ(res.profiles.instances.size(), 1u);
  EXPECT_EQ(res.profiles.instances[0].n, 1000u);
}

TEST(RunExperiment, RowOrderAndSharedInput) {
  ExperimentSpec spec = small_spec();
  spec.algorithms = {Algorithm::peeksort, Algorithm::powersort};
  spec.generator = Generator::random_runs;
  spec.mean_len = 30;
  spec.seeds = {4, 9};
  spec.reps = 2;
  const auto rows = run_experiment(spec).rows;
  ASSERT_EQ(rows.size(), 8u);
  std::size_t i = 0;
  for (std::uint64_t seed : {4u, 9u}) {
    for (std::uint64_t rep = 0; rep < 2; ++rep) {
      for (const char* algo : {"peeksort", "powersort"}) {
        EXPECT_EQ(rows[i].seed, seed);
        EXPECT_EQ(rows[i].rep, rep);
        EXPECT_EQ(rows[i].algo, algo);
        EXPECT_EQ(rows[i].entropy_H, rows[i - i % 2].entropy_H);
        ++i;
      }
    }
  }
  // Repetitions sort identical copies.
  EXPECT_EQ(rows[0].merge_cost, rows[2].merge_cost);
}

TEST(RunExperiment, Errors) {
  ExperimentSpec spec = small_spec();
  spec.algorithms.clear();
  EXPECT_THROW(run_experiment(spec), std::invalid_argument);
  spec = small_spec();
  spec.reps = 0;
  EXPECT_THROW(run_experiment(spec), std::invalid_argument);
  spec = small_spec();
  spec.n = std::uint64_t{1} << 50;
  EXPECT_THROW(run_experiment(spec), std::runtime_error);
}

TEST(RunExperiment, RandomRunsBeatsNormalizer) {
  ExperimentSpec spec = small_spec();
  spec.generator = Generator::random_runs;
  spec.n = 1000000;
  spec.mean_len = 1000;
  const auto rows = run_experiment(spec).rows;
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_LT(rows[0].normalized_cost, 1.0);
}

TEST(RunExperiment, FileGenerator) {
  const auto path = std::filesystem::temp_directory_path() / "runsort_bench_in.txt";
  write_keys(path, std::vector<std::int64_t>{3, 1, 2, 2, 9, 0});
  ExperimentSpec spec = small_spec();
  spec.generator = Generator::file;
  spec.input_path = path;
  const auto rows = run_experiment(spec).rows;
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].n, 6u);
  std::filesystem::remove(path);
}

TEST(Csv, EmptyIsHeaderOnly) {
  std::ostringstream out;
  write_csv({}, out);
  EXPECT_EQ(out.str(), std::string(kCsvHeader) + "\n");
}

TEST(Csv, OneRowTwoLinesAndRoundTrip) {
  auto rows = run_experiment(small_spec()).rows;
  rows[0].generator = "odd,\"name\"";
  std::ostringstream out;
  write_csv(rows, out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  std::istringstream in(text);
  EXPECT_EQ(read_csv(in), rows);
}

TEST(Csv, ReportsBadInputWithContext) {
  std::istringstream in(std::string(kCsvHeader) + "\npowersort,x,1,2,3\n");
  EXPECT_THROW(read_csv(in), std::runtime_error);
  EXPECT_THROW(write_csv({}, std::filesystem::path("/nonexistent-dir/out.csv")),
               std::runtime_error);
}

TEST(Profiles, RoundTrip) {
  ExperimentSpec spec = small_spec();
  spec.seeds = {1, 2, 3};
  spec.min_run_len = 1;
  spec.merge_kind = MergeKind::classic;
  const auto res = run_experiment(spec);
  const auto path = std::filesystem::temp_directory_path() / "runsort_profiles.bin";
  write_profiles(res.profiles, path);
  EXPECT_EQ(read_profiles(path), res.profiles);
  std::filesystem::remove(path);
}

TEST(VerifyBounds, SortedInputHolds) {
  const std::vector<std::uint64_t> one_run = {50};
  EXPECT_TRUE(check_bounds(Algorithm::peeksort, one_run, 0, 49).empty());
  EXPECT_TRUE(check_bounds(Algorithm::powersort, one_run, 0, 49).empty());
}

TEST(VerifyBounds, SixRunExample) {
  const std::vector<std::uint64_t> six_runs = {5, 3, 3, 14, 1, 2};
  EXPECT_TRUE(check_bounds(Algorithm::peeksort, six_runs, 65, 80).empty());
  // 106.18 is the peeksort merge-cost bound here.
  EXPECT_TRUE(check_bounds(Algorithm::peeksort, six_runs, 106, 80).empty());
  EXPECT_EQ(check_bounds(Algorithm::peeksort, six_runs, 107, 80).size(), 1u);
  EXPECT_EQ(check_bounds(Algorithm::powersort, six_runs, 115, 80).size(), 1u);
}

TEST(VerifyBounds, DetectsViolationsAndRefusesOtherSettings) {
  ExperimentSpec spec = small_spec();
  spec.algorithms = {Algorithm::peeksort, Algorithm::powersort, Algorithm::top_down};
  spec.min_run_len = 1;
  spec.merge_kind = MergeKind::classic;
  auto res = run_experiment(spec);
  auto report = verify_bounds(res.rows, res.profiles);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.checked, 2u);
  EXPECT_EQ(report.skipped, 1u);

  res.rows[1].merge_cost *= 10;
  report = verify_bounds(res.rows, res.profiles);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].algo, "powersort");

  res.profiles.min_run_len = 24;
  EXPECT_THROW(verify_bounds(res.rows, res.profiles), std::invalid_argument);
  res.profiles.min_run_len = 1;
  res.profiles.merge_kind = MergeKind::bitonic;
  EXPECT_THROW(verify_bounds(res.rows, res.profiles), std::invalid_argument);
}

TEST(Determinism, SameSpecSameRows) {
  ExperimentSpec spec = small_spec();
  spec.algorithms = {Algorithm::peeksort, Algorithm::alpha_merge};
  spec.generator = Generator::timsort_drag;
  spec.n = 1 << 14;
  spec.seeds = {0, 1};
  EXPECT_EQ(without_time(run_experiment(spec).rows), without_time(run_experiment(spec).rows));
}
