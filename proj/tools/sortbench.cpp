// SPDX-License-Identifier: Apache-2.0
//
// sortbench: generate inputs, run the sorters with instrumentation, write CSV
// results and check the peeksort/powersort cost bounds.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "runsort/runsort.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int report_bounds(const runsort::BoundReport& report) {
  for (const auto& v : report.violations) {
    std::cerr << "violation: row " << v.row << " algo=" << v.algo << " seed=" << v.seed
              << " rep=" << v.rep << ": " << v.bound << " (" << v.lhs << " > " << v.rhs << ")\n";
  }
  std::cerr << "bounds: " << report.checked << " rows checked, " << report.skipped
            << " skipped, " << report.violations.size() << " violations\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run-adaptive mergesort benchmark"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Generate inputs, sort them, write CSV rows");
  std::string algos = "peeksort,powersort";
  std::string gen = "permutation";
  std::string in_path;
  std::string run_lengths_path;
  std::uint64_t n = 0;
  std::uint64_t mean_len = 1000;
  std::uint64_t run_scale = 32;
  std::uint64_t seed_count = 1;
  std::string seed_list;
  std::uint64_t reps = 1;
  std::uint64_t warmup = 3;
  std::size_t min_run_len = 24;
  std::string merge = "bitonic";
  bool verify = false;
  std::string out_path;
  std::string profiles_out;

  run->add_option("--algo", algos, "Comma-separated: peeksort,powersort,top-down,bottom-up,"
                                   "alpha-stack,alpha-merge");
  run->add_option("--gen", gen, "permutation | random-runs | timsort-drag | file");
  run->add_option("--in", in_path, "Input array (.bin or .txt) for --gen file");
  run->add_option("--run-lengths", run_lengths_path,
                  "Run lengths (.txt/.bin) replacing R_tim for --gen timsort-drag");
  run->add_option("--n", n, "Input length");
  run->add_option("--mean-len", mean_len, "Mean segment length for random-runs");
  run->add_option("--run-scale", run_scale, "Run length multiplier for timsort-drag");
  auto* seeds_opt = run->add_option("--seeds", seed_count, "Use seeds 0..k-1");
  run->add_option("--seed-list", seed_list, "Explicit comma-separated seeds")
      ->excludes(seeds_opt);
  run->add_option("--reps", reps, "Repetitions per seed");
  run->add_option("--warmup", warmup, "Untimed warmup sorts per algorithm");
  run->add_option("--min-run-len", min_run_len, "Minimal run length w");
  run->add_option("--merge", merge, "bitonic | classic");
  run->add_flag("--verify-bounds", verify, "Check the cost bounds (needs w=1, classic merge)");
  run->add_option("--out", out_path, "CSV output path (default: stdout)");
  run->add_option("--profiles-out", profiles_out, "Write per-seed run profiles here");

  // verify
  auto* ver = app.add_subcommand("verify", "Check cost bounds of a results CSV");
  std::string verify_in;
  std::string verify_profiles;
  ver->add_option("--in", verify_in, "Results CSV")->required();
  ver->add_option("--profiles", verify_profiles, "Profiles file from run --profiles-out")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      runsort::ExperimentSpec spec;
      for (const auto& name : split_commas(algos)) {
        const auto a = runsort::parse_algorithm(name);
        if (!a) throw std::invalid_argument("unknown algorithm '" + name + "'");
        spec.algorithms.push_back(*a);
      }
      const auto g = runsort::parse_generator(gen);
      if (!g) throw std::invalid_argument("unknown generator '" + gen + "'");
      spec.generator = *g;
      const auto mk = runsort::parse_merge_kind(merge);
      if (!mk) throw std::invalid_argument("unknown merge kind '" + merge + "'");
      spec.merge_kind = *mk;
      spec.n = n;
      spec.mean_len = mean_len;
      spec.run_scale = run_scale;
      spec.reps = reps;
      spec.warmup = warmup;
      spec.min_run_len = min_run_len;
      spec.input_path = in_path;
      if (!run_lengths_path.empty()) spec.drag_lengths = runsort::read_lengths(run_lengths_path);
      spec.seeds.clear();
      if (!seed_list.empty()) {
        for (const auto& s : split_commas(seed_list)) spec.seeds.push_back(std::stoull(s));
      } else {
        for (std::uint64_t s = 0; s < seed_count; ++s) spec.seeds.push_back(s);
      }

      const auto result = runsort::run_experiment(spec);
      if (out_path.empty()) {
        runsort::write_csv(result.rows, std::cout);
      } else {
        runsort::write_csv(result.rows, std::filesystem::path(out_path));
      }
      if (!profiles_out.empty()) runsort::write_profiles(result.profiles, profiles_out);
      if (verify) return report_bounds(runsort::verify_bounds(result.rows, result.profiles));
      return 0;
    }
    const auto rows = runsort::read_csv(std::filesystem::path(verify_in));
    const auto profiles = runsort::read_profiles(verify_profiles);
    return report_bounds(runsort::verify_bounds(rows, profiles));
  } catch (const std::exception& e) {
    std::cerr << "sortbench: " << e.what() << '\n';
    return 2;
  }
}
