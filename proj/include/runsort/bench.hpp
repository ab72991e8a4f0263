// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_BENCH_HPP
#define RUNSORT_BENCH_HPP

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "runsort/array_io.hpp"
#include "runsort/gen.hpp"
#include "runsort/opttree.hpp"
#include "runsort/sort_item.hpp"
#include "runsort/sorters.hpp"

namespace runsort {

enum class Generator { permutation, random_runs, timsort_drag, file };

inline std::string_view generator_name(Generator g) {
  switch (g) {
    case Generator::permutation: return "permutation";
    case Generator::random_runs: return "random-runs";
    case Generator::timsort_drag: return "timsort-drag";
    case Generator::file: return "file";
  }
  return "?";
}

inline std::optional<Generator> parse_generator(std::string_view name) {
  for (auto g : {Generator::permutation, Generator::random_runs, Generator::timsort_drag,
                 Generator::file}) {
    if (generator_name(g) == name) return g;
  }
  return std::nullopt;
}

inline std::string_view merge_kind_name(MergeKind k) {
  return k == MergeKind::classic ? "classic" : "bitonic";
}

inline std::optional<MergeKind> parse_merge_kind(std::string_view name) {
  if (name == "classic") return MergeKind::classic;
  if (name == "bitonic") return MergeKind::bitonic;
  return std::nullopt;
}

struct ExperimentSpec {
  std::vector<Algorithm> algorithms;
  Generator generator = Generator::permutation;
  std::uint64_t n = 0;
  std::uint64_t mean_len = 1000;
  std::uint64_t run_scale = 32;
  std::vector<std::uint64_t> seeds{0};
  std::uint64_t reps = 1;
  std::uint64_t warmup = 3;
  std::size_t min_run_len = 24;
  MergeKind merge_kind = MergeKind::bitonic;
  /// Input array for Generator::file.
  std::filesystem::path input_path;
  /// Replaces the R_tim sequence for Generator::timsort_drag when non-empty.
  std::vector<std::uint64_t> drag_lengths;

  void validate() const {
    if (algorithms.empty()) throw std::invalid_argument("experiment: no algorithm selected");
    if (seeds.empty()) throw std::invalid_argument("experiment: no seeds");
    if (reps < 1) throw std::invalid_argument("experiment: reps must be >= 1");
    if (min_run_len < 1) throw std::invalid_argument("experiment: min_run_len must be >= 1");
    if (generator == Generator::random_runs && mean_len < 1) {
      throw std::invalid_argument("experiment: mean_len must be >= 1");
    }
    if (generator == Generator::file && input_path.empty()) {
      throw std::invalid_argument("experiment: generator 'file' needs an input path");
    }
  }
};

/// One sort of one input. Column order is the CSV column order.
struct ResultRow {
  std::string algo;
  std::string generator;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
  std::uint64_t time_ns = 0;
  std::uint64_t merge_cost = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t runs_detected = 0;
  std::uint64_t max_stack_height = 0;
  double entropy_H = 0.0;
  /// merge_cost / (n lg(n/w)); 0 when n <= w.
  double normalized_cost = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "algo,generator,n,seed,rep,time_ns,merge_cost,comparisons,runs_detected,max_stack_height,"
    "entropy_H,normalized_cost";

/// Run profile of one generated input, with the settings it was sorted under.
struct InstanceProfile {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  RunProfile lengths;

  friend bool operator==(const InstanceProfile&, const InstanceProfile&) = default;
};

struct ProfileSet {
  std::uint64_t min_run_len = 24;
  MergeKind merge_kind = MergeKind::bitonic;
  std::vector<InstanceProfile> instances;

  friend bool operator==(const ProfileSet&, const ProfileSet&) = default;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  ProfileSet profiles;
};

inline double normalized_merge_cost(std::uint64_t merge_cost, std::uint64_t n,
                                    std::uint64_t min_run_len) {
  if (n == 0) return 0.0;
  const double norm = static_cast<double>(n) *
                      std::log2(static_cast<double>(n) / static_cast<double>(min_run_len));
  return norm > 0.0 ? static_cast<double>(merge_cost) / norm : 0.0;
}

namespace detail {

inline void check_memory(std::uint64_t n) {
  // Input, working copy, merge buffer, plus generator scratch.
  const long double need = static_cast<long double>(n) * (3 * sizeof(SortItem) + 16);
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return;
  const long double have = static_cast<long double>(pages) * page_size;
  if (need > 0.8L * have) {
    throw std::runtime_error("experiment: n=" + std::to_string(n) + " needs about " +
                             std::to_string(static_cast<std::uint64_t>(need / (1 << 20))) +
                             " MiB, more than 80% of the " +
                             std::to_string(static_cast<std::uint64_t>(have / (1 << 20))) +
                             " MiB of physical memory");
  }
}

inline ItemArray generate_input(const ExperimentSpec& spec, std::uint64_t seed) {
  switch (spec.generator) {
    case Generator::permutation: return random_permutation(spec.n, seed);
    case Generator::random_runs: return random_runs(spec.n, spec.mean_len, seed);
    case Generator::timsort_drag:
      return timsort_drag(spec.n, spec.run_scale, seed, spec.drag_lengths);
    case Generator::file: return read_items(spec.input_path);
  }
  throw std::logic_error("unknown generator");
}

}  // namespace detail

/// Generates each seed's input once and sorts a fresh copy of it with every
/// algorithm, `reps` times. Rows come out ordered by (seed, rep, algorithm in
/// the order given). Before the first measurement each algorithm sorts the first
/// input `warmup` times untimed. Timing covers the sort call only.
inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.generator != Generator::file) detail::check_memory(spec.n);

  SortConfig cfg;
  cfg.min_run_len = spec.min_run_len;
  cfg.merge_kind = spec.merge_kind;

  ExperimentResult out;
  out.profiles.min_run_len = spec.min_run_len;
  out.profiles.merge_kind = spec.merge_kind;

  bool warmed_up = false;
  for (const std::uint64_t seed : spec.seeds) {
    const ItemArray input = detail::generate_input(spec, seed);
    const std::uint64_t n = input.size();
    RunProfile profile = run_profile(std::span<const SortItem>(input));
    const double h = run_length_entropy(profile);

    if (!warmed_up) {
      for (const Algorithm algo : spec.algorithms) {
        for (std::uint64_t k = 0; k < spec.warmup; ++k) {
          ItemArray work = input;
          Metrics m;
          sort_with(algo, std::span<SortItem>(work), cfg, m);
        }
      }
      warmed_up = true;
    }

    for (std::uint64_t rep = 0; rep < spec.reps; ++rep) {
      for (const Algorithm algo : spec.algorithms) {
        ItemArray work = input;
        Metrics m;
        const auto t0 = std::chrono::steady_clock::now();
        sort_with(algo, std::span<SortItem>(work), cfg, m);
        const auto t1 = std::chrono::steady_clock::now();
        if (!is_stably_sorted(work)) {
          throw std::logic_error(std::string(algorithm_name(algo)) +
                                 " produced unsorted output (seed " + std::to_string(seed) + ")");
        }
        ResultRow row;
        row.algo = algorithm_name(algo);
        row.generator = generator_name(spec.generator);
        row.n = n;
        row.seed = seed;
        row.rep = rep;
        row.time_ns = static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
        row.merge_cost = m.merge_cost;
        row.comparisons = m.comparisons;
        row.runs_detected = m.runs_detected;
        row.max_stack_height = m.max_stack_height;
        row.entropy_H = h;
        row.normalized_cost = normalized_merge_cost(m.merge_cost, n, spec.min_run_len);
        out.rows.push_back(std::move(row));
      }
    }
    out.profiles.instances.push_back({seed, n, std::move(profile)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bound verification

/// One failed inequality.
struct BoundViolation {
  std::size_t row = 0;
  std::string algo;
  std::uint64_t seed = 0;
  std::uint64_t rep = 0;
  std::string bound;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundReport {
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::vector<BoundViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Named inequality failed by a (merge cost, comparisons) pair.
struct BoundFailure {
  std::string bound;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Checks the merge-cost and comparison bounds of peeksort or powersort for
/// one instance sorted with w = 1 and the classic merge. H n is evaluated as
/// sum L_i lg(n / L_i); each comparison allows 1e-6 n of slack. Instances
/// with n < 2 are outside the bounds' range and always pass. Other
/// algorithms have no bounds and always pass.
inline std::vector<BoundFailure> check_bounds(Algorithm algo, std::span<const std::uint64_t> runs,
                                              std::uint64_t merge_cost,
                                              std::uint64_t comparisons) {
  std::vector<BoundFailure> out;
  std::uint64_t n = 0;
  for (auto l : runs) n += l;
  if (n < 2) return out;
  if (algo != Algorithm::peeksort && algo != Algorithm::powersort) return out;
  long double hn = 0.0L;
  for (auto l : runs) {
    hn += static_cast<long double>(l) *
          std::log2(static_cast<long double>(n) / static_cast<long double>(l));
  }
  const auto nd = static_cast<long double>(n);
  const auto r = static_cast<long double>(runs.size());
  const long double tol = 1e-6L * nd;
  auto check = [&](const char* name, std::uint64_t lhs, long double rhs) {
    if (static_cast<long double>(lhs) > rhs + tol) {
      out.push_back({name, static_cast<double>(lhs), static_cast<double>(rhs)});
    }
  };
  if (algo == Algorithm::peeksort) {
    check("merge_cost <= Hn + 2n - (r+2)", merge_cost, hn + 2 * nd - (r + 2));
    check("comparisons <= Hn + 3n - (2r+3)", comparisons, hn + 3 * nd - (2 * r + 3));
  } else {
    check("merge_cost <= Hn + 2n", merge_cost, hn + 2 * nd);
    check("comparisons <= Hn + 3n - r", comparisons, hn + 3 * nd - r);
  }
  return out;
}

/// Checks every peeksort and powersort row against its instance profile
/// (matched by seed and n). Rows of other algorithms are counted as skipped.
/// The bounds assume pure run-adaptive sorting with the classic merge, so
/// profile sets recorded with w != 1 or bitonic merging are refused.
inline BoundReport verify_bounds(std::span<const ResultRow> rows, const ProfileSet& profiles) {
  if (profiles.min_run_len != 1) {
    throw std::invalid_argument("verify_bounds: results were produced with min_run_len=" +
                                std::to_string(profiles.min_run_len) +
                                "; the bounds need min_run_len=1");
  }
  if (profiles.merge_kind != MergeKind::classic) {
    throw std::invalid_argument(
        "verify_bounds: results were produced with the bitonic merge; the bounds need classic");
  }
  BoundReport report;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ResultRow& row = rows[i];
    const auto algo = parse_algorithm(row.algo);
    if (!algo) throw std::invalid_argument("verify_bounds: unknown algorithm " + row.algo);
    if (*algo != Algorithm::peeksort && *algo != Algorithm::powersort) {
      ++report.skipped;
      continue;
    }
    const InstanceProfile* prof = nullptr;
    for (const auto& p : profiles.instances) {
      if (p.seed == row.seed && p.n == row.n) {
        prof = &p;
        break;
      }
    }
    if (prof == nullptr) {
      throw std::invalid_argument("verify_bounds: no profile for seed " +
                                  std::to_string(row.seed) + ", n " + std::to_string(row.n));
    }
    ++report.checked;
    for (auto& f : check_bounds(*algo, prof->lengths, row.merge_cost, row.comparisons)) {
      report.violations.push_back({i, row.algo, row.seed, row.rep, f.bound, f.lhs, f.rhs});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline void write_csv_field(std::ostream& out, std::string_view f) {
  if (f.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << f;
    return;
  }
  out << '"';
  for (char c : f) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(std::string_view s, std::string_view column, std::size_t line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad " +
                             std::string(column) + " value '" + std::string(s) + "'");
  }
  return v;
}

/// Splits RFC 4180 records; quoted fields may contain commas, quotes and
/// newlines. Returns false at end of input.
inline bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  fields.push_back(std::move(field));
  return any;
}

}  // namespace detail

inline void write_csv(std::span<const ResultRow> rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    detail::write_csv_field(out, r.algo);
    out << ',';
    detail::write_csv_field(out, r.generator);
    out << ',' << r.n << ',' << r.seed << ',' << r.rep << ',' << r.time_ns << ',' << r.merge_cost
        << ',' << r.comparisons << ',' << r.runs_detected << ',' << r.max_stack_height << ','
        << detail::format_double(r.entropy_H) << ',' << detail::format_double(r.normalized_cost)
        << '\n';
  }
}

inline void write_csv(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  write_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("write_csv: write failed for " + path.string());
}

inline std::vector<ResultRow> read_csv(std::istream& in) {
  std::vector<std::string> f;
  if (!detail::read_csv_record(in, f)) throw std::runtime_error("csv: empty input");
  std::string header;
  for (std::size_t i = 0; i < f.size(); ++i) header += (i ? "," : "") + f[i];
  if (header != kCsvHeader) throw std::runtime_error("csv: unexpected header: " + header);
  std::vector<ResultRow> rows;
  std::size_t line = 1;
  while (detail::read_csv_record(in, f)) {
    ++line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 12) {
      throw std::runtime_error("csv line " + std::to_string(line) + ": expected 12 fields, got " +
                               std::to_string(f.size()));
    }
    using detail::parse_number;
    ResultRow r;
    r.algo = f[0];
    r.generator = f[1];
    r.n = parse_number<std::uint64_t>(f[2], "n", line);
    r.seed = parse_number<std::uint64_t>(f[3], "seed", line);
    r.rep = parse_number<std::uint64_t>(f[4], "rep", line);
    r.time_ns = parse_number<std::uint64_t>(f[5], "time_ns", line);
    r.merge_cost = parse_number<std::uint64_t>(f[6], "merge_cost", line);
    r.comparisons = parse_number<std::uint64_t>(f[7], "comparisons", line);
    r.runs_detected = parse_number<std::uint64_t>(f[8], "runs_detected", line);
    r.max_stack_height = parse_number<std::uint64_t>(f[9], "max_stack_height", line);
    r.entropy_H = parse_number<double>(f[10], "entropy_H", line);
    r.normalized_cost = parse_number<double>(f[11], "normalized_cost", line);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<ResultRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_csv: cannot open " + path.string());
  try {
    return read_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Profile files
//
// Layout, all integers little-endian u64 after the 4-byte magic "RPRF":
// version (1), min_run_len, merge kind (0 bitonic, 1 classic), instance
// count, then per instance: seed, n, r, L_1..L_r.

inline constexpr std::uint64_t kProfileFormatVersion = 1;

inline void write_profiles(const ProfileSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_profiles: cannot open " + path.string());
  out.write("RPRF", 4);
  detail::put_u64_le(out, kProfileFormatVersion);
  detail::put_u64_le(out, set.min_run_len);
  detail::put_u64_le(out, set.merge_kind == MergeKind::classic ? 1 : 0);
  detail::put_u64_le(out, set.instances.size());
  for (const auto& p : set.instances) {
    detail::put_u64_le(out, p.seed);
    detail::put_u64_le(out, p.n);
    detail::put_u64_le(out, p.lengths.size());
    for (auto l : p.lengths) detail::put_u64_le(out, l);
  }
  out.flush();
  if (!out) throw std::runtime_error("write_profiles: write failed for " + path.string());
}

inline ProfileSet read_profiles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_profiles: cannot open " + path.string());
  auto fail = [&](const std::string& what) {
    return std::runtime_error("read_profiles: " + path.string() + ": " + what);
  };
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "RPRF") throw fail("bad magic");
  auto get = [&]() {
    std::uint64_t v = 0;
    if (!detail::get_u64_le(in, v)) throw fail("truncated file");
    return v;
  };
  if (get() != kProfileFormatVersion) throw fail("unsupported version");
  ProfileSet set;
  set.min_run_len = get();
  const std::uint64_t kind = get();
  if (kind > 1) throw fail("bad merge kind");
  set.merge_kind = kind == 1 ? MergeKind::classic : MergeKind::bitonic;
  const std::uint64_t count = get();
  for (std::uint64_t i = 0; i < count; ++i) {
    InstanceProfile p;
    p.seed = get();
    p.n = get();
    const std::uint64_t r = get();
    if (r > p.n) throw fail("more runs than elements");
    p.lengths.resize(r);
    std::uint64_t total = 0;
    for (auto& l : p.lengths) {
      l = get();
      total += l;
    }
    if (total != p.n) throw fail("run lengths do not sum to n");
    set.instances.push_back(std::move(p));
  }
  return set;
}

}  // namespace runsort

#endif  // RUNSORT_BENCH_HPP
