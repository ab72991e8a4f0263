// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_ARRAY_IO_HPP
#define RUNSORT_ARRAY_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "runsort/sort_item.hpp"

namespace runsort {

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline bool get_u64_le(std::istream& in, std::uint64_t& v) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return true;
}

inline bool has_extension(const std::filesystem::path& p, const char* ext) {
  return p.extension() == ext;
}

}  // namespace detail

/// Writes keys as a little-endian u64 count followed by little-endian int64
/// keys (.bin) or as one decimal key per line (.txt).
inline void write_keys(const std::filesystem::path& path, std::span<const std::int64_t> keys) {
  const bool bin = detail::has_extension(path, ".bin");
  if (!bin && !detail::has_extension(path, ".txt")) {
    throw std::invalid_argument("write_keys: " + path.string() + ": expected .bin or .txt");
  }
  std::ofstream out(path, bin ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("write_keys: cannot open " + path.string());
  if (bin) {
    detail::put_u64_le(out, keys.size());
    for (auto k : keys) detail::put_u64_le(out, static_cast<std::uint64_t>(k));
  } else {
    for (auto k : keys) out << k << '\n';
  }
  if (!out) throw std::runtime_error("write_keys: write failed for " + path.string());
}

inline std::vector<std::int64_t> read_keys(const std::filesystem::path& path) {
  const bool bin = detail::has_extension(path, ".bin");
  if (!bin && !detail::has_extension(path, ".txt")) {
    throw std::invalid_argument("read_keys: " + path.string() + ": expected .bin or .txt");
  }
  std::ifstream in(path, bin ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("read_keys: cannot open " + path.string());
  std::vector<std::int64_t> keys;
  if (bin) {
    std::uint64_t count = 0;
    if (!detail::get_u64_le(in, count)) {
      throw std::runtime_error("read_keys: " + path.string() + ": missing length header");
    }
    const auto size = std::filesystem::file_size(path);
    if (size != 8 + 8 * count) {
      throw std::runtime_error("read_keys: " + path.string() + ": header says " +
                               std::to_string(count) + " keys but file has " +
                               std::to_string(size) + " bytes");
    }
    keys.resize(count);
    for (auto& k : keys) {
      std::uint64_t v = 0;
      detail::get_u64_le(in, v);
      k = static_cast<std::int64_t>(v);
    }
    return keys;
  }
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::size_t used = 0;
    try {
      keys.push_back(std::stoll(line, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size()) {
      throw std::runtime_error("read_keys: " + path.string() + ":" + std::to_string(lineno) +
                               ": not an integer: " + line);
    }
  }
  return keys;
}

/// Loads keys and tags them with their positions.
inline ItemArray read_items(const std::filesystem::path& path) { return make_items(read_keys(path)); }

/// Positive integers, one per line (run-length files).
inline std::vector<std::uint64_t> read_lengths(const std::filesystem::path& path) {
  std::vector<std::uint64_t> out;
  for (auto k : read_keys(path)) {
    if (k <= 0) throw std::runtime_error("read_lengths: " + path.string() + ": non-positive length");
    out.push_back(static_cast<std::uint64_t>(k));
  }
  return out;
}

}  // namespace runsort

#endif  // RUNSORT_ARRAY_IO_HPP
