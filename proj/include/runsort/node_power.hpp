// SPDX-License-Identifier: Apache-2.0

#ifndef RUNSORT_NODE_POWER_HPP
#define RUNSORT_NODE_POWER_HPP

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace runsort {

using power_t = std::uint32_t;

namespace detail {

inline void check_node_power_args(std::uint64_t s1, std::uint64_t e1, std::uint64_t s2,
                                  std::uint64_t e2, std::uint64_t n) {
  if (!(1 <= s1 && s1 <= e1 && e1 < s2 && s2 <= e2 && e2 <= n)) {
    throw std::invalid_argument("node power: need 1 <= s1 <= e1 < s2 <= e2 <= n, got (" +
                                std::to_string(s1) + "," + std::to_string(e1) + "," +
                                std::to_string(s2) + "," + std::to_string(e2) + "," +
                                std::to_string(n) + ")");
  }
}

}  // namespace detail

/// Power of the boundary between runs [s1..e1] and [s2..e2] of an array of
/// length n (1-based, inclusive).
///
/// With the run midpoints a = (s1 + n1/2 - 1)/n and b = (s2 + n2/2 - 1)/n,
/// this is the smallest l >= 1 with floor(a * 2^l) < floor(b * 2^l). Evaluated
/// exactly on the integers 2n*a = s1+e1-1 and 2n*b = s2+e2-1.
inline power_t node_power_def(std::uint64_t s1, std::uint64_t e1, std::uint64_t s2,
                              std::uint64_t e2, std::uint64_t n) {
  detail::check_node_power_args(s1, e1, s2, e2, n);
  if (n >= (std::uint64_t{1} << 62)) throw std::invalid_argument("node power: n too large");
  using u128 = unsigned __int128;
  const u128 a2n = s1 + e1 - 1;
  const u128 b2n = s2 + e2 - 1;
  const u128 two_n = u128{2} * n;
  power_t l = 1;
  // b - a >= 1/n, so the loop stops by l = ceil(lg n) + 1 <= 63.
  while (((a2n << l) / two_n) == ((b2n << l) / two_n)) ++l;
  return l;
}

/// Loop-free node power: scales both midpoints to 31-bit binary fractions and
/// counts the leading zeros of their XOR. Exact for n < 2^31 because no power
/// can exceed 31 there.
inline power_t node_power_bitwise(std::uint64_t s1, std::uint64_t e1, std::uint64_t s2,
                                  std::uint64_t e2, std::uint64_t n) {
  detail::check_node_power_args(s1, e1, s2, e2, n);
  if (n >= (std::uint64_t{1} << 31)) {
    throw std::out_of_range("node_power_bitwise: n must be below 2^31");
  }
  const std::uint64_t two_n = n << 1;
  const std::uint64_t l = s1 + e1 - 1;  // 2n * a, below 2^32
  const std::uint64_t r = s2 + e2 - 1;  // 2n * b
  const auto a = static_cast<std::uint32_t>((l << 31) / two_n);
  const auto b = static_cast<std::uint32_t>((r << 31) / two_n);
  return static_cast<power_t>(std::countl_zero(a ^ b));
}

/// Node power for adjacent 0-based runs [start_a..end_a], [end_a+1..end_b] of
/// an array of length n; bitwise when it is exact, the loop otherwise.
inline power_t node_power(std::uint64_t start_a, std::uint64_t end_a, std::uint64_t end_b,
                          std::uint64_t n) {
  if (n < (std::uint64_t{1} << 31)) {
    return node_power_bitwise(start_a + 1, end_a + 1, end_a + 2, end_b + 1, n);
  }
  return node_power_def(start_a + 1, end_a + 1, end_a + 2, end_b + 1, n);
}

}  // namespace runsort

#endif  // RUNSORT_NODE_POWER_HPP
