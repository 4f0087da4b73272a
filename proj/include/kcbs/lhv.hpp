#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcbs/errors.hpp"

/// Deterministic noncontextual value assignments, enumerated exhaustively.
/// Everything here is integer arithmetic; the bounds are certificates.
namespace kcbs::lhv {

/// +1/-1 values, ordered a1..a5 (and a1' last for the six-variable form).
template <std::size_t N>
using Assignment = std::array<int, N>;

namespace detail {

template <std::size_t N>
void check_signs(std::span<const int, N> a) {
  for (int x : a)
    if (x != 1 && x != -1) throw std::invalid_argument("assignment entries must be +1 or -1");
}

/// Bit i of `mask` set -> entry i is -1.
template <std::size_t N>
Assignment<N> from_mask(std::uint64_t mask) {
  Assignment<N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = ((mask >> i) & 1U) ? -1 : 1;
  return a;
}

}  // namespace detail

/// Closed-cycle sum a1a2 + a2a3 + ... + a_n a1.
inline int cycle_value(std::span<const int> a) {
  int sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * a[(i + 1) % a.size()];
  return sum;
}

inline int eq1_value(std::span<const int, 5> a) {
  detail::check_signs<5>(a);
  return a[0] * a[1] + a[1] * a[2] + a[2] * a[3] + a[3] * a[4] + a[4] * a[0];
}

/// a1a2 + a2a3 + a3a4 + a4a5 + a5a1' - a1'a1, with a1' = a[5].
inline int eq2_value(std::span<const int, 6> a) {
  detail::check_signs<6>(a);
  return a[0] * a[1] + a[1] * a[2] + a[2] * a[3] + a[3] * a[4] + a[4] * a[5] - a[5] * a[0];
}

template <std::size_t N>
struct Enumeration {
  int min = std::numeric_limits<int>::max();
  int max = std::numeric_limits<int>::min();
  std::uint64_t assignments = 0;
  std::vector<Assignment<N>> minimizers;
};

/// Visits all 2^N sign patterns.
template <std::size_t N, class Value>
Enumeration<N> enumerate(Value&& value) {
  static_assert(N < 63);
  Enumeration<N> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
    const Assignment<N> a = detail::from_mask<N>(mask);
    const int v = value(std::span<const int, N>(a));
    ++out.assignments;
    if (v > out.max) out.max = v;
    if (v < out.min) {
      out.min = v;
      out.minimizers.clear();
    }
    if (v == out.min) out.minimizers.push_back(a);
  }
  return out;
}

inline Enumeration<5> enumerate_eq1() { return enumerate<5>([](std::span<const int, 5> a) { return eq1_value(a); }); }
inline Enumeration<6> enumerate_eq2() { return enumerate<6>([](std::span<const int, 6> a) { return eq2_value(a); }); }

inline int eq1_min() { return enumerate_eq1().min; }
inline int eq2_min() { return enumerate_eq2().min; }

/// Minimum of the n-cycle sum over all 2^n assignments, for odd 3 <= n <= 25.
/// Equals -(n - 2).
inline int cycle_min(int n) {
  if (n < 3 || n > 25 || n % 2 == 0) throw InvalidN("cycle length must be odd and in 3..25, got " + std::to_string(n));
  const auto len = static_cast<unsigned>(n);
  int best = std::numeric_limits<int>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
    // Edge i contributes -1 when bits i and i+1 differ.
    const std::uint64_t rotated = ((mask >> 1) | ((mask & 1U) << (len - 1)));
    const int disagreements = std::popcount(mask ^ rotated);
    best = std::min(best, n - 2 * disagreements);
  }
  return best;
}

}  // namespace kcbs::lhv
