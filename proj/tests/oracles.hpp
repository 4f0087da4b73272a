#pragma once

// Test-only reference computations. These deliberately avoid the library's
// own arithmetic paths (no Givens blocks, no inner() helper) so that they
// can check it independently.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "kcbs/qutrit.hpp"

namespace oracle {

using kcbs::Complex;
using kcbs::Mat3;
using kcbs::Vec3;

// Frozen high-precision values (computed with mpmath at 30 digits).
inline constexpr double kCos2Theta = 0.447213595499957939;   // 1/sqrt(5)
inline constexpr double kTheta = 0.838283119172117557;
inline constexpr double kNonAdjacentOverlap = 0.618033988749894848;  // <v1|v3>
inline constexpr double kExpectation = 0.105572809000084121;  // 1 - 2/sqrt(5)
inline constexpr double kPairCorrelation = -0.788854381999831757;
inline constexpr double kEq1 = -3.944271909999158786;  // 5 - 4 sqrt(5)
inline constexpr double kEq2 = -4.944271909999158786;
inline constexpr double kEquatorialResidual = 0.809016994374947424;  // |cos(4 pi / 5)|

/// Root of cos^2(t) (1 - cos(4pi/5)) = -cos(4pi/5) by a dense grid over t
/// followed by bisection on the bracketing cell. Returns cos^2 of the root.
inline double brute_force_cos2_theta(int grid = 200000) {
  const double c = std::cos(4.0 * std::numbers::pi / 5.0);
  auto f = [c](double t) { return std::sin(t) * std::sin(t) * c + std::cos(t) * std::cos(t); };
  const double h = (std::numbers::pi / 2.0) / grid;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < grid; ++i) {
    if (f(i * h) > 0.0 && f((i + 1) * h) <= 0.0) {
      lo = i * h;
      hi = (i + 1) * h;
      break;
    }
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return std::cos(t) * std::cos(t);
}

/// |v><v| as an explicit matrix.
inline Mat3 projector(const Vec3& v) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = v[i] * std::conj(v[j]);
  return m;
}

/// psi^dagger M psi, real part.
inline double sandwich(const Mat3& m, const Vec3& psi) {
  Complex acc = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += std::conj(psi[i]) * m[i][j] * psi[j];
  return acc.real();
}

inline Mat3 naive_product(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Vec3 random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3{Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng))};
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  Vec3 v = random_vector(rng);
  double s = 0.0;
  for (auto& c : v) s += std::norm(c);
  s = std::sqrt(s);
  for (auto& c : v) c /= s;
  return v;
}

/// Random unit vector with zero weight on `fixed`.
inline Vec3 random_unit_on(std::mt19937_64& rng, int fixed) {
  Vec3 v = random_vector(rng);
  v[fixed] = 0.0;
  double s = 0.0;
  for (auto& c : v) s += std::norm(c);
  s = std::sqrt(s);
  for (auto& c : v) c /= s;
  return v;
}

/// Exhaustive minimum of a sum over +-1 assignments of length n, by recursion.
inline int recursive_min(int n, const std::function<int(const std::vector<int>&)>& value) {
  std::vector<int> a(n, 1);
  int best = 1 << 30;
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      best = std::min(best, value(a));
      return;
    }
    for (int s : {1, -1}) {
      a[i] = s;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

}  // namespace oracle
