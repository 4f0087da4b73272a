#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "kcbs/qutrit.hpp"

namespace kcbs {

inline constexpr int kCycle = 5;
/// Orthogonality tolerance below which two observables count as compatible.
inline constexpr double kCompatibilityTolerance = 1e-10;

/// cos^2 of the polar angle that makes the symmetric pentagram cyclically
/// orthogonal: cos(pi/5) / (1 + cos(pi/5)) = 1/sqrt(5).
inline double optimal_cos2_theta() {
  const double c = std::cos(std::numbers::pi / 5.0);
  return c / (1.0 + c);
}

inline double optimal_theta() { return std::acos(std::sqrt(optimal_cos2_theta())); }

/// Quantum minimum of the five-term cyclic sum, 5 - 4 sqrt(5).
inline double quantum_minimum() { return 5.0 - 4.0 * std::sqrt(5.0); }

/// Five measurement directions v1..v5 (stored at 0..4) on a cone of polar
/// angle theta, azimuths 4*pi*k/5. Cyclic orthogonality only holds at the
/// optimal angle; other angles are representable so callers can probe them.
struct Pentagram {
  std::array<ModeObservable, kCycle> vectors;
  double theta;

  /// Symmetric construction at an arbitrary polar angle.
  static Pentagram symmetric(double theta) {
    auto make = [theta](int k) {
      const double phi = 4.0 * std::numbers::pi * k / 5.0;
      const Vec3 v{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
      return ModeObservable::normalized(v, cyclic_label(k));
    };
    return Pentagram{{make(0), make(1), make(2), make(3), make(4)}, theta};
  }

  const ModeObservable& operator[](int k) const { return vectors.at(static_cast<std::size_t>(((k % kCycle) + kCycle) % kCycle)); }

  /// max_k |<v_k|v_{k+1}>| over the closed cycle.
  double orthogonality_residual() const {
    double worst = 0.0;
    for (int k = 0; k < kCycle; ++k)
      worst = std::max(worst, std::abs(inner((*this)[k].vector(), (*this)[k + 1].vector())));
    return worst;
  }

  bool cyclically_orthogonal(double tolerance = kUnitTolerance) const { return orthogonality_residual() <= tolerance; }

  bool operator==(const Pentagram&) const = default;
};

inline Pentagram optimal_pentagram() { return Pentagram::symmetric(optimal_theta()); }

/// <A_i A_j> for one adjacent pair of the cycle.
struct PairCorrelation {
  int i;
  int j;
  double value;
};

/// Correlation of the compatible pair (A_k, A_{k+1}), k = 0..4, the last pair
/// closing the cycle onto A_1. A single photon cannot click both orthogonal
/// detectors, so <A_i A_j> = 1 - 2 p_i - 2 p_j.
inline PairCorrelation pair_correlation(const Pentagram& p, int k, const QutritState& psi) {
  if (k < 0 || k >= kCycle) throw std::out_of_range("pair index must be in 0..4");
  const auto& vi = p[k];
  const auto& vj = p[k + 1];
  if (const double overlap = std::abs(inner(vi.vector(), vj.vector())); overlap > kCompatibilityTolerance)
    throw IncompatiblePair("observables " + std::string(label_name(vi.label())) + " and " +
                           std::string(label_name(vj.label())) + " are not orthogonal (|<vi|vj>| = " +
                           std::to_string(overlap) + ")");
  const double value = 1.0 - 2.0 * projector_probability(vi, psi) - 2.0 * projector_probability(vj, psi);
  return PairCorrelation{k, (k + 1) % kCycle, value};
}

/// Left-hand side of the five-term cyclic inequality (classical bound -3).
inline double eq1_lhs(const Pentagram& p, const QutritState& psi) {
  double sum = 0.0;
  for (int k = 0; k < kCycle; ++k) sum += pair_correlation(p, k, psi).value;
  return sum;
}

}  // namespace kcbs
