#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "kcbs/errors.hpp"

/// Exact complex linear algebra on the three-mode space of a single photon.
namespace kcbs {

using Complex = std::complex<double>;
using Vec3 = std::array<Complex, 3>;
/// Row-major 3x3 complex matrix.
using Mat3 = std::array<Vec3, 3>;

inline constexpr int kModes = 3;
inline constexpr double kUnitTolerance = 1e-12;
/// Largest weight on a fixed mode that is silently projected out.
inline constexpr double kResidueTolerance = 1e-10;

inline Vec3 basis_vector(int mode) {
  if (mode < 0 || mode >= kModes) throw std::out_of_range("mode index must be 0, 1 or 2");
  Vec3 e{};
  e[static_cast<std::size_t>(mode)] = 1.0;
  return e;
}

/// <u|v>, conjugate-linear in the first argument.
inline Complex inner(const Vec3& u, const Vec3& v) {
  return std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1] + std::conj(u[2]) * v[2];
}

inline double norm_squared(const Vec3& v) {
  return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
}

inline Mat3 identity_matrix() {
  Mat3 m{};
  for (int i = 0; i < kModes; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat3 adjoint(const Mat3& m) {
  Mat3 out{};
  for (int i = 0; i < kModes; ++i)
    for (int j = 0; j < kModes; ++j) out[i][j] = std::conj(m[j][i]);
  return out;
}

inline Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < kModes; ++i)
    for (int j = 0; j < kModes; ++j)
      out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
  return out;
}

inline Vec3 multiply(const Mat3& m, const Vec3& v) {
  Vec3 out{};
  for (int i = 0; i < kModes; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

/// max_ij |(U^dagger U - I)_ij|
inline double unitarity_residual(const Mat3& u) {
  const Mat3 g = multiply(adjoint(u), u);
  double worst = 0.0;
  for (int i = 0; i < kModes; ++i)
    for (int j = 0; j < kModes; ++j)
      worst = std::max(worst, std::abs(g[i][j] - (i == j ? Complex{1.0} : Complex{0.0})));
  return worst;
}

/// Single-photon mode amplitudes, always unit norm.
class QutritState {
 public:
  /// Normalizes `amplitudes`; throws std::invalid_argument for the zero vector.
  explicit QutritState(const Vec3& amplitudes) : amplitudes_(amplitudes) {
    const double n2 = norm_squared(amplitudes_);
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("state vector has zero or non-finite norm");
    if (std::abs(n2 - 1.0) > kUnitTolerance) {
      const double scale = 1.0 / std::sqrt(n2);
      for (auto& a : amplitudes_) a *= scale;
    }
  }

  static QutritState basis(int mode) { return QutritState(basis_vector(mode)); }

  const Vec3& amplitudes() const noexcept { return amplitudes_; }
  const Complex& operator[](int mode) const { return amplitudes_.at(static_cast<std::size_t>(mode)); }

  bool operator==(const QutritState&) const = default;

 private:
  Vec3 amplitudes_;
};

enum class ObservableLabel { A1, A2, A3, A4, A5, A1Prime, Unmonitored };

inline std::string_view label_name(ObservableLabel label) {
  switch (label) {
    case ObservableLabel::A1: return "A1";
    case ObservableLabel::A2: return "A2";
    case ObservableLabel::A3: return "A3";
    case ObservableLabel::A4: return "A4";
    case ObservableLabel::A5: return "A5";
    case ObservableLabel::A1Prime: return "A1'";
    case ObservableLabel::Unmonitored: return "-";
  }
  return "?";
}

/// Label of the k-th cyclic observable, k = 0..4 -> A1..A5.
inline ObservableLabel cyclic_label(int k) { return static_cast<ObservableLabel>(((k % 5) + 5) % 5); }

/// Two-outcome observable A = 1 - 2|v><v|: a click on the detector
/// projecting onto v reads -1, no click reads +1.
class ModeObservable {
 public:
  /// `vector` must already be unit norm within 1e-12.
  ModeObservable(const Vec3& vector, ObservableLabel label) : vector_(vector), label_(label) {
    if (std::abs(norm_squared(vector_) - 1.0) > kUnitTolerance)
      throw std::invalid_argument("observable vector is not unit norm");
  }

  static ModeObservable normalized(Vec3 vector, ObservableLabel label) {
    const double n2 = norm_squared(vector);
    if (!(n2 > 0.0)) throw std::invalid_argument("observable vector has zero norm");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& c : vector) c *= scale;
    return ModeObservable(vector, label);
  }

  const Vec3& vector() const noexcept { return vector_; }
  ObservableLabel label() const noexcept { return label_; }

  bool operator==(const ModeObservable&) const = default;

 private:
  Vec3 vector_;
  ObservableLabel label_;
};

/// |<v|psi>|^2, the probability that the photon lands in mode v.
inline double projector_probability(const ModeObservable& v, const QutritState& psi) {
  return std::norm(inner(v.vector(), psi.amplitudes()));
}

inline double observable_expectation(const ModeObservable& v, const QutritState& psi) {
  return 1.0 - 2.0 * projector_probability(v, psi);
}

/// Ordered pair of distinct modes (first < second).
struct ModePair {
  int first;
  int second;

  ModePair(int a, int b) : first(std::min(a, b)), second(std::max(a, b)) {
    if (a == b || first < 0 || second >= kModes) throw std::invalid_argument("mode pair must be two distinct modes in {0,1,2}");
  }

  int complement() const noexcept { return 3 - first - second; }
  bool contains(int mode) const noexcept { return mode == first || mode == second; }
  bool operator==(const ModePair&) const = default;
};

/// 2x2 block of a two-mode unitary, rows/columns ordered (first, second).
using Block2 = std::array<std::array<Complex, 2>, 2>;

/// Unitary acting on two modes only. The fixed mode's row and column are
/// those of the identity, exactly; this is checked on construction.
class StageTransform {
 public:
  StageTransform(const Block2& block, ModePair acted) : acted_(acted), matrix_(identity_matrix()), block_(block) {
    const int a = acted_.first;
    const int b = acted_.second;
    matrix_[a][a] = block[0][0];
    matrix_[a][b] = block[0][1];
    matrix_[b][a] = block[1][0];
    matrix_[b][b] = block[1][1];
    if (const double r = unitarity_residual(matrix_); !(r <= kUnitTolerance))
      throw std::invalid_argument("stage transform is not unitary (residual " + std::to_string(r) + ")");
  }

  static StageTransform identity(ModePair acted) { return StageTransform(Block2{{{1.0, 0.0}, {0.0, 1.0}}}, acted); }

  const Mat3& matrix() const noexcept { return matrix_; }
  const Block2& block() const noexcept { return block_; }
  ModePair acted_modes() const noexcept { return acted_; }
  int fixed_mode() const noexcept { return acted_.complement(); }

  bool operator==(const StageTransform&) const = default;

 private:
  ModePair acted_;
  Mat3 matrix_;
  Block2 block_;
};

/// Canonical Givens block for the (not necessarily normalized) pair
/// (w_a, w_b): [[w_a*, w_b*], [-w_b, w_a]] / |w|, determinant one, sending
/// (w_a, w_b) to (|w|, 0).
inline Block2 givens_block(Complex wa, Complex wb) {
  const double n = std::sqrt(std::norm(wa) + std::norm(wb));
  if (!(n >= kResidueTolerance)) throw DegenerateTarget("target has no weight on the acted modes");
  wa /= n;
  wb /= n;
  return Block2{{{std::conj(wa), std::conj(wb)}, {-wb, wa}}};
}

/// Two-mode unitary U with U * target = e_destination. The target's weight
/// on the fixed mode (at most 1e-10) is projected out first; more than that
/// is a ClosureFailure.
inline StageTransform two_mode_unitary(const Vec3& target, ModePair acted, int destination) {
  if (!acted.contains(destination)) throw std::invalid_argument("destination must be one of the acted modes");
  const double residue = std::abs(target[acted.complement()]);
  if (residue > kResidueTolerance)
    throw ClosureFailure("target has weight " + std::to_string(residue) + " on fixed mode " +
                         std::to_string(acted.complement()));
  Block2 block = givens_block(target[acted.first], target[acted.second]);
  if (destination == acted.second) std::swap(block[0], block[1]);
  return StageTransform(block, acted);
}

/// Real rotation by `angle` on the acted pair.
inline StageTransform mode_rotation(ModePair acted, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return StageTransform(Block2{{{c, -s}, {s, c}}}, acted);
}

/// Applies t to a raw vector. The fixed coordinate is copied, never computed.
inline Vec3 apply(const StageTransform& t, const Vec3& v) {
  const int a = t.acted_modes().first;
  const int b = t.acted_modes().second;
  const auto& u = t.block();
  Vec3 out = v;
  out[a] = u[0][0] * v[a] + u[0][1] * v[b];
  out[b] = u[1][0] * v[a] + u[1][1] * v[b];
  return out;
}

inline QutritState apply(const StageTransform& t, const QutritState& psi) {
  return QutritState(apply(t, psi.amplitudes()));
}

/// t * w. Row fixed_mode of the result is row fixed_mode of w, copied.
inline Mat3 compose(const StageTransform& t, const Mat3& w) {
  const int a = t.acted_modes().first;
  const int b = t.acted_modes().second;
  const auto& u = t.block();
  Mat3 out = w;
  for (int j = 0; j < kModes; ++j) {
    out[a][j] = u[0][0] * w[a][j] + u[0][1] * w[b][j];
    out[b][j] = u[1][0] * w[a][j] + u[1][1] * w[b][j];
  }
  return out;
}

/// outer * inner for two transforms on the same pair.
inline StageTransform compose(const StageTransform& outer, const StageTransform& inner) {
  if (!(outer.acted_modes() == inner.acted_modes()))
    throw std::invalid_argument("composed stage transforms must act on the same modes");
  const auto& x = outer.block();
  const auto& y = inner.block();
  Block2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
  return StageTransform(out, outer.acted_modes());
}

}  // namespace kcbs
