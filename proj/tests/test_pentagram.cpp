#include <cmath>
#include <numbers>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "kcbs/pentagram.hpp"
#include "oracles.hpp"

using namespace kcbs;
using Catch::Matchers::WithinAbs;

namespace {

Vec3 real_cross(const Vec3& a, const Vec3& b) {
  return Vec3{a[1].real() * b[2].real() - a[2].real() * b[1].real(), a[2].real() * b[0].real() - a[0].real() * b[2].real(),
              a[0].real() * b[1].real() - a[1].real() * b[0].real()};
}

Pentagram rotated(const Pentagram& p, const Mat3& u) {
  auto r = [&](int k) { return ModeObservable::normalized(multiply(u, p[k].vector()), p[k].label()); };
  return Pentagram{{r(0), r(1), r(2), r(3), r(4)}, p.theta};
}

}  // namespace

TEST_CASE("optimal pentagram geometry", "[pentagram]") {
  const auto p = optimal_pentagram();
  CHECK_THAT(p.theta, WithinAbs(oracle::kTheta, 1e-14));
  CHECK_THAT(optimal_cos2_theta(), WithinAbs(1.0 / std::sqrt(5.0), 1e-15));
  CHECK_THAT(optimal_cos2_theta(), WithinAbs(oracle::brute_force_cos2_theta(), 1e-12));
  for (int k = 0; k < 5; ++k) {
    CHECK_THAT(std::abs(inner(p[k].vector(), p[k + 1].vector())), WithinAbs(0.0, 1e-12));
    CHECK_THAT(norm_squared(p[k].vector()), WithinAbs(1.0, 1e-12));
    CHECK(p[k].label() == cyclic_label(k));
  }
  CHECK(p.cyclically_orthogonal());
  // Non-adjacent directions overlap by (sqrt(5) - 1) / 2.
  CHECK_THAT(std::abs(inner(p[0].vector(), p[2].vector())), WithinAbs(oracle::kNonAdjacentOverlap, 1e-12));
  CHECK(std::abs(inner(p[0].vector(), p[2].vector())) > 0.1);
}

TEST_CASE("pair_correlation", "[pentagram]") {
  const auto p = optimal_pentagram();
  SECTION("state orthogonal to both observables never clicks") {
    for (int k = 0; k < 5; ++k) {
      const QutritState psi(real_cross(p[k].vector(), p[k + 1].vector()));
      CHECK_THAT(pair_correlation(p, k, psi).value, WithinAbs(1.0, 1e-12));
    }
  }
  SECTION("state along v_i always clicks detector i only") {
    for (int k = 0; k < 5; ++k) {
      const QutritState psi(p[k].vector());
      CHECK_THAT(pair_correlation(p, k, psi).value, WithinAbs(-1.0, 1e-12));
    }
  }
  SECTION("symmetric axis") {
    for (int k = 0; k < 5; ++k) {
      const auto c = pair_correlation(p, k, QutritState::basis(2));
      CHECK_THAT(c.value, WithinAbs(oracle::kPairCorrelation, 1e-12));
      CHECK(c.i == k);
      CHECK(c.j == (k + 1) % 5);
    }
  }
  SECTION("non-orthogonal geometry is refused") {
    const auto flat = Pentagram::symmetric(std::numbers::pi / 2.0);
    CHECK_THROWS_AS(pair_correlation(flat, 0, QutritState::basis(2)), IncompatiblePair);
    CHECK_THROWS_AS(eq1_lhs(flat, QutritState::basis(2)), IncompatiblePair);
  }
  CHECK_THROWS_AS(pair_correlation(p, 5, QutritState::basis(2)), std::out_of_range);
}

TEST_CASE("eq1_lhs", "[pentagram]") {
  const auto p = optimal_pentagram();
  const auto axis = QutritState::basis(2);
  CHECK_THAT(eq1_lhs(p, axis), WithinAbs(oracle::kEq1, 1e-12));
  CHECK_THAT(eq1_lhs(p, axis), WithinAbs(quantum_minimum(), 1e-12));

  double terms = 0.0;
  for (int k = 0; k < 5; ++k) terms += pair_correlation(p, k, axis).value;
  CHECK(eq1_lhs(p, axis) == terms);

  SECTION("state along v1 stays above the classical bound") {
    const QutritState psi(p[0].vector());
    const double value = eq1_lhs(p, psi);
    CHECK(value >= -3.0 - 1e-12);
    // Independent route: 5 - 4 sum_k psi^dagger P_k psi.
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += oracle::sandwich(oracle::projector(p[k].vector()), psi.amplitudes());
    CHECK_THAT(value, WithinAbs(5.0 - 4.0 * s, 1e-12));
  }
}

TEST_CASE("eq1_lhs properties over random states", "[pentagram][property]") {
  const auto p = optimal_pentagram();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const QutritState psi(oracle::random_unit(rng));
    const double value = eq1_lhs(p, psi);
    REQUIRE(value >= quantum_minimum() - 1e-9);

    if (trial % 10 == 0) {
      const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * (trial % 97) / 97.0);
      Vec3 shifted = psi.amplitudes();
      for (auto& c : shifted) c *= phase;
      CHECK_THAT(eq1_lhs(p, QutritState(shifted)), WithinAbs(value, 1e-12));
    }
  }
}

TEST_CASE("eq1_lhs is invariant under a common unitary", "[pentagram][property]") {
  const auto p = optimal_pentagram();
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Mat3 u = identity_matrix();
    for (int k = 0; k < 3; ++k) {
      const int fixed = k % 3;
      const ModePair acted((fixed + 1) % 3, (fixed + 2) % 3);
      u = compose(two_mode_unitary(oracle::random_unit_on(rng, fixed), acted, acted.first), u);
    }
    const QutritState psi(oracle::random_unit(rng));
    const auto q = rotated(p, u);
    CHECK_THAT(eq1_lhs(q, QutritState(multiply(u, psi.amplitudes()))), WithinAbs(eq1_lhs(p, psi), 1e-10));
  }
}
