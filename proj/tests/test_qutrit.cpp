#include <bit>
#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "kcbs/pentagram.hpp"
#include "kcbs/qutrit.hpp"
#include "oracles.hpp"

using namespace kcbs;
using Catch::Matchers::WithinAbs;

namespace {

bool same_bits(const Complex& a, const Complex& b) {
  return std::bit_cast<std::uint64_t>(a.real()) == std::bit_cast<std::uint64_t>(b.real()) &&
         std::bit_cast<std::uint64_t>(a.imag()) == std::bit_cast<std::uint64_t>(b.imag());
}

StageTransform random_transform(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  const int fixed = pick(rng);
  const ModePair acted((fixed + 1) % 3, (fixed + 2) % 3);
  const int dest = (rng() & 1U) ? acted.first : acted.second;
  return two_mode_unitary(oracle::random_unit_on(rng, fixed), acted, dest);
}

}  // namespace

TEST_CASE("inner product", "[qutrit]") {
  CHECK(inner(basis_vector(0), basis_vector(1)) == Complex(0.0));
  CHECK(inner(basis_vector(0), basis_vector(0)) == Complex(1.0));
  const Vec3 u{Complex(0, 1), 0.0, 0.0};
  // Conjugate-linear in the first slot.
  CHECK(inner(u, basis_vector(0)) == Complex(0, -1));
  const auto p = optimal_pentagram();
  CHECK_THAT(std::abs(inner(p[0].vector(), p[1].vector())), WithinAbs(0.0, 1e-12));
}

TEST_CASE("projector probability and expectation", "[qutrit]") {
  const ModeObservable e0(basis_vector(0), ObservableLabel::A1);
  CHECK(projector_probability(e0, QutritState::basis(0)) == 1.0);
  CHECK(projector_probability(e0, QutritState::basis(1)) == 0.0);
  CHECK(observable_expectation(e0, QutritState::basis(0)) == -1.0);
  CHECK(observable_expectation(e0, QutritState::basis(2)) == 1.0);

  const auto p = optimal_pentagram();
  const auto axis = QutritState::basis(2);
  for (int k = 0; k < 5; ++k) {
    CHECK_THAT(projector_probability(p[k], axis), WithinAbs(oracle::kCos2Theta, 1e-12));
    CHECK_THAT(observable_expectation(p[k], axis), WithinAbs(oracle::kExpectation, 1e-12));
  }
  // Brute-force root of the orthogonality condition agrees with the frozen value.
  CHECK_THAT(oracle::brute_force_cos2_theta(), WithinAbs(oracle::kCos2Theta, 1e-12));
}

TEST_CASE("probabilities match an explicit projector sandwich", "[qutrit][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto v = ModeObservable::normalized(oracle::random_vector(rng), ObservableLabel::A1);
    const QutritState psi(oracle::random_vector(rng));
    const double p = projector_probability(v, psi);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0 + 1e-15);
    CHECK_THAT(p, WithinAbs(oracle::sandwich(oracle::projector(v.vector()), psi.amplitudes()), 1e-13));
    CHECK(observable_expectation(v, psi) == 1.0 - 2.0 * p);
  }
}

TEST_CASE("state and observable normalization", "[qutrit]") {
  const QutritState psi(Vec3{3.0, Complex(0, 4.0), 0.0});
  CHECK_THAT(norm_squared(psi.amplitudes()), WithinAbs(1.0, 1e-12));
  CHECK_THROWS_AS(QutritState(Vec3{}), std::invalid_argument);
  CHECK_THROWS_AS(ModeObservable(Vec3{2.0, 0.0, 0.0}, ObservableLabel::A1), std::invalid_argument);
  CHECK_NOTHROW(ModeObservable::normalized(Vec3{2.0, 0.0, 0.0}, ObservableLabel::A1));
}

TEST_CASE("two_mode_unitary", "[qutrit]") {
  SECTION("target already on destination gives the identity") {
    const auto t = two_mode_unitary(basis_vector(0), ModePair(0, 2), 0);
    CHECK(t.matrix() == identity_matrix());
  }
  SECTION("real target onto mode 0 through {0,2}") {
    const double h = 1.0 / std::sqrt(2.0);
    const Vec3 target{h, 0.0, h};
    const auto t = two_mode_unitary(target, ModePair(0, 2), 0);
    const Vec3 out = apply(t, target);
    CHECK_THAT(std::abs(out[0]), WithinAbs(1.0, 1e-15));
    CHECK_THAT(std::abs(out[2]), WithinAbs(0.0, 1e-15));
    CHECK(t.fixed_mode() == 1);
  }
  SECTION("destination on the second acted mode") {
    const Vec3 target{0.0, Complex(0.6, 0.0), Complex(0.0, 0.8)};
    const auto t = two_mode_unitary(target, ModePair(1, 2), 2);
    const Vec3 out = apply(t, target);
    CHECK_THAT(std::abs(out[2] - Complex(1.0)), WithinAbs(0.0, 1e-15));
  }
  SECTION("canonical block has determinant one") {
    const Vec3 target{Complex(0.3, 0.4), 0.0, Complex(-0.5, std::sqrt(0.5))};
    const auto t = two_mode_unitary(target, ModePair(0, 2), 0);
    const auto& b = t.block();
    CHECK_THAT(std::abs(b[0][0] * b[1][1] - b[0][1] * b[1][0] - Complex(1.0)), WithinAbs(0.0, 1e-15));
  }
  SECTION("random complex targets stay unitary and hit the destination") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
      const int fixed = static_cast<int>(rng() % 3);
      const ModePair acted((fixed + 1) % 3, (fixed + 2) % 3);
      const int dest = (trial % 2) ? acted.first : acted.second;
      const Vec3 target = oracle::random_unit_on(rng, fixed);
      const auto t = two_mode_unitary(target, acted, dest);
      REQUIRE(unitarity_residual(t.matrix()) <= 1e-12);
      const Vec3 out = apply(t, target);
      CHECK_THAT(std::abs(out[dest] - Complex(1.0)), WithinAbs(0.0, 1e-14));
    }
  }
  SECTION("small fixed-mode residue is projected out") {
    const Vec3 target{std::sqrt(0.5), 5e-11, std::sqrt(0.5)};
    CHECK_NOTHROW(two_mode_unitary(target, ModePair(0, 2), 0));
  }
  SECTION("errors") {
    CHECK_THROWS_AS(two_mode_unitary(Vec3{0.6, 1e-9, 0.8}, ModePair(0, 2), 0), ClosureFailure);
    CHECK_THROWS_AS(two_mode_unitary(basis_vector(1), ModePair(0, 2), 0), ClosureFailure);
    CHECK_THROWS_AS(two_mode_unitary(Vec3{1e-12, 0.0, 0.0}, ModePair(0, 2), 0), DegenerateTarget);
    CHECK_THROWS_AS(two_mode_unitary(basis_vector(0), ModePair(0, 2), 1), std::invalid_argument);
    CHECK_THROWS_AS(ModePair(1, 1), std::invalid_argument);
  }
}

TEST_CASE("stage transform invariants", "[qutrit]") {
  CHECK_THROWS_AS(StageTransform(Block2{{{1.0, 1.0}, {0.0, 1.0}}}, ModePair(0, 1)), std::invalid_argument);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = random_transform(rng);
    const int f = t.fixed_mode();
    for (int i = 0; i < 3; ++i) {
      CHECK(t.matrix()[f][i] == (i == f ? Complex(1.0) : Complex(0.0)));
      CHECK(t.matrix()[i][f] == (i == f ? Complex(1.0) : Complex(0.0)));
    }
  }
}

TEST_CASE("apply preserves norm and the fixed coordinate bit for bit", "[qutrit][property]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto t = random_transform(rng);
    const QutritState psi(oracle::random_unit(rng));
    const QutritState out = apply(t, psi);
    CHECK_THAT(norm_squared(out.amplitudes()), WithinAbs(1.0, 1e-12));
    CHECK(same_bits(out[t.fixed_mode()], psi[t.fixed_mode()]));
    // Same result as the dense matrix-vector product.
    const Vec3 dense = multiply(t.matrix(), psi.amplitudes());
    for (int i = 0; i < 3; ++i) CHECK_THAT(std::abs(dense[i] - out[i]), WithinAbs(0.0, 1e-15));
  }
  const auto t = two_mode_unitary(Vec3{0.6, 0.0, 0.8}, ModePair(0, 2), 0);
  CHECK(apply(t, QutritState::basis(1)) == QutritState::basis(1));
  CHECK(apply(StageTransform::identity(ModePair(0, 1)), QutritState::basis(2)) == QutritState::basis(2));
}

TEST_CASE("compose", "[qutrit][property]") {
  std::mt19937_64 rng(9);
  SECTION("identity on the left") {
    const Mat3 w = random_transform(rng).matrix();
    CHECK(compose(StageTransform::identity(ModePair(0, 2)), w) == w);
  }
  SECTION("T with its adjoint") {
    const auto t = random_transform(rng);
    const Mat3 prod = compose(t, adjoint(t.matrix()));
    CHECK(unitarity_residual(prod) <= 1e-12);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK_THAT(std::abs(prod[i][j] - (i == j ? Complex(1.0) : Complex(0.0))), WithinAbs(0.0, 1e-12));
  }
  SECTION("chains of five stay unitary and agree with dense products") {
    for (int trial = 0; trial < 200; ++trial) {
      Mat3 w = identity_matrix();
      Mat3 dense = identity_matrix();
      for (int k = 0; k < 5; ++k) {
        const auto t = random_transform(rng);
        w = compose(t, w);
        dense = oracle::naive_product(t.matrix(), dense);
      }
      CHECK(unitarity_residual(w) <= 1e-11);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK_THAT(std::abs(w[i][j] - dense[i][j]), WithinAbs(0.0, 1e-13));
    }
  }
  SECTION("fixed row is copied") {
    const auto t = random_transform(rng);
    const Mat3 w = random_transform(rng).matrix();
    const Mat3 out = compose(t, w);
    for (int j = 0; j < 3; ++j) CHECK(same_bits(out[t.fixed_mode()][j], w[t.fixed_mode()][j]));
  }
  SECTION("transforms on the same pair") {
    const auto a = mode_rotation(ModePair(1, 2), 0.3);
    const auto b = mode_rotation(ModePair(1, 2), -0.3);
    const auto c = compose(a, b);
    CHECK_THAT(std::abs(c.matrix()[1][1] - Complex(1.0)), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(compose(a, mode_rotation(ModePair(0, 2), 0.1)), std::invalid_argument);
  }
}
