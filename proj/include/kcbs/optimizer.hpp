#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kcbs/compass.hpp"
#include "kcbs/parallel.hpp"
#include "kcbs/pentagram.hpp"
#include "kcbs/rng.hpp"

namespace kcbs {

struct SearchConfig {
  int starts = 20;
  double initial_step = 0.5;
  double shrink_factor = 0.5;
  double tolerance = 1e-9;
  std::uint64_t max_iters = 100000;
  std::uint64_t seed = 1;

  void validate() const {
    if (starts < 1) throw std::invalid_argument("need at least one start");
    compass_options().validate();
  }

  CompassOptions compass_options() const { return CompassOptions{initial_step, shrink_factor, tolerance, max_iters}; }
};

/// Unit states modulo global phase: two polar angles and two relative phases,
/// psi = (sin a cos b, sin a sin b e^{i p}, cos a e^{i q}).
using StateParameters = std::array<double, 4>;

inline QutritState state_from_parameters(const StateParameters& x) {
  const double a = x[0], b = x[1], p = x[2], q = x[3];
  return QutritState(Vec3{Complex(std::sin(a) * std::cos(b), 0.0), std::sin(a) * std::sin(b) * std::polar(1.0, p),
                          std::cos(a) * std::polar(1.0, q)});
}

inline StateParameters parameters_from_state(const QutritState& psi) {
  const auto& v = psi.amplitudes();
  // Reference phase: first non-vanishing component.
  double ref = std::arg(v[2]);
  if (std::abs(v[1]) > 0.0) ref = std::arg(v[1]);
  if (std::abs(v[0]) > 0.0) ref = std::arg(v[0]);
  const double a = std::acos(std::min(1.0, std::abs(v[2])));
  const double b = std::atan2(std::abs(v[1]), std::abs(v[0]));
  return StateParameters{a, b, std::arg(v[1]) - ref, std::arg(v[2]) - ref};
}

struct OptimizationResult {
  QutritState state;
  double value;
  bool converged;
  int best_start;
  std::uint64_t evaluations;
  std::vector<double> trace;  ///< accepted objective values of the winning start
};

/// Minimizes the five-term cyclic sum over qutrit states for a fixed
/// pentagram by multi-start compass search. Start 0 is `first_start` when
/// given; the others are drawn from the seeded start streams. Ties go to the
/// lowest start index.
inline OptimizationResult optimize_state(const Pentagram& p, const SearchConfig& cfg,
                                         std::optional<QutritState> first_start = std::nullopt) {
  cfg.validate();
  auto objective = [&p](const StateParameters& x) { return eq1_lhs(p, state_from_parameters(x)); };

  const auto starts = static_cast<std::size_t>(cfg.starts);
  std::vector<std::optional<CompassResult<4>>> runs(starts);
  detail::parallel_for(starts, [&](std::size_t i) {
    StateParameters x0{};
    if (i == 0 && first_start) {
      x0 = parameters_from_state(*first_start);
    } else {
      Stream s(cfg.seed, StreamTag::OptimizerStart, i);
      x0 = {std::numbers::pi * s.uniform(), std::numbers::pi * s.uniform(), 2.0 * std::numbers::pi * s.uniform(),
            2.0 * std::numbers::pi * s.uniform()};
    }
    runs[i] = compass_search<4>(objective, x0, cfg.compass_options());
  });

  std::size_t best = 0;
  std::uint64_t evaluations = 0;
  for (std::size_t i = 0; i < starts; ++i) {
    evaluations += runs[i]->evaluations;
    if (runs[i]->value < runs[best]->value) best = i;
  }
  const auto& win = *runs[best];
  return OptimizationResult{state_from_parameters(win.x), win.value, win.converged, static_cast<int>(best), evaluations,
                            win.trace};
}

struct ThetaResidual {
  double theta;
  double residual;  ///< max_k |<v_k|v_{k+1}>|
};

/// Orthogonality residual of the symmetric pentagram across polar angles.
inline std::vector<ThetaResidual> theta_scan(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("theta grid is empty");
  std::vector<ThetaResidual> out;
  out.reserve(grid.size());
  for (double theta : grid) out.push_back({theta, Pentagram::symmetric(theta).orthogonality_residual()});
  return out;
}

}  // namespace kcbs
