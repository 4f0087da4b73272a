#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kcbs {

struct CompassOptions {
  double initial_step = 0.5;
  double shrink_factor = 0.5;
  double tolerance = 1e-9;    ///< stop once the step falls below this
  std::uint64_t max_iters = 100000;  ///< polling sweeps

  void validate() const {
    if (!(initial_step > 0.0)) throw std::invalid_argument("initial step must be positive");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) throw std::invalid_argument("shrink factor must lie in (0,1)");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iters == 0) throw std::invalid_argument("max_iters must be positive");
  }
};

template <std::size_t N>
struct CompassResult {
  std::array<double, N> x{};
  double value = 0.0;
  std::uint64_t evaluations = 0;
  std::uint64_t iterations = 0;
  double final_step = 0.0;
  bool converged = false;
  /// Objective after each accepted move, starting with f(x0).
  std::vector<double> trace;
};

/// Compass (coordinate pattern) search. Each sweep polls +-step along every
/// axis and moves on strict improvement; a sweep without any move shrinks
/// the step. Deterministic for a deterministic objective.
template <std::size_t N, class Objective>
CompassResult<N> compass_search(Objective&& f, std::array<double, N> x0, const CompassOptions& opt) {
  opt.validate();
  CompassResult<N> r;
  r.x = x0;
  r.value = f(r.x);
  r.evaluations = 1;
  r.trace.push_back(r.value);
  double step = opt.initial_step;

  while (step >= opt.tolerance && r.iterations < opt.max_iters) {
    ++r.iterations;
    bool moved = false;
    for (std::size_t d = 0; d < N; ++d) {
      for (const double sign : {1.0, -1.0}) {
        auto y = r.x;
        y[d] += sign * step;
        const double fy = f(y);
        ++r.evaluations;
        if (fy < r.value) {
          r.x = y;
          r.value = fy;
          r.trace.push_back(fy);
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= opt.shrink_factor;
  }
  r.final_step = step;
  r.converged = step < opt.tolerance;
  return r;
}

}  // namespace kcbs
