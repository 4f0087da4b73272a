#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcbs/pentagram.hpp"
#include "kcbs/qutrit.hpp"
#include "kcbs/rng.hpp"

namespace kcbs {

inline constexpr int kStages = 5;
/// Mode 2 never carries a detector.
inline constexpr int kUnmonitoredMode = 2;

/// Which observable each of the two detectors realizes at one stage.
struct DetectorAssignment {
  ObservableLabel first;   ///< A_k
  int first_mode;
  ObservableLabel second;  ///< A_{k+1}, or A1' at stage 5
  int second_mode;

  bool operator==(const DetectorAssignment&) const = default;
};

struct MeasurementStage {
  int index = 0;  ///< 1..5
  Mat3 frame{};   ///< cumulative W_k, source frame -> stage frame
  DetectorAssignment detectors{};
  int unmonitored_mode = kUnmonitoredMode;

  bool operator==(const MeasurementStage&) const = default;
};

/// The five measurement contexts. Consecutive stages are linked by a
/// transform acting on two modes; its fixed mode carries the observable the
/// two contexts share, so that observable's detector is literally the same
/// row of both frames.
struct ContextPipeline {
  Pentagram pentagram;
  std::array<MeasurementStage, kStages> stages;
  std::vector<StageTransform> inter_stage;  ///< inter_stage[k-1] maps stage k to k+1
  ModeObservable a1_prime;

  const MeasurementStage& stage(int index) const {
    if (index < 1 || index > kStages) throw InvalidStage("stage index must be in 1..5, got " + std::to_string(index));
    return stages[static_cast<std::size_t>(index - 1)];
  }

  bool operator==(const ContextPipeline&) const = default;
};

/// Fixed wiring: stage k puts A_k on mode 0 for odd k and on mode 1 for
/// even k; A_{k+1} takes the other detector.
inline DetectorAssignment detector_schedule(int stage) {
  const int first_mode = (stage % 2 == 1) ? 0 : 1;
  const ObservableLabel second = stage == kStages ? ObservableLabel::A1Prime : cyclic_label(stage);
  return DetectorAssignment{cyclic_label(stage - 1), first_mode, second, 1 - first_mode};
}

/// Acted pair of the transform leading out of `stage` (1..4): everything but
/// the mode of the shared observable A_{k+1}.
inline ModePair inter_stage_modes(int stage) {
  const int shared = detector_schedule(stage).second_mode;
  return ModePair(1 - shared, kUnmonitoredMode);
}

/// W_k^dagger e_mode: the source-frame vector a detector on `mode` at `stage`
/// projects onto.
inline ModeObservable effective_vector(const ContextPipeline& pl, int stage, int mode) {
  const auto& st = pl.stage(stage);
  if (mode < 0 || mode >= kModes) throw std::out_of_range("mode index must be 0, 1 or 2");
  const auto& row = st.frame[static_cast<std::size_t>(mode)];
  const Vec3 v{std::conj(row[0]), std::conj(row[1]), std::conj(row[2])};
  ObservableLabel label = ObservableLabel::Unmonitored;
  if (mode == st.detectors.first_mode) label = st.detectors.first;
  if (mode == st.detectors.second_mode) label = st.detectors.second;
  return ModeObservable(v, label);
}

namespace detail {

/// Fills stage frames from W1 and the four inter-stage transforms.
inline ContextPipeline assemble(const Pentagram& p, const Mat3& first_frame, std::vector<StageTransform> transforms) {
  if (transforms.size() != kStages - 1) throw std::invalid_argument("pipeline needs four inter-stage transforms");
  std::array<MeasurementStage, kStages> stages{};
  Mat3 frame = first_frame;
  for (int k = 1; k <= kStages; ++k) {
    if (k > 1) frame = compose(transforms[static_cast<std::size_t>(k - 2)], frame);
    stages[static_cast<std::size_t>(k - 1)] = MeasurementStage{k, frame, detector_schedule(k), kUnmonitoredMode};
  }
  const auto& last = stages.back().frame[1];
  ModeObservable a1p(Vec3{std::conj(last[0]), std::conj(last[1]), std::conj(last[2])}, ObservableLabel::A1Prime);
  return ContextPipeline{p, stages, std::move(transforms), a1p};
}

}  // namespace detail

/// W1 as a product of Givens rotations: v1 -> e0 through modes {0,1} then
/// {0,2}, then the image of v2 -> e1 through {1,2}.
inline Mat3 first_stage_frame(const Pentagram& p) {
  const Vec3& v1 = p[0].vector();
  Mat3 w = identity_matrix();
  Vec3 r = v1;
  if (std::abs(v1[1]) > kResidueTolerance) {
    const StageTransform g(givens_block(v1[0], v1[1]), ModePair(0, 1));
    r = apply(g, v1);
    w = compose(g, w);
  }
  const StageTransform to_e0 = two_mode_unitary(r, ModePair(0, 2), 0);
  w = compose(to_e0, w);
  const StageTransform to_e1 = two_mode_unitary(multiply(w, p[1].vector()), ModePair(1, 2), 1);
  return compose(to_e1, w);
}

/// Builds the ideal five-stage pipeline for a cyclically orthogonal
/// pentagram. Throws ClosureFailure when a target leaks more than 1e-10 onto
/// the mode that must stay fixed.
inline ContextPipeline build_pipeline(const Pentagram& p) {
  const Mat3 w1 = first_stage_frame(p);
  std::vector<StageTransform> transforms;
  transforms.reserve(kStages - 1);
  Mat3 frame = w1;
  for (int k = 1; k < kStages; ++k) {
    const ModePair acted = inter_stage_modes(k);
    const int destination = acted.first == kUnmonitoredMode ? acted.second : acted.first;
    // Stage k+1 measures A_{k+2} (A1 again after the last step).
    const Vec3 target = multiply(frame, p[k + 1].vector());
    transforms.push_back(two_mode_unitary(target, acted, destination));
    frame = compose(transforms.back(), frame);
  }
  return detail::assemble(p, w1, std::move(transforms));
}

/// Imperfect realization: every inter-stage transform is followed by an
/// extra rotation on its own acted pair with angle sigma * N(0,1). The
/// fixed modes stay untouched whatever the angles.
inline ContextPipeline perturb(const ContextPipeline& pl, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("jitter sigma must be non-negative");
  std::vector<StageTransform> transforms;
  transforms.reserve(pl.inter_stage.size());
  for (std::size_t k = 0; k < pl.inter_stage.size(); ++k) {
    const auto& t = pl.inter_stage[k];
    Stream stream(seed, StreamTag::Jitter, k);
    const double angle = sigma * stream.normal();
    transforms.push_back(compose(mode_rotation(t.acted_modes(), angle), t));
  }
  return detail::assemble(pl.pentagram, pl.stages.front().frame, std::move(transforms));
}

/// |<a1'|v1>|^2 with v1 the stage-1 detector vector of A1.
inline double closure_overlap(const ContextPipeline& pl) {
  return std::norm(inner(pl.a1_prime.vector(), effective_vector(pl, 1, 0).vector()));
}

inline bool bitwise_equal(const Vec3& a, const Vec3& b) {
  for (int i = 0; i < kModes; ++i) {
    if (std::bit_cast<std::uint64_t>(a[i].real()) != std::bit_cast<std::uint64_t>(b[i].real())) return false;
    if (std::bit_cast<std::uint64_t>(a[i].imag()) != std::bit_cast<std::uint64_t>(b[i].imag())) return false;
  }
  return true;
}

struct SharedCheck {
  int stage;                 ///< the observable is shared by stages (stage, stage+1)
  ObservableLabel label;
  int mode;
  bool fixed_mode_matches;   ///< the inter-stage transform leaves exactly this mode alone
  bool bitwise_identical;

  bool operator==(const SharedCheck&) const = default;
};

struct AuditReport {
  std::array<SharedCheck, kStages - 1> shared{};
  double closure_overlap = 0.0;
  bool passed = false;

  bool operator==(const AuditReport&) const = default;
};

/// Checks that each observable common to two neighbouring contexts is the
/// same detector in both: same mode, untouched by the transform between
/// them, and the same source-frame vector bit for bit.
inline AuditReport shared_measurement_audit(const ContextPipeline& pl) {
  AuditReport report;
  report.passed = pl.inter_stage.size() == kStages - 1;
  for (int k = 1; k < kStages; ++k) {
    const auto& here = pl.stage(k).detectors;
    const auto& next = pl.stage(k + 1).detectors;
    SharedCheck check{k, here.second, here.second_mode, false, false};
    if (report.passed) check.fixed_mode_matches = pl.inter_stage[static_cast<std::size_t>(k - 1)].fixed_mode() == here.second_mode;
    check.fixed_mode_matches = check.fixed_mode_matches && next.first == here.second && next.first_mode == here.second_mode;
    check.bitwise_identical = bitwise_equal(effective_vector(pl, k, here.second_mode).vector(),
                                            effective_vector(pl, k + 1, here.second_mode).vector());
    report.passed = report.passed && check.fixed_mode_matches && check.bitwise_identical;
    report.shared[static_cast<std::size_t>(k - 1)] = check;
  }
  report.closure_overlap = closure_overlap(pl);
  return report;
}

}  // namespace kcbs
