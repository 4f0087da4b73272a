#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kcbs/parallel.hpp"
#include "kcbs/pipeline.hpp"
#include "kcbs/qutrit.hpp"
#include "kcbs/rng.hpp"

/// Monte Carlo photon counting through a context pipeline.
///
/// One heralded photon per shot. A detector that clicks reads -1, a silent
/// one reads +1. Shots are split into fixed-size blocks, each with its own
/// addressed RNG stream, so tallies are identical whatever the thread count.
namespace kcbs {

struct DetectorModel {
  double efficiency = 1.0;  ///< click probability given the photon is in the detector's mode
  double dark_rate = 0.0;   ///< spurious click probability per detector per shot
  bool postselect = false;  ///< drop shots with no click instead of recording (+1,+1)

  void validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw std::invalid_argument("efficiency must lie in [0,1]");
    if (!(dark_rate >= 0.0 && dark_rate <= 1.0)) throw std::invalid_argument("dark rate must lie in [0,1]");
  }

  bool ideal() const noexcept { return efficiency == 1.0 && dark_rate == 0.0 && !postselect; }
  bool operator==(const DetectorModel&) const = default;
};

inline constexpr std::uint64_t kBlockShots = 1U << 16;

/// Joint outcome counts of one context. Slot order of `counts`:
/// (+1,+1), (+1,-1), (-1,+1), (-1,-1), outcome_a belonging to A_k.
struct TallyTable {
  int context = 0;
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t double_clicks = 0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  DetectorModel detector{};

  static constexpr std::size_t slot(int a, int b) { return (a < 0 ? 2U : 0U) + (b < 0 ? 1U : 0U); }

  std::uint64_t count(int a, int b) const { return counts[slot(a, b)]; }
  std::uint64_t recorded() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  std::uint64_t discarded() const { return shots - recorded(); }
  std::uint64_t clicks_a() const { return count(-1, 1) + count(-1, -1); }
  std::uint64_t clicks_b() const { return count(1, -1) + count(-1, -1); }

  /// Sums counts of two partial tallies of the same context.
  TallyTable& merge(const TallyTable& other) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    double_clicks += other.double_clicks;
    shots += other.shots;
    return *this;
  }

  bool operator==(const TallyTable&) const = default;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;

  bool operator==(const Estimate&) const = default;
};

/// Plug-in estimate for a +-1 product: stderr = sqrt((1 - mean^2) / n).
inline Estimate estimate_correlation(const TallyTable& t) {
  const std::uint64_t n = t.recorded();
  if (n == 0) throw EmptyTally("context " + std::to_string(t.context) + " has no recorded shots");
  const auto sum = static_cast<double>(t.count(1, 1)) - static_cast<double>(t.count(1, -1)) -
                   static_cast<double>(t.count(-1, 1)) + static_cast<double>(t.count(-1, -1));
  const double mean = sum / static_cast<double>(n);
  return Estimate{mean, std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(n)), n};
}

/// Bernoulli rate k/n with stderr sqrt(r(1-r)/n).
inline Estimate rate_estimate(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) throw EmptyTally("rate estimate over zero shots");
  const double r = static_cast<double>(hits) / static_cast<double>(n);
  return Estimate{r, std::sqrt(r * (1.0 - r) / static_cast<double>(n)), n};
}

/// Per-heralded-photon click rate of one detector of a context. Uses all
/// shots as denominator, so it is unaffected by postselection.
inline Estimate click_rate_a(const TallyTable& t) { return rate_estimate(t.clicks_a(), t.shots); }
inline Estimate click_rate_b(const TallyTable& t) { return rate_estimate(t.clicks_b(), t.shots); }

/// Where the photon can be found at one stage.
struct ClickProbabilities {
  double a = 0.0;     ///< mode of A_k
  double b = 0.0;     ///< mode of A_{k+1} (or A1')
  double none = 0.0;  ///< unmonitored mode
};

inline constexpr double kClampTolerance = 1e-12;

inline ClickProbabilities click_probabilities(const ContextPipeline& pl, int stage, const QutritState& psi) {
  const auto& st = pl.stage(stage);
  ClickProbabilities p;
  p.a = projector_probability(effective_vector(pl, stage, st.detectors.first_mode), psi);
  p.b = projector_probability(effective_vector(pl, stage, st.detectors.second_mode), psi);
  p.none = 1.0 - p.a - p.b;
  if (p.none < -kClampTolerance)
    throw ProbabilityError("detection probabilities exceed one at stage " + std::to_string(stage));
  p.none = std::max(p.none, 0.0);
  return p;
}

/// Noise-free <A_k A_{k+1}> of a stage: 1 - 2 p_a - 2 p_b.
inline double exact_stage_correlation(const ContextPipeline& pl, int stage, const QutritState& psi) {
  const auto p = click_probabilities(pl, stage, psi);
  return 1.0 - 2.0 * p.a - 2.0 * p.b;
}

/// Expected value of the recorded product under a detector model, as the
/// Monte Carlo sampler should converge to it.
inline double expected_correlation(const ContextPipeline& pl, int stage, const QutritState& psi, const DetectorModel& det) {
  const auto p = click_probabilities(pl, stage, psi);
  const double eta = det.efficiency;
  const double d = det.dark_rate;
  auto click = [&](bool photon_here) { return 1.0 - (1.0 - (photon_here ? eta : 0.0)) * (1.0 - d); };
  double product = 0.0;
  double silent = 0.0;
  const std::array<std::array<double, 3>, 3> cases{{{p.a, click(true), click(false)},
                                                    {p.b, click(false), click(true)},
                                                    {p.none, click(false), click(false)}}};
  for (const auto& [weight, ca, cb] : cases) {
    product += weight * (1.0 - 2.0 * ca) * (1.0 - 2.0 * cb);
    silent += weight * (1.0 - ca) * (1.0 - cb);
  }
  if (!det.postselect) return product;
  if (silent >= 1.0) throw EmptyTally("postselection leaves no events");
  return (product - silent) / (1.0 - silent);
}

namespace detail {

inline std::size_t block_count(std::uint64_t shots) { return static_cast<std::size_t>((shots + kBlockShots - 1) / kBlockShots); }

inline std::uint64_t block_shots(std::uint64_t shots, std::size_t block) {
  const std::uint64_t start = static_cast<std::uint64_t>(block) * kBlockShots;
  return std::min(kBlockShots, shots - start);
}

inline bool thin(Stream& s, double probability) {
  if (probability >= 1.0) return true;
  if (probability <= 0.0) return false;
  return s.uniform() < probability;
}

}  // namespace detail

/// Samples `shots` photons of state psi through stage `stage` (1..5).
inline TallyTable sample_context(const ContextPipeline& pl, int stage, const QutritState& psi, const DetectorModel& det,
                                 std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  det.validate();
  const auto p = click_probabilities(pl, stage, psi);
  const std::size_t blocks = detail::block_count(shots);
  std::vector<TallyTable> partial(blocks);

  detail::parallel_for(blocks, [&](std::size_t block) {
    Stream s(seed, StreamTag::Context, static_cast<std::uint64_t>(stage), block);
    TallyTable& t = partial[block];
    const std::uint64_t n = detail::block_shots(shots, block);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double u = s.uniform();
      bool click_a = u < p.a && detail::thin(s, det.efficiency);
      bool click_b = u >= p.a && u < p.a + p.b && detail::thin(s, det.efficiency);
      if (det.dark_rate > 0.0) {
        click_a = detail::thin(s, det.dark_rate) || click_a;
        click_b = detail::thin(s, det.dark_rate) || click_b;
      }
      if (click_a && click_b) ++t.double_clicks;
      if (!click_a && !click_b && det.postselect) continue;
      ++t.counts[TallyTable::slot(click_a ? -1 : 1, click_b ? -1 : 1)];
    }
    t.shots = n;
  });

  TallyTable total;
  total.context = stage;
  total.seed = seed;
  total.detector = det;
  for (const auto& t : partial) total.merge(t);
  return total;
}

/// psi with its component along the stage-1 A1 detector removed: the
/// (unnormalized) amplitude that survives blocking that mode at the source.
inline Vec3 blocked_amplitudes(const ContextPipeline& pl, const QutritState& psi) {
  const ModeObservable a1 = effective_vector(pl, 1, detector_schedule(1).first_mode);
  const Vec3& v1 = a1.vector();
  const Complex c = inner(v1, psi.amplitudes());
  Vec3 out = psi.amplitudes();
  for (int i = 0; i < kModes; ++i) out[i] -= c * v1[i];
  return out;
}

/// Probability that the photon reaches the A1' detector with A1 blocked.
inline double blocked_arrival_probability(const ContextPipeline& pl, const QutritState& psi) {
  return std::norm(inner(pl.a1_prime.vector(), blocked_amplitudes(pl, psi)));
}

/// Exact click probability of the A1' detector with A1 blocked, including
/// efficiency and dark clicks.
inline double exact_blocked_click_rate(const ContextPipeline& pl, const QutritState& psi, const DetectorModel& det) {
  const double q = blocked_arrival_probability(pl, psi);
  return 1.0 - (1.0 - q * det.efficiency) * (1.0 - det.dark_rate);
}

/// Monte Carlo estimate of the A1' click rate with the A1 mode blocked at
/// the source. Zero leakage means A1' blocks exactly when A1 does.
inline Estimate blocked_click_rate(const ContextPipeline& pl, const QutritState& psi, const DetectorModel& det,
                                   std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  det.validate();
  const double q = blocked_arrival_probability(pl, psi);
  const std::size_t blocks = detail::block_count(shots);
  std::vector<std::uint64_t> clicks(blocks, 0);

  detail::parallel_for(blocks, [&](std::size_t block) {
    Stream s(seed, StreamTag::Blocked, 0, block);
    const std::uint64_t n = detail::block_shots(shots, block);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      bool click = s.uniform() < q && detail::thin(s, det.efficiency);
      if (det.dark_rate > 0.0) click = detail::thin(s, det.dark_rate) || click;
      hits += click ? 1U : 0U;
    }
    clicks[block] = hits;
  });

  std::uint64_t total = 0;
  for (auto c : clicks) total += c;
  return rate_estimate(total, shots);
}

/// Agreement of A1 and A1' from three click rates:
/// P(disagree) = p1 - r2 + 2 r1, overlap = 1 - 2 P(disagree).
/// p1: A1 clicks (stage 1); r2: A1' clicks (stage 5); r1: A1' clicks with A1 blocked.
inline Estimate overlap_term(const Estimate& p1, const Estimate& r1, const Estimate& r2) {
  const double mean = 1.0 - 2.0 * (p1.mean - r2.mean + 2.0 * r1.mean);
  const double var = p1.std_error * p1.std_error + r2.std_error * r2.std_error + 4.0 * r1.std_error * r1.std_error;
  return Estimate{mean, 2.0 * std::sqrt(var), std::min({p1.n, r1.n, r2.n})};
}

/// Noise-free overlap term from the exact probabilities.
inline double exact_overlap_term(const ContextPipeline& pl, const QutritState& psi) {
  const double p1 = projector_probability(effective_vector(pl, 1, detector_schedule(1).first_mode), psi);
  const double r2 = projector_probability(pl.a1_prime, psi);
  const double r1 = blocked_arrival_probability(pl, psi);
  return 1.0 - 2.0 * (p1 - r2 + 2.0 * r1);
}

}  // namespace kcbs
