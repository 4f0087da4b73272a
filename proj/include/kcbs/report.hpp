#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcbs/lhv.hpp"
#include "kcbs/pentagram.hpp"
#include "kcbs/photon_sim.hpp"
#include "kcbs/pipeline.hpp"
#include "kcbs/serialize.hpp"

namespace kcbs {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kEq1Bound = -3;
inline constexpr int kEq2Bound = -4;
/// A verdict of "violated" needs the mean this many standard errors below the bound.
inline constexpr double kVerdictSigmas = 4.0;

struct RunConfig {
  std::optional<double> theta;  ///< empty: optimal pentagram angle
  std::optional<Vec3> state;    ///< empty: symmetric-axis state (0, 0, 1)
  std::uint64_t shots = 1'000'000;
  double efficiency = 1.0;
  double dark_rate = 0.0;
  bool postselect = false;
  double jitter_sigma = 0.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (theta && !std::isfinite(*theta)) throw ConfigError("theta must be finite");
    if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw ConfigError("efficiency must lie in [0,1]");
    if (!(dark_rate >= 0.0 && dark_rate <= 1.0)) throw ConfigError("darkRate must lie in [0,1]");
    if (!(jitter_sigma >= 0.0) || !std::isfinite(jitter_sigma)) throw ConfigError("jitterSigma must be a finite non-negative number");
    if (state && !(norm_squared(*state) > 0.0)) throw ConfigError("state must be a non-zero vector");
  }

  DetectorModel detector() const { return DetectorModel{efficiency, dark_rate, postselect}; }
  Pentagram pentagram() const { return theta ? Pentagram::symmetric(*theta) : optimal_pentagram(); }
  QutritState psi() const { return state ? QutritState(*state) : QutritState::basis(2); }

  bool operator==(const RunConfig&) const = default;
};

enum class Mode { Exact, MonteCarlo };
enum class VerdictKind { Violated, Consistent };

NLOHMANN_JSON_SERIALIZE_ENUM(Mode, {{Mode::Exact, "exact"}, {Mode::MonteCarlo, "montecarlo"}})
NLOHMANN_JSON_SERIALIZE_ENUM(VerdictKind, {{VerdictKind::Violated, "violated"}, {VerdictKind::Consistent, "consistent"}})

struct Verdict {
  int bound = 0;
  VerdictKind kind = VerdictKind::Consistent;
  /// (bound - mean) / stderr; infinite in exact mode.
  double z = 0.0;

  bool operator==(const Verdict&) const = default;
};

/// Violated iff mean < bound by more than four standard errors.
inline Verdict judge(const Estimate& e, int bound) {
  const double gap = static_cast<double>(bound) - e.mean;
  double z = 0.0;
  if (e.std_error > 0.0) {
    z = gap / e.std_error;
  } else if (gap != 0.0) {
    z = gap > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  const bool violated = e.mean < bound && gap > kVerdictSigmas * e.std_error;
  return Verdict{bound, violated ? VerdictKind::Violated : VerdictKind::Consistent, z};
}

/// The three click rates behind the overlap term.
struct OverlapInputs {
  Estimate p1;  ///< A1 clicks at stage 1
  Estimate r1;  ///< A1' clicks with the A1 mode blocked
  Estimate r2;  ///< A1' clicks at stage 5

  bool operator==(const OverlapInputs&) const = default;
};

struct Report {
  Mode mode = Mode::Exact;
  std::array<Estimate, kCycle> eq1_terms{};  ///< stage correlations; the fifth pairs A5 with A1'
  Estimate eq1_lhs;
  int eq1_bound = kEq1Bound;
  Estimate overlap_term;
  OverlapInputs overlap_inputs;
  Estimate eq2_lhs;
  int eq2_bound = kEq2Bound;
  AuditReport audit;
  Verdict eq1_verdict;
  Verdict eq2_verdict;
  std::uint64_t double_clicks = 0;
  std::vector<TallyTable> tallies;  ///< Monte Carlo only
  RunConfig config;
  std::string version = kVersion;

  bool operator==(const Report&) const = default;
};

namespace detail {

inline Estimate exact(double v) { return Estimate{v, 0.0, 0}; }

/// Sum of independent estimates.
inline Estimate sum(const std::array<Estimate, kCycle>& terms) {
  Estimate out{0.0, 0.0, std::numeric_limits<std::uint64_t>::max()};
  double var = 0.0;
  for (const auto& t : terms) {
    out.mean += t.mean;
    var += t.std_error * t.std_error;
    out.n = std::min(out.n, t.n);
  }
  out.std_error = std::sqrt(var);
  return out;
}

inline Estimate difference(const Estimate& a, const Estimate& b) {
  return Estimate{a.mean - b.mean, std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error), std::min(a.n, b.n)};
}

/// Pentagram + pipeline for a config, geometry failures surfacing as ConfigError.
inline ContextPipeline configured_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const Pentagram pent = cfg.pentagram();
  try {
    // Refuses non-orthogonal geometry before any pipeline is built.
    (void)eq1_lhs(pent, cfg.psi());
    ContextPipeline pl = build_pipeline(pent);
    return cfg.jitter_sigma > 0.0 ? perturb(pl, cfg.jitter_sigma, cfg.seed) : pl;
  } catch (const IncompatiblePair& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  } catch (const ClosureFailure& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  } catch (const DegenerateTarget& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  }
}

inline void finish(Report& r) {
  r.eq1_lhs = sum(r.eq1_terms);
  r.eq2_lhs = difference(r.eq1_lhs, r.overlap_term);
  r.eq1_verdict = judge(r.eq1_lhs, r.eq1_bound);
  r.eq2_verdict = judge(r.eq2_lhs, r.eq2_bound);
}

}  // namespace detail

/// Noise-free evaluation of both inequalities. Detector settings and shots
/// are ignored; jitter still perturbs the pipeline.
inline Report run_ideal(const RunConfig& cfg) {
  const ContextPipeline pl = detail::configured_pipeline(cfg);
  const QutritState psi = cfg.psi();
  Report r;
  r.mode = Mode::Exact;
  r.config = cfg;
  for (int k = 1; k <= kStages; ++k) r.eq1_terms[static_cast<std::size_t>(k - 1)] = detail::exact(exact_stage_correlation(pl, k, psi));
  r.overlap_inputs = OverlapInputs{detail::exact(projector_probability(effective_vector(pl, 1, 0), psi)),
                                   detail::exact(blocked_arrival_probability(pl, psi)),
                                   detail::exact(projector_probability(pl.a1_prime, psi))};
  r.overlap_term = detail::exact(exact_overlap_term(pl, psi));
  r.audit = shared_measurement_audit(pl);
  detail::finish(r);
  return r;
}

/// Samples the five contexts and the blocking run, then estimates both
/// inequalities with standard errors.
inline Report run_montecarlo(const RunConfig& cfg) {
  if (cfg.shots == 0) throw ConfigError("shots must be positive for a Monte Carlo run");
  const ContextPipeline pl = detail::configured_pipeline(cfg);
  const QutritState psi = cfg.psi();
  const DetectorModel det = cfg.detector();
  Report r;
  r.mode = Mode::MonteCarlo;
  r.config = cfg;
  for (int k = 1; k <= kStages; ++k) {
    r.tallies.push_back(sample_context(pl, k, psi, det, cfg.shots, cfg.seed));
    r.double_clicks += r.tallies.back().double_clicks;
  }
  for (int k = 0; k < kStages; ++k) r.eq1_terms[static_cast<std::size_t>(k)] = estimate_correlation(r.tallies[static_cast<std::size_t>(k)]);
  r.overlap_inputs = OverlapInputs{click_rate_a(r.tallies.front()), blocked_click_rate(pl, psi, det, cfg.shots, cfg.seed),
                                   click_rate_b(r.tallies.back())};
  r.overlap_term = overlap_term(r.overlap_inputs.p1, r.overlap_inputs.r1, r.overlap_inputs.r2);
  r.audit = shared_measurement_audit(pl);
  detail::finish(r);
  return r;
}

struct LhvReport {
  lhv::Enumeration<5> eq1;
  lhv::Enumeration<6> eq2;
};

inline LhvReport run_lhv() { return LhvReport{lhv::enumerate_eq1(), lhv::enumerate_eq2()}; }

// ---------------------------------------------------------------------------
// JSON

/// Config keys are lowerCamelCase; unknown keys are rejected.
inline RunConfig config_from_json(const json& j, RunConfig cfg = {}) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "theta") {
        if (value.is_string() && value.get<std::string>() == "optimal") cfg.theta.reset();
        else cfg.theta = value.get<double>();
      } else if (key == "state") {
        if (value.is_string() && value.get<std::string>() == "symmetric") cfg.state.reset();
        else cfg.state = vec_from_json(value);
      } else if (key == "shots") {
        if (!value.is_number_unsigned()) throw ConfigError("shots must be a non-negative integer");
        cfg.shots = value.get<std::uint64_t>();
      } else if (key == "efficiency") {
        cfg.efficiency = value.get<double>();
      } else if (key == "darkRate") {
        cfg.dark_rate = value.get<double>();
      } else if (key == "postselect") {
        cfg.postselect = value.get<bool>();
      } else if (key == "jitterSigma") {
        cfg.jitter_sigma = value.get<double>();
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
        cfg.seed = value.get<std::uint64_t>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline json config_to_json(const RunConfig& cfg) {
  return json{{"theta", cfg.theta ? json(*cfg.theta) : json("optimal")},
              {"state", cfg.state ? vec_to_json(*cfg.state) : json("symmetric")},
              {"shots", cfg.shots},
              {"efficiency", cfg.efficiency},
              {"darkRate", cfg.dark_rate},
              {"postselect", cfg.postselect},
              {"jitterSigma", cfg.jitter_sigma},
              {"seed", cfg.seed}};
}

inline json z_to_json(double z) {
  if (std::isinf(z)) return z > 0 ? "inf" : "-inf";
  return z;
}

inline double z_from_json(const json& j) {
  if (j.is_string()) return j.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return j.get<double>();
}

inline void to_json(json& j, const Verdict& v) { j = json{{"bound", v.bound}, {"verdict", v.kind}, {"z", z_to_json(v.z)}}; }

inline void from_json(const json& j, Verdict& v) {
  j.at("bound").get_to(v.bound);
  j.at("verdict").get_to(v.kind);
  v.z = z_from_json(j.at("z"));
}

inline void to_json(json& j, const OverlapInputs& o) { j = json{{"p1", o.p1}, {"r1", o.r1}, {"r2", o.r2}}; }

inline void from_json(const json& j, OverlapInputs& o) {
  j.at("p1").get_to(o.p1);
  j.at("r1").get_to(o.r1);
  j.at("r2").get_to(o.r2);
}

inline json report_to_json(const Report& r) {
  return json{{"mode", r.mode},
              {"eq1", {{"terms", r.eq1_terms}, {"lhs", r.eq1_lhs}, {"bound", r.eq1_bound}, {"verdict", r.eq1_verdict}}},
              {"eq2", {{"lhs", r.eq2_lhs}, {"bound", r.eq2_bound}, {"verdict", r.eq2_verdict}}},
              {"overlapTerm", r.overlap_term},
              {"overlapInputs", r.overlap_inputs},
              {"audit", r.audit},
              {"doubleClicks", r.double_clicks},
              {"tallies", r.tallies},
              {"provenance", {{"config", config_to_json(r.config)}, {"seed", r.config.seed}, {"version", r.version}}}};
}

inline Report report_from_json(const json& j) {
  Report r;
  j.at("mode").get_to(r.mode);
  const json& e1 = j.at("eq1");
  e1.at("terms").get_to(r.eq1_terms);
  e1.at("lhs").get_to(r.eq1_lhs);
  e1.at("bound").get_to(r.eq1_bound);
  e1.at("verdict").get_to(r.eq1_verdict);
  const json& e2 = j.at("eq2");
  e2.at("lhs").get_to(r.eq2_lhs);
  e2.at("bound").get_to(r.eq2_bound);
  e2.at("verdict").get_to(r.eq2_verdict);
  j.at("overlapTerm").get_to(r.overlap_term);
  j.at("overlapInputs").get_to(r.overlap_inputs);
  j.at("audit").get_to(r.audit);
  j.at("doubleClicks").get_to(r.double_clicks);
  j.at("tallies").get_to(r.tallies);
  const json& prov = j.at("provenance");
  r.config = config_from_json(prov.at("config"));
  prov.at("version").get_to(r.version);
  return r;
}

inline json lhv_to_json(const LhvReport& l) {
  auto block = [](const auto& e, std::size_t anti_aligned) {
    json out{{"min", e.min}, {"max", e.max}, {"assignments", e.assignments}, {"minimizers", e.minimizers},
             {"minimizerCount", e.minimizers.size()}};
    if (anti_aligned != static_cast<std::size_t>(-1)) out["minimizersWithA1PrimeOpposite"] = anti_aligned;
    return out;
  };
  std::size_t anti = 0;
  for (const auto& a : l.eq2.minimizers) anti += a[5] == -a[0] ? 1U : 0U;
  return json{{"eq1", block(l.eq1, static_cast<std::size_t>(-1))}, {"eq2", block(l.eq2, anti)}};
}

}  // namespace kcbs
