#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kcbs/photon_sim.hpp"
#include "kcbs/pipeline.hpp"
#include "kcbs/qutrit.hpp"

/// JSON and CSV forms of the library's value types. Complex numbers are
/// [re, im] pairs; matrices are row-major arrays of rows.
namespace kcbs {

using json = nlohmann::json;

NLOHMANN_JSON_SERIALIZE_ENUM(ObservableLabel, {
                                                  {ObservableLabel::Unmonitored, "-"},
                                                  {ObservableLabel::A1, "A1"},
                                                  {ObservableLabel::A2, "A2"},
                                                  {ObservableLabel::A3, "A3"},
                                                  {ObservableLabel::A4, "A4"},
                                                  {ObservableLabel::A5, "A5"},
                                                  {ObservableLabel::A1Prime, "A1'"},
                                              })

inline json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) throw json::type_error::create(302, "complex number must be [re, im]", &j);
  return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

inline json vec_to_json(const Vec3& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(complex_to_json(c));
  return out;
}

inline Vec3 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw json::type_error::create(302, "vector must have three components", &j);
  return Vec3{complex_from_json(j[0]), complex_from_json(j[1]), complex_from_json(j[2])};
}

inline json mat_to_json(const Mat3& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(vec_to_json(row));
  return out;
}

inline Mat3 mat_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw json::type_error::create(302, "matrix must have three rows", &j);
  return Mat3{vec_from_json(j[0]), vec_from_json(j[1]), vec_from_json(j[2])};
}

// ---------------------------------------------------------------------------
// pipeline

inline json pipeline_to_json(const ContextPipeline& pl) {
  json vectors = json::array();
  for (const auto& v : pl.pentagram.vectors) vectors.push_back(vec_to_json(v.vector()));
  json stages = json::array();
  for (const auto& st : pl.stages) {
    stages.push_back({{"index", st.index},
                      {"frame", mat_to_json(st.frame)},
                      {"detectors",
                       json::array({{{"observable", st.detectors.first}, {"mode", st.detectors.first_mode}},
                                    {{"observable", st.detectors.second}, {"mode", st.detectors.second_mode}}})},
                      {"unmonitoredMode", st.unmonitored_mode}});
  }
  json transforms = json::array();
  for (const auto& t : pl.inter_stage) {
    transforms.push_back({{"actedModes", {t.acted_modes().first, t.acted_modes().second}},
                          {"fixedMode", t.fixed_mode()},
                          {"matrix", mat_to_json(t.matrix())}});
  }
  return json{{"theta", pl.pentagram.theta},
              {"pentagram", vectors},
              {"stages", stages},
              {"interStage", transforms},
              {"a1Prime", vec_to_json(pl.a1_prime.vector())}};
}

inline ContextPipeline pipeline_from_json(const json& j) {
  const json& vectors = j.at("pentagram");
  if (vectors.size() != kCycle) throw std::invalid_argument("pentagram needs five vectors");
  auto v = [&](int k) { return ModeObservable(vec_from_json(vectors.at(static_cast<std::size_t>(k))), cyclic_label(k)); };
  const Pentagram pent{{v(0), v(1), v(2), v(3), v(4)}, j.at("theta").get<double>()};

  std::array<MeasurementStage, kStages> stages{};
  const json& js = j.at("stages");
  if (js.size() != kStages) throw std::invalid_argument("pipeline needs five stages");
  for (std::size_t k = 0; k < kStages; ++k) {
    const json& s = js[k];
    const json& d = s.at("detectors");
    stages[k] = MeasurementStage{s.at("index").get<int>(), mat_from_json(s.at("frame")),
                                 DetectorAssignment{d.at(0).at("observable").get<ObservableLabel>(), d.at(0).at("mode").get<int>(),
                                                    d.at(1).at("observable").get<ObservableLabel>(), d.at(1).at("mode").get<int>()},
                                 s.at("unmonitoredMode").get<int>()};
  }

  std::vector<StageTransform> transforms;
  for (const json& t : j.at("interStage")) {
    const ModePair acted(t.at("actedModes").at(0).get<int>(), t.at("actedModes").at(1).get<int>());
    const Mat3 m = mat_from_json(t.at("matrix"));
    const int a = acted.first, b = acted.second;
    const int f = acted.complement();
    for (int i = 0; i < kModes; ++i)
      if (m[f][i] != (i == f ? Complex{1.0} : Complex{0.0}) || m[i][f] != (i == f ? Complex{1.0} : Complex{0.0}))
        throw std::invalid_argument("inter-stage matrix touches its fixed mode");
    transforms.emplace_back(Block2{{{m[a][a], m[a][b]}, {m[b][a], m[b][b]}}}, acted);
  }
  return ContextPipeline{pent, stages, std::move(transforms), ModeObservable(vec_from_json(j.at("a1Prime")), ObservableLabel::A1Prime)};
}

// ---------------------------------------------------------------------------
// simulation values

inline void to_json(json& j, const DetectorModel& d) {
  j = json{{"efficiency", d.efficiency}, {"darkRate", d.dark_rate}, {"postselect", d.postselect}};
}

inline void from_json(const json& j, DetectorModel& d) {
  j.at("efficiency").get_to(d.efficiency);
  j.at("darkRate").get_to(d.dark_rate);
  j.at("postselect").get_to(d.postselect);
}

inline void to_json(json& j, const Estimate& e) { j = json{{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n}}; }

inline void from_json(const json& j, Estimate& e) {
  j.at("mean").get_to(e.mean);
  j.at("stderr").get_to(e.std_error);
  j.at("n").get_to(e.n);
}

inline void to_json(json& j, const TallyTable& t) {
  json counts = json::array();
  for (int a : {1, -1})
    for (int b : {1, -1}) counts.push_back({{"outcomeA", a}, {"outcomeB", b}, {"count", t.count(a, b)}});
  j = json{{"context", t.context},       {"counts", counts}, {"doubleClicks", t.double_clicks},
           {"shots", t.shots},           {"seed", t.seed},   {"detector", t.detector}};
}

inline void from_json(const json& j, TallyTable& t) {
  j.at("context").get_to(t.context);
  t.counts = {};
  for (const json& c : j.at("counts"))
    t.counts[TallyTable::slot(c.at("outcomeA").get<int>(), c.at("outcomeB").get<int>())] = c.at("count").get<std::uint64_t>();
  j.at("doubleClicks").get_to(t.double_clicks);
  j.at("shots").get_to(t.shots);
  j.at("seed").get_to(t.seed);
  j.at("detector").get_to(t.detector);
}

inline void to_json(json& j, const SharedCheck& c) {
  j = json{{"stage", c.stage},
           {"observable", c.label},
           {"mode", c.mode},
           {"fixedModeMatches", c.fixed_mode_matches},
           {"bitwiseIdentical", c.bitwise_identical}};
}

inline void from_json(const json& j, SharedCheck& c) {
  j.at("stage").get_to(c.stage);
  j.at("observable").get_to(c.label);
  j.at("mode").get_to(c.mode);
  j.at("fixedModeMatches").get_to(c.fixed_mode_matches);
  j.at("bitwiseIdentical").get_to(c.bitwise_identical);
}

inline void to_json(json& j, const AuditReport& a) {
  j = json{{"shared", a.shared}, {"closureOverlap", a.closure_overlap}, {"passed", a.passed}};
}

inline void from_json(const json& j, AuditReport& a) {
  j.at("shared").get_to(a.shared);
  j.at("closureOverlap").get_to(a.closure_overlap);
  j.at("passed").get_to(a.passed);
}

/// CSV with columns context,outcome_a,outcome_b,count; four rows per context.
inline void write_tallies_csv(std::ostream& out, const std::vector<TallyTable>& tallies) {
  out << "context,outcome_a,outcome_b,count\n";
  for (const auto& t : tallies)
    for (int a : {1, -1})
      for (int b : {1, -1}) out << t.context << ',' << a << ',' << b << ',' << t.count(a, b) << '\n';
}

}  // namespace kcbs
