#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kcbs/kcbs.hpp"

namespace kcbs::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kStatisticalFailure = 3 };

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
  std::optional<double> jitter;
  bool postselect = false;
  std::string out_path;
  std::string csv_path;
  int starts = 20;
};

inline RunConfig load_config(const Options& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw ConfigError("cannot open config file '" + o.config_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg = config_from_json(j);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.shots) cfg.shots = *o.shots;
  if (o.jitter) cfg.jitter_sigma = *o.jitter;
  if (o.postselect) cfg.postselect = true;
  cfg.validate();
  return cfg;
}

/// Writes `j` to --out when given, otherwise to `out`.
inline void emit(const json& j, const Options& o, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) throw Error("cannot write '" + o.out_path + "'");
  f << text;
}

inline std::string verdict_line(const char* name, const Estimate& e, const Verdict& v) {
  std::ostringstream s;
  s.precision(10);
  s << name << ": " << e.mean;
  if (e.std_error > 0.0) s << " +- " << e.std_error;
  s << " (bound " << v.bound << ", " << (v.kind == VerdictKind::Violated ? "violated" : "consistent") << ")";
  return s.str();
}

inline void summarize(const Report& r, const Options& o, std::ostream& out) {
  if (o.out_path.empty()) return;  // full JSON already went to stdout
  out << verdict_line("eq1", r.eq1_lhs, r.eq1_verdict) << '\n'
      << verdict_line("eq2", r.eq2_lhs, r.eq2_verdict) << '\n'
      << "overlap term: " << r.overlap_term.mean << '\n'
      << "shared-measurement audit: " << (r.audit.passed ? "pass" : "FAIL") << '\n';
  if (r.double_clicks > 0) out << "double clicks (recorded as (-1,-1)): " << r.double_clicks << '\n';
}

inline void write_csv(const Report& r, const Options& o) {
  if (o.csv_path.empty()) return;
  std::ofstream f(o.csv_path, std::ios::binary);
  if (!f) throw Error("cannot write '" + o.csv_path + "'");
  write_tallies_csv(f, r.tallies);
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"KCBS contextuality simulator: exact and Monte Carlo evaluation of the five-term cyclic inequality "
               "and its six-term variant, with hidden-variable bound certificates"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "Master RNG seed (overrides config)");
    sub->add_option("--shots", o.shots, "Shots per context (overrides config)");
    sub->add_option("--jitter", o.jitter, "Std. dev. of inter-stage rotation errors, radians (overrides config)");
    sub->add_flag("--postselect", o.postselect, "Discard shots without any click");
    sub->add_option("--out", o.out_path, "Write the JSON result here instead of stdout");
  };

  auto* ideal = app.add_subcommand("ideal", "Noise-free evaluation of both inequalities");
  common(ideal);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo photon counting");
  common(simulate);
  simulate->add_option("--csv", o.csv_path, "Write per-context tallies as CSV");
  auto* lhv_cmd = app.add_subcommand("lhv", "Enumerate deterministic hidden-variable assignments");
  lhv_cmd->add_option("--out", o.out_path, "Write the JSON result here instead of stdout");
  auto* optimize = app.add_subcommand("optimize", "Search for the state minimizing the five-term sum");
  common(optimize);
  optimize->add_option("--starts", o.starts, "Number of compass-search starts")->check(CLI::PositiveNumber);
  auto* audit = app.add_subcommand("audit", "Build the pipeline and audit its shared measurements");
  common(audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (ideal->parsed()) {
      const Report r = run_ideal(load_config(o));
      emit(report_to_json(r), o, out);
      summarize(r, o, out);
    } else if (simulate->parsed()) {
      const Report r = run_montecarlo(load_config(o));
      emit(report_to_json(r), o, out);
      write_csv(r, o);
      summarize(r, o, out);
    } else if (lhv_cmd->parsed()) {
      emit(lhv_to_json(run_lhv()), o, out);
    } else if (optimize->parsed()) {
      const RunConfig cfg = load_config(o);
      SearchConfig search;
      search.starts = o.starts;
      search.seed = cfg.seed;
      const auto res = optimize_state(cfg.pentagram(), search);
      emit(json{{"value", res.value},
                {"analyticMinimum", quantum_minimum()},
                {"state", vec_to_json(res.state.amplitudes())},
                {"converged", res.converged},
                {"bestStart", res.best_start},
                {"evaluations", res.evaluations},
                {"starts", search.starts},
                {"seed", search.seed}},
           o, out);
    } else if (audit->parsed()) {
      const RunConfig cfg = load_config(o);
      const ContextPipeline pl = detail::configured_pipeline(cfg);
      emit(json{{"pipeline", pipeline_to_json(pl)}, {"audit", shared_measurement_audit(pl)}, {"config", config_to_json(cfg)}},
           o, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const EmptyTally& e) {
    err << "statistical failure: " << e.what() << '\n';
    return kStatisticalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

}  // namespace kcbs::cli
