// Copyright 2026 The lrfanout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrfanout/bounds.hpp"
#include "lrfanout/error.hpp"
#include "lrfanout/lattice.hpp"
#include "lrfanout/protocols.hpp"
#include "lrfanout/qft.hpp"
#include "lrfanout/schedule.hpp"
#include "lrfanout/simulator.hpp"
#include "lrfanout/spreading.hpp"

namespace lrfanout {

enum ExitCode : int { kExitPass = 0, kExitScientificFailure = 1, kExitUsage = 2 };

inline constexpr double kVerificationTolerance = 1e-10;
inline constexpr std::size_t kMaxSimulatedFanoutQubits = 6;

struct ExperimentConfig {
  std::string command;
  // lattice
  int dimension = 1;
  std::vector<std::int64_t> extents;  // empty: derived from n
  std::string placement = "canonical";
  // protocol
  std::string alpha = "1";
  std::size_t n = 4;
  std::size_t root = 0;
  std::string strategy = "auto";
  bool simulate = true;
  // analysis
  std::vector<int> bands;  // empty: every band 1..n
  std::vector<std::size_t> samples;
  int trials = 16;
  // output
  std::string out = "out";
  std::uint64_t seed = 1;
};

inline std::vector<std::size_t> default_scaling_samples() {
  std::vector<std::size_t> s;
  for (int k = 4; k <= 16; ++k) s.push_back(std::size_t{1} << k);
  return s;
}

namespace detail {

inline BroadcastStrategy parse_strategy(const std::string& s) {
  if (s == "auto") return BroadcastStrategy::kAuto;
  if (s == "doubling") return BroadcastStrategy::kDoubling;
  if (s == "cascade") return BroadcastStrategy::kCascade;
  throw Error(ErrorCode::kParameter, "unknown strategy '" + s + "'");
}

/// Creates the output directory and checks every artifact path is writable
/// before any work starts.
inline std::filesystem::path prepare_outputs(const ExperimentConfig& cfg,
                                             const std::vector<std::string>& files) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kParameter, "cannot create output directory " + dir.string());
  for (const auto& f : files) {
    std::ofstream probe(dir / f, std::ios::app);
    if (!probe) throw Error(ErrorCode::kParameter, "cannot write " + (dir / f).string());
  }
  return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << text;
  if (!os) throw Error(ErrorCode::kParameter, "failed writing " + path.string());
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline LatticeLayout fanout_lattice(const ExperimentConfig& cfg) {
  if (cfg.extents.empty()) return fanout_layout(cfg.dimension, cfg.n);
  return build_lattice(cfg.dimension, cfg.extents);
}

inline nlohmann::json rounds_json(const BroadcastPlan& plan) {
  auto rounds = nlohmann::json::array();
  for (const auto& r : plan.rounds) {
    rounds.push_back({{"cluster_size", r.cluster_size},
                      {"max_target_distance", r.max_target_distance},
                      {"layer_duration", r.layer_duration}});
  }
  return rounds;
}

inline nlohmann::json report_json(const SpreadingReport& r) {
  return {{"label", r.label},   {"n", r.n},           {"band", r.band},
          {"region_r", r.region_r}, {"weight", r.weight}, {"epsilon", r.epsilon},
          {"bound", r.bound},   {"pass", r.pass}};
}

inline nlohmann::json regime_json(const ScalingRegime& r) {
  return {{"source", std::string(to_string(r.source))},
          {"regime", std::string(to_string(r.tag))},
          {"exponent", r.exponent.str()},
          {"log_divisor", r.log_divisor},
          {"validity", r.validity.str()}};
}

inline nlohmann::json fit_json(const FitReport& f) {
  return {{"model", std::string(to_string(f.model))},
          {"value", f.value},
          {"intercept", f.intercept},
          {"residual", f.residual},
          {"samples", f.samples}};
}

}  // namespace detail

struct FanoutVerification {
  double fanout_fidelity = 0.0;
  double operator_error = 0.0;
  double ancilla_return_fidelity = 0.0;
};

/// Simulates a fanout schedule: the data block against the ideal fanout, and
/// ancilla return over every data basis input plus `trials` random product
/// inputs drawn from `seed`.
inline FanoutVerification verify_fanout(const ProtocolSchedule& schedule,
                                        const QubitAssignment& assignment, int trials,
                                        std::uint64_t seed) {
  const FanoutHarness harness(assignment);
  const int n = static_cast<int>(assignment.qubits());
  FanoutVerification v;
  const Matrix block = harness.data_block(schedule);
  const Matrix ideal = ideal_fanout(n);
  const double overlap = std::abs((ideal.adjoint() * block).trace()) / static_cast<double>(block.rows());
  v.fanout_fidelity = overlap * overlap;
  v.operator_error = phase_aligned_distance(block, ideal);

  double worst = 1.0;
  const std::uint64_t dim = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < dim; ++x) {
    const auto out = run_schedule(StateVector::basis(harness.sites(), harness.embed(x)), schedule);
    worst = std::min(worst, harness.ancilla_return_fidelity(out));
  }
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::vector<Eigen::Vector2cd> factors;
    for (int q = 0; q < n; ++q) factors.push_back(random_qubit(rng));
    const auto out = run_schedule(harness.embed(factors), schedule);
    worst = std::min(worst, harness.ancilla_return_fidelity(out));
  }
  v.ancilla_return_fidelity = worst;
  return v;
}

inline int run_fanout(const ExperimentConfig& cfg, std::ostream& log) {
  const auto dir = detail::prepare_outputs(cfg, {"schedule.txt", "rounds.json", "verification.json"});
  const double alpha = Rational::parse(cfg.alpha).to_double();
  if (parse_placement(cfg.placement) != Placement::kCanonical) {
    throw Error(ErrorCode::kUnsupportedStrategy, "fanout layouts use canonical placement");
  }
  if (cfg.n < 2) throw Error(ErrorCode::kTrivialFanout, "fanout needs at least 2 data qubits");
  if (cfg.simulate && cfg.n > kMaxSimulatedFanoutQubits) {
    throw Error(ErrorCode::kCapacity, "simulation verification supports n <= 6; use --schedule-only");
  }
  const auto layout = detail::fanout_lattice(cfg);
  const auto assignment = assign_qubits(layout, cfg.n, Placement::kCanonical, Register::kWithAncillae);
  BroadcastOptions options;
  options.strategy = detail::parse_strategy(cfg.strategy);
  options.materialize = false;
  const auto summary = summarize_fanout(assignment, alpha, options);

  nlohmann::json rounds = {{"alpha", alpha},
                           {"dimension", layout.dimension()},
                           {"layout", layout.describe()},
                           {"n", cfg.n},
                           {"strategy", std::string(to_string(summary.broadcast.strategy))},
                           {"rounds", detail::rounds_json(summary.broadcast)},
                           {"t_ghz", summary.broadcast.makespan()},
                           {"makespan_net", summary.makespan_net},
                           {"makespan_gross", summary.makespan_gross}};
  detail::write_json(dir / "rounds.json", rounds);

  nlohmann::json verification = {{"makespan_net", summary.makespan_net},
                                 {"makespan_gross", summary.makespan_gross},
                                 {"fanout_fidelity", nullptr},
                                 {"ancilla_return_fidelity", nullptr}};
  bool pass = true;
  const bool build_pulses =
      cfg.simulate || summary.broadcast.control_terms() <= options.max_control_terms;
  if (build_pulses) {
    auto full = options;
    full.strategy = summary.broadcast.strategy;
    const auto schedule = plan_fanout(assignment, alpha, full);
    detail::write_text(dir / "schedule.txt", schedule_to_string(schedule));
    const auto report = validate_powerlaw(schedule, layout, alpha);
    verification["powerlaw_violations"] = report.violations.size();
    pass = pass && report.pass;
    if (cfg.simulate) {
      const auto v = verify_fanout(schedule, assignment, cfg.trials, cfg.seed);
      verification["fanout_fidelity"] = v.fanout_fidelity;
      verification["operator_error"] = v.operator_error;
      verification["ancilla_return_fidelity"] = v.ancilla_return_fidelity;
      pass = pass && v.fanout_fidelity >= 1.0 - kVerificationTolerance &&
             v.ancilla_return_fidelity >= 1.0 - kVerificationTolerance;
    }
  } else {
    std::filesystem::remove(dir / "schedule.txt");
  }
  verification["pass"] = pass;
  detail::write_json(dir / "verification.json", verification);
  log << "fanout n=" << cfg.n << " alpha=" << cfg.alpha << " net=" << format_double(summary.makespan_net)
      << " gross=" << format_double(summary.makespan_gross) << (pass ? " PASS" : " FAIL") << "\n";
  return pass ? kExitPass : kExitScientificFailure;
}

inline int run_lemma(const ExperimentConfig& cfg, std::ostream& log) {
  const auto dir = detail::prepare_outputs(cfg, {"lemma.json"});
  const int n = static_cast<int>(cfg.n);
  if (cfg.n < 2 || cfg.n > static_cast<std::size_t>(kMaxPauliEnumerationQubits)) {
    throw Error(ErrorCode::kCapacity, "lemma checks support n in 2..8, got " + std::to_string(cfg.n));
  }
  std::vector<int> bands = cfg.bands;
  if (bands.empty()) {
    for (int k = 1; k <= n; ++k) bands.push_back(k);
  }
  const auto layout = cfg.extents.empty() ? data_layout(cfg.dimension, cfg.n)
                                          : build_lattice(cfg.dimension, cfg.extents);
  std::vector<SpreadingReport> reports;
  reports.push_back(verify_lemma(n, layout));
  for (int k : bands) reports.push_back(aqft_spread(n, k));
  reports.push_back(fanout_spread(n));
  bool pass = true;
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    arr.push_back(detail::report_json(r));
    log << r.label << " n=" << r.n << " band=" << r.band << " weight=" << format_double(r.weight)
        << " bound=" << format_double(r.bound) << (r.pass ? " PASS" : " FAIL") << "\n";
  }
  detail::write_json(dir / "lemma.json", {{"reports", arr}, {"pass", pass}});
  return pass ? kExitPass : kExitScientificFailure;
}

struct ScalingRow {
  std::size_t n = 0;
  double t_ghz = 0.0;
  double makespan_net = 0.0;
  double makespan_gross = 0.0;
};

/// Plan-level fanout makespans on near-cubic D-dimensional fanout layouts.
inline std::vector<ScalingRow> scaling_sweep(double alpha, int dimension,
                                             const std::vector<std::size_t>& sizes,
                                             BroadcastStrategy strategy = BroadcastStrategy::kAuto) {
  std::vector<ScalingRow> rows;
  BroadcastOptions options;
  options.strategy = strategy;
  options.materialize = false;
  for (auto n : sizes) {
    const auto assignment =
        assign_qubits(fanout_layout(dimension, n), n, Placement::kCanonical, Register::kWithAncillae);
    const auto s = summarize_fanout(assignment, alpha, options);
    rows.push_back({n, s.broadcast.makespan(), s.makespan_net, s.makespan_gross});
  }
  return rows;
}

inline std::vector<ScalingSample> net_samples(const std::vector<ScalingRow>& rows) {
  std::vector<ScalingSample> out;
  for (const auto& r : rows) out.push_back({static_cast<double>(r.n), r.makespan_net});
  return out;
}

inline int run_scaling(const ExperimentConfig& cfg, std::ostream& log) {
  const auto dir = detail::prepare_outputs(cfg, {"scaling.csv", "bounds.csv", "verdict.json"});
  const auto alpha = Rational::parse(cfg.alpha);
  auto samples = cfg.samples.empty() ? default_scaling_samples() : cfg.samples;
  if (samples.size() < 6) {
    throw Error(ErrorCode::kParameter, "scaling needs at least 6 sizes (2 are discarded before fitting)");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i] <= samples[i - 1]) throw Error(ErrorCode::kParameter, "sizes must increase");
  }
  if (samples.front() < 2) throw Error(ErrorCode::kParameter, "sizes must be at least 2");
  const auto expected = t_ghz_regime(alpha, cfg.dimension);
  const auto rows = scaling_sweep(alpha.to_double(), cfg.dimension, samples,
                                  detail::parse_strategy(cfg.strategy));
  const auto verdict = check_regime(net_samples(rows), expected);

  const FitReport& model_fit = expected.tag == RegimeTag::kConstant      ? verdict.constant_fit
                               : expected.tag == RegimeTag::kLogarithmic ? verdict.log_fit
                                                                         : verdict.power_fit;
  std::ostringstream csv;
  csv << "alpha,D,n,makespan_net,makespan_gross,regime,fit_exponent,residual\n";
  for (const auto& r : rows) {
    csv << format_double(alpha.to_double()) << ',' << cfg.dimension << ',' << r.n << ','
        << format_double(r.makespan_net) << ',' << format_double(r.makespan_gross) << ','
        << to_string(expected.tag) << ',' << format_double(verdict.power_fit.value) << ','
        << format_double(model_fit.residual) << '\n';
  }
  detail::write_text(dir / "scaling.csv", csv.str());

  std::ostringstream bounds;
  bounds << "alpha,D,source,regime,exponent,log_divisor,validity\n";
  nlohmann::json lower = nlohmann::json::array();
  auto tabulate = [&](const ScalingRegime& r) {
    bounds << alpha.str() << ',' << cfg.dimension << ',' << to_string(r.source) << ','
           << to_string(r.tag) << ',' << r.exponent.str() << ',' << (r.log_divisor ? 1 : 0) << ",\""
           << r.validity.str() << "\"\n";
    lower.push_back(detail::regime_json(r));
  };
  tabulate(expected);
  if (alpha >= Rational(cfg.dimension)) tabulate(lr_lower_bound(alpha, cfg.dimension));
  if (cfg.dimension == 1 && alpha > Rational(3, 2)) tabulate(frob_lower_bound_1d(alpha));
  detail::write_text(dir / "bounds.csv", bounds.str());

  nlohmann::json v = {{"alpha", alpha.str()},
                      {"dimension", cfg.dimension},
                      {"samples", samples},
                      {"discarded", 2},
                      {"expected", detail::regime_json(expected)},
                      {"fits",
                       {detail::fit_json(verdict.constant_fit), detail::fit_json(verdict.log_fit),
                        detail::fit_json(verdict.power_fit)}},
                      {"criterion", verdict.criterion},
                      {"regimes", lower},
                      {"pass", verdict.pass}};
  detail::write_json(dir / "verdict.json", v);
  log << "scaling alpha=" << alpha.str() << " D=" << cfg.dimension << " expected "
      << expected.str() << ": " << verdict.criterion << (verdict.pass ? " PASS" : " FAIL") << "\n";
  return verdict.pass ? kExitPass : kExitScientificFailure;
}

/// Runs one command and maps library errors onto the exit-code contract.
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    if (cfg.command == "fanout") return run_fanout(cfg, log);
    if (cfg.command == "lemma") return run_lemma(cfg, log);
    if (cfg.command == "scaling") return run_scaling(cfg, log);
    err << "unknown command '" << cfg.command << "'\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace lrfanout
