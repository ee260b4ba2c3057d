// Copyright 2026 The qcomb developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: build scenario processes, compute the correlation
// quantifiers, run the monotone estimators, and verify the property suites.
//
// Exit codes: 0 success, 1 numerical assertion failure, 2 input error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcomb/divergence.hpp"
#include "qcomb/io.hpp"
#include "qcomb/optimizer.hpp"
#include "qcomb/quantifiers.hpp"
#include "qcomb/scenarios.hpp"

namespace {

using nlohmann::json;
using namespace qcomb;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitInput = 2;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void dump_report(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(1) << "\n";
}

std::vector<int> parse_time_list(const std::string& text) {
  std::vector<int> times;
  if (text.empty() || text == "none") return times;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    times.push_back(std::stoi(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return times;
}

int default_threads() {
  if (const char* env = std::getenv("QCOMB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

struct OptimFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::optional<int> sweeps;
  std::optional<int> inner;
  std::optional<double> tol;
  std::optional<std::string> objective;
  std::optional<std::string> resolution;
  std::optional<bool> staged;
  std::string config_path;
};

void add_optim_flags(CLI::App* cmd, OptimFlags& flags) {
  cmd->add_option("--config", flags.config_path,
                  "JSON config file (flags take precedence)");
  cmd->add_option("--seed", flags.seed, "random seed");
  cmd->add_option("--restarts", flags.restarts, "number of restarts");
  cmd->add_option("--sweeps", flags.sweeps, "max coordinate-ascent sweeps");
  cmd->add_option("--inner", flags.inner, "inner iterations per channel");
  cmd->add_option("--tol", flags.tol, "relative convergence tolerance");
  cmd->add_option("--objective", flags.objective,
                  "total_info | markov_info | non_markovianity | "
                  "lambda_max_proxy");
  cmd->add_option("--resolution", flags.resolution,
                  "kept intermediate times, e.g. '1,3' ('none' closes all)");
  cmd->add_flag("--staged", [&flags](std::int64_t) { flags.staged = true; },
                "coarse-grain in stages during optimization");
}

OptimizerConfig resolve_config(const OptimFlags& flags) {
  OptimizerConfig cfg;
  cfg.threads = default_threads();
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      throw std::runtime_error("cannot open '" + flags.config_path + "'");
    }
    json j;
    in >> j;
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.max_sweeps = j.value("max_sweeps", cfg.max_sweeps);
    cfg.inner_iters = j.value("inner_iters", cfg.inner_iters);
    cfg.rel_tol = j.value("rel_tol", cfg.rel_tol);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.staged_schedule = j.value("staged_schedule", cfg.staged_schedule);
    if (j.contains("objective")) {
      cfg.objective = objective_from_string(j["objective"].get<std::string>());
    }
    if (j.contains("target_resolution")) {
      cfg.target_resolution.clear();
      for (const auto& t : j["target_resolution"]) {
        cfg.target_resolution.push_back(t.get<int>());
      }
    }
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.restarts) cfg.restarts = *flags.restarts;
  if (flags.sweeps) cfg.max_sweeps = *flags.sweeps;
  if (flags.inner) cfg.inner_iters = *flags.inner;
  if (flags.tol) cfg.rel_tol = *flags.tol;
  if (flags.objective) cfg.objective = objective_from_string(*flags.objective);
  if (flags.resolution) cfg.target_resolution = parse_time_list(*flags.resolution);
  if (flags.staged) cfg.staged_schedule = *flags.staged;
  return cfg;
}

json config_echo(const OptimizerConfig& cfg) {
  return json{{"restarts", cfg.restarts},
              {"max_sweeps", cfg.max_sweeps},
              {"inner_iters", cfg.inner_iters},
              {"rel_tol", cfg.rel_tol},
              {"seed", cfg.seed},
              {"objective", to_string(cfg.objective)},
              {"target_resolution", cfg.target_resolution},
              {"staged_schedule", cfg.staged_schedule}};
}

int cmd_build(const std::string& spec_path, const std::string& out_path) {
  const ScenarioSpec spec = read_scenario(spec_path);
  std::map<std::string, std::string> meta{{"scenario", to_string(spec.kind)},
                                          {"seed", std::to_string(spec.seed)}};
  if (spec.kind == ScenarioKind::kPlantedUnitary ||
      spec.kind == ScenarioKind::kDephasingStaticEnv) {
    const PlantedModel model = build_planted(spec);
    write_process(out_path, model.process, meta);
    const std::string comb_path =
        slots_sidecar_path(out_path).substr(
            0, slots_sidecar_path(out_path).size() - 11) +
        ".plant.json";
    write_comb(comb_path, model.comb);
    std::cout << "wrote " << out_path << " (+slots, plant comb " << comb_path
              << ")\n";
  } else {
    const ProcessTensor t = spec.kind == ScenarioKind::kCounterexample
                                ? build_counterexample()
                                : build_random(spec);
    write_process(out_path, t, meta);
    std::cout << "wrote " << out_path << " (dim " << t.choi().dim() << ", "
              << t.n_slots() << " slots)\n";
  }
  return kExitOk;
}

int cmd_quantify(const std::string& process_path,
                 const std::string& coarse_grain_arg,
                 const std::string& out_path) {
  ProcessTensor t = read_process(process_path);
  const ValidationReport v = validate(t);
  if (!v.pass) {
    std::cerr << "process fails validation: psd=" << v.psd_defect
              << " trace=" << v.trace_defect
              << " causality=" << v.causality_defect << "\n";
    return kExitNumerical;
  }
  if (!coarse_grain_arg.empty()) {
    std::vector<int> drop;
    if (coarse_grain_arg == "all") {
      for (int k = 1; k <= t.n_slots(); ++k) drop.push_back(k);
    } else {
      drop = parse_time_list(coarse_grain_arg);
    }
    t = coarse_grain(t, drop);
  }
  const QuantifierReport q = quantify(t);
  std::cout << "I = " << q.total_info_bits << " bits\n"
            << "M = " << q.markov_info_bits << " bits\n"
            << "N = " << q.non_markovianity_bits << " bits\n"
            << "identity defect |I-(M+N)| = " << q.identity_defect << "\n";
  if (!out_path.empty()) {
    dump_report(out_path,
                json{{"schema_version", kSchemaVersion},
                     {"inputs", {{"process", process_path},
                                 {"coarse_grain", coarse_grain_arg}}},
                     {"total_info_bits", q.total_info_bits},
                     {"markov_info_bits", q.markov_info_bits},
                     {"non_markovianity_bits", q.non_markovianity_bits},
                     {"identity_defect", q.identity_defect}});
  }
  return q.identity_defect <= 1e-8 ? kExitOk : kExitNumerical;
}

int cmd_optimize(const std::string& process_path, const OptimFlags& flags,
                 const std::string& out_path, std::string witness_path) {
  const double start = now_seconds();
  const ProcessTensor t = read_process(process_path);
  const OptimizerConfig cfg = resolve_config(flags);
  const OptimResult res = estimate_monotone(t, cfg);

  // Achievability: the reported value must match a forward evaluation of the
  // stored witness through the link + quantifier path.
  const double recheck = cfg.objective == Objective::kMarkovInfo
                             ? markov_info(link(t, res.best_comb))
                             : cfg.objective == Objective::kNonMarkovianity
                                   ? non_markovianity(link(t, res.best_comb))
                                   : total_info(link(t, res.best_comb));
  const double defect = std::abs(recheck - res.best_value);

  if (witness_path.empty()) witness_path = out_path.empty()
                                               ? process_path + ".witness.json"
                                               : out_path + ".witness.json";
  write_comb(witness_path, res.best_comb);

  std::cout << "best value = " << res.best_value << " bits ("
            << to_string(cfg.objective) << ", restart " << res.best_restart
            << (res.converged ? ", converged" : ", sweep limit") << ")\n"
            << "witness comb: " << witness_path << "\n";

  if (!out_path.empty()) {
    dump_report(out_path,
                json{{"schema_version", kSchemaVersion},
                     {"inputs", {{"process", process_path}}},
                     {"config", config_echo(cfg)},
                     {"best_value_bits", res.best_value},
                     {"witness_comb", witness_path},
                     {"best_restart", res.best_restart},
                     {"converged", res.converged},
                     {"sweep_trace", res.trace},
                     {"achievability_defect", defect},
                     {"wall_clock_seconds", now_seconds() - start},
                     {"seed", cfg.seed}});
  }
  return defect <= 1e-9 ? kExitOk : kExitNumerical;
}

int cmd_divergence(const std::string& process_path,
                   const std::string& reference_path, int ref_dim,
                   const OptimFlags& flags, const std::string& out_path,
                   std::string witness_path) {
  const double start = now_seconds();
  const ProcessTensor t = read_process(process_path);
  const ProcessTensor r = reference_path.empty() ? full_marginal(t)
                                                 : read_process(reference_path);
  DivergenceConfig cfg;
  cfg.opt = resolve_config(flags);
  cfg.ref_dim = ref_dim;
  const DivergenceResult res = reachable_divergence(t, r, cfg);

  if (witness_path.empty()) witness_path = out_path.empty()
                                               ? process_path + ".witness.json"
                                               : out_path + ".witness.json";
  write_comb(witness_path, res.witness_comb);

  std::cout << "reachable divergence >= " << res.value_bits << " bits ("
            << res.samples_evaluated << " samples"
            << (res.support_violation ? ", support violation" : "") << ")\n"
            << "witness comb: " << witness_path << "\n";
  if (!out_path.empty()) {
    dump_report(out_path,
                json{{"schema_version", kSchemaVersion},
                     {"inputs", {{"process", process_path},
                                 {"reference", reference_path.empty()
                                                   ? "full_marginal"
                                                   : reference_path}}},
                     {"config", config_echo(cfg.opt)},
                     {"ref_dim", cfg.ref_dim},
                     {"value_bits", res.value_bits},
                     {"support_violation", res.support_violation},
                     {"samples_evaluated", res.samples_evaluated},
                     {"witness_comb", witness_path},
                     {"wall_clock_seconds", now_seconds() - start},
                     {"seed", cfg.opt.seed}});
  }
  return kExitOk;
}

int cmd_compose(const std::string& first_path, const std::string& second_path,
                const std::string& mode, const std::string& out_path) {
  const ProcessTensor a = read_process(first_path);
  const ProcessTensor b = read_process(second_path);
  if (mode == "seq") {
    write_process(out_path, compose_sequential(a, b));
  } else if (mode == "par") {
    write_process(out_path, compose_parallel(a, b));
  } else {
    throw std::runtime_error("mode must be 'seq' or 'par'");
  }
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

int cmd_report(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open '" + report_path + "'");
  json j;
  in >> j;
  std::cout << j.dump(1) << "\n";

  // Re-verify a divergence witness against the stored value when the
  // referenced files are present and the reference is reconstructible.
  if (j.contains("witness_comb") && j.contains("inputs") &&
      j["inputs"].contains("process") && j.contains("value_bits") &&
      j["inputs"].value("reference", "") == "full_marginal") {
    const std::string witness = j["witness_comb"].get<std::string>();
    const std::string process = j["inputs"]["process"].get<std::string>();
    std::ifstream w(witness), p(process);
    if (w && p) {
      const ProcessTensor t = read_process(process);
      const ControlComb comb = read_comb(witness);
      const double value = rel_entropy(link(t, comb).choi(),
                                       link(full_marginal(t), comb).choi());
      const double defect = std::abs(value - j["value_bits"].get<double>());
      std::cout << "witness re-evaluation: " << value << " bits (defect "
                << defect << ")\n";
      return defect <= 1e-9 ? kExitOk : kExitNumerical;
    }
  }

  // Re-verify the witness when the referenced files are present.
  if (j.contains("witness_comb") && j.contains("inputs") &&
      j["inputs"].contains("process") && j.contains("best_value_bits")) {
    const std::string witness = j["witness_comb"].get<std::string>();
    const std::string process = j["inputs"]["process"].get<std::string>();
    std::ifstream w(witness), p(process);
    if (w && p) {
      const ProcessTensor t = read_process(process);
      const ControlComb comb = read_comb(witness);
      Objective objective = Objective::kTotalInfo;
      if (j.contains("config") && j["config"].contains("objective")) {
        objective =
            objective_from_string(j["config"]["objective"].get<std::string>());
      }
      const ProcessTensor pushed = link(t, comb);
      const double value = objective == Objective::kMarkovInfo
                               ? markov_info(pushed)
                               : objective == Objective::kNonMarkovianity
                                     ? non_markovianity(pushed)
                                     : total_info(pushed);
      const double defect =
          std::abs(value - j["best_value_bits"].get<double>());
      std::cout << "witness re-evaluation: " << value
                << " bits (defect " << defect << ")\n";
      return defect <= 1e-9 ? kExitOk : kExitNumerical;
    }
  }
  return kExitOk;
}

bool check(bool condition, const std::string& what, int& failures) {
  if (!condition) {
    std::cout << "  FAIL: " << what << "\n";
    ++failures;
  }
  return condition;
}

int run_suite(const std::string& suite, int seeds) {
  int failures = 0;
  const bool all = suite == "all";

  if (all || suite == "identity") {
    double worst = 0.0;
    for (int s = 0; s < seeds; ++s) {
      ScenarioSpec spec;
      spec.kind = s % 3 == 0 ? ScenarioKind::kMarkovRandom
                             : ScenarioKind::kHaarRandomEnv;
      spec.n_slots = 1 + s % 2;
      spec.env_dim = 2 + s % 3;
      spec.seed = 9000 + s;
      const QuantifierReport q = quantify(build_random(spec));
      worst = std::max(worst, q.identity_defect);
      if (q.total_info_bits < -1e-9 || q.markov_info_bits < -1e-9 ||
          q.non_markovianity_bits < -1e-9) {
        ++failures;
      }
    }
    check(worst < 1e-8, "identity defect exceeds 1e-8", failures);
    std::cout << "suite identity: worst |I-(M+N)| = " << worst << " over "
              << seeds << " seeds -> "
              << (worst < 1e-8 ? "pass" : "FAIL") << "\n";
  }

  if (all || suite == "counterexample") {
    const ProcessTensor t = build_counterexample();
    const double i_before = total_info(t);
    const double i_after = total_info(coarse_grain(t, {1}));
    const double n_before = non_markovianity(t);
    bool ok = true;
    ok &= check(std::abs(i_before - 1.0) <= 1e-8, "I(T) != 1", failures);
    ok &= check(std::abs(i_after - 2.0) <= 1e-8, "I(T_closed) != 2", failures);
    ok &= check(n_before > 1e-3, "N(T) not positive", failures);
    ok &= check(validate(t).pass, "counterexample fails validation", failures);
    std::cout << "suite counterexample: I " << i_before << " -> " << i_after
              << " under coarse-graining -> " << (ok ? "pass" : "FAIL")
              << "\n";
  }

  if (all || suite == "composition") {
    double worst_seq = 0.0;
    double worst_par = 0.0;
    const int pairs = std::max(1, seeds / 10);
    for (int s = 0; s < pairs; ++s) {
      ScenarioSpec spec;
      spec.kind = ScenarioKind::kHaarRandomEnv;
      spec.n_slots = 1;
      spec.env_dim = 2;
      spec.seed = 500 + 2 * s;
      const ProcessTensor a = build_random(spec);
      spec.seed = 501 + 2 * s;
      const ProcessTensor b = build_random(spec);
      worst_seq = std::max(
          worst_seq, std::abs(total_info(compose_sequential(a, b)) -
                              total_info(a) - total_info(b)));
      const ProcessTensor par = compose_parallel(a, b);
      worst_par = std::max(worst_par,
                           std::abs(total_info(par) - total_info(a) -
                                    total_info(b)));
      if (!validate(par).pass || !validate(compose_sequential(a, b)).pass) {
        ++failures;
      }
    }
    const bool ok = worst_seq < 1e-8 && worst_par < 1e-8;
    if (!ok) ++failures;
    std::cout << "suite composition: worst additivity defect seq "
              << worst_seq << ", par " << worst_par << " over " << pairs
              << " pairs -> " << (ok ? "pass" : "FAIL") << "\n";
  }

  if (all || suite == "markov") {
    double worst = 0.0;
    for (int s = 0; s < seeds; ++s) {
      ScenarioSpec spec;
      spec.kind = ScenarioKind::kMarkovRandom;
      spec.n_slots = 1 + s % 2;
      spec.seed = 100 + s;
      worst = std::max(worst, non_markovianity(build_random(spec)));
      spec.kind = ScenarioKind::kUncorrelatedRandom;
      worst = std::max(worst, total_info(build_random(spec)));
    }
    check(worst < 1e-9, "free processes carry correlations", failures);
    std::cout << "suite markov: worst residual " << worst << " -> "
              << (worst < 1e-9 ? "pass" : "FAIL") << "\n";
  }

  std::cout << (failures == 0 ? "all suites passed" : "suites FAILED") << "\n";
  return failures == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multitime quantum process calculus"};
  app.require_subcommand(1);

  std::string spec_path, process_path, reference_path, out_path, witness_path;
  std::string first_path, second_path, mode = "seq", coarse_arg, suite = "all";
  std::string report_path;
  int seeds = 100;
  int ref_dim = 0;
  OptimFlags flags;

  auto* build = app.add_subcommand("build", "build a scenario process file");
  build->add_option("--spec", spec_path, "scenario spec JSON")->required();
  build->add_option("--out", out_path, "output process file")->required();

  auto* quantify_cmd =
      app.add_subcommand("quantify", "compute I, M, N of a process file");
  quantify_cmd->add_option("--process", process_path)->required();
  quantify_cmd->add_option("--coarse-grain", coarse_arg,
                           "'all' or comma-separated times to close");
  quantify_cmd->add_option("--out", out_path, "report file");

  auto* optimize =
      app.add_subcommand("optimize", "estimate the monotone quantifiers");
  optimize->add_option("--process", process_path)->required();
  optimize->add_option("--out", out_path, "report file");
  optimize->add_option("--witness-out", witness_path, "witness comb file");
  add_optim_flags(optimize, flags);

  auto* divergence =
      app.add_subcommand("divergence", "estimate the reachable divergence");
  divergence->add_option("--process", process_path)->required();
  divergence->add_option("--reference", reference_path,
                         "reference process (default: own full marginal)");
  divergence->add_option("--ref-dim", ref_dim,
                         "auxiliary reference dimension (0 = system dim)");
  divergence->add_option("--out", out_path, "report file");
  divergence->add_option("--witness-out", witness_path, "witness comb file");
  add_optim_flags(divergence, flags);

  auto* compose_cmd =
      app.add_subcommand("compose", "compose two process files");
  compose_cmd->add_option("--first", first_path)->required();
  compose_cmd->add_option("--second", second_path)->required();
  compose_cmd->add_option("--mode", mode, "seq | par");
  compose_cmd->add_option("--out", out_path)->required();

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("--suite", suite,
                     "identity | counterexample | composition | markov | all");
  verify->add_option("--seeds", seeds, "number of random instances");

  auto* report = app.add_subcommand("report", "print and re-verify a report");
  report->add_option("--report", report_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(spec_path, out_path);
    if (quantify_cmd->parsed()) {
      return cmd_quantify(process_path, coarse_arg, out_path);
    }
    if (optimize->parsed()) {
      return cmd_optimize(process_path, flags, out_path, witness_path);
    }
    if (divergence->parsed()) {
      return cmd_divergence(process_path, reference_path, ref_dim, flags,
                            out_path, witness_path);
    }
    if (compose_cmd->parsed()) {
      return cmd_compose(first_path, second_path, mode, out_path);
    }
    if (verify->parsed()) return run_suite(suite, seeds);
    if (report->parsed()) return cmd_report(report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
