// SPDX-License-Identifier: Apache-2.0
//
// cran-plan: generate instances, allocate pilots, design beams, and run the
// seeded experiment suites from the command line.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cranplan/beamforming.hpp"
#include "cranplan/channel.hpp"
#include "cranplan/experiments.hpp"
#include "cranplan/pilot_alloc.hpp"
#include "cranplan/serialization.hpp"
#include "cranplan/topology.hpp"

namespace {

using namespace cranplan;

NetworkConfig load_config(const std::string& path) {
  return config_from_json(read_file(path));
}

void apply_full_scale(NetworkConfig& cfg) {
  cfg.area_side_m = 700.0;
  cfg.num_rrh = 40;
  cfg.num_ue = 24;
  cfg.max_reuse = 4;
}

std::string solution_to_json(const BeamformingSolution& sol) {
  nlohmann::json j;
  j["admitted"] = sol.admitted;
  nlohmann::json beams = nlohmann::json::array();
  for (const auto& w : sol.beams) {
    nlohmann::json v = nlohmann::json::array();
    for (Eigen::Index i = 0; i < w.size(); ++i) v.push_back({w(i).real(), w(i).imag()});
    beams.push_back(std::move(v));
  }
  j["beams"] = std::move(beams);
  nlohmann::json x = nlohmann::json::array();
  for (Eigen::Index i = 0; i < sol.slack.size(); ++i) x.push_back(sol.slack(i));
  j["slack"] = std::move(x);
  j["rates"] = sol.rates;
  j["rrh_power_w"] = sol.rrh_power;
  j["rrh_load"] = sol.rrh_load;
  j["sca_runs"] = sol.diagnostics.sca_runs;
  j["sca_iterations"] = sol.diagnostics.total_sca_iterations;
  j["removed"] = sol.diagnostics.removed;
  j["rank_ratio_max"] = sol.diagnostics.rank_ratio_max;
  j["aborted"] = sol.diagnostics.aborted;
  return j.dump(2);
}

int cmd_generate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out) {
  NetworkConfig cfg = load_config(config_path);
  if (seed) cfg.rng_seed = *seed;
  const NetworkInstance inst = generate_network(cfg);
  const std::string text = to_json(inst);
  if (out.empty())
    std::cout << text << "\n";
  else
    write_file(out, text);
  return 0;
}

int cmd_allocate(const std::string& config_path, const std::string& instance_path,
                 std::optional<std::uint64_t> seed, std::optional<int> tau,
                 const std::string& method) {
  NetworkInstance inst;
  if (!instance_path.empty()) {
    inst = instance_from_json(read_file(instance_path));
  } else {
    NetworkConfig cfg = load_config(config_path);
    if (seed) cfg.rng_seed = *seed;
    inst = generate_network(cfg);
  }
  const int budget = tau.value_or(inst.config.pilot_budget);
  const int n_max = inst.config.max_reuse;

  PilotAssignment a;
  if (method == "proposed") {
    a = allocate_pilots(inst, budget, n_max);
  } else if (method == "exhaustive") {
    a = exhaustive_stage1(inst, budget, n_max).second;
  } else {
    Rng rng(seed.value_or(inst.config.rng_seed));
    BaselineKind kind = method == "ortho"  ? BaselineKind::ortho
                        : method == "con"  ? BaselineKind::con
                                           : BaselineKind::nocase2;
    a = allocate_baseline(kind, inst, budget, n_max, rng);
  }

  std::printf("admitted (%zu):", a.admitted.size());
  for (int k : a.admitted) std::printf(" %d", k);
  std::printf("\npilots used n* = %d\n", a.num_used);
  for (int k : a.admitted) std::printf("  ue %d -> pilot %d\n", k, a.pilot_of[k]);
  return 0;
}

int cmd_beamform(const std::string& instance_path, const std::string& assignment_path,
                 std::uint64_t seed, const std::string& mode, const std::string& out_dir) {
  const NetworkInstance inst = instance_from_json(read_file(instance_path));
  const PilotAssignment assignment = assignment_from_json(read_file(assignment_path));

  Rng channel_rng(derive_seed(seed, 2));
  const ChannelRealization realization = draw_channels(inst, channel_rng);
  ChannelEstimate estimate;
  if (mode == "perfect") {
    estimate = perfect_estimate(realization, assignment, inst);
  } else {
    Rng training_rng(derive_seed(seed, 3));
    estimate = estimate_channels(realization, assignment, inst, training_rng);
  }
  const RateModel model = build_rate_model(estimate, assignment, inst, mode == "nonrobust");

  const BeamformingSolution sol = select_ues_stage2(model, inst);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/solution.json", solution_to_json(sol));
  write_file(out_dir + "/sca_trace.csv", trace_to_csv(sol.trace));
  std::printf("stage-2 admitted %zu of %zu; outputs in %s\n", sol.admitted.size(),
              assignment.admitted.size(), out_dir.c_str());
  return sol.diagnostics.aborted ? 1 : 0;
}

int cmd_trial(const std::string& config_path, std::uint64_t seed, const std::string& method,
              int mc_samples, const std::string& out) {
  ExperimentSpec spec;
  spec.base = load_config(config_path);
  spec.mc_samples = mc_samples;
  const TrialRecord rec = run_trial(spec, static_cast<double>(spec.base.pilot_budget),
                                    method_from_string(method), seed);
  const std::string csv = records_to_csv({rec});
  if (out.empty())
    std::cout << csv;
  else
    write_file(out, csv);
  return rec.failed ? 1 : 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir,
              std::optional<int> trials, const std::string& methods_csv, bool full_scale) {
  ExperimentSpec spec = experiment_spec_from_json(read_file(spec_path));
  if (trials) spec.num_trials = *trials;
  if (full_scale) {
    apply_full_scale(spec.base);
    spec.num_trials = 200;
  }
  if (!methods_csv.empty()) {
    spec.methods.clear();
    std::string token;
    std::istringstream ss(methods_csv);
    while (std::getline(ss, token, ',')) spec.methods.push_back(method_from_string(token));
  }
  const SweepResult result = run_sweep(spec);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/records.csv", records_to_csv(result.records));
  write_file(out_dir + "/summary.csv", summary_to_csv(result.records));
  int failed = 0;
  for (const auto& r : result.records) failed += r.failed ? 1 : 0;
  std::printf("%zu records (%d failed) -> %s\n", result.records.size(), failed, out_dir.c_str());
  return 0;
}

int cmd_trace(const std::string& config_path, std::uint64_t seed, const std::string& out_dir) {
  ExperimentSpec spec;
  spec.base = load_config(config_path);
  std::filesystem::create_directories(out_dir);
  // feasible and stressed common rate targets
  write_file(out_dir + "/trace_feasible.csv", trace_to_csv(convergence_trace(spec, seed, 2.0)));
  write_file(out_dir + "/trace_stressed.csv", trace_to_csv(convergence_trace(spec, seed, 4.0)));
  std::printf("traces written to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultra-dense C-RAN pilot allocation and robust beamforming toolkit"};
  app.require_subcommand(1);

  std::string config_path, instance_path, assignment_path, out, method = "proposed",
                                                                 mode = "mmse";
  std::string methods_csv, spec_path;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> seed_opt;
  std::optional<int> tau_opt, trials_opt;
  int mc_samples = 0;
  bool full_scale = false;

  auto* generate = app.add_subcommand("generate", "generate a random network instance");
  generate->add_option("--config", config_path)->required();
  generate->add_option("--seed", seed_opt);
  generate->add_option("--out", out);

  auto* allocate = app.add_subcommand("allocate", "run Stage-I pilot allocation");
  allocate->add_option("--config", config_path);
  allocate->add_option("--instance", instance_path);
  allocate->add_option("--seed", seed_opt);
  allocate->add_option("--tau", tau_opt);
  allocate->add_option("--method", method)
      ->check(CLI::IsMember({"proposed", "ortho", "con", "nocase2", "exhaustive"}));

  auto* beamform = app.add_subcommand("beamform", "run Stage-II robust beamforming");
  beamform->add_option("--instance", instance_path)->required();
  beamform->add_option("--assignment", assignment_path)->required();
  beamform->add_option("--seed", seed);
  beamform->add_option("--mode", mode)->check(CLI::IsMember({"mmse", "perfect", "nonrobust"}));
  beamform->add_option("--out", out)->required();

  auto* trial = app.add_subcommand("trial", "run one end-to-end trial");
  trial->add_option("--config", config_path)->required();
  trial->add_option("--seed", seed);
  trial->add_option("--method", method);
  trial->add_option("--mc-samples", mc_samples);
  trial->add_option("--out", out);

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("--spec", spec_path)->required();
  sweep->add_option("--out", out)->required();
  sweep->add_option("--trials", trials_opt);
  sweep->add_option("--methods", methods_csv);
  sweep->add_flag("--full-scale", full_scale);

  auto* trace = app.add_subcommand("trace", "emit SCA convergence traces");
  trace->add_option("--config", config_path)->required();
  trace->add_option("--seed", seed);
  trace->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return cmd_generate(config_path, seed_opt, out);
    if (allocate->parsed())
      return cmd_allocate(config_path, instance_path, seed_opt, tau_opt, method);
    if (beamform->parsed()) return cmd_beamform(instance_path, assignment_path, seed, mode, out);
    if (trial->parsed()) return cmd_trial(config_path, seed, method, mc_samples, out);
    if (sweep->parsed()) return cmd_sweep(spec_path, out, trials_opt, methods_csv, full_scale);
    if (trace->parsed()) return cmd_trace(config_path, seed, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
