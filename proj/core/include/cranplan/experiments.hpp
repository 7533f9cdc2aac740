// SPDX-License-Identifier: Apache-2.0
//
// Seeded Monte-Carlo experiment harness: parameter sweeps over random
// instances, the Stage-I/Stage-II baselines, trial records, and CSV output.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cranplan/beamforming.hpp"
#include "cranplan/channel.hpp"
#include "cranplan/pilot_alloc.hpp"
#include "cranplan/topology.hpp"

namespace cranplan {

enum class Method { proposed, ortho, con, nocase2, perfect, exhaustive, nonrobust };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

enum class SweepAxis {
  pilot_budget,        // tau
  cluster_size,        // L
  pilot_power,         // p_t (W)
  path_loss_exponent,  //
  noise_psd,           // dBm/Hz
  fronthaul_norm       // normalized cap C_max / R_min with common R_min = 4
};

std::string to_string(SweepAxis axis);
SweepAxis axis_from_string(const std::string& name);

struct ExperimentSpec {
  NetworkConfig base;
  SweepAxis axis = SweepAxis::pilot_budget;
  std::vector<double> values;  // sweep points; may be empty for single runs
  std::vector<Method> methods = {Method::proposed};
  int num_trials = 50;
  int mc_samples = 0;  // 0 skips the Monte-Carlo rate validation
  ScaOptions sca;

  void validate() const;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  double sweep_value = 0.0;
  Method method = Method::proposed;
  int stage1_admitted = 0;
  int stage2_admitted = 0;
  double total_power_w = 0.0;
  std::vector<int> admitted;         // final UE ids
  std::vector<double> rate_bounds;   // per admitted UE, post polish
  std::vector<double> rate_targets;  // aligned
  std::vector<double> mc_rates;      // empty when mc_samples == 0
  std::vector<double> mc_stderr;
  int sca_iterations = 0;
  int removals = 0;
  double rank_ratio_max = 0.0;
  int rank_flagged = 0;
  int solves = 0;
  bool rate_feasible = true;  // verify_solution outcome on the polished beams
  double runtime_s = 0.0;
  bool failed = false;
};

// Applies a sweep value to the base config (fronthaul_norm pins the common
// R_min = 4 convention).
NetworkConfig apply_sweep(const NetworkConfig& base, SweepAxis axis, double value);

TrialRecord run_trial(const ExperimentSpec& spec, double sweep_value, Method method,
                      std::uint64_t trial_seed);

struct SweepResult {
  std::vector<TrialRecord> records;
};

// Cartesian product of values x methods x trials; per-trial seeds are hashed
// from (base seed, trial index, sweep value) so methods see identical
// randomness.
SweepResult run_sweep(const ExperimentSpec& spec);

// One Algorithm-4 trace on a single instance with a common rate target.
std::vector<ScaTracePoint> convergence_trace(const ExperimentSpec& spec, std::uint64_t seed,
                                             double r_min);

// RFC-4180 CSV emission, one header row, stable formatting.
std::string records_to_csv(const std::vector<TrialRecord>& records);
std::string summary_to_csv(const std::vector<TrialRecord>& records);
std::string trace_to_csv(const std::vector<ScaTracePoint>& trace);

void write_file(const std::string& path, const std::string& content);

}  // namespace cranplan
