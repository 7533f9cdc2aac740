// SPDX-License-Identifier: Apache-2.0
#include "cranplan/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cranplan {

namespace {

std::uint64_t hash_double(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt(v[i]);
  }
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::proposed: return "proposed";
    case Method::ortho: return "ortho";
    case Method::con: return "con";
    case Method::nocase2: return "nocase2";
    case Method::perfect: return "perfect";
    case Method::exhaustive: return "exhaustive";
    case Method::nonrobust: return "nonrobust";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  for (Method m : {Method::proposed, Method::ortho, Method::con, Method::nocase2,
                   Method::perfect, Method::exhaustive, Method::nonrobust})
    if (to_string(m) == name) return m;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::pilot_budget: return "pilot_budget";
    case SweepAxis::cluster_size: return "cluster_size";
    case SweepAxis::pilot_power: return "pilot_power";
    case SweepAxis::path_loss_exponent: return "path_loss_exponent";
    case SweepAxis::noise_psd: return "noise_psd";
    case SweepAxis::fronthaul_norm: return "fronthaul_norm";
  }
  return "?";
}

SweepAxis axis_from_string(const std::string& name) {
  for (SweepAxis a : {SweepAxis::pilot_budget, SweepAxis::cluster_size, SweepAxis::pilot_power,
                      SweepAxis::path_loss_exponent, SweepAxis::noise_psd,
                      SweepAxis::fronthaul_norm})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

void ExperimentSpec::validate() const {
  base.validate();
  if (num_trials < 1) throw std::invalid_argument("num_trials must be >= 1");
  for (Method m : methods) {
    if (m == Method::exhaustive) {
      if (base.num_ue > 8 || base.pilot_budget > 4)
        throw std::invalid_argument("exhaustive method requires K <= 8 and tau <= 4");
      if (axis == SweepAxis::pilot_budget)
        for (double v : values)
          if (v > 4) throw std::invalid_argument("exhaustive method requires tau <= 4");
    }
  }
}

NetworkConfig apply_sweep(const NetworkConfig& base, SweepAxis axis, double value) {
  NetworkConfig cfg = base;
  switch (axis) {
    case SweepAxis::pilot_budget:
      cfg.pilot_budget = static_cast<int>(std::lround(value));
      break;
    case SweepAxis::cluster_size:
      cfg.cluster_size = static_cast<int>(std::lround(value));
      break;
    case SweepAxis::pilot_power:
      cfg.pilot_power_w = value;
      break;
    case SweepAxis::path_loss_exponent:
      cfg.path_loss_exponent = value;
      break;
    case SweepAxis::noise_psd:
      cfg.noise_psd_dbm_hz = value;
      break;
    case SweepAxis::fronthaul_norm: {
      // normalized cap with a common R_min = 4 bit/s/Hz
      cfg.rate_target_range = {4.0, 4.0};
      const double cap = value * 4.0;
      cfg.fronthaul_range = {cap, cap};
      break;
    }
  }
  return cfg;
}

TrialRecord run_trial(const ExperimentSpec& spec, double sweep_value, Method method,
                      std::uint64_t trial_seed) {
  const auto t_start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.seed = trial_seed;
  rec.sweep_value = sweep_value;
  rec.method = method;

  NetworkConfig cfg = apply_sweep(spec.base, spec.axis, sweep_value);
  cfg.rng_seed = derive_seed(trial_seed, 1);
  const NetworkInstance inst = generate_network(cfg);
  const int tau = cfg.pilot_budget;
  const int n_max = cfg.max_reuse;

  // Stage I
  PilotAssignment assignment;
  switch (method) {
    case Method::proposed:
    case Method::perfect:
    case Method::nonrobust:
      assignment = allocate_pilots(inst, tau, n_max);
      break;
    case Method::ortho:
    case Method::con: {
      Rng rng(derive_seed(trial_seed, 4, static_cast<std::uint64_t>(method)));
      assignment = allocate_baseline(
          method == Method::ortho ? BaselineKind::ortho : BaselineKind::con, inst, tau, n_max,
          rng);
      break;
    }
    case Method::nocase2: {
      Rng rng(derive_seed(trial_seed, 4, static_cast<std::uint64_t>(method)));
      assignment = allocate_baseline(BaselineKind::nocase2, inst, tau, n_max, rng);
      break;
    }
    case Method::exhaustive: {
      if (inst.num_ue() > 8 || tau > 4)
        throw std::invalid_argument("exhaustive method requires K <= 8 and tau <= 4");
      assignment = exhaustive_stage1(inst, tau, n_max).second;
      break;
    }
  }
  rec.stage1_admitted = static_cast<int>(assignment.admitted.size());

  // channels and estimation; identical seeds across methods
  Rng channel_rng(derive_seed(trial_seed, 2));
  const ChannelRealization realization = draw_channels(inst, channel_rng);
  ChannelEstimate estimate;
  if (method == Method::perfect) {
    estimate = perfect_estimate(realization, assignment, inst);
  } else {
    Rng training_rng(derive_seed(trial_seed, 3));
    estimate = estimate_channels(realization, assignment, inst, training_rng);
  }
  const RateModel model =
      build_rate_model(estimate, assignment, inst, method == Method::nonrobust);

  // Stage II
  const BeamformingSolution stage2 = select_ues_stage2(model, inst, spec.sca);
  rec.sca_iterations = stage2.diagnostics.total_sca_iterations;
  rec.removals = static_cast<int>(stage2.diagnostics.removed.size());
  rec.rank_ratio_max = stage2.diagnostics.rank_ratio_max;
  rec.rank_flagged = stage2.diagnostics.rank_flagged;
  rec.solves = stage2.diagnostics.solves;
  if (stage2.diagnostics.aborted) {
    rec.failed = true;
    rec.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rec;
  }
  rec.stage2_admitted = static_cast<int>(stage2.admitted.size());
  rec.admitted = stage2.admitted;

  if (!stage2.admitted.empty()) {
    const RateModel final_model = restrict_model(model, stage2.admitted);
    const PolishResult polish = polish_power(final_model, stage2.beams);
    const FeasibilityReport report = verify_solution(final_model, inst, polish.beams);
    rec.rate_feasible = report.feasible;
    rec.rate_bounds.resize(final_model.size());
    rec.rate_targets.resize(final_model.size());
    for (int p = 0; p < final_model.size(); ++p) {
      rec.rate_bounds[p] = rate_lower_bound(final_model, polish.beams, p);
      rec.rate_targets[p] = final_model.rate_target[p];
    }
    const auto [power, load] = rrh_power_and_load(final_model, inst, polish.beams, spec.sca.eps_active);
    (void)load;
    rec.total_power_w = std::accumulate(power.begin(), power.end(), 0.0);

    if (spec.mc_samples > 0) {
      Rng mc_rng(derive_seed(trial_seed, 5));
      std::tie(rec.mc_rates, rec.mc_stderr) = expected_rate_mc(
          estimate, inst, stage2.admitted, polish.beams, spec.mc_samples, mc_rng);
    }
  }
  rec.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rec;
}

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  SweepResult out;
  std::vector<double> values = spec.values;
  if (values.empty()) values.push_back(static_cast<double>(spec.base.pilot_budget));
  for (double value : values) {
    for (Method method : spec.methods) {
      for (int trial = 0; trial < spec.num_trials; ++trial) {
        const std::uint64_t seed = derive_seed(spec.base.rng_seed,
                                               static_cast<std::uint64_t>(trial),
                                               hash_double(value));
        out.records.push_back(run_trial(spec, value, method, seed));
      }
    }
  }
  return out;
}

std::vector<ScaTracePoint> convergence_trace(const ExperimentSpec& spec, std::uint64_t seed,
                                             double r_min) {
  NetworkConfig cfg = spec.base;
  cfg.rate_target_range = {r_min, r_min};
  cfg.rng_seed = derive_seed(seed, 1);
  const NetworkInstance inst = generate_network(cfg);
  const PilotAssignment assignment = allocate_pilots(inst, cfg.pilot_budget, cfg.max_reuse);
  Rng channel_rng(derive_seed(seed, 2));
  const ChannelRealization realization = draw_channels(inst, channel_rng);
  Rng training_rng(derive_seed(seed, 3));
  const ChannelEstimate estimate = estimate_channels(realization, assignment, inst, training_rng);
  const RateModel model = build_rate_model(estimate, assignment, inst);
  return sca_solve(model, inst, spec.sca).trace;
}

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string csv =
      "seed,sweep_value,method,stage1_admitted,stage2_admitted,total_power_w,"
      "admitted,rate_bounds,rate_targets,mc_rates,mc_stderr,sca_iterations,removals,"
      "rank_ratio_max,rank_flagged,solves,rate_feasible,runtime_s,failed\n";
  for (const auto& r : records) {
    csv += std::to_string(r.seed) + ',' + fmt(r.sweep_value) + ',' + to_string(r.method) + ',' +
           std::to_string(r.stage1_admitted) + ',' + std::to_string(r.stage2_admitted) + ',' +
           fmt(r.total_power_w) + ",\"" + join(r.admitted) + "\",\"" + join(r.rate_bounds) +
           "\",\"" + join(r.rate_targets) + "\",\"" + join(r.mc_rates) + "\",\"" +
           join(r.mc_stderr) + "\"," + std::to_string(r.sca_iterations) + ',' +
           std::to_string(r.removals) + ',' + fmt(r.rank_ratio_max) + ',' +
           std::to_string(r.rank_flagged) + ',' + std::to_string(r.solves) + ',' +
           (r.rate_feasible ? "1" : "0") + ',' + fmt(r.runtime_s) + ',' +
           (r.failed ? "1" : "0") + '\n';
  }
  return csv;
}

std::string summary_to_csv(const std::vector<TrialRecord>& records) {
  struct Cell {
    int n = 0;
    int failed = 0;
    double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0, pw = 0, pwsq = 0;
  };
  std::vector<std::pair<std::pair<double, Method>, Cell>> cells;
  auto cell_of = [&](double value, Method m) -> Cell& {
    for (auto& [key, c] : cells)
      if (key.first == value && key.second == m) return c;
    cells.push_back({{value, m}, Cell{}});
    return cells.back().second;
  };
  for (const auto& r : records) {
    Cell& c = cell_of(r.sweep_value, r.method);
    if (r.failed) {
      ++c.failed;
      continue;
    }
    ++c.n;
    c.s1 += r.stage1_admitted;
    c.s1sq += double(r.stage1_admitted) * r.stage1_admitted;
    c.s2 += r.stage2_admitted;
    c.s2sq += double(r.stage2_admitted) * r.stage2_admitted;
    c.pw += r.total_power_w;
    c.pwsq += r.total_power_w * r.total_power_w;
  }
  auto mean_se = [](double sum, double sumsq, int n) -> std::pair<double, double> {
    if (n == 0) return {0.0, 0.0};
    const double mean = sum / n;
    const double var = std::max(0.0, sumsq / n - mean * mean);
    return {mean, n > 1 ? std::sqrt(var / n) : 0.0};
  };
  std::string csv =
      "sweep_value,method,trials,failed,stage1_mean,stage1_stderr,stage2_mean,"
      "stage2_stderr,power_mean_w,power_stderr_w\n";
  for (const auto& [key, c] : cells) {
    const auto [m1, e1] = mean_se(c.s1, c.s1sq, c.n);
    const auto [m2, e2] = mean_se(c.s2, c.s2sq, c.n);
    const auto [mp, ep] = mean_se(c.pw, c.pwsq, c.n);
    csv += fmt(key.first) + ',' + to_string(key.second) + ',' + std::to_string(c.n) + ',' +
           std::to_string(c.failed) + ',' + fmt(m1) + ',' + fmt(e1) + ',' + fmt(m2) + ',' +
           fmt(e2) + ',' + fmt(mp) + ',' + fmt(ep) + '\n';
  }
  return csv;
}

std::string trace_to_csv(const std::vector<ScaTracePoint>& trace) {
  std::string csv = "iteration,objective,max_slack\n";
  for (const auto& p : trace)
    csv += std::to_string(p.iteration) + ',' + fmt(p.objective) + ',' + fmt(p.max_slack) + '\n';
  return csv;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

}  // namespace cranplan
