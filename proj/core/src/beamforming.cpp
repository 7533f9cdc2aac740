// SPDX-License-Identifier: Apache-2.0
#include "cranplan/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cranplan {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

MatC slot_selector(int slots, int slot, int antennas) {
  MatC b = MatC::Zero(slots * antennas, slots * antennas);
  b.block(slot * antennas, slot * antennas, antennas, antennas) =
      MatC::Identity(antennas, antennas);
  return b;
}
}  // namespace

std::pair<double, double> fractional_smooth(double y, double theta) {
  if (y < 0) throw std::domain_error("fractional_smooth: y must be nonnegative");
  if (theta <= 0) throw std::domain_error("fractional_smooth: theta must be positive");
  const double den = y + theta;
  return {y / den, theta / (den * den)};
}

SdpProblem assemble_sdp(const RateModel& model, const NetworkInstance& inst,
                        const std::vector<VecD>& tau_weights, const VecD& fronthaul_budget,
                        double gamma) {
  const int n = model.size();
  const int M = model.antennas;
  SdpProblem prob;
  prob.gamma = gamma;
  prob.block_dims.resize(n);
  for (int p = 0; p < n; ++p) prob.block_dims[p] = model.block_dim(p);

  // per-RRH power rows over the UEs it serves
  for (int i = 0; i < inst.num_rrh(); ++i) {
    CapRow row;
    for (int p = 0; p < n; ++p) {
      const int slot = model.cluster_slot(p, i);
      if (slot < 0) continue;
      row.terms.push_back({p, slot_selector(static_cast<int>(model.cluster[p].size()), slot, M)});
    }
    if (row.terms.empty()) continue;
    row.rhs = inst.power_caps[i];
    prob.power_rows.push_back(std::move(row));
  }

  // SINR rows, noise-normalized so the slack penalty keeps its intended scale
  for (int p = 0; p < n; ++p) {
    SinrRow row;
    const double inv_sigma = 1.0 / model.noise_power[p];
    const double eta = model.eta_min[p];
    MatC self = (model.g_hat[p] * model.g_hat[p].adjoint()) * inv_sigma;
    const int slots = static_cast<int>(model.cluster[p].size());
    for (int j = 0; j < slots; ++j)
      self.block(j * M, j * M, M, M) -=
          eta * model.error_var[p](j) * inv_sigma * MatC::Identity(M, M);
    row.terms.push_back({p, std::move(self)});
    for (int lp = 0; lp < n; ++lp) {
      if (lp == p) continue;
      row.terms.push_back({lp, (-eta * inv_sigma) * model.a(lp, p)});
    }
    row.rhs = eta;
    prob.sinr_rows.push_back(std::move(row));
  }

  // linearized fronthaul rows; infinite budgets are dropped
  for (int i = 0; i < inst.num_rrh(); ++i) {
    if (!std::isfinite(fronthaul_budget(i))) continue;
    CapRow row;
    for (int p = 0; p < n; ++p) {
      const int slot = model.cluster_slot(p, i);
      if (slot < 0) continue;
      const double tau = tau_weights[p](slot);
      if (tau == 0.0) continue;
      row.terms.push_back(
          {p, tau * slot_selector(static_cast<int>(model.cluster[p].size()), slot, M)});
    }
    if (row.terms.empty()) continue;
    row.rhs = std::max(0.0, fronthaul_budget(i));
    prob.fronthaul_rows.push_back(std::move(row));
  }
  return prob;
}

RankOneExtraction extract_rank_one(const MatC& w_matrix) {
  RankOneExtraction out;
  const int dim = static_cast<int>(w_matrix.rows());
  out.w = VecC::Zero(dim);
  Eigen::SelfAdjointEigenSolver<MatC> es(w_matrix);
  const VecD& ev = es.eigenvalues();  // ascending
  const double l1 = ev(dim - 1);
  if (l1 <= 0) return out;  // zero (or negative-dust) matrix
  const double l2 = dim > 1 ? std::max(0.0, ev(dim - 2)) : 0.0;
  out.ratio = l2 / l1;
  out.flagged = out.ratio > 1e-4;
  VecC u = es.eigenvectors().col(dim - 1);
  // fix the global phase: first entry above threshold becomes real nonnegative
  for (int j = 0; j < dim; ++j) {
    if (std::abs(u(j)) > 1e-12) {
      u *= std::polar(1.0, -std::arg(u(j)));
      break;
    }
  }
  out.w = std::sqrt(l1) * u;
  return out;
}

ScaResult sca_solve(const RateModel& model, const NetworkInstance& inst,
                    const ScaOptions& options) {
  const int n = model.size();
  const int I = inst.num_rrh();
  const int M = model.antennas;
  ScaResult res;
  if (n == 0) return res;

  // current per-(UE, cluster-slot) powers tr(W_k B_{i,k}); start from w = 0
  std::vector<VecD> slot_power(n);
  for (int p = 0; p < n; ++p)
    slot_power[p] = VecD::Zero(static_cast<int>(model.cluster[p].size()));

  res.beams.assign(n, VecC());
  for (int p = 0; p < n; ++p) res.beams[p] = VecC::Zero(model.block_dim(p));
  res.slack.resize(n);
  for (int p = 0; p < n; ++p) res.slack(p) = model.eta_min[p] * model.noise_power[p];

  double obj_prev = 0.0;
  for (int p = 0; p < n; ++p) obj_prev += options.gamma * model.eta_min[p];
  {
    double mx = n ? res.slack.maxCoeff() : 0.0;
    res.trace.push_back({0, obj_prev, mx});
  }

  std::vector<VecD> tau_weights(n);
  VecD budget(I);

  for (int t = 1; t <= options.max_iterations; ++t) {
    // linearization state from the current slot powers
    for (int p = 0; p < n; ++p) {
      const int slots = static_cast<int>(model.cluster[p].size());
      tau_weights[p].resize(slots);
      for (int j = 0; j < slots; ++j) {
        const auto [fv, fd] = fractional_smooth(slot_power[p](j), options.theta);
        (void)fv;
        tau_weights[p](j) = fd * model.rate_target[p];
      }
    }
    for (int i = 0; i < I; ++i) {
      double adj = 0.0;
      for (int p = 0; p < n; ++p) {
        const int slot = model.cluster_slot(p, i);
        if (slot < 0) continue;
        const auto [fv, fd] = fractional_smooth(slot_power[p](slot), options.theta);
        adj += (fv - fd * slot_power[p](slot)) * model.rate_target[p];
      }
      budget(i) = inst.fronthaul_caps_[i] - adj;
    }

    const SdpProblem prob = assemble_sdp(model, inst, tau_weights, budget, options.gamma);
    ConicSolution sol = solve(prob, options.solver);
    ++res.solves;
    if (sol.status != SolveStatus::optimal) {
      SolverOptions relaxed = options.solver;
      relaxed.feas_target *= 100;
      relaxed.gap_target *= 100;
      relaxed.accept_feas = 1e-5;
      relaxed.accept_gap = 1e-5;
      relaxed.accept_compl = 1e-4;
      sol = solve(prob, relaxed);
      ++res.solves;
      if (sol.status != SolveStatus::optimal) {
        res.aborted = true;
        return res;
      }
    }

    for (int p = 0; p < n; ++p) {
      const RankOneExtraction ext = extract_rank_one(sol.w[p]);
      res.beams[p] = ext.w;
      res.rank_ratio_max = std::max(res.rank_ratio_max, ext.ratio);
      if (ext.ratio > 1e-6) ++res.rank_flagged;
      const int slots = static_cast<int>(model.cluster[p].size());
      for (int j = 0; j < slots; ++j)
        slot_power[p](j) = sol.w[p].block(j * M, j * M, M, M).trace().real();
      res.slack(p) = sol.x(p) * model.noise_power[p];  // back to natural units
    }

    const double obj = sol.objective;
    res.iterations = t;
    res.trace.push_back({t, obj, n ? res.slack.maxCoeff() : 0.0});
    if (std::abs(obj_prev - obj) < options.tolerance * std::max(std::abs(obj), 1e-12)) {
      obj_prev = obj;
      break;
    }
    obj_prev = obj;
  }
  res.objective = obj_prev;
  return res;
}

BeamformingSolution select_ues_stage2(const RateModel& model, const NetworkInstance& inst,
                                      const ScaOptions& options, double eps_slack) {
  BeamformingSolution out;
  if (eps_slack < 0) {
    eps_slack = kInf;
    for (int p = 0; p < model.size(); ++p)
      eps_slack = std::min(eps_slack, model.eta_min[p] * model.noise_power[p]);
    eps_slack = model.size() ? 1e-6 * eps_slack : 0.0;
  }

  RateModel current = model;
  for (;;) {
    if (current.size() == 0) {
      out.diagnostics.aborted = false;
      break;  // everyone removed; flagged by the empty admitted set
    }
    ScaResult res = sca_solve(current, inst, options);
    ++out.diagnostics.sca_runs;
    out.diagnostics.total_sca_iterations += res.iterations;
    out.diagnostics.rank_ratio_max = std::max(out.diagnostics.rank_ratio_max, res.rank_ratio_max);
    out.diagnostics.rank_flagged += res.rank_flagged;
    out.diagnostics.solves += res.solves;
    if (res.aborted) {
      out.diagnostics.aborted = true;
      break;
    }

    int worst = 0;
    for (int p = 1; p < current.size(); ++p)
      if (res.slack(p) > res.slack(worst)) worst = p;

    if (res.slack(worst) <= eps_slack) {
      out.admitted = current.ues;
      out.beams = std::move(res.beams);
      out.slack = std::move(res.slack);
      out.trace = std::move(res.trace);
      out.rates.resize(current.size());
      for (int p = 0; p < current.size(); ++p)
        out.rates[p] = rate_lower_bound(current, out.beams, p);
      std::tie(out.rrh_power, out.rrh_load) =
          rrh_power_and_load(current, inst, out.beams, options.eps_active);
      break;
    }

    out.diagnostics.removed.push_back(current.ues[worst]);
    std::vector<int> keep;
    keep.reserve(current.ues.size() - 1);
    for (int p = 0; p < current.size(); ++p)
      if (p != worst) keep.push_back(current.ues[p]);
    current = restrict_model(current, keep);
  }
  return out;
}

PolishResult polish_power(const RateModel& model, std::vector<VecC> beams, double rate_tol,
                          int max_iterations) {
  PolishResult out;
  const int n = model.size();
  const int M = model.antennas;

  auto rates = [&](const std::vector<VecC>& w) {
    std::vector<double> r(n);
    for (int p = 0; p < n; ++p) r[p] = rate_lower_bound(model, w, p);
    return r;
  };

  std::vector<double> r = rates(beams);
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::vector<int> loose;
    for (int p = 0; p < n; ++p)
      if (r[p] - model.rate_target[p] > rate_tol) loose.push_back(p);
    if (loose.empty()) break;
    out.iterations = iter + 1;

    double kappa = 0.0;
    bool valid = true;
    for (int p : loose) {
      const double signal = std::norm(model.g_hat[p].dot(beams[p]));
      double err = 0.0;
      for (int j = 0; j < static_cast<int>(model.cluster[p].size()); ++j)
        err += model.error_var[p](j) * beams[p].segment(j * M, M).squaredNorm();
      double interf = 0.0;
      for (int lp = 0; lp < n; ++lp) {
        if (lp == p || beams[lp].size() == 0) continue;
        interf += (beams[lp].adjoint() * model.a(lp, p) * beams[lp]).real()(0);
      }
      const double den = signal / model.eta_min[p] - err - interf;
      if (den <= 0) {
        valid = false;
        break;
      }
      kappa = std::max(kappa, model.noise_power[p] / den);
    }
    if (!valid || kappa >= 1.0 || kappa <= 0.0) {
      out.converged = false;
      break;
    }

    std::vector<VecC> trial = beams;
    const double root = std::sqrt(kappa);
    for (int p : loose) trial[p] *= root;
    std::vector<double> r_trial = rates(trial);
    bool dropped = false;
    for (int p = 0; p < n; ++p) {
      if (r_trial[p] < model.rate_target[p] - 5e-4) {
        dropped = true;
        break;
      }
    }
    if (dropped) {
      out.converged = false;
      break;
    }
    beams = std::move(trial);
    r = std::move(r_trial);
  }
  out.beams = std::move(beams);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> rrh_power_and_load(
    const RateModel& model, const NetworkInstance& inst, const std::vector<VecC>& beams,
    double eps_active) {
  const int M = model.antennas;
  std::vector<double> power(inst.num_rrh(), 0.0);
  std::vector<double> load(inst.num_rrh(), 0.0);
  for (int p = 0; p < model.size(); ++p) {
    if (beams[p].size() == 0) continue;
    for (int j = 0; j < static_cast<int>(model.cluster[p].size()); ++j) {
      const int i = model.cluster[p][j];
      const double pw = beams[p].segment(j * M, M).squaredNorm();
      power[i] += pw;
      if (pw > eps_active) load[i] += model.rate_target[p];
    }
  }
  return {std::move(power), std::move(load)};
}

FeasibilityReport verify_solution(const RateModel& model, const NetworkInstance& inst,
                                  const std::vector<VecC>& beams, double eps_active,
                                  double rate_tol) {
  FeasibilityReport rep;
  auto [power, load] = rrh_power_and_load(model, inst, beams, eps_active);

  rep.power.resize(inst.num_rrh());
  rep.fronthaul.resize(inst.num_rrh());
  for (int i = 0; i < inst.num_rrh(); ++i) {
    rep.power[i] = {power[i] <= inst.power_caps[i] * (1.0 + 1e-8), power[i],
                    inst.power_caps[i]};
    rep.fronthaul[i] = {load[i] <= inst.fronthaul_caps_[i] * (1.0 + 1e-12), load[i],
                        inst.fronthaul_caps_[i]};
    rep.feasible = rep.feasible && rep.power[i].pass && rep.fronthaul[i].pass;
  }

  rep.rate.resize(model.size());
  for (int p = 0; p < model.size(); ++p) {
    const double r = rate_lower_bound(model, beams, p);
    rep.rate[p] = {r >= model.rate_target[p] - rate_tol, r, model.rate_target[p]};
    rep.feasible = rep.feasible && rep.rate[p].pass;
    rep.max_rate_excess = std::max(rep.max_rate_excess, r - model.rate_target[p]);
  }
  return rep;
}

}  // namespace cranplan
