// SPDX-License-Identifier: Apache-2.0
//
// Stage II: successive convex approximation over the SDP relaxation, with
// fronthaul smoothing through the fractional function, slack-driven UE
// admission, rank-one beam extraction, power polishing that drives every
// admitted rate onto its target, and full-constraint verification.
#pragma once

#include <utility>
#include <vector>

#include "cranplan/channel.hpp"
#include "cranplan/conic_sdp.hpp"

namespace cranplan {

// f_theta(y) = y / (y + theta) and its derivative; y must be nonnegative.
std::pair<double, double> fractional_smooth(double y, double theta);

struct ScaOptions {
  double gamma = 1e5;       // admission penalty (applies to noise-normalized slack)
  double theta = 1e-5;      // fronthaul smoothing parameter (W)
  double tolerance = 1e-5;  // relative objective stop
  int max_iterations = 50;
  double eps_active = 1e-8;  // hard-indicator threshold on ||w_{i,k}||^2 (W)
  SolverOptions solver;
};

struct ScaTracePoint {
  int iteration = 0;
  double objective = 0.0;  // tr-power plus penalty, normalized slack units
  double max_slack = 0.0;  // max_k x_k in natural (watt) units
};

struct ScaResult {
  std::vector<VecC> beams;  // aligned with model.ues
  VecD slack;               // x_k, natural units
  std::vector<ScaTracePoint> trace;
  int iterations = 0;
  double objective = 0.0;
  double rank_ratio_max = 0.0;
  int rank_flagged = 0;  // solves with lambda2/lambda1 above 1e-6
  int solves = 0;
  bool aborted = false;
};

// Builds the per-iteration SDP from the model state. tau_weights and
// fronthaul_budget are the linearized fronthaul coefficients; an infinite
// budget drops the row.
SdpProblem assemble_sdp(const RateModel& model, const NetworkInstance& inst,
                        const std::vector<VecD>& tau_weights, const VecD& fronthaul_budget,
                        double gamma);

// Algorithm-style SCA loop on the model's UE set: w(0) = 0, slacks start at
// their feasible ceiling, iterate linearize-solve-extract until the relative
// objective change drops below tolerance.
ScaResult sca_solve(const RateModel& model, const NetworkInstance& inst,
                    const ScaOptions& options = {});

struct RankOneExtraction {
  VecC w;
  double ratio = 0.0;  // lambda2 / lambda1
  bool flagged = false;
};

// Principal eigenpair scaled to the block trace; the global phase makes the
// first nonzero entry real nonnegative.
RankOneExtraction extract_rank_one(const MatC& w_matrix);

struct StageTwoDiagnostics {
  int sca_runs = 0;
  int total_sca_iterations = 0;
  std::vector<int> removed;  // UE ids in removal order
  double rank_ratio_max = 0.0;
  int rank_flagged = 0;
  int solves = 0;
  bool aborted = false;
};

struct BeamformingSolution {
  std::vector<int> admitted;      // sorted UE ids
  std::vector<VecC> beams;        // aligned with admitted
  VecD slack;                     // final x_k
  std::vector<double> rates;      // rate lower bounds
  std::vector<double> rrh_power;  // per RRH transmit power
  std::vector<double> rrh_load;   // per RRH fronthaul load (hard indicator)
  std::vector<ScaTracePoint> trace;  // last SCA trace
  StageTwoDiagnostics diagnostics;
};

// Slack-driven admission: run the SCA, drop the UE with the largest slack,
// rebuild the restricted model, repeat until the slacks vanish. eps_slack < 0
// selects the default 1e-6 * min_k(eta_k sigma_k^2).
BeamformingSolution select_ues_stage2(const RateModel& model, const NetworkInstance& inst,
                                      const ScaOptions& options = {}, double eps_slack = -1.0);

struct PolishResult {
  std::vector<VecC> beams;
  int iterations = 0;
  bool converged = true;  // false when a scaling step was rejected
};

// Iterative group scaling: UEs with rate slack are shrunk by sqrt(kappa)
// until every admitted rate sits on its target. Never increases any beam
// power; a step that would push a UE below target is rejected and ends the
// loop.
PolishResult polish_power(const RateModel& model, std::vector<VecC> beams,
                          double rate_tol = 1e-4, int max_iterations = 100);

struct ConstraintCheck {
  bool pass = true;
  double value = 0.0;
  double limit = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<ConstraintCheck> power;      // per RRH
  std::vector<ConstraintCheck> fronthaul;  // per RRH, hard indicator form
  std::vector<ConstraintCheck> rate;       // per admitted UE
  double max_rate_excess = 0.0;            // max (r - R) over admitted
};

FeasibilityReport verify_solution(const RateModel& model, const NetworkInstance& inst,
                                  const std::vector<VecC>& beams, double eps_active = 1e-8,
                                  double rate_tol = 1e-3);

// Per-RRH transmit power and hard-indicator fronthaul load for beams aligned
// with model.ues.
std::pair<std::vector<double>, std::vector<double>> rrh_power_and_load(
    const RateModel& model, const NetworkInstance& inst, const std::vector<VecC>& beams,
    double eps_active);

}  // namespace cranplan
