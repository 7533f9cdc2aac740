// SPDX-License-Identifier: Apache-2.0
//
// Standard-form SDP solver for the beamforming subproblems: minimize
// sum_k tr(W_k) + gamma * sum_k x_k over Hermitian PSD blocks W_k and
// nonnegative scalars x_k, subject to linear trace inequalities (per-RRH
// power caps, per-UE SINR rows carrying the slack, per-RRH fronthaul caps).
//
// The backend is an in-tree primal-dual interior-point method (Mehrotra
// predictor-corrector, HKM direction) working directly on the complex
// Hermitian blocks; inequalities become equalities through nonnegative
// row slacks handled as 1x1 blocks.
#pragma once

#include <vector>

#include "cranplan/common.hpp"

namespace cranplan {

struct TraceTerm {
  int block = 0;
  MatC mat;  // Hermitian coefficient
};

// sum_k tr(W_k mat_k) <= rhs
struct CapRow {
  std::vector<TraceTerm> terms;
  double rhs = 0.0;
};

// sum_l tr(W_l mat_l) + x >= rhs, one slack x per row
struct SinrRow {
  std::vector<TraceTerm> terms;
  double rhs = 0.0;
};

struct SdpProblem {
  std::vector<int> block_dims;
  double gamma = 1.0;  // objective penalty on each slack
  std::vector<CapRow> power_rows;
  std::vector<SinrRow> sinr_rows;
  std::vector<CapRow> fronthaul_rows;

  int num_rows() const {
    return static_cast<int>(power_rows.size() + sinr_rows.size() + fronthaul_rows.size());
  }
  void validate() const;  // throws std::invalid_argument on bad dims / non-Hermitian data
};

enum class SolveStatus { optimal, infeasible, numerical_limit };

struct Residuals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double compl_slack = 0.0;
};

struct ConicSolution {
  std::vector<MatC> w;  // Hermitian PSD blocks
  VecD x;               // slacks, aligned with sinr_rows
  VecD lambda;          // power duals, >= 0
  VecD mu;              // SINR duals, >= 0
  VecD nu;              // fronthaul duals, >= 0
  VecD omega;           // duals of x >= 0
  std::vector<MatC> z;  // dual blocks from the solver
  SolveStatus status = SolveStatus::numerical_limit;
  Residuals residuals;
  int iterations = 0;
  double objective = 0.0;
  double dual_objective = 0.0;
};

struct SolverOptions {
  double feas_target = 1e-10;  // internal stopping targets
  double gap_target = 1e-10;
  double accept_feas = 1e-7;   // certification thresholds for status = optimal
  double accept_gap = 1e-7;
  double accept_compl = 1e-6;
  int max_iterations = 100;
  double step_fraction = 0.98;
};

ConicSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

struct KktReport {
  double stationarity = 0.0;
  double primal_feasibility = 0.0;
  double dual_feasibility = 0.0;
  double complementary_slackness = 0.0;
  double max_violation = 0.0;
};

// Recomputes the first-order conditions from (problem, solution): gradient
// identity for the dual blocks, feasibility on both sides, complementary
// slackness of rows, blocks, and scalar bounds.
KktReport check_kkt(const SdpProblem& problem, const ConicSolution& solution);

}  // namespace cranplan
