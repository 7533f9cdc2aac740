// SPDX-License-Identifier: Apache-2.0
//
// Small-scale channels, uplink training with pilot contamination, MMSE
// estimates with per-antenna error variances, and the aggregated
// vectors/matrices feeding the rate lower bound and the SDP.
#pragma once

#include <utility>
#include <vector>

#include "cranplan/pilot_alloc.hpp"
#include "cranplan/topology.hpp"

namespace cranplan {

// True channels h_{i,k} = sqrt(alpha_{i,k}) * CN(0, I_M) for every pair.
struct ChannelRealization {
  int num_rrh = 0;
  int num_ue = 0;
  int antennas = 0;
  std::vector<VecC> h;  // index k * num_rrh + i

  const VecC& get(int rrh, int ue) const { return h[ue * num_rrh + rrh]; }
  VecC& get(int rrh, int ue) { return h[ue * num_rrh + rrh]; }
};

// MMSE estimates for admitted UEs on their own clusters; delta holds the
// matching per-antenna error variances and is zero where no estimate exists.
struct ChannelEstimate {
  int num_rrh = 0;
  int num_ue = 0;
  int antennas = 0;
  double sigma_hat2 = 0.0;  // sigma^2 / p_t
  std::vector<VecC> h_hat;  // index k * num_rrh + i; empty when absent
  MatD delta;               // K x I

  bool has(int rrh, int ue) const { return h_hat[ue * num_rrh + rrh].size() > 0; }
  const VecC& get(int rrh, int ue) const { return h_hat[ue * num_rrh + rrh]; }
};

// Aggregates for the admitted UE set, aligned by position in `ues`.
struct RateModel {
  std::vector<int> ues;  // admitted UE ids, sorted
  int antennas = 1;
  double prefactor = 0.99;                // (T - tau) / T
  std::vector<std::vector<int>> cluster;  // per position, serving RRHs in cluster order
  std::vector<VecC> g_hat;                // stacked intra-cluster estimate, |I_k| M
  std::vector<VecD> error_var;            // per position, per-cluster-slot delta (|I_k| values)
  std::vector<double> eta_min;            // SINR targets
  std::vector<double> rate_target;        // R_k,min
  std::vector<double> noise_power;        // sigma_k^2
  std::vector<MatC> cross;                // cross[l * n + k] = A_{l,k}, dim |I_l| M

  int size() const { return static_cast<int>(ues.size()); }
  int index_of(int ue) const;
  int block_dim(int pos) const { return static_cast<int>(cluster[pos].size()) * antennas; }
  const MatC& a(int l_pos, int k_pos) const { return cross[l_pos * size() + k_pos]; }
  // position of RRH i inside UE pos's cluster, -1 if not serving
  int cluster_slot(int pos, int rrh) const;
};

ChannelRealization draw_channels(const NetworkInstance& inst, Rng& rng);

// Uplink training per Eq.-(3) form (post de-spreading): one shared noise draw
// per (RRH, pilot) pair, MMSE scaling, error variances.
ChannelEstimate estimate_channels(const ChannelRealization& realization,
                                  const PilotAssignment& assignment, const NetworkInstance& inst,
                                  Rng& rng);

// Intra-cluster CSI taken as exactly known (delta = 0).
ChannelEstimate perfect_estimate(const ChannelRealization& realization,
                                 const PilotAssignment& assignment, const NetworkInstance& inst);

// ignore_estimation_error builds the nonrobust model: every delta treated as
// zero in E_{k,k} and in the intra-cluster diagonal of A_{l,k}.
RateModel build_rate_model(const ChannelEstimate& estimate, const PilotAssignment& assignment,
                           const NetworkInstance& inst, bool ignore_estimation_error = false);

// Same aggregates restricted to a subset of the model's UEs.
RateModel restrict_model(const RateModel& model, const std::vector<int>& ues);

// Conservative rate lower bound for the UE at `pos`; beams aligned with
// model.ues.
double rate_lower_bound(const RateModel& model, const std::vector<VecC>& beams, int pos);

// Instantaneous rates with true channels and full interference.
std::vector<double> actual_rate(const ChannelRealization& realization,
                                const NetworkInstance& inst, const std::vector<int>& ues,
                                const std::vector<VecC>& beams);

// Draw a true-channel realization consistent with the estimates: estimated
// entries get h_hat + CN(0, delta I), everything else is a fresh draw.
ChannelRealization conditional_redraw(const ChannelEstimate& estimate,
                                      const NetworkInstance& inst, Rng& rng);

// Monte-Carlo mean and standard error of the actual rate over estimation
// error and inter-cluster fading, with estimates held fixed.
std::pair<std::vector<double>, std::vector<double>> expected_rate_mc(
    const ChannelEstimate& estimate, const NetworkInstance& inst, const std::vector<int>& ues,
    const std::vector<VecC>& beams, int samples, Rng& rng);

}  // namespace cranplan
