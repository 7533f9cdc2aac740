// SPDX-License-Identifier: Apache-2.0
//
// Random dense C-RAN instance generation: RRH/UE placement on a square,
// large-scale fading with lognormal shadowing, nearest-L user-centric
// clusters, and the per-instance power/fronthaul/rate budgets.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cranplan/common.hpp"

namespace cranplan {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct NetworkConfig {
  double area_side_m = 400.0;
  int num_rrh = 14;        // I
  int num_ue = 8;          // K
  int antennas_per_rrh = 2;  // M
  int cluster_size = 3;    // L
  int pilot_budget = 4;    // tau
  int max_reuse = 2;       // n_max
  double pilot_power_w = 0.2;
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 20e6;
  double per_rrh_power_w = 0.1;
  std::array<double, 2> rate_target_range = {3.0, 5.0};   // bit/s/Hz
  std::array<double, 2> fronthaul_range = {5.0, 10.0};    // bit/s/Hz
  double path_loss_exponent = 3.76;
  double shadowing_std_db = 8.0;
  double training_fraction = 0.01;  // tau/T
  std::uint64_t rng_seed = 1;

  // throws std::invalid_argument on violated invariants
  void validate() const;
};

struct NetworkInstance {
  NetworkConfig config;
  std::vector<Point2> rrh_positions;
  std::vector<Point2> ue_positions;
  MatD alpha;  // K x I, alpha(k, i) = large-scale gain RRH i -> UE k
  std::vector<std::vector<int>> clusters;     // per UE, RRHs ordered by distance
  std::vector<std::vector<int>> served_sets;  // per RRH, UE indices ascending
  std::vector<double> noise_power_w;          // sigma_k^2
  std::vector<double> rate_targets;           // R_k,min
  std::vector<double> fronthaul_caps_;        // C_i,max
  std::vector<double> power_caps;             // P_i,max

  int num_rrh() const { return static_cast<int>(rrh_positions.size()); }
  int num_ue() const { return static_cast<int>(ue_positions.size()); }
  double gain(int rrh, int ue) const { return alpha(ue, rrh); }
};

// 148.1 + 10*exponent*log10(d_km) + shadow_db path loss, returned as linear gain.
// distance must be positive.
double large_scale_gain(double distance_km, double exponent, double shadow_db);

// Nearest-L clusters; ties broken toward the lower RRH index. Also returns the
// inverse served-set relation.
std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>> form_clusters(
    const std::vector<Point2>& rrh_positions, const std::vector<Point2>& ue_positions, int L);

NetworkInstance generate_network(const NetworkConfig& config);
NetworkInstance generate_network(const NetworkConfig& config, Rng& rng);

}  // namespace cranplan
