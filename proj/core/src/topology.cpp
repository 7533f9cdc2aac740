// SPDX-License-Identifier: Apache-2.0
#include "cranplan/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cranplan {

namespace {
constexpr double kMinSeparationM = 1.0;  // path-loss model diverges at d -> 0

double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}
}  // namespace

void NetworkConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (area_side_m <= 0) fail("area_side_m must be positive");
  if (num_rrh < 1) fail("num_rrh must be >= 1");
  if (num_ue < 1) fail("num_ue must be >= 1");
  if (antennas_per_rrh < 1) fail("antennas_per_rrh must be >= 1");
  if (cluster_size < 1 || cluster_size > num_rrh) fail("cluster_size must be in [1, num_rrh]");
  if (pilot_budget < 1) fail("pilot_budget must be >= 1");
  if (max_reuse < 1) fail("max_reuse must be >= 1");
  if (pilot_power_w <= 0) fail("pilot_power_w must be positive");
  if (bandwidth_hz <= 0) fail("bandwidth_hz must be positive");
  if (per_rrh_power_w <= 0) fail("per_rrh_power_w must be positive");
  if (training_fraction <= 0 || training_fraction >= 1) fail("training_fraction must be in (0,1)");
  if (rate_target_range[0] > rate_target_range[1]) fail("rate_target_range must be ordered");
  if (fronthaul_range[0] > fronthaul_range[1]) fail("fronthaul_range must be ordered");
  if (shadowing_std_db < 0) fail("shadowing_std_db must be nonnegative");
}

double large_scale_gain(double distance_km, double exponent, double shadow_db) {
  if (!(distance_km > 0)) throw std::domain_error("large_scale_gain: distance must be positive");
  const double pl_db = 148.1 + 10.0 * exponent * std::log10(distance_km) + shadow_db;
  return std::pow(10.0, -pl_db / 10.0);
}

std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>> form_clusters(
    const std::vector<Point2>& rrh_positions, const std::vector<Point2>& ue_positions, int L) {
  const int I = static_cast<int>(rrh_positions.size());
  const int K = static_cast<int>(ue_positions.size());
  if (L < 1 || L > I) throw std::invalid_argument("form_clusters: L must be in [1, num_rrh]");

  std::vector<std::vector<int>> clusters(K);
  std::vector<std::vector<int>> served(I);
  std::vector<int> order(I);
  for (int k = 0; k < K; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(I);
    for (int i = 0; i < I; ++i) dist[i] = distance(ue_positions[k], rrh_positions[i]);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (dist[a] != dist[b]) return dist[a] < dist[b];
      return a < b;
    });
    clusters[k].assign(order.begin(), order.begin() + L);
    for (int i : clusters[k]) served[i].push_back(k);
  }
  for (auto& s : served) std::sort(s.begin(), s.end());
  return {std::move(clusters), std::move(served)};
}

NetworkInstance generate_network(const NetworkConfig& config) {
  Rng rng(config.rng_seed);
  return generate_network(config, rng);
}

NetworkInstance generate_network(const NetworkConfig& config, Rng& rng) {
  config.validate();
  const int I = config.num_rrh;
  const int K = config.num_ue;

  NetworkInstance inst;
  inst.config = config;

  std::uniform_real_distribution<double> uni(0.0, config.area_side_m);
  inst.rrh_positions.resize(I);
  for (auto& p : inst.rrh_positions) {
    p.x = uni(rng);
    p.y = uni(rng);
  }
  inst.ue_positions.resize(K);
  for (auto& p : inst.ue_positions) {
    // resample until the minimum separation to every RRH holds
    for (;;) {
      p.x = uni(rng);
      p.y = uni(rng);
      bool ok = true;
      for (const auto& r : inst.rrh_positions) {
        if (distance(p, r) < kMinSeparationM) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
  }

  std::normal_distribution<double> shadow(0.0, config.shadowing_std_db);
  inst.alpha.resize(K, I);
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < I; ++i) {
      const double d_km = distance(inst.ue_positions[k], inst.rrh_positions[i]) / 1000.0;
      const double sh = config.shadowing_std_db > 0 ? shadow(rng) : 0.0;
      inst.alpha(k, i) = large_scale_gain(d_km, config.path_loss_exponent, sh);
    }
  }

  std::tie(inst.clusters, inst.served_sets) =
      form_clusters(inst.rrh_positions, inst.ue_positions, config.cluster_size);

  const double sigma2 = dbm_to_watt(config.noise_psd_dbm_hz) * config.bandwidth_hz;
  inst.noise_power_w.assign(K, sigma2);

  std::uniform_real_distribution<double> rate_dist(config.rate_target_range[0],
                                                   config.rate_target_range[1]);
  inst.rate_targets.resize(K);
  for (auto& r : inst.rate_targets)
    r = (config.rate_target_range[0] == config.rate_target_range[1]) ? config.rate_target_range[0]
                                                                     : rate_dist(rng);

  std::uniform_real_distribution<double> fh_dist(config.fronthaul_range[0],
                                                 config.fronthaul_range[1]);
  inst.fronthaul_caps_.resize(I);
  for (auto& c : inst.fronthaul_caps_)
    c = (config.fronthaul_range[0] == config.fronthaul_range[1]) ? config.fronthaul_range[0]
                                                                 : fh_dist(rng);

  inst.power_caps.assign(I, config.per_rrh_power_w);
  return inst;
}

}  // namespace cranplan
