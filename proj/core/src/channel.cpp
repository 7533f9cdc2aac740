// SPDX-License-Identifier: Apache-2.0
#include "cranplan/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cranplan {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

VecC complex_gaussian(int m, double variance_per_entry, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double s = std::sqrt(variance_per_entry) * kInvSqrt2;
  VecC v(m);
  for (int j = 0; j < m; ++j) {
    const double re = n01(rng);
    const double im = n01(rng);
    v(j) = cxd(s * re, s * im);
  }
  return v;
}

}  // namespace

int RateModel::index_of(int ue) const {
  const auto it = std::lower_bound(ues.begin(), ues.end(), ue);
  if (it == ues.end() || *it != ue) return -1;
  return static_cast<int>(it - ues.begin());
}

int RateModel::cluster_slot(int pos, int rrh) const {
  const auto& cl = cluster[pos];
  for (std::size_t j = 0; j < cl.size(); ++j)
    if (cl[j] == rrh) return static_cast<int>(j);
  return -1;
}

ChannelRealization draw_channels(const NetworkInstance& inst, Rng& rng) {
  ChannelRealization out;
  out.num_rrh = inst.num_rrh();
  out.num_ue = inst.num_ue();
  out.antennas = inst.config.antennas_per_rrh;
  out.h.resize(static_cast<std::size_t>(out.num_ue) * out.num_rrh);
  for (int k = 0; k < out.num_ue; ++k)
    for (int i = 0; i < out.num_rrh; ++i)
      out.get(i, k) = complex_gaussian(out.antennas, inst.gain(i, k), rng);
  return out;
}

ChannelEstimate estimate_channels(const ChannelRealization& realization,
                                  const PilotAssignment& assignment, const NetworkInstance& inst,
                                  Rng& rng) {
  ChannelEstimate out;
  out.num_rrh = inst.num_rrh();
  out.num_ue = inst.num_ue();
  out.antennas = realization.antennas;
  out.sigma_hat2 = inst.noise_power_w[0] / inst.config.pilot_power_w;
  out.h_hat.resize(static_cast<std::size_t>(out.num_ue) * out.num_rrh);
  out.delta = MatD::Zero(out.num_ue, out.num_rrh);

  // C1 makes the clusters of co-pilot UEs disjoint, so each (RRH, pilot)
  // projection below is formed exactly once.
  for (const auto& cls : assignment.reuse_classes) {
    if (cls.empty()) continue;
    for (int k : cls) {
      for (int i : inst.clusters[k]) {
        VecC y = realization.get(i, k);
        double alpha_sum = inst.gain(i, k);
        double interf_sum = 0.0;
        for (int l : cls) {
          if (l == k) continue;
          y += realization.get(i, l);
          alpha_sum += inst.gain(i, l);
          interf_sum += inst.gain(i, l);
        }
        y += complex_gaussian(out.antennas, out.sigma_hat2, rng);
        const double denom = alpha_sum + out.sigma_hat2;
        const double a = inst.gain(i, k);
        out.h_hat[static_cast<std::size_t>(k) * out.num_rrh + i] = (a / denom) * y;
        out.delta(k, i) = a * (interf_sum + out.sigma_hat2) / denom;
      }
    }
  }
  return out;
}

ChannelEstimate perfect_estimate(const ChannelRealization& realization,
                                 const PilotAssignment& assignment, const NetworkInstance& inst) {
  ChannelEstimate out;
  out.num_rrh = inst.num_rrh();
  out.num_ue = inst.num_ue();
  out.antennas = realization.antennas;
  out.sigma_hat2 = 0.0;
  out.h_hat.resize(static_cast<std::size_t>(out.num_ue) * out.num_rrh);
  out.delta = MatD::Zero(out.num_ue, out.num_rrh);
  for (int k : assignment.admitted)
    for (int i : inst.clusters[k])
      out.h_hat[static_cast<std::size_t>(k) * out.num_rrh + i] = realization.get(i, k);
  return out;
}

RateModel build_rate_model(const ChannelEstimate& estimate, const PilotAssignment& assignment,
                           const NetworkInstance& inst, bool ignore_estimation_error) {
  RateModel model;
  model.ues = assignment.admitted;
  std::sort(model.ues.begin(), model.ues.end());
  const int n = model.size();
  const int M = inst.config.antennas_per_rrh;
  model.antennas = M;
  model.prefactor = 1.0 - inst.config.training_fraction;

  model.cluster.resize(n);
  model.g_hat.resize(n);
  model.error_var.resize(n);
  model.eta_min.resize(n);
  model.rate_target.resize(n);
  model.noise_power.resize(n);

  for (int p = 0; p < n; ++p) {
    const int k = model.ues[p];
    model.cluster[p] = inst.clusters[k];
    const int L = static_cast<int>(model.cluster[p].size());
    model.g_hat[p].resize(L * M);
    model.error_var[p].resize(L);
    for (int j = 0; j < L; ++j) {
      const int i = model.cluster[p][j];
      if (!estimate.has(i, k))
        throw std::invalid_argument("build_rate_model: missing estimate for admitted UE");
      model.g_hat[p].segment(j * M, M) = estimate.get(i, k);
      model.error_var[p](j) = ignore_estimation_error ? 0.0 : estimate.delta(k, i);
    }
    model.rate_target[p] = inst.rate_targets[k];
    model.noise_power[p] = inst.noise_power_w[k];
    model.eta_min[p] = std::pow(2.0, model.rate_target[p] / model.prefactor) - 1.0;
  }

  // A_{l,k}: covariance of the aggregated channel from cluster I_l to UE k
  model.cross.resize(static_cast<std::size_t>(n) * n);
  for (int lp = 0; lp < n; ++lp) {
    const auto& cl = model.cluster[lp];
    const int dim = static_cast<int>(cl.size()) * M;
    for (int kp = 0; kp < n; ++kp) {
      if (lp == kp) continue;
      const int k = model.ues[kp];
      MatC a = MatC::Zero(dim, dim);
      for (std::size_t bi = 0; bi < cl.size(); ++bi) {
        const int si = cl[bi];
        const int slot_i = model.cluster_slot(kp, si);
        for (std::size_t bj = 0; bj < cl.size(); ++bj) {
          const int sj = cl[bj];
          const int slot_j = model.cluster_slot(kp, sj);
          if (slot_i >= 0 && slot_j >= 0) {
            const VecC& hi = estimate.get(si, k);
            const VecC& hj = estimate.get(sj, k);
            MatC blk = hi * hj.adjoint();
            if (bi == bj && !ignore_estimation_error)
              blk += estimate.delta(k, si) * MatC::Identity(M, M);
            a.block(bi * M, bj * M, M, M) = blk;
          } else if (bi == bj && slot_i < 0) {
            a.block(bi * M, bj * M, M, M) = inst.gain(si, k) * MatC::Identity(M, M);
          }
        }
      }
      model.cross[static_cast<std::size_t>(lp) * n + kp] = std::move(a);
    }
  }
  return model;
}

RateModel restrict_model(const RateModel& model, const std::vector<int>& ues) {
  std::vector<int> keep = ues;
  std::sort(keep.begin(), keep.end());
  const int n = static_cast<int>(keep.size());
  RateModel out;
  out.ues = keep;
  out.antennas = model.antennas;
  out.prefactor = model.prefactor;
  out.cluster.resize(n);
  out.g_hat.resize(n);
  out.error_var.resize(n);
  out.eta_min.resize(n);
  out.rate_target.resize(n);
  out.noise_power.resize(n);
  out.cross.resize(static_cast<std::size_t>(n) * n);
  std::vector<int> src(n);
  for (int p = 0; p < n; ++p) {
    src[p] = model.index_of(keep[p]);
    if (src[p] < 0) throw std::invalid_argument("restrict_model: UE not in model");
    out.cluster[p] = model.cluster[src[p]];
    out.g_hat[p] = model.g_hat[src[p]];
    out.error_var[p] = model.error_var[src[p]];
    out.eta_min[p] = model.eta_min[src[p]];
    out.rate_target[p] = model.rate_target[src[p]];
    out.noise_power[p] = model.noise_power[src[p]];
  }
  for (int lp = 0; lp < n; ++lp)
    for (int kp = 0; kp < n; ++kp)
      if (lp != kp)
        out.cross[static_cast<std::size_t>(lp) * n + kp] = model.a(src[lp], src[kp]);
  return out;
}

double rate_lower_bound(const RateModel& model, const std::vector<VecC>& beams, int pos) {
  const int M = model.antennas;
  const VecC& w = beams[pos];
  const cxd sig = model.g_hat[pos].dot(w);  // conjugate-linear in first argument
  const double signal = std::norm(sig);
  double den = model.noise_power[pos];
  for (int j = 0; j < static_cast<int>(model.cluster[pos].size()); ++j)
    den += model.error_var[pos](j) * w.segment(j * M, M).squaredNorm();
  for (int lp = 0; lp < model.size(); ++lp) {
    if (lp == pos || beams[lp].size() == 0) continue;
    den += (beams[lp].adjoint() * model.a(lp, pos) * beams[lp]).real()(0);
  }
  return model.prefactor * std::log2(1.0 + signal / den);
}

std::vector<double> actual_rate(const ChannelRealization& realization,
                                const NetworkInstance& inst, const std::vector<int>& ues,
                                const std::vector<VecC>& beams) {
  const int M = realization.antennas;
  const double prefactor = 1.0 - inst.config.training_fraction;
  const int n = static_cast<int>(ues.size());
  std::vector<double> rates(n, 0.0);
  for (int p = 0; p < n; ++p) {
    const int k = ues[p];
    cxd sig = 0.0;
    {
      const auto& cl = inst.clusters[k];
      for (std::size_t j = 0; j < cl.size(); ++j)
        sig += realization.get(cl[j], k).dot(beams[p].segment(j * M, M));
    }
    double den = inst.noise_power_w[k];
    for (int lp = 0; lp < n; ++lp) {
      if (lp == p || beams[lp].size() == 0) continue;
      const auto& cl = inst.clusters[ues[lp]];
      cxd interf = 0.0;
      for (std::size_t j = 0; j < cl.size(); ++j)
        interf += realization.get(cl[j], k).dot(beams[lp].segment(j * M, M));
      den += std::norm(interf);
    }
    rates[p] = prefactor * std::log2(1.0 + std::norm(sig) / den);
  }
  return rates;
}

ChannelRealization conditional_redraw(const ChannelEstimate& estimate,
                                      const NetworkInstance& inst, Rng& rng) {
  ChannelRealization out;
  out.num_rrh = inst.num_rrh();
  out.num_ue = inst.num_ue();
  out.antennas = estimate.antennas;
  out.h.resize(static_cast<std::size_t>(out.num_ue) * out.num_rrh);
  for (int k = 0; k < out.num_ue; ++k) {
    for (int i = 0; i < out.num_rrh; ++i) {
      if (estimate.has(i, k)) {
        VecC v = estimate.get(i, k);
        const double d = estimate.delta(k, i);
        if (d > 0) v += complex_gaussian(out.antennas, d, rng);
        out.get(i, k) = std::move(v);
      } else {
        out.get(i, k) = complex_gaussian(out.antennas, inst.gain(i, k), rng);
      }
    }
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> expected_rate_mc(
    const ChannelEstimate& estimate, const NetworkInstance& inst, const std::vector<int>& ues,
    const std::vector<VecC>& beams, int samples, Rng& rng) {
  const int n = static_cast<int>(ues.size());
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
  for (int s = 0; s < samples; ++s) {
    const ChannelRealization draw = conditional_redraw(estimate, inst, rng);
    const std::vector<double> r = actual_rate(draw, inst, ues, beams);
    for (int p = 0; p < n; ++p) {
      sum[p] += r[p];
      sumsq[p] += r[p] * r[p];
    }
  }
  std::vector<double> mean(n, 0.0), stderr_(n, 0.0);
  for (int p = 0; p < n; ++p) {
    mean[p] = sum[p] / samples;
    const double var = std::max(0.0, sumsq[p] / samples - mean[p] * mean[p]);
    stderr_[p] = std::sqrt(var / samples);
  }
  return {std::move(mean), std::move(stderr_)};
}

}  // namespace cranplan
