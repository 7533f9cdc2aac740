// SPDX-License-Identifier: Apache-2.0
#include "cranplan/pilot_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cranplan {

namespace {

ConflictGraph restrict_graph(const ConflictGraph& graph, const std::vector<int>& active) {
  ConflictGraph out;
  out.b = graph.b;
  out.active = active;
  return out;
}

std::vector<int> active_without(const std::vector<int>& active, int removed) {
  std::vector<int> out;
  out.reserve(active.size() - 1);
  for (int k : active)
    if (k != removed) out.push_back(k);
  return out;
}

}  // namespace

ConflictGraph build_conflict_matrix(const NetworkInstance& inst, const std::vector<int>& active) {
  const int K = inst.num_ue();
  ConflictGraph graph;
  graph.b = Eigen::MatrixXi::Zero(K, K);
  graph.active = active;
  std::sort(graph.active.begin(), graph.active.end());

  // cluster membership bitmap per UE for O(L) intersection tests
  std::vector<std::vector<char>> in_cluster(K, std::vector<char>(inst.num_rrh(), 0));
  for (int k : graph.active)
    for (int i : inst.clusters[k]) in_cluster[k][i] = 1;

  for (std::size_t a = 0; a < graph.active.size(); ++a) {
    for (std::size_t b = a + 1; b < graph.active.size(); ++b) {
      const int k = graph.active[a];
      const int kp = graph.active[b];
      bool shared = false;
      for (int i : inst.clusters[k]) {
        if (in_cluster[kp][i]) {
          shared = true;
          break;
        }
      }
      if (shared) {
        graph.b(k, kp) = 1;
        graph.b(kp, k) = 1;
      }
    }
  }
  return graph;
}

double contamination_metric(const NetworkInstance& inst, int k, int kp) {
  if (k == kp) throw std::invalid_argument("contamination_metric: k != k' required");
  double cross_k = 0.0, own_k = 0.0, cross_kp = 0.0, own_kp = 0.0;
  for (int i : inst.clusters[kp]) cross_k += inst.gain(i, k);
  for (int i : inst.clusters[k]) own_k += inst.gain(i, k);
  for (int i : inst.clusters[k]) cross_kp += inst.gain(i, kp);
  for (int i : inst.clusters[kp]) own_kp += inst.gain(i, kp);
  return std::log(1.0 + cross_k / own_k) + std::log(1.0 + cross_kp / own_kp);
}

MatD contamination_matrix(const NetworkInstance& inst) {
  const int K = inst.num_ue();
  MatD eta = MatD::Zero(K, K);
  for (int k = 0; k < K; ++k) {
    for (int kp = k + 1; kp < K; ++kp) {
      eta(k, kp) = contamination_metric(inst, k, kp);
      eta(kp, k) = eta(k, kp);
    }
  }
  return eta;
}

Coloring dsatur_color(const ConflictGraph& graph, int n_max) {
  const int K = graph.num_ues();
  Coloring result;
  result.color_of.assign(K, -1);
  if (graph.active.empty()) return result;

  std::vector<int> degree(K, 0);
  for (int k : graph.active)
    for (int kp : graph.active)
      if (graph.edge(k, kp)) ++degree[k];

  std::vector<std::vector<char>> neighbor_has(K);  // per vertex, colors seen next door
  std::vector<int> saturation(K, 0);
  std::vector<int> class_size;
  std::vector<char> colored(K, 0);

  const int n = static_cast<int>(graph.active.size());
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int k : graph.active) {
      if (colored[k]) continue;
      if (pick < 0 || saturation[k] > saturation[pick] ||
          (saturation[k] == saturation[pick] && degree[k] > degree[pick]))
        pick = k;
    }

    // smallest color not used by a neighbor and not at capacity
    int c = 0;
    const auto& seen = neighbor_has[pick];
    for (;; ++c) {
      const bool used_nearby = c < static_cast<int>(seen.size()) && seen[c];
      const bool full = c < static_cast<int>(class_size.size()) && class_size[c] >= n_max;
      if (!used_nearby && !full) break;
    }
    if (c >= static_cast<int>(class_size.size())) class_size.resize(c + 1, 0);
    ++class_size[c];
    result.color_of[pick] = c;
    colored[pick] = 1;

    for (int kp : graph.active) {
      if (colored[kp] || !graph.edge(pick, kp)) continue;
      auto& seen_kp = neighbor_has[kp];
      if (c >= static_cast<int>(seen_kp.size())) seen_kp.resize(c + 1, 0);
      if (!seen_kp[c]) {
        seen_kp[c] = 1;
        ++saturation[kp];
      }
    }
  }
  result.num_colors = static_cast<int>(class_size.size());
  return result;
}

PilotAssignment assignment_from_coloring(const Coloring& coloring,
                                         const std::vector<int>& active) {
  PilotAssignment out;
  out.admitted = active;
  std::sort(out.admitted.begin(), out.admitted.end());
  out.pilot_of.assign(coloring.color_of.size(), -1);
  out.reuse_classes.assign(coloring.num_colors, {});
  for (int k : out.admitted) {
    const int c = coloring.color_of[k];
    out.pilot_of[k] = c;
    out.reuse_classes[c].push_back(k);
  }
  out.num_used = 0;
  for (const auto& cls : out.reuse_classes)
    if (!cls.empty()) ++out.num_used;
  return out;
}

PilotAssignment select_ues_case1(const ConflictGraph& graph, const MatD& eta, int tau,
                                 int n_max) {
  std::vector<int> active = graph.active;
  Coloring coloring = dsatur_color(graph, n_max);

  while (coloring.num_colors > tau && !active.empty()) {
    // theta_k: connections within the current active set
    int best = -1;
    int best_theta = -1;
    double best_xi = -std::numeric_limits<double>::infinity();
    for (int k : active) {
      int theta = 0;
      for (int kp : active)
        if (graph.edge(k, kp)) ++theta;
      double xi = 0.0;  // contamination k keeps inflicting inside its reuse class
      for (int kp : active)
        if (kp != k && coloring.color_of[kp] == coloring.color_of[k]) xi += eta(k, kp);
      if (theta > best_theta || (theta == best_theta && xi > best_xi)) {
        best = k;
        best_theta = theta;
        best_xi = xi;
      }
    }
    active = active_without(active, best);
    coloring = dsatur_color(restrict_graph(graph, active), n_max);
  }
  return assignment_from_coloring(coloring, active);
}

PilotAssignment select_ues_case1(const NetworkInstance& inst, int tau, int n_max) {
  std::vector<int> all(inst.num_ue());
  std::iota(all.begin(), all.end(), 0);
  return select_ues_case1(build_conflict_matrix(inst, all), contamination_matrix(inst), tau,
                          n_max);
}

namespace {

ConflictGraph augment_graph(const ConflictGraph& base, const MatD& eta, double threshold) {
  ConflictGraph out = base;
  for (std::size_t a = 0; a < base.active.size(); ++a) {
    for (std::size_t b = a + 1; b < base.active.size(); ++b) {
      const int k = base.active[a];
      const int kp = base.active[b];
      if (!base.edge(k, kp) && eta(k, kp) > threshold) {
        out.b(k, kp) = 1;
        out.b(kp, k) = 1;
      }
    }
  }
  return out;
}

}  // namespace

PilotAssignment reallocate_case2(const ConflictGraph& graph, const MatD& eta, int tau,
                                 int n_max) {
  constexpr int kBisectionCap = 64;

  PilotAssignment best = assignment_from_coloring(dsatur_color(graph, n_max), graph.active);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool has_free_pair = false;
  for (std::size_t a = 0; a < graph.active.size(); ++a) {
    for (std::size_t b = a + 1; b < graph.active.size(); ++b) {
      const int k = graph.active[a];
      const int kp = graph.active[b];
      lo = std::min(lo, eta(k, kp));
      hi = std::max(hi, eta(k, kp));
      if (!graph.edge(k, kp)) has_free_pair = true;
    }
  }
  if (!has_free_pair || !(lo < hi)) return best;  // nothing to reallocate

  for (int iter = 0; iter < kBisectionCap; ++iter) {
    const double threshold = 0.5 * (lo + hi);
    const Coloring coloring = dsatur_color(augment_graph(graph, eta, threshold), n_max);
    if (coloring.num_colors == tau) return assignment_from_coloring(coloring, graph.active);
    if (coloring.num_colors > tau) {
      lo = threshold;
    } else {
      hi = threshold;
      if (coloring.num_colors > best.num_used)
        best = assignment_from_coloring(coloring, graph.active);
    }
  }
  return best;
}

PilotAssignment reallocate_case2(const NetworkInstance& inst, int tau, int n_max) {
  std::vector<int> all(inst.num_ue());
  std::iota(all.begin(), all.end(), 0);
  return reallocate_case2(build_conflict_matrix(inst, all), contamination_matrix(inst), tau,
                          n_max);
}

PilotAssignment allocate_pilots(const ConflictGraph& graph, const MatD& eta, int tau,
                                int n_max) {
  const Coloring coloring = dsatur_color(graph, n_max);
  if (coloring.num_colors > tau) return select_ues_case1(graph, eta, tau, n_max);
  if (coloring.num_colors < tau) return reallocate_case2(graph, eta, tau, n_max);
  return assignment_from_coloring(coloring, graph.active);
}

PilotAssignment allocate_pilots(const NetworkInstance& inst, int tau, int n_max) {
  std::vector<int> all(inst.num_ue());
  std::iota(all.begin(), all.end(), 0);
  return allocate_pilots(build_conflict_matrix(inst, all), contamination_matrix(inst), tau,
                         n_max);
}

PilotAssignment allocate_baseline(BaselineKind kind, const NetworkInstance& inst, int tau,
                                  int n_max, Rng& rng) {
  const int K = inst.num_ue();
  std::vector<int> all(K);
  std::iota(all.begin(), all.end(), 0);

  if (kind == BaselineKind::ortho) {
    std::vector<int> pool = all;
    std::shuffle(pool.begin(), pool.end(), rng);
    const int m = std::min(tau, K);
    PilotAssignment out;
    out.admitted.assign(pool.begin(), pool.begin() + m);
    std::sort(out.admitted.begin(), out.admitted.end());
    out.pilot_of.assign(K, -1);
    out.reuse_classes.assign(m, {});
    for (int j = 0; j < m; ++j) {
      out.pilot_of[out.admitted[j]] = j;
      out.reuse_classes[j] = {out.admitted[j]};
    }
    out.num_used = m;
    return out;
  }

  const ConflictGraph graph = build_conflict_matrix(inst, all);
  Coloring coloring = dsatur_color(graph, n_max);

  if (kind == BaselineKind::nocase2) {
    if (coloring.num_colors > tau)
      return select_ues_case1(graph, contamination_matrix(inst), tau, n_max);
    return assignment_from_coloring(coloring, all);
  }

  // con: random removal in Case I, no reallocation in Case II
  std::vector<int> active = all;
  while (coloring.num_colors > tau && !active.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, active.size() - 1);
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick(rng)));
    coloring = dsatur_color(restrict_graph(graph, active), n_max);
  }
  return assignment_from_coloring(coloring, active);
}

namespace {

// exact feasibility of coloring `subset` with at most tau capped classes,
// by backtracking with canonical color-introduction pruning
bool feasible_coloring(const ConflictGraph& graph, const std::vector<int>& subset, int tau,
                       int n_max, std::vector<int>& color_out) {
  const int n = static_cast<int>(subset.size());
  std::vector<int> color(n, -1);
  std::vector<int> class_size(tau, 0);

  std::vector<int> stack_color(n, -1);
  int pos = 0;
  int max_used = -1;
  std::vector<int> max_used_at(n + 1, -1);
  max_used_at[0] = -1;

  while (pos >= 0 && pos < n) {
    int c = stack_color[pos] + 1;
    const int limit = std::min(tau - 1, max_used_at[pos] + 1);
    bool placed = false;
    for (; c <= limit; ++c) {
      if (class_size[c] >= n_max) continue;
      bool clash = false;
      for (int q = 0; q < pos; ++q) {
        if (color[q] == c && graph.edge(subset[q], subset[pos])) {
          clash = true;
          break;
        }
      }
      if (!clash) {
        placed = true;
        break;
      }
    }
    if (placed) {
      stack_color[pos] = c;
      color[pos] = c;
      ++class_size[c];
      max_used = std::max(max_used_at[pos], c);
      ++pos;
      max_used_at[pos] = max_used;
      if (pos < n) stack_color[pos] = -1;
    } else {
      stack_color[pos] = -1;
      --pos;
      if (pos >= 0) {
        --class_size[color[pos]];
        color[pos] = -1;
      }
    }
  }
  if (pos < 0) return false;
  color_out = color;
  return true;
}

}  // namespace

std::pair<int, PilotAssignment> exhaustive_stage1(const ConflictGraph& graph, int tau,
                                                  int n_max) {
  const int n = static_cast<int>(graph.active.size());
  if (n > 8 || tau > 4)
    throw std::invalid_argument("exhaustive_stage1: limited to K <= 8 and tau <= 4");

  for (int size = n; size >= 1; --size) {
    // iterate subsets of `size` active UEs in lexicographic order
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      std::vector<int> subset(size);
      for (int j = 0; j < size; ++j) subset[j] = graph.active[idx[j]];
      std::vector<int> colors;
      if (feasible_coloring(graph, subset, tau, n_max, colors)) {
        Coloring coloring;
        coloring.color_of.assign(graph.num_ues(), -1);
        int used = 0;
        for (int j = 0; j < size; ++j) {
          coloring.color_of[subset[j]] = colors[j];
          used = std::max(used, colors[j] + 1);
        }
        coloring.num_colors = used;
        return {size, assignment_from_coloring(coloring, subset)};
      }
      // next combination
      int j = size - 1;
      while (j >= 0 && idx[j] == n - size + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int q = j + 1; q < size; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return {0, PilotAssignment{{}, std::vector<int>(graph.num_ues(), -1), {}, 0}};
}

std::pair<int, PilotAssignment> exhaustive_stage1(const NetworkInstance& inst, int tau,
                                                  int n_max) {
  std::vector<int> all(inst.num_ue());
  std::iota(all.begin(), all.end(), 0);
  return exhaustive_stage1(build_conflict_matrix(inst, all), tau, n_max);
}

bool satisfies_constraints(const PilotAssignment& assignment, const ConflictGraph& graph,
                           int n_max) {
  for (int k : assignment.admitted) {
    if (assignment.pilot_of[k] < 0) return false;
    for (int kp : assignment.admitted) {
      if (k < kp && graph.edge(k, kp) && assignment.pilot_of[k] == assignment.pilot_of[kp])
        return false;
    }
  }
  std::vector<int> class_size;
  for (int k : assignment.admitted) {
    const int c = assignment.pilot_of[k];
    if (c >= static_cast<int>(class_size.size())) class_size.resize(c + 1, 0);
    if (++class_size[c] > n_max) return false;
  }
  return true;
}

}  // namespace cranplan
