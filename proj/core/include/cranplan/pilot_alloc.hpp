// SPDX-License-Identifier: Apache-2.0
//
// Stage I: pilot-conflict graph construction, DSATUR coloring under a
// per-pilot reuse cap, contamination-aware UE removal when the pilot budget
// is short, and spare-pilot reallocation by threshold bisection when it is
// not. Also houses the Stage-I baselines and a small-instance exhaustive
// search oracle.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cranplan/topology.hpp"

namespace cranplan {

// Symmetric 0/1 conflict matrix over the full UE index space; rows/columns of
// UEs outside `active` are ignored.
struct ConflictGraph {
  Eigen::MatrixXi b;
  std::vector<int> active;  // sorted UE indices

  int num_ues() const { return static_cast<int>(b.rows()); }
  bool edge(int k, int kp) const { return b(k, kp) != 0; }
};

// Pilot indices are 0-based throughout; `pilot_of` is -1 for UEs not admitted.
struct PilotAssignment {
  std::vector<int> admitted;                    // sorted UE ids
  std::vector<int> pilot_of;                    // size K
  std::vector<std::vector<int>> reuse_classes;  // per pilot, admitted UE ids
  int num_used = 0;                             // n*
};

struct Coloring {
  int num_colors = 0;
  std::vector<int> color_of;  // -1 for vertices outside the active set
};

// b_{k,k'} = 1 iff the clusters of two distinct active UEs intersect.
ConflictGraph build_conflict_matrix(const NetworkInstance& inst, const std::vector<int>& active);

// Pairwise pilot-contamination level (natural log); symmetric in (k, k').
double contamination_metric(const NetworkInstance& inst, int k, int kp);

// K x K symmetric matrix of contamination_metric values, zero diagonal.
MatD contamination_matrix(const NetworkInstance& inst);

// DSATUR with capacity-capped color classes. Vertex order: highest saturation,
// then highest degree within the active set, then lowest index. A class that
// reached n_max is masked from the candidate colors.
Coloring dsatur_color(const ConflictGraph& graph, int n_max);

PilotAssignment assignment_from_coloring(const Coloring& coloring, const std::vector<int>& active);

// Case I (n* > tau): repeatedly remove the most-connected UE, breaking ties by
// the contamination it would keep inflicting, until the coloring fits.
PilotAssignment select_ues_case1(const ConflictGraph& graph, const MatD& eta, int tau, int n_max);
PilotAssignment select_ues_case1(const NetworkInstance& inst, int tau, int n_max);

// Case II (n* < tau): bisect a contamination threshold that augments the
// conflict matrix until the coloring uses exactly tau pilots; on a missed
// exact hit, the assignment with the largest n* <= tau seen is returned.
// All UEs stay admitted.
PilotAssignment reallocate_case2(const ConflictGraph& graph, const MatD& eta, int tau, int n_max);
PilotAssignment reallocate_case2(const NetworkInstance& inst, int tau, int n_max);

// Orchestrator: DSATUR on the full UE set, then dispatch on n* vs tau.
PilotAssignment allocate_pilots(const ConflictGraph& graph, const MatD& eta, int tau, int n_max);
PilotAssignment allocate_pilots(const NetworkInstance& inst, int tau, int n_max);

enum class BaselineKind { ortho, con, nocase2 };

PilotAssignment allocate_baseline(BaselineKind kind, const NetworkInstance& inst, int tau,
                                  int n_max, Rng& rng);

// True maximum of the Stage-I admission problem by enumeration; refuses to run
// above K = 8 or tau = 4.
std::pair<int, PilotAssignment> exhaustive_stage1(const ConflictGraph& graph, int tau, int n_max);
std::pair<int, PilotAssignment> exhaustive_stage1(const NetworkInstance& inst, int tau, int n_max);

// C1 (no conflicting pair shares a pilot) and C2 (class sizes <= n_max).
bool satisfies_constraints(const PilotAssignment& assignment, const ConflictGraph& graph,
                           int n_max);

}  // namespace cranplan
