// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "cranplan/conic_sdp.hpp"

using namespace cranplan;

namespace {

MatC herm_random(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatC m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = cxd(g(rng), g(rng));
  m = 0.5 * (m + m.adjoint()).eval();
  return scale * m;
}

VecC random_vec(int n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  VecC v(n);
  for (int r = 0; r < n; ++r) v(r) = scale * cxd(g(rng), g(rng));
  return v;
}

// single UE, SINR target eta against noise sigma2, generous caps
SdpProblem single_ue_problem(const VecC& g, double eta, double sigma2, double p_cap) {
  SdpProblem p;
  const int n = static_cast<int>(g.size());
  p.block_dims = {n};
  p.gamma = 1e5;
  CapRow pow;
  pow.terms.push_back({0, MatC::Identity(n, n)});
  pow.rhs = p_cap;
  p.power_rows.push_back(std::move(pow));
  SinrRow sinr;
  sinr.terms.push_back({0, g * g.adjoint()});
  sinr.rhs = eta * sigma2;
  p.sinr_rows.push_back(std::move(sinr));
  return p;
}

}  // namespace

TEST_CASE("single UE minimum power hits the closed form") {
  Rng rng(7);
  const VecC g = random_vec(6, rng);
  const double g2 = g.squaredNorm();
  const SdpProblem p = single_ue_problem(g, 1.0, 1.0, 1e6);
  const ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  // minimum power to reach SINR 1 at unit noise: tr(W) = 1/||g||^2
  CHECK(sol.objective == doctest::Approx(1.0 / g2).epsilon(1e-6));
  CHECK(sol.x(0) <= 1e-9);
  // rank-one with principal direction g
  Eigen::SelfAdjointEigenSolver<MatC> es(sol.w[0]);
  const VecD ev = es.eigenvalues();
  CHECK(ev(5) == doctest::Approx(1.0 / g2).epsilon(1e-6));
  CHECK(std::abs(ev(4)) <= 1e-6 * ev(5));
  const MatC expected = g * g.adjoint() / (g2 * g2);
  CHECK((sol.w[0] - expected).norm() <= 1e-5 * expected.norm());
}

TEST_CASE("zero rate targets give the zero solution") {
  Rng rng(11);
  const VecC g = random_vec(4, rng);
  SdpProblem p = single_ue_problem(g, 0.0, 1.0, 10.0);
  p.sinr_rows[0].rhs = 0.0;
  const ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective <= 1e-7);
  CHECK(sol.w[0].norm() <= 1e-7);
  CHECK(sol.x(0) <= 1e-7);
}

namespace {

// 2-UE scalar-block problem; interference cross gains a12, a21. With both
// SINR rows tight and slacks zero, powers solve a 2x2 linear system.
struct TwoUeProblem {
  double g1, g2, a12, a21, eta1, eta2, s1, s2;
  SdpProblem build(double p_cap) const {
    SdpProblem p;
    p.block_dims = {1, 1};
    p.gamma = 1e6;
    for (int b = 0; b < 2; ++b) {
      CapRow pow;
      pow.terms.push_back({b, MatC::Identity(1, 1)});
      pow.rhs = p_cap;
      p.power_rows.push_back(std::move(pow));
    }
    SinrRow r1;
    r1.terms.push_back({0, g1 * MatC::Identity(1, 1)});
    r1.terms.push_back({1, -eta1 * a21 * MatC::Identity(1, 1)});
    r1.rhs = eta1 * s1;
    SinrRow r2;
    r2.terms.push_back({1, g2 * MatC::Identity(1, 1)});
    r2.terms.push_back({0, -eta2 * a12 * MatC::Identity(1, 1)});
    r2.rhs = eta2 * s2;
    p.sinr_rows.push_back(std::move(r1));
    p.sinr_rows.push_back(std::move(r2));
    return p;
  }
  // independent algebraic route: tight SINR rows as a linear system
  std::pair<double, double> oracle() const {
    const double det = g1 * g2 - eta1 * a21 * eta2 * a12;
    const double p1 = (eta1 * s1 * g2 + eta1 * a21 * eta2 * s2) / det;
    const double p2 = (eta2 * s2 * g1 + eta2 * a12 * eta1 * s1) / det;
    return {p1, p2};
  }
};

}  // namespace

TEST_CASE("two-UE problems match the tight-constraint linear-system oracle") {
  Rng rng(23);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int rep = 0; rep < 10; ++rep) {
    TwoUeProblem t{};
    t.g1 = u(rng);
    t.g2 = u(rng);
    t.a12 = 0.1 * u(rng);
    t.a21 = 0.1 * u(rng);
    t.eta1 = u(rng);
    t.eta2 = u(rng);
    t.s1 = u(rng);
    t.s2 = u(rng);
    const auto [p1, p2] = t.oracle();
    REQUIRE(p1 > 0);
    REQUIRE(p2 > 0);
    const ConicSolution sol = solve(t.build(1e4));
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.objective == doctest::Approx(p1 + p2).epsilon(1e-3));
    CHECK(sol.w[0](0, 0).real() == doctest::Approx(p1).epsilon(1e-3));
    CHECK(sol.w[1](0, 0).real() == doctest::Approx(p2).epsilon(1e-3));
  }
}

TEST_CASE("grid search cross-check on one two-UE instance") {
  TwoUeProblem t{1.3, 0.8, 0.12, 0.07, 1.5, 0.9, 1.0, 1.2};
  const ConicSolution sol = solve(t.build(100.0));
  REQUIRE(sol.status == SolveStatus::optimal);
  // grid over a window around the analytic point
  const auto [o1, o2] = t.oracle();
  double best = 1e30;
  const double span = 2.0;
  const int steps = 400;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const double p1 = o1 * (1.0 - span / 2 + span * i / steps);
      const double p2 = o2 * (1.0 - span / 2 + span * j / steps);
      if (p1 < 0 || p2 < 0) continue;
      if (t.g1 * p1 < t.eta1 * (t.a21 * p2 + t.s1)) continue;
      if (t.g2 * p2 < t.eta2 * (t.a12 * p1 + t.s2)) continue;
      best = std::min(best, p1 + p2);
    }
  }
  CHECK(sol.objective <= best + 1e-9);
  CHECK(sol.objective == doctest::Approx(best).epsilon(1e-2));
}

TEST_CASE("kkt report on an optimal solve is clean and reacts to perturbation") {
  Rng rng(41);
  const VecC g = random_vec(6, rng);
  const SdpProblem p = single_ue_problem(g, 2.0, 1.0, 1e6);
  ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  const KktReport clean = check_kkt(p, sol);
  CHECK(clean.max_violation <= 1e-6);
  CHECK(clean.stationarity <= 1e-6);
  CHECK(clean.complementary_slackness <= 1e-6);

  sol.w[0] += 0.1 * MatC::Identity(6, 6);
  const KktReport dirty = check_kkt(p, sol);
  CHECK(dirty.max_violation >= 1e3 * std::max(clean.max_violation, 1e-12));
}

TEST_CASE("kkt on the zero problem is exactly clean") {
  SdpProblem p;
  p.block_dims = {2};
  p.gamma = 1.0;
  SinrRow r;
  r.terms.push_back({0, MatC::Identity(2, 2)});
  r.rhs = 0.0;
  p.sinr_rows.push_back(std::move(r));
  ConicSolution sol;
  sol.w = {MatC::Zero(2, 2)};
  sol.z = {};
  sol.x = VecD::Zero(1);
  sol.lambda = VecD(0);
  sol.mu = VecD::Zero(1);
  sol.nu = VecD(0);
  sol.omega = VecD::Constant(1, 1.0);  // gamma - mu
  const KktReport rep = check_kkt(p, sol);
  CHECK(rep.max_violation <= 1e-15);
}

namespace {

SdpProblem random_multi_ue(Rng& rng, int ues, int dim, double eta_scale, double rhs_scale = 1.0) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  SdpProblem p;
  p.gamma = 1e5;
  p.block_dims.assign(ues, dim);
  const double sigma2 = rhs_scale;
  std::vector<VecC> g(ues);
  for (int k = 0; k < ues; ++k) g[k] = random_vec(dim, rng);
  // one power row covering everyone
  CapRow pow;
  for (int k = 0; k < ues; ++k) pow.terms.push_back({k, MatC::Identity(dim, dim)});
  pow.rhs = 1e5 * rhs_scale;
  p.power_rows.push_back(std::move(pow));
  for (int k = 0; k < ues; ++k) {
    SinrRow r;
    const double eta = eta_scale * u(rng);
    MatC self = g[k] * g[k].adjoint();
    self -= eta * 0.01 * MatC::Identity(dim, dim);  // estimation-error style term
    r.terms.push_back({k, std::move(self)});
    for (int l = 0; l < ues; ++l) {
      if (l == k) continue;
      MatC a = herm_random(dim, rng, 0.05);
      a = (a * a.adjoint()).eval();  // PSD cross matrix
      r.terms.push_back({l, -eta * a});
    }
    r.rhs = eta * sigma2;
    p.sinr_rows.push_back(std::move(r));
  }
  return p;
}

}  // namespace

TEST_CASE("lemma-1 positivity and theorem-2 rank-one hold on random instances") {
  Rng rng(97);
  for (int rep = 0; rep < 20; ++rep) {
    const SdpProblem p = random_multi_ue(rng, 3, 4, 1.0);
    const ConicSolution sol = solve(p);
    REQUIRE(sol.status == SolveStatus::optimal);
    const double max_dual = std::max({sol.lambda.maxCoeff(), sol.mu.maxCoeff(), 1e-300});
    for (int k = 0; k < 3; ++k) {
      CHECK(sol.mu(k) >= 1e-9 * max_dual);
      Eigen::SelfAdjointEigenSolver<MatC> es(sol.w[k], Eigen::EigenvaluesOnly);
      const VecD ev = es.eigenvalues();
      REQUIRE(ev(3) > 0);
      CHECK(std::max(0.0, ev(2)) / ev(3) <= 1e-6);
    }
    CHECK(sol.lambda.minCoeff() >= -1e-9);
    CHECK(sol.mu.minCoeff() >= -1e-9);
  }
}

TEST_CASE("rescaling every right-hand side rescales the solution exactly") {
  Rng rng(5);
  const SdpProblem base = random_multi_ue(rng, 2, 3, 1.0);
  Rng rng2(5);
  const SdpProblem scaled = random_multi_ue(rng2, 2, 3, 1.0, 100.0);
  const ConicSolution a = solve(base);
  const ConicSolution b = solve(scaled);
  REQUIRE(a.status == SolveStatus::optimal);
  REQUIRE(b.status == SolveStatus::optimal);
  CHECK(b.objective == doctest::Approx(100.0 * a.objective).epsilon(1e-6));
  for (int k = 0; k < 2; ++k)
    CHECK((b.w[k] - 100.0 * a.w[k]).norm() <= 1e-4 * std::max(1.0, b.w[k].norm()));
  // duals are invariant under the consistent rescaling
  for (int k = 0; k < 2; ++k) CHECK(b.mu(k) == doctest::Approx(a.mu(k)).epsilon(1e-4));
}

TEST_CASE("certified residuals meet the contract invariants") {
  Rng rng(133);
  const SdpProblem p = random_multi_ue(rng, 4, 4, 2.0);
  const ConicSolution sol = solve(p);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.residuals.primal <= 1e-7);
  CHECK(sol.residuals.gap <= 1e-7);
  CHECK(sol.residuals.compl_slack <= 1e-6);
  CHECK(sol.lambda.minCoeff() >= -1e-9);
  CHECK(sol.mu.minCoeff() >= -1e-9);
  CHECK(sol.omega.minCoeff() >= -1e-9);
}

TEST_CASE("dimension mismatches are rejected at construction") {
  SdpProblem p;
  p.block_dims = {2};
  SinrRow r;
  r.terms.push_back({0, MatC::Identity(3, 3)});
  r.rhs = 1.0;
  p.sinr_rows.push_back(std::move(r));
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
  SdpProblem q;
  q.block_dims = {2};
  q.gamma = -1.0;
  CHECK_THROWS_AS(solve(q), std::invalid_argument);
}
