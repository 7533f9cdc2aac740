// SPDX-License-Identifier: Apache-2.0
#include "cranplan/conic_sdp.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cranplan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double re_tr_prod(const MatC& a, const MatC& b) {
  // tr(a b) for Hermitian factors is real
  return a.cwiseProduct(b.transpose()).sum().real();
}

void hermitianize(MatC& m) { m = 0.5 * (m + m.adjoint()).eval(); }

// largest alpha with X + alpha dX >= 0 (X positive definite)
double max_step(const MatC& x, const MatC& dx) {
  Eigen::LLT<MatC> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatC l = llt.matrixL();
  const MatC y = l.triangularView<Eigen::Lower>().solve(dx);
  MatC g = l.triangularView<Eigen::Lower>().solve(y.adjoint()).adjoint();
  hermitianize(g);
  Eigen::SelfAdjointEigenSolver<MatC> es(g, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-300) return kInf;
  return -1.0 / lmin;
}

struct ScalarTerm {
  int row = -1;
  double coef = 0.0;
};

// internal scaled standard form: equality rows over Hermitian blocks plus
// nonnegative scalars (sinr slacks x first, then one slack per row)
struct StandardForm {
  int nb = 0;
  int num_scalars = 0;
  int m = 0;
  std::vector<int> dims;
  std::vector<std::vector<std::pair<int, MatC>>> block_terms;  // per block: (row, A)
  std::vector<ScalarTerm> scalar_terms;                        // one row per scalar
  VecD b;
  VecD scalar_obj;   // scaled
  double block_obj;  // scaled coefficient on tr(W_b) (same for all blocks)

  // unscaling factors
  std::vector<double> row_scale;
  double rhs_scale = 1.0;
  double obj_scale = 1.0;
  int num_sinr = 0;
  int num_power = 0;
  int num_fronthaul = 0;
};

StandardForm build_standard_form(const SdpProblem& p) {
  StandardForm f;
  f.nb = static_cast<int>(p.block_dims.size());
  f.dims = p.block_dims;
  f.num_power = static_cast<int>(p.power_rows.size());
  f.num_sinr = static_cast<int>(p.sinr_rows.size());
  f.num_fronthaul = static_cast<int>(p.fronthaul_rows.size());
  f.m = f.num_power + f.num_sinr + f.num_fronthaul;
  f.num_scalars = f.num_sinr + f.m;  // x slacks then row slacks
  f.block_terms.resize(f.nb);
  f.scalar_terms.resize(f.num_scalars);
  f.b.resize(f.m);
  f.row_scale.assign(f.m, 1.0);

  auto row_norm = [](const std::vector<TraceTerm>& terms, double extra) {
    double s = extra;
    for (const auto& t : terms) s += t.mat.squaredNorm();
    return std::sqrt(s);
  };

  int row = 0;
  auto add_terms = [&](const std::vector<TraceTerm>& terms, double scale) {
    for (const auto& t : terms) {
      MatC a = t.mat / scale;
      hermitianize(a);
      f.block_terms[t.block].emplace_back(row, std::move(a));
    }
  };

  for (int i = 0; i < f.num_power; ++i, ++row) {
    const auto& r = p.power_rows[i];
    const double s = std::max(1e-12, row_norm(r.terms, 1.0));
    f.row_scale[row] = s;
    add_terms(r.terms, s);
    f.scalar_terms[f.num_sinr + row] = {row, 1.0 / s};  // row slack, lhs + s = rhs
    f.b(row) = r.rhs / s;
  }
  for (int q = 0; q < f.num_sinr; ++q, ++row) {
    const auto& r = p.sinr_rows[q];
    const double s = std::max(1e-12, row_norm(r.terms, 2.0));
    f.row_scale[row] = s;
    add_terms(r.terms, s);
    f.scalar_terms[q] = {row, 1.0 / s};                   // x
    f.scalar_terms[f.num_sinr + row] = {row, -1.0 / s};   // lhs + x - s = rhs
    f.b(row) = r.rhs / s;
  }
  for (int i = 0; i < f.num_fronthaul; ++i, ++row) {
    const auto& r = p.fronthaul_rows[i];
    const double s = std::max(1e-12, row_norm(r.terms, 1.0));
    f.row_scale[row] = s;
    add_terms(r.terms, s);
    f.scalar_terms[f.num_sinr + row] = {row, 1.0 / s};
    f.b(row) = r.rhs / s;
  }

  // row normalization only; rescaling the objective or the rhs globally can
  // push the scaled optimum below the relative-gap resolution
  f.rhs_scale = 1.0;
  f.obj_scale = 1.0;
  f.block_obj = 1.0;
  f.scalar_obj = VecD::Zero(f.num_scalars);
  for (int q = 0; q < f.num_sinr; ++q) f.scalar_obj(q) = p.gamma;
  return f;
}

struct IterState {
  std::vector<MatC> X, Z;
  VecD xs, zs;
  VecD y;
};

struct Direction {
  std::vector<MatC> dX, dZ;
  VecD dxs, dzs;
  VecD dy;
};

}  // namespace

void SdpProblem::validate() const {
  if (gamma <= 0) throw std::invalid_argument("SdpProblem: gamma must be positive");
  for (int d : block_dims)
    if (d < 1) throw std::invalid_argument("SdpProblem: block dims must be >= 1");
  auto check_terms = [&](const std::vector<TraceTerm>& terms) {
    for (const auto& t : terms) {
      if (t.block < 0 || t.block >= static_cast<int>(block_dims.size()))
        throw std::invalid_argument("SdpProblem: term references unknown block");
      if (t.mat.rows() != block_dims[t.block] || t.mat.cols() != block_dims[t.block])
        throw std::invalid_argument("SdpProblem: term dimension mismatch");
      const double nrm = t.mat.norm();
      if ((t.mat - t.mat.adjoint()).norm() > 1e-9 * std::max(1.0, nrm))
        throw std::invalid_argument("SdpProblem: constraint matrices must be Hermitian");
    }
  };
  for (const auto& r : power_rows) {
    check_terms(r.terms);
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("SdpProblem: non-finite rhs");
  }
  for (const auto& r : sinr_rows) {
    check_terms(r.terms);
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("SdpProblem: non-finite rhs");
  }
  for (const auto& r : fronthaul_rows) {
    check_terms(r.terms);
    if (!std::isfinite(r.rhs)) throw std::invalid_argument("SdpProblem: non-finite rhs");
  }
}

ConicSolution solve(const SdpProblem& problem, const SolverOptions& options) {
  problem.validate();
  const StandardForm f = build_standard_form(problem);
  const int nb = f.nb;
  const int S = f.num_scalars;
  const int m = f.m;

  double barrier_dim = S;
  for (int d : f.dims) barrier_dim += d;
  if (barrier_dim == 0) barrier_dim = 1;

  IterState st;
  st.X.resize(nb);
  st.Z.resize(nb);
  const double xi = 10.0;
  const double zeta = 10.0;
  for (int b = 0; b < nb; ++b) {
    st.X[b] = xi * MatC::Identity(f.dims[b], f.dims[b]);
    st.Z[b] = zeta * MatC::Identity(f.dims[b], f.dims[b]);
  }
  // scalar slacks start near their row targets; scalar duals near their
  // objective weights so the initial dual residual vanishes there
  st.xs = VecD::Constant(S, xi);
  st.zs = VecD::Constant(S, zeta);
  for (int t = 0; t < S; ++t) {
    st.xs(t) = std::max(xi, 1.5 * std::abs(f.b(f.scalar_terms[t].row)));
    st.zs(t) = std::max(zeta, f.scalar_obj(t));
  }
  st.y = VecD::Zero(m);

  const double c_norm = std::max(1.0, f.scalar_obj.size() ? f.scalar_obj.maxCoeff() : 1.0);

  auto primal_residual = [&](const IterState& s, VecD& rp) {
    rp = f.b;
    for (int b = 0; b < nb; ++b)
      for (const auto& [row, a] : f.block_terms[b]) rp(row) -= re_tr_prod(a, s.X[b]);
    for (int t = 0; t < S; ++t) rp(f.scalar_terms[t].row) -= f.scalar_terms[t].coef * s.xs(t);
  };

  auto dual_residual = [&](const IterState& s, std::vector<MatC>& rd, VecD& rds) {
    rd.resize(nb);
    for (int b = 0; b < nb; ++b) {
      rd[b] = f.block_obj * MatC::Identity(f.dims[b], f.dims[b]) - s.Z[b];
      for (const auto& [row, a] : f.block_terms[b]) rd[b] -= s.y(row) * a;
    }
    rds.resize(S);
    for (int t = 0; t < S; ++t)
      rds(t) = f.scalar_obj(t) - f.scalar_terms[t].coef * s.y(f.scalar_terms[t].row) - s.zs(t);
  };

  VecD rp(m);
  std::vector<MatC> rd;
  VecD rds;
  Direction dir, dir_aff;
  dir.dX.resize(nb);
  dir.dZ.resize(nb);
  dir_aff.dX.resize(nb);
  dir_aff.dZ.resize(nb);

  std::vector<MatC> zinv(nb);
  std::vector<std::vector<MatC>> t_cache(nb);

  double best_merit = kInf;
  IterState best = st;
  int best_iter = 0;
  int stall = 0;
  bool flag_infeasible = false;
  int iter = 0;

  for (; iter < options.max_iterations; ++iter) {
    primal_residual(st, rp);
    dual_residual(st, rd, rds);

    double compl_sum = 0.0;
    for (int b = 0; b < nb; ++b) compl_sum += re_tr_prod(st.X[b], st.Z[b]);
    compl_sum += st.xs.dot(st.zs);
    const double mu = compl_sum / barrier_dim;

    double pobj = 0.0;
    for (int b = 0; b < nb; ++b) pobj += f.block_obj * st.X[b].trace().real();
    pobj += f.scalar_obj.dot(st.xs);
    const double dobj = f.b.dot(st.y);

    const double pinf = m > 0 ? rp.cwiseAbs().maxCoeff() / (1.0 + f.b.cwiseAbs().maxCoeff()) : 0;
    double dinf = 0.0;
    for (int b = 0; b < nb; ++b) dinf = std::max(dinf, rd[b].norm());
    if (S > 0) dinf = std::max(dinf, rds.cwiseAbs().maxCoeff());
    dinf /= (1.0 + c_norm);
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (std::getenv("CRANPLAN_SDP_DEBUG"))
      std::fprintf(stderr, "it %3d  mu %9.3e  pinf %9.3e  dinf %9.3e  gap %9.3e  pobj %12.6e  dobj %12.6e\n",
                   iter, mu, pinf, dinf, relgap, pobj, dobj);

    const double merit = std::max({pinf, dinf, relgap});
    if (merit < best_merit * 0.99) {
      stall = 0;
    } else if (++stall >= 15) {
      break;
    }
    if (merit < best_merit) {
      best_merit = merit;
      best = st;
      best_iter = iter;
    }

    if (pinf <= options.feas_target && dinf <= options.feas_target &&
        relgap <= options.gap_target)
      break;
    if (dobj > 1e9 && dinf < 1e-8) {  // diverging dual with near-feasible y
      flag_infeasible = true;
      break;
    }

    // factorizations and Schur complement
    bool factor_ok = true;
    for (int b = 0; b < nb; ++b) {
      Eigen::LLT<MatC> llt(st.Z[b]);
      if (llt.info() != Eigen::Success) {
        factor_ok = false;
        break;
      }
      zinv[b] = llt.solve(MatC::Identity(f.dims[b], f.dims[b]));
    }
    if (!factor_ok) break;

    MatD schur = MatD::Zero(m, m);
    for (int b = 0; b < nb; ++b) {
      const auto& terms = f.block_terms[b];
      auto& cache = t_cache[b];
      cache.resize(terms.size());
      for (std::size_t l = 0; l < terms.size(); ++l)
        cache[l] = st.X[b] * terms[l].second * zinv[b];
      for (std::size_t l = 0; l < terms.size(); ++l)
        for (std::size_t j = 0; j < terms.size(); ++j)
          schur(terms[j].first, terms[l].first) += re_tr_prod(terms[j].second, cache[l]);
    }
    for (int t = 0; t < S; ++t) {
      const auto& sc = f.scalar_terms[t];
      schur(sc.row, sc.row) += sc.coef * sc.coef * st.xs(t) / st.zs(t);
    }
    schur = 0.5 * (schur + schur.transpose()).eval();
    const double reg = 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
    schur.diagonal().array() += reg;
    Eigen::LDLT<MatD> schur_fact(schur);
    if (schur_fact.info() != Eigen::Success) {
      schur.diagonal().array() += 1e4 * reg;
      schur_fact.compute(schur);
      if (schur_fact.info() != Eigen::Success) break;
    }

    auto solve_direction = [&](const std::vector<MatC>& rc, const VecD& rcs, Direction& d) {
      VecD rhs = rp;
      for (int b = 0; b < nb; ++b) {
        const MatC tmp = (rc[b] - st.X[b] * rd[b]) * zinv[b];
        for (const auto& [row, a] : f.block_terms[b]) rhs(row) -= re_tr_prod(a, tmp);
      }
      for (int t = 0; t < S; ++t) {
        const auto& sc = f.scalar_terms[t];
        rhs(sc.row) -= sc.coef * (rcs(t) - st.xs(t) * rds(t)) / st.zs(t);
      }
      d.dy = schur_fact.solve(rhs);
      d.dzs.resize(S);
      d.dxs.resize(S);
      for (int t = 0; t < S; ++t) {
        const auto& sc = f.scalar_terms[t];
        d.dzs(t) = rds(t) - sc.coef * d.dy(sc.row);
        d.dxs(t) = (rcs(t) - st.xs(t) * d.dzs(t)) / st.zs(t);
      }
      for (int b = 0; b < nb; ++b) {
        d.dZ[b] = rd[b];
        for (const auto& [row, a] : f.block_terms[b]) d.dZ[b] -= d.dy(row) * a;
        hermitianize(d.dZ[b]);
        d.dX[b] = (rc[b] - st.X[b] * d.dZ[b]) * zinv[b];
        hermitianize(d.dX[b]);
      }
    };

    auto step_lengths = [&](const Direction& d, double& ap, double& ad) {
      ap = kInf;
      ad = kInf;
      for (int b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(st.X[b], d.dX[b]));
        ad = std::min(ad, max_step(st.Z[b], d.dZ[b]));
      }
      for (int t = 0; t < S; ++t) {
        if (d.dxs(t) < 0) ap = std::min(ap, -st.xs(t) / d.dxs(t));
        if (d.dzs(t) < 0) ad = std::min(ad, -st.zs(t) / d.dzs(t));
      }
    };

    // predictor
    std::vector<MatC> rc(nb);
    VecD rcs(S);
    for (int b = 0; b < nb; ++b) rc[b] = -st.X[b] * st.Z[b];
    for (int t = 0; t < S; ++t) rcs(t) = -st.xs(t) * st.zs(t);
    solve_direction(rc, rcs, dir_aff);

    double ap_aff, ad_aff;
    step_lengths(dir_aff, ap_aff, ad_aff);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);

    double compl_aff = 0.0;
    for (int b = 0; b < nb; ++b)
      compl_aff +=
          re_tr_prod(st.X[b] + ap_aff * dir_aff.dX[b], st.Z[b] + ad_aff * dir_aff.dZ[b]);
    compl_aff += (st.xs + ap_aff * dir_aff.dxs).dot(st.zs + ad_aff * dir_aff.dzs);
    const double mu_aff = std::max(compl_aff / barrier_dim, 0.0);
    double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    sigma = std::clamp(sigma, 1e-10, 1.0);

    // corrector
    for (int b = 0; b < nb; ++b) {
      rc[b] = sigma * mu * MatC::Identity(f.dims[b], f.dims[b]) - st.X[b] * st.Z[b] -
              dir_aff.dX[b] * dir_aff.dZ[b];
    }
    for (int t = 0; t < S; ++t)
      rcs(t) = sigma * mu - st.xs(t) * st.zs(t) - dir_aff.dxs(t) * dir_aff.dzs(t);
    solve_direction(rc, rcs, dir);

    double ap, ad;
    step_lengths(dir, ap, ad);
    ap = std::min(1.0, options.step_fraction * ap);
    ad = std::min(1.0, options.step_fraction * ad);

    for (int b = 0; b < nb; ++b) {
      st.X[b] += ap * dir.dX[b];
      st.Z[b] += ad * dir.dZ[b];
      hermitianize(st.X[b]);
      hermitianize(st.Z[b]);
    }
    st.xs += ap * dir.dxs;
    st.zs += ad * dir.dzs;
    st.y += ad * dir.dy;
  }

  // evaluate the final iterate too
  {
    primal_residual(st, rp);
    dual_residual(st, rd, rds);
    double pobj = 0.0;
    for (int b = 0; b < nb; ++b) pobj += f.block_obj * st.X[b].trace().real();
    pobj += f.scalar_obj.dot(st.xs);
    const double dobj = f.b.dot(st.y);
    const double pinf = m > 0 ? rp.cwiseAbs().maxCoeff() / (1.0 + f.b.cwiseAbs().maxCoeff()) : 0;
    double dinf = 0.0;
    for (int b = 0; b < nb; ++b) dinf = std::max(dinf, rd[b].norm());
    if (S > 0) dinf = std::max(dinf, rds.cwiseAbs().maxCoeff());
    dinf /= (1.0 + c_norm);
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (std::max({pinf, dinf, relgap}) < best_merit) {
      best = st;
      best_iter = iter;
    }
  }

  // unscale and certify in original units
  ConicSolution sol;
  sol.iterations = best_iter + 1;
  sol.w.resize(nb);
  sol.z.resize(nb);
  for (int b = 0; b < nb; ++b) {
    sol.w[b] = f.rhs_scale * best.X[b];
    sol.z[b] = f.obj_scale * best.Z[b];
    hermitianize(sol.w[b]);
    hermitianize(sol.z[b]);
  }
  sol.x.resize(f.num_sinr);
  for (int q = 0; q < f.num_sinr; ++q) sol.x(q) = f.rhs_scale * best.xs(q);

  VecD y_orig(m);
  for (int j = 0; j < m; ++j) y_orig(j) = f.obj_scale * best.y(j) / f.row_scale[j];
  sol.lambda.resize(f.num_power);
  sol.mu.resize(f.num_sinr);
  sol.nu.resize(f.num_fronthaul);
  sol.omega.resize(f.num_sinr);
  for (int i = 0; i < f.num_power; ++i) sol.lambda(i) = -y_orig(i);
  for (int q = 0; q < f.num_sinr; ++q) sol.mu(q) = y_orig(f.num_power + q);
  for (int i = 0; i < f.num_fronthaul; ++i)
    sol.nu(i) = -y_orig(f.num_power + f.num_sinr + i);
  for (int q = 0; q < f.num_sinr; ++q) sol.omega(q) = f.obj_scale * best.zs(q);

  sol.objective = problem.gamma * sol.x.sum();
  for (int b = 0; b < nb; ++b) sol.objective += sol.w[b].trace().real();

  double dobj = 0.0;
  {
    int row = 0;
    for (const auto& r : problem.power_rows) dobj += r.rhs * y_orig(row++);
    for (const auto& r : problem.sinr_rows) dobj += r.rhs * y_orig(row++);
    for (const auto& r : problem.fronthaul_rows) dobj += r.rhs * y_orig(row++);
  }
  sol.dual_objective = dobj;

  // residual certificate
  const KktReport report = check_kkt(problem, sol);
  sol.residuals.primal = report.primal_feasibility;
  sol.residuals.dual = std::max(report.dual_feasibility, report.stationarity);
  sol.residuals.gap =
      std::abs(sol.objective - dobj) / (1.0 + std::abs(sol.objective) + std::abs(dobj));
  sol.residuals.compl_slack = report.complementary_slackness;

  if (flag_infeasible) {
    sol.status = SolveStatus::infeasible;
  } else if (sol.residuals.primal <= options.accept_feas &&
             sol.residuals.dual <= options.accept_feas &&
             sol.residuals.gap <= options.accept_gap &&
             sol.residuals.compl_slack <= options.accept_compl) {
    sol.status = SolveStatus::optimal;
  } else {
    sol.status = SolveStatus::numerical_limit;
  }
  return sol;
}

KktReport check_kkt(const SdpProblem& problem, const ConicSolution& solution) {
  KktReport rep;
  const int nb = static_cast<int>(problem.block_dims.size());
  const int num_sinr = static_cast<int>(problem.sinr_rows.size());

  // row values and slacks
  auto row_value = [&](const std::vector<TraceTerm>& terms) {
    double v = 0.0;
    for (const auto& t : terms) v += re_tr_prod(t.mat, solution.w[t.block]);
    return v;
  };

  double pf = 0.0;
  double cs = 0.0;
  {
    int i = 0;
    for (const auto& r : problem.power_rows) {
      const double lhs = row_value(r.terms);
      pf = std::max(pf, std::max(0.0, lhs - r.rhs) / (1.0 + std::abs(r.rhs)));
      cs = std::max(cs, std::abs(solution.lambda(i) * (r.rhs - lhs)) / (1.0 + std::abs(r.rhs)));
      ++i;
    }
    i = 0;
    for (const auto& r : problem.sinr_rows) {
      const double lhs = row_value(r.terms) + solution.x(i);
      pf = std::max(pf, std::max(0.0, r.rhs - lhs) / (1.0 + std::abs(r.rhs)));
      cs = std::max(cs, std::abs(solution.mu(i) * (lhs - r.rhs)) / (1.0 + std::abs(r.rhs)));
      ++i;
    }
    i = 0;
    for (const auto& r : problem.fronthaul_rows) {
      const double lhs = row_value(r.terms);
      pf = std::max(pf, std::max(0.0, lhs - r.rhs) / (1.0 + std::abs(r.rhs)));
      cs = std::max(cs, std::abs(solution.nu(i) * (r.rhs - lhs)) / (1.0 + std::abs(r.rhs)));
      ++i;
    }
  }
  for (int q = 0; q < num_sinr; ++q) {
    pf = std::max(pf, -std::min(0.0, solution.x(q)));
    cs = std::max(cs, std::abs(solution.omega(q) * solution.x(q)) /
                          (1.0 + std::abs(solution.x(q))));
  }

  // dual blocks from the gradient identity
  std::vector<MatC> z_formula(nb);
  for (int b = 0; b < nb; ++b)
    z_formula[b] = MatC::Identity(problem.block_dims[b], problem.block_dims[b]);
  {
    int i = 0;
    for (const auto& r : problem.power_rows) {
      for (const auto& t : r.terms) z_formula[t.block] += solution.lambda(i) * t.mat;
      ++i;
    }
    i = 0;
    for (const auto& r : problem.sinr_rows) {
      for (const auto& t : r.terms) z_formula[t.block] -= solution.mu(i) * t.mat;
      ++i;
    }
    i = 0;
    for (const auto& r : problem.fronthaul_rows) {
      for (const auto& t : r.terms) z_formula[t.block] += solution.nu(i) * t.mat;
      ++i;
    }
  }

  double station = 0.0;
  double df = 0.0;
  for (int b = 0; b < nb; ++b) {
    if (!solution.z.empty())
      station = std::max(station,
                         (solution.z[b] - z_formula[b]).norm() / (1.0 + z_formula[b].norm()));
    Eigen::SelfAdjointEigenSolver<MatC> es(z_formula[b], Eigen::EigenvaluesOnly);
    df = std::max(df, -std::min(0.0, es.eigenvalues().minCoeff()) /
                          (1.0 + z_formula[b].norm()));
    // primal PSD side
    Eigen::SelfAdjointEigenSolver<MatC> ew(solution.w[b], Eigen::EigenvaluesOnly);
    pf = std::max(pf, -std::min(0.0, ew.eigenvalues().minCoeff()) /
                          (1.0 + solution.w[b].norm()));
    cs = std::max(cs, (solution.w[b] * z_formula[b]).norm() /
                          (1.0 + solution.w[b].norm() * z_formula[b].norm()));
  }
  for (int q = 0; q < num_sinr; ++q) {
    station = std::max(station, std::abs(solution.omega(q) - (problem.gamma - solution.mu(q))) /
                                    (1.0 + problem.gamma));
    df = std::max(df, -std::min(0.0, solution.omega(q)) / (1.0 + problem.gamma));
  }
  // nonnegativity of the multipliers themselves
  auto neg = [](const VecD& v) { return v.size() ? -std::min(0.0, v.minCoeff()) : 0.0; };
  df = std::max({df, neg(solution.lambda), neg(solution.mu), neg(solution.nu)});

  rep.stationarity = station;
  rep.primal_feasibility = pf;
  rep.dual_feasibility = df;
  rep.complementary_slackness = cs;
  rep.max_violation = std::max({station, pf, df, cs});
  return rep;
}

}  // namespace cranplan
