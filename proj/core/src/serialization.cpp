// SPDX-License-Identifier: Apache-2.0
#include "cranplan/serialization.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cranplan {

using nlohmann::json;

namespace {

json matrix_to_json(const MatC& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

MatC matrix_from_json(const json& j) {
  const auto rows = j.size();
  const auto cols = rows ? j[0].size() : 0;
  MatC m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = cxd(j[r][c][0].get<double>(), j[r][c][1].get<double>());
  return m;
}

json dmatrix_to_json(const MatD& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatD dmatrix_from_json(const json& j) {
  const auto rows = j.size();
  const auto cols = rows ? j[0].size() : 0;
  MatD m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  return m;
}

json vecd_to_json(const VecD& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

VecD vecd_from_json(const json& j) {
  VecD v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

json config_to_json_obj(const NetworkConfig& c) {
  return json{{"area_side_m", c.area_side_m},
              {"num_rrh", c.num_rrh},
              {"num_ue", c.num_ue},
              {"antennas_per_rrh", c.antennas_per_rrh},
              {"cluster_size", c.cluster_size},
              {"pilot_budget", c.pilot_budget},
              {"max_reuse", c.max_reuse},
              {"pilot_power_w", c.pilot_power_w},
              {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
              {"bandwidth_hz", c.bandwidth_hz},
              {"per_rrh_power_w", c.per_rrh_power_w},
              {"rate_target_range", c.rate_target_range},
              {"fronthaul_range", c.fronthaul_range},
              {"path_loss_exponent", c.path_loss_exponent},
              {"shadowing_std_db", c.shadowing_std_db},
              {"training_fraction", c.training_fraction},
              {"rng_seed", c.rng_seed}};
}

NetworkConfig config_from_json_obj(const json& j) {
  NetworkConfig c;
  c.area_side_m = j.value("area_side_m", c.area_side_m);
  c.num_rrh = j.value("num_rrh", c.num_rrh);
  c.num_ue = j.value("num_ue", c.num_ue);
  c.antennas_per_rrh = j.value("antennas_per_rrh", c.antennas_per_rrh);
  c.cluster_size = j.value("cluster_size", c.cluster_size);
  c.pilot_budget = j.value("pilot_budget", c.pilot_budget);
  c.max_reuse = j.value("max_reuse", c.max_reuse);
  c.pilot_power_w = j.value("pilot_power_w", c.pilot_power_w);
  c.noise_psd_dbm_hz = j.value("noise_psd_dbm_hz", c.noise_psd_dbm_hz);
  c.bandwidth_hz = j.value("bandwidth_hz", c.bandwidth_hz);
  c.per_rrh_power_w = j.value("per_rrh_power_w", c.per_rrh_power_w);
  if (j.contains("rate_target_range")) {
    c.rate_target_range[0] = j["rate_target_range"][0].get<double>();
    c.rate_target_range[1] = j["rate_target_range"][1].get<double>();
  }
  if (j.contains("fronthaul_range")) {
    c.fronthaul_range[0] = j["fronthaul_range"][0].get<double>();
    c.fronthaul_range[1] = j["fronthaul_range"][1].get<double>();
  }
  c.path_loss_exponent = j.value("path_loss_exponent", c.path_loss_exponent);
  c.shadowing_std_db = j.value("shadowing_std_db", c.shadowing_std_db);
  c.training_fraction = j.value("training_fraction", c.training_fraction);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  return c;
}

}  // namespace

std::string to_json(const NetworkConfig& config) { return config_to_json_obj(config).dump(2); }

NetworkConfig config_from_json(const std::string& text) {
  return config_from_json_obj(json::parse(text));
}

std::string to_json(const NetworkInstance& inst) {
  json j;
  j["config"] = config_to_json_obj(inst.config);
  json rrh = json::array(), ue = json::array();
  for (const auto& p : inst.rrh_positions) rrh.push_back({p.x, p.y});
  for (const auto& p : inst.ue_positions) ue.push_back({p.x, p.y});
  j["rrh_positions"] = rrh;
  j["ue_positions"] = ue;
  j["alpha"] = dmatrix_to_json(inst.alpha);
  j["clusters"] = inst.clusters;
  j["served_sets"] = inst.served_sets;
  j["noise_power_w"] = inst.noise_power_w;
  j["rate_targets"] = inst.rate_targets;
  j["fronthaul_caps"] = inst.fronthaul_caps_;
  j["power_caps"] = inst.power_caps;
  return j.dump(2);
}

NetworkInstance instance_from_json(const std::string& text) {
  const json j = json::parse(text);
  NetworkInstance inst;
  inst.config = config_from_json_obj(j.at("config"));
  for (const auto& p : j.at("rrh_positions"))
    inst.rrh_positions.push_back({p[0].get<double>(), p[1].get<double>()});
  for (const auto& p : j.at("ue_positions"))
    inst.ue_positions.push_back({p[0].get<double>(), p[1].get<double>()});
  inst.alpha = dmatrix_from_json(j.at("alpha"));
  inst.clusters = j.at("clusters").get<std::vector<std::vector<int>>>();
  inst.served_sets = j.at("served_sets").get<std::vector<std::vector<int>>>();
  inst.noise_power_w = j.at("noise_power_w").get<std::vector<double>>();
  inst.rate_targets = j.at("rate_targets").get<std::vector<double>>();
  inst.fronthaul_caps_ = j.at("fronthaul_caps").get<std::vector<double>>();
  inst.power_caps = j.at("power_caps").get<std::vector<double>>();
  return inst;
}

std::string to_json(const PilotAssignment& assignment) {
  json j;
  j["admitted"] = assignment.admitted;
  j["pilot_of"] = assignment.pilot_of;
  j["reuse_classes"] = assignment.reuse_classes;
  j["num_used"] = assignment.num_used;
  return j.dump(2);
}

PilotAssignment assignment_from_json(const std::string& text) {
  const json j = json::parse(text);
  PilotAssignment a;
  a.admitted = j.at("admitted").get<std::vector<int>>();
  a.pilot_of = j.at("pilot_of").get<std::vector<int>>();
  a.reuse_classes = j.at("reuse_classes").get<std::vector<std::vector<int>>>();
  a.num_used = j.at("num_used").get<int>();
  return a;
}

namespace {

json cap_rows_to_json(const std::vector<CapRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"block", t.block}, {"mat", matrix_to_json(t.mat)}});
    arr.push_back({{"terms", std::move(terms)}, {"rhs", r.rhs}});
  }
  return arr;
}

std::vector<CapRow> cap_rows_from_json(const json& arr) {
  std::vector<CapRow> rows;
  for (const auto& jr : arr) {
    CapRow r;
    r.rhs = jr.at("rhs").get<double>();
    for (const auto& jt : jr.at("terms"))
      r.terms.push_back({jt.at("block").get<int>(), matrix_from_json(jt.at("mat"))});
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::string to_json(const SdpProblem& problem) {
  json j;
  j["block_dims"] = problem.block_dims;
  j["gamma"] = problem.gamma;
  j["power_rows"] = cap_rows_to_json(problem.power_rows);
  json sinr = json::array();
  for (const auto& r : problem.sinr_rows) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({{"block", t.block}, {"mat", matrix_to_json(t.mat)}});
    sinr.push_back({{"terms", std::move(terms)}, {"rhs", r.rhs}});
  }
  j["sinr_rows"] = sinr;
  j["fronthaul_rows"] = cap_rows_to_json(problem.fronthaul_rows);
  return j.dump();
}

SdpProblem sdp_problem_from_json(const std::string& text) {
  const json j = json::parse(text);
  SdpProblem p;
  p.block_dims = j.at("block_dims").get<std::vector<int>>();
  p.gamma = j.at("gamma").get<double>();
  p.power_rows = cap_rows_from_json(j.at("power_rows"));
  for (const auto& jr : j.at("sinr_rows")) {
    SinrRow r;
    r.rhs = jr.at("rhs").get<double>();
    for (const auto& jt : jr.at("terms"))
      r.terms.push_back({jt.at("block").get<int>(), matrix_from_json(jt.at("mat"))});
    p.sinr_rows.push_back(std::move(r));
  }
  p.fronthaul_rows = cap_rows_from_json(j.at("fronthaul_rows"));
  return p;
}

std::string to_json(const ConicSolution& solution) {
  json j;
  json w = json::array(), z = json::array();
  for (const auto& m : solution.w) w.push_back(matrix_to_json(m));
  for (const auto& m : solution.z) z.push_back(matrix_to_json(m));
  j["w"] = std::move(w);
  j["z"] = std::move(z);
  j["x"] = vecd_to_json(solution.x);
  j["lambda"] = vecd_to_json(solution.lambda);
  j["mu"] = vecd_to_json(solution.mu);
  j["nu"] = vecd_to_json(solution.nu);
  j["omega"] = vecd_to_json(solution.omega);
  j["status"] = solution.status == SolveStatus::optimal      ? "optimal"
                : solution.status == SolveStatus::infeasible ? "infeasible"
                                                             : "numerical_limit";
  j["residuals"] = {{"primal", solution.residuals.primal},
                    {"dual", solution.residuals.dual},
                    {"gap", solution.residuals.gap},
                    {"compl_slack", solution.residuals.compl_slack}};
  j["iterations"] = solution.iterations;
  j["objective"] = solution.objective;
  j["dual_objective"] = solution.dual_objective;
  return j.dump();
}

ConicSolution conic_solution_from_json(const std::string& text) {
  const json j = json::parse(text);
  ConicSolution s;
  for (const auto& m : j.at("w")) s.w.push_back(matrix_from_json(m));
  for (const auto& m : j.at("z")) s.z.push_back(matrix_from_json(m));
  s.x = vecd_from_json(j.at("x"));
  s.lambda = vecd_from_json(j.at("lambda"));
  s.mu = vecd_from_json(j.at("mu"));
  s.nu = vecd_from_json(j.at("nu"));
  s.omega = vecd_from_json(j.at("omega"));
  const std::string st = j.at("status").get<std::string>();
  s.status = st == "optimal"      ? SolveStatus::optimal
             : st == "infeasible" ? SolveStatus::infeasible
                                  : SolveStatus::numerical_limit;
  s.residuals.primal = j.at("residuals").at("primal").get<double>();
  s.residuals.dual = j.at("residuals").at("dual").get<double>();
  s.residuals.gap = j.at("residuals").at("gap").get<double>();
  s.residuals.compl_slack = j.at("residuals").at("compl_slack").get<double>();
  s.iterations = j.at("iterations").get<int>();
  s.objective = j.at("objective").get<double>();
  s.dual_objective = j.at("dual_objective").get<double>();
  return s;
}

std::string to_json(const ExperimentSpec& spec) {
  json j;
  j["config"] = config_to_json_obj(spec.base);
  j["axis"] = to_string(spec.axis);
  j["values"] = spec.values;
  json methods = json::array();
  for (Method m : spec.methods) methods.push_back(to_string(m));
  j["methods"] = std::move(methods);
  j["num_trials"] = spec.num_trials;
  j["mc_samples"] = spec.mc_samples;
  j["sca"] = {{"gamma", spec.sca.gamma},
              {"theta", spec.sca.theta},
              {"tolerance", spec.sca.tolerance},
              {"max_iterations", spec.sca.max_iterations}};
  return j.dump(2);
}

ExperimentSpec experiment_spec_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentSpec spec;
  if (j.contains("config")) spec.base = config_from_json_obj(j.at("config"));
  if (j.contains("axis")) spec.axis = axis_from_string(j.at("axis").get<std::string>());
  if (j.contains("values")) spec.values = j.at("values").get<std::vector<double>>();
  if (j.contains("methods")) {
    spec.methods.clear();
    for (const auto& m : j.at("methods"))
      spec.methods.push_back(method_from_string(m.get<std::string>()));
  }
  spec.num_trials = j.value("num_trials", spec.num_trials);
  spec.mc_samples = j.value("mc_samples", spec.mc_samples);
  if (j.contains("sca")) {
    const auto& s = j.at("sca");
    spec.sca.gamma = s.value("gamma", spec.sca.gamma);
    spec.sca.theta = s.value("theta", spec.sca.theta);
    spec.sca.tolerance = s.value("tolerance", spec.sca.tolerance);
    spec.sca.max_iterations = s.value("max_iterations", spec.sca.max_iterations);
  }
  return spec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cranplan
