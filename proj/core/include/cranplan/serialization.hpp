// SPDX-License-Identifier: Apache-2.0
//
// JSON (de)serialization for configs, instances, pilot assignments, SDP
// problems/solutions, and experiment specs. Schema documented in the README.
#pragma once

#include <string>

#include "cranplan/conic_sdp.hpp"
#include "cranplan/experiments.hpp"
#include "cranplan/pilot_alloc.hpp"
#include "cranplan/topology.hpp"

namespace cranplan {

std::string to_json(const NetworkConfig& config);
NetworkConfig config_from_json(const std::string& text);

std::string to_json(const NetworkInstance& inst);
NetworkInstance instance_from_json(const std::string& text);

std::string to_json(const PilotAssignment& assignment);
PilotAssignment assignment_from_json(const std::string& text);

std::string to_json(const SdpProblem& problem);
SdpProblem sdp_problem_from_json(const std::string& text);

std::string to_json(const ConicSolution& solution);
ConicSolution conic_solution_from_json(const std::string& text);

std::string to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace cranplan
