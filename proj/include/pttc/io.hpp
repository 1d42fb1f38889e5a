// Copyright 2026 The pttc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pttc/calibration.hpp"
#include "pttc/scenario.hpp"
#include "pttc/stats.hpp"
#include "pttc/stream.hpp"
#include "pttc/trajectory.hpp"

namespace pttc::io {

// Decimal text with 17 significant digits; round-trips doubles losslessly.
std::string format_double(double value);

// Writes via a temporary file plus rename so readers never observe partial
// content.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_text(const std::filesystem::path& path);

// Trajectory CSV: header `t,agent_id,x,y`, one sample per row, rows grouped
// or interleaved by agent. Returns trajectories keyed by agent id; jitter
// warnings are appended to *warnings when given.
std::map<std::string, Trajectory> read_trajectory_csv(
    const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<Trajectory>& trajectories);

// Trial manifest JSON: {"trials": [{trial_id, kind, rider, pedestrian,
// discomfort?, trajectories: [csv paths relative to the manifest]}]}.
std::vector<TrialRecord> read_trial_manifest(const std::filesystem::path& path,
                                             std::vector<std::string>* warnings = nullptr);

// Writes one CSV per trial plus manifest.json into dir.
void write_trial_set(const std::filesystem::path& dir,
                     const std::vector<TrialRecord>& trials);

nlohmann::json model_to_json(const CalibrationModel& model);
CalibrationModel model_from_json(const nlohmann::json& j);
void save_model(const std::filesystem::path& path, const CalibrationModel& model);
CalibrationModel load_model(const std::filesystem::path& path);

nlohmann::json box_stats_to_json(const BoxStats& stats);

// Line protocol of the stream command.
AgentUpdate update_from_json(const nlohmann::json& j);
nlohmann::json event_to_json(const ComfortEvent& event);

nlohmann::json ttc_to_json(const TtcValue& ttc);

// Scenario JSON for the simulate command: ScenarioSpec fields plus optional
// "sets" and "label_model". Missing fields fall back to the kind's defaults.
struct SimulationSpec {
  ScenarioSpec scenario;
  std::size_t sets = 1;
  std::optional<LabelModel> labels;
};

SimulationSpec simulation_spec_from_json(const nlohmann::json& j);
SimulationSpec load_simulation_spec(const std::filesystem::path& path);
nlohmann::json simulation_spec_to_json(const SimulationSpec& spec);

}  // namespace pttc::io
