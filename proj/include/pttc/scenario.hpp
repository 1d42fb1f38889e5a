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

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pttc/calibration.hpp"
#include "pttc/trajectory.hpp"

namespace pttc {

// Rider evasive maneuvers. The reaction engages at the first sample where
// the perceived TTC drops into (0, reaction_ttc] and holds until the TTC
// recovers above the threshold (brake) or the lateral clearance is reached
// (swerve).
struct BrakeReaction {
  double decel = 1.5;  // m/s^2
};

struct SwerveReaction {
  double lateral_speed = 1.0;  // m/s
  double clearance = 1.2;     // target lateral separation, m
};

using Reaction = std::variant<BrakeReaction, SwerveReaction>;

// Straight-lane two-agent scenario inside a corridor. The rider always moves
// in +x; the pedestrian walks toward it (facing) or ahead of it (passing).
// lateral_offset is the pedestrian lane minus the rider lane.
// reaction_ttc = 0 disables the reaction and permits collision-course
// fixtures.
struct ScenarioSpec {
  TrialKind kind = TrialKind::Facing;
  double corridor_length = 35.0;  // m
  double corridor_width = 3.0;    // m
  double rider_speed = 2.0;       // m/s, capped at 5
  double pedestrian_speed = 1.2;  // m/s
  double initial_gap = 20.0;      // m
  double lateral_offset = 0.6;    // m
  double reaction_ttc = 0.5;      // s
  Reaction reaction = SwerveReaction{};
  double sample_rate = 120.0;     // Hz
  std::uint64_t seed = 0;         // drives ensemble variation
};

ScenarioSpec facing_defaults();
ScenarioSpec passing_defaults();

// Throws InvalidSpec when the spec violates its bounds or the geometry does
// not fit the corridor.
void validate(const ScenarioSpec& spec);

// Simulates one trial at sample_rate. Deterministic. Throws InfeasibleSpec
// when a requested reaction fails to prevent coincidence.
TrialRecord generate(const ScenarioSpec& spec,
                     const std::string& trial_id = "synthetic");

// Synthetic discomfort reports: calibration curve plus gaussian noise,
// rounded onto the 0..6 scale.
struct LabelModel {
  CalibrationModel calibration;
  double noise_sigma = 0.3;
  std::uint64_t seed = 0;
};

DiscomfortLevel synth_label(double min_ttc, const LabelModel& model);

// Generates count trials with deterministic per-set and per-trial parameter
// variation derived from base.seed. Trials are assigned round-robin to
// `sets` participant pairs (rider-A/ped-A, ...), mimicking repeated trials
// per set. When labels are given, each trial is analyzed and both roles
// receive a synthetic report.
std::vector<TrialRecord> generate_ensemble(const ScenarioSpec& base,
                                           std::size_t count, std::size_t sets,
                                           const std::optional<LabelModel>& labels,
                                           const std::string& id_prefix);

}  // namespace pttc
