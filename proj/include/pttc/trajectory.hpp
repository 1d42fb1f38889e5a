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

#include <map>
#include <string>
#include <vector>

#include "pttc/kinematics.hpp"

namespace pttc {

struct TrajectorySample {
  double t = 0.0;  // seconds
  double x = 0.0;  // meters
  double y = 0.0;

  friend constexpr bool operator==(TrajectorySample, TrajectorySample) = default;
};

// Timed positions of one agent. Timestamps must be strictly increasing; the
// nominal rate is arbitrary but should be locally uniform.
struct Trajectory {
  std::string agent_id;
  std::vector<TrajectorySample> samples;
};

enum class TrialKind { Facing, Passing };
enum class Role { Rider, Pedestrian };

std::string to_string(TrialKind kind);
std::string to_string(Role role);
TrialKind trial_kind_from_string(const std::string& text);

// One recorded interaction: two trajectories plus the discomfort each
// participant reported on the 0..6 scale (empty map when not reported).
struct TrialRecord {
  std::string trial_id;
  TrialKind kind = TrialKind::Facing;
  Trajectory rider;
  Trajectory pedestrian;
  std::map<Role, int> reported_discomfort;
};

struct TtcSample {
  double t = 0.0;
  TtcValue ttc = TtcValue::no_approach();
  double range = 0.0;
  double closing_speed = 0.0;
};

using TtcSeries = std::vector<TtcSample>;

// Result of analyzing one trial: the passing moment (instant of minimum
// inter-agent range) and the minimum positive perceived TTC before it.
struct TrialAnalysis {
  double pass_time = 0.0;
  double min_ttc = 0.0;
  double min_ttc_time = 0.0;
  TtcSeries series;
};

struct AnalysisOptions {
  double smoothing_window = 0.0;  // seconds; 0 disables velocity smoothing
};

// Checks hard invariants (finite fields, strictly increasing timestamps;
// throws InvalidTrajectory) and returns soft warnings, currently sample
// intervals deviating more than 20% from the trajectory's median interval.
std::vector<std::string> validate(const Trajectory& traj);

// Central-difference velocities at interior samples, one-sided at the ends,
// optionally followed by a centered moving average over smoothing_window
// seconds. Exact for polynomial motion of degree <= 2 at interior samples.
std::vector<KinematicState> estimate_velocities(const Trajectory& traj,
                                                double smoothing_window = 0.0);

struct AlignedPair {
  std::vector<KinematicState> first;
  std::vector<KinematicState> second;  // same timestamps as first
};

// Resamples both trajectories by linear interpolation onto the coarser of
// the two native rates over their overlap window. Identical timelines pass
// through untouched. Throws NoOverlap when the overlap is shorter than 1 s.
AlignedPair align_pair(const Trajectory& a, const Trajectory& b,
                       double smoothing_window = 0.0);

// Perceived TTC at every aligned timestamp.
TtcSeries ttc_series(const Trajectory& a, const Trajectory& b,
                     double smoothing_window = 0.0);

// Timestamp of the global minimum range; earliest such timestamp on ties.
double detect_pass(const TtcSeries& series);

struct MinTtc {
  double value = 0.0;
  double time = 0.0;
};

// Minimum finite positive perceived TTC over samples strictly before
// pass_time. Throws NoApproachPhase when no such sample exists.
MinTtc min_perceived_ttc(const TtcSeries& series, double pass_time);

TrialAnalysis analyze_trial(const TrialRecord& trial,
                            const AnalysisOptions& options = {});

}  // namespace pttc
