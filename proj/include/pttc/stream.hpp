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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pttc/calibration.hpp"
#include "pttc/kinematics.hpp"

namespace pttc {

// One incremental observation of an agent. Velocity may be omitted; it is
// then recovered from consecutive updates by finite differences.
struct AgentUpdate {
  std::string agent_id;
  double t = 0.0;
  Vec2 position;
  std::optional<Vec2> velocity;
};

// Pairwise result pushed out on every update: perceived TTC plus the
// calibrated discomfort estimate. alert is true when the clamped estimate
// reaches the configured threshold.
struct ComfortEvent {
  double t = 0.0;
  std::pair<std::string, std::string> pair;  // agent ids, lexicographic
  TtcValue ttc = TtcValue::no_approach();
  double discomfort_raw = 0.0;
  double discomfort_clamped = 0.0;
  bool alert = false;
};

struct StreamConfig {
  CalibrationModel model;
  double alert_threshold = 2.0;   // discomfort level in [0, 6]
  double staleness_window = 0.5;  // s; peers older than this are ignored
};

// Online discomfort estimator. Updates are applied in call order (one writer
// at a time); independent instances may run in parallel.
//
// On each update, one event is emitted per peer whose latest state lies
// within the staleness window. The fresher of the two states is extrapolated
// back to the older timestamp at constant velocity, so events never reach
// ahead of observed data. Per pair, events are strictly monotone in time;
// a replay of aligned trial samples therefore reproduces the batch series
// one event per timestamp.
class StreamEstimator {
 public:
  explicit StreamEstimator(StreamConfig config);

  std::vector<ComfortEvent> push_update(const AgentUpdate& update);

  // Throws OutOfRange outside [0, 6].
  void set_threshold(double level);
  double threshold() const { return config_.alert_threshold; }

 private:
  struct TrackedAgent {
    double t = 0.0;
    Vec2 position;
    Vec2 velocity;
    bool has_velocity = false;
    double previous_t = 0.0;
    Vec2 previous_position;
    bool has_previous = false;
  };

  StreamConfig config_;
  std::map<std::string, TrackedAgent> agents_;
  std::map<std::pair<std::string, std::string>, double> last_event_time_;
};

}  // namespace pttc
