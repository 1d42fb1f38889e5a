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

#include "pttc/stream.hpp"

#include <algorithm>
#include <cmath>

#include "pttc/errors.hpp"

namespace pttc {

StreamEstimator::StreamEstimator(StreamConfig config) : config_(std::move(config)) {
  if (config_.alert_threshold < 0.0 || config_.alert_threshold > 6.0) {
    throw OutOfRange("alert threshold must lie in [0, 6]");
  }
  if (!(config_.staleness_window > 0.0)) {
    throw InvalidInput("staleness window must be positive");
  }
}

void StreamEstimator::set_threshold(double level) {
  if (!(level >= 0.0) || level > 6.0) {
    throw OutOfRange("alert threshold must lie in [0, 6]");
  }
  config_.alert_threshold = level;
}

std::vector<ComfortEvent> StreamEstimator::push_update(const AgentUpdate& update) {
  if (update.agent_id.empty()) throw InvalidInput("update without agent id");
  if (!std::isfinite(update.t) || !update.position.finite() ||
      (update.velocity && !update.velocity->finite())) {
    throw InvalidInput("update with non-finite fields");
  }

  TrackedAgent& agent = agents_[update.agent_id];
  const bool known = agent.has_velocity || agent.has_previous;
  if (known && update.t < agent.t) {
    throw TimeRegression("agent '" + update.agent_id + "' went back in time: " +
                         std::to_string(update.t) + " < " + std::to_string(agent.t));
  }

  if (known) {
    agent.previous_t = agent.t;
    agent.previous_position = agent.position;
    agent.has_previous = true;
  }
  agent.t = update.t;
  agent.position = update.position;
  if (update.velocity) {
    agent.velocity = *update.velocity;
    agent.has_velocity = true;
  } else if (agent.has_previous && update.t > agent.previous_t) {
    agent.velocity = (update.position - agent.previous_position) *
                     (1.0 / (update.t - agent.previous_t));
    agent.has_velocity = true;
  } else if (!agent.has_previous) {
    // First sighting without velocity: remember the position and wait for a
    // second update before producing events for this agent.
    agent.has_velocity = false;
    agent.has_previous = true;
    agent.previous_t = update.t;
    agent.previous_position = update.position;
  }

  std::vector<ComfortEvent> events;
  if (!agent.has_velocity) return events;

  for (const auto& [peer_id, peer] : agents_) {
    if (peer_id == update.agent_id || !peer.has_velocity) continue;
    if (std::abs(agent.t - peer.t) > config_.staleness_window) continue;

    // Bring the fresher agent back to the older timestamp so events use only
    // observed data.
    const double event_time = std::min(agent.t, peer.t);
    auto rewind = [event_time](const TrackedAgent& tracked) {
      KinematicState state{event_time,
                           tracked.position + tracked.velocity * (event_time - tracked.t),
                           tracked.velocity};
      return state;
    };

    auto key = std::minmax(update.agent_id, peer_id);
    const auto previous = last_event_time_.find(key);
    if (previous != last_event_time_.end() && event_time <= previous->second) {
      continue;  // keep the per-pair event stream strictly monotone
    }

    const RelativeState rel = relative_state(rewind(agent), rewind(peer));
    ComfortEvent event;
    event.t = event_time;
    event.pair = key;
    event.ttc = perceived_ttc(rel);
    if (event.ttc.is_finite() && event.ttc.seconds() > 0.0) {
      const DiscomfortEstimate result = estimate(config_.model, event.ttc.seconds());
      event.discomfort_raw = result.raw;
      event.discomfort_clamped = result.clamped;
    } else {
      // Not approaching: the calibrated curves tend to zero as TTC grows.
      event.discomfort_raw = 0.0;
      event.discomfort_clamped = 0.0;
    }
    event.alert = event.discomfort_clamped >= config_.alert_threshold;
    last_event_time_[key] = event_time;
    events.push_back(std::move(event));
  }
  return events;
}

}  // namespace pttc
