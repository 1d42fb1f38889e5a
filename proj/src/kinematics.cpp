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

#include "pttc/kinematics.hpp"

#include <algorithm>
#include <string>

#include "pttc/errors.hpp"

namespace pttc {

RelativeState relative_state(const KinematicState& a, const KinematicState& b) {
  if (!(std::isfinite(a.t) && std::isfinite(b.t) && a.position.finite() &&
        b.position.finite() && a.velocity.finite() && b.velocity.finite())) {
    throw InvalidInput("relative_state: non-finite agent state");
  }
  if (std::abs(a.t - b.t) > kTimestampTolerance) {
    throw TimestampMismatch("relative_state: timestamps differ by " +
                            std::to_string(a.t - b.t) + " s");
  }

  RelativeState rel;
  rel.relative_position = b.position - a.position;
  rel.relative_velocity = b.velocity - a.velocity;
  rel.range = rel.relative_position.norm();

  const double approach = rel.relative_position.dot(rel.relative_velocity);
  const double speed = rel.relative_velocity.norm();
  rel.closing_speed = rel.range > 0.0 ? -approach / rel.range : 0.0;
  rel.cos_angle = (rel.range > 0.0 && speed > 0.0)
                      ? std::clamp(approach / (rel.range * speed), -1.0, 1.0)
                      : 0.0;
  return rel;
}

TtcValue perceived_ttc(const RelativeState& rel) {
  if (rel.range < kCoincidenceEpsilon) return TtcValue::coincident();
  if (std::abs(rel.closing_speed) < kNoApproachEpsilon) return TtcValue::no_approach();
  return TtcValue::finite(rel.range / rel.closing_speed);
}

TtcValue perceived_ttc_by_angle(const RelativeState& rel) {
  if (rel.range < kCoincidenceEpsilon) return TtcValue::coincident();
  const double los_speed = rel.relative_velocity.norm() * std::abs(rel.cos_angle);
  if (los_speed < kNoApproachEpsilon) return TtcValue::no_approach();
  const double magnitude = rel.range / los_speed;
  return TtcValue::finite(rel.closing_speed > 0.0 ? magnitude : -magnitude);
}

}  // namespace pttc
