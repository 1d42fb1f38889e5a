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

#include <cmath>

namespace pttc {

// Planar vector, meters or meters/second depending on role.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }

  friend constexpr bool operator==(Vec2, Vec2) = default;
};

// One agent at one instant. Units are meters and seconds throughout.
struct KinematicState {
  double t = 0.0;
  Vec2 position;
  Vec2 velocity;
};

// Relative kinematics of a pair, taken from the first agent's point of view.
// closing_speed is the negated range rate: positive while the agents
// approach, negative while they recede.
struct RelativeState {
  Vec2 relative_position;  // second minus first, meters
  Vec2 relative_velocity;  // m/s
  double range = 0.0;
  double closing_speed = 0.0;
  double cos_angle = 0.0;  // between relative position and velocity; 0 when undefined
};

// Perceived time to collision. Degenerate geometries are tagged instead of
// producing infinities: Coincident when the agents (as centered masses)
// overlap, NoApproach when the line-of-sight speed is effectively zero.
class TtcValue {
 public:
  enum class Kind { Finite, NoApproach, Coincident };

  static TtcValue finite(double seconds) { return {Kind::Finite, seconds}; }
  static TtcValue no_approach() { return {Kind::NoApproach, 0.0}; }
  static TtcValue coincident() { return {Kind::Coincident, 0.0}; }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }

  // Meaningful only for finite values. Positive while the agents approach.
  double seconds() const { return seconds_; }

  friend bool operator==(const TtcValue&, const TtcValue&) = default;

 private:
  TtcValue(Kind kind, double seconds) : kind_(kind), seconds_(seconds) {}
  Kind kind_;
  double seconds_;
};

inline constexpr double kCoincidenceEpsilon = 1e-6;  // meters
inline constexpr double kNoApproachEpsilon = 1e-9;   // m/s
inline constexpr double kTimestampTolerance = 1e-9;  // seconds

// Relative state of two agents sampled at the same instant.
// Throws TimestampMismatch when the timestamps differ by more than
// kTimestampTolerance, InvalidInput on non-finite fields.
RelativeState relative_state(const KinematicState& a, const KinematicState& b);

// Range over line-of-sight closing speed. Identical for both orderings of
// the pair.
TtcValue perceived_ttc(const RelativeState& rel);

// Same quantity through the angle between relative position and velocity;
// agrees with perceived_ttc on finite results.
TtcValue perceived_ttc_by_angle(const RelativeState& rel);

}  // namespace pttc
