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

#include "pttc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pttc/errors.hpp"
#include "pttc/random.hpp"

namespace pttc {

namespace {

constexpr double kMaxRiderSpeed = 5.0;    // m/s, enforced vehicle cap
constexpr double kPostPassMargin = 2.0;   // s recorded beyond the nominal pass
constexpr double kMinTrialSeconds = 1.5;

double swerve_clearance(const Reaction& reaction) {
  if (const auto* swerve = std::get_if<SwerveReaction>(&reaction)) {
    return swerve->clearance;
  }
  return 0.0;
}

// Closest continuous approach between two samples, with both agents moving
// at the velocities used for that step.
double segment_min_range(Vec2 relative_position, Vec2 relative_velocity, double dt) {
  const double vv = relative_velocity.dot(relative_velocity);
  double s = 0.0;
  if (vv > 0.0) {
    s = std::clamp(-relative_position.dot(relative_velocity) / vv, 0.0, dt);
  }
  return (relative_position + relative_velocity * s).norm();
}

std::string set_tag(std::size_t set) {
  if (set < 26) return std::string(1, static_cast<char>('A' + set));
  return std::to_string(set);
}

}  // namespace

ScenarioSpec facing_defaults() { return ScenarioSpec{}; }

ScenarioSpec passing_defaults() {
  ScenarioSpec spec;
  spec.kind = TrialKind::Passing;
  spec.rider_speed = 3.0;
  spec.pedestrian_speed = 1.2;
  spec.initial_gap = 10.0;
  spec.lateral_offset = 0.6;
  spec.reaction_ttc = 1.2;
  spec.reaction = BrakeReaction{};
  return spec;
}

void validate(const ScenarioSpec& spec) {
  if (!(spec.rider_speed > 0.0) || spec.rider_speed > kMaxRiderSpeed) {
    throw InvalidSpec("rider speed must be in (0, 5] m/s");
  }
  if (!(spec.pedestrian_speed >= 0.0)) {
    throw InvalidSpec("pedestrian speed must be non-negative");
  }
  if (!(spec.sample_rate > 0.0)) throw InvalidSpec("sample rate must be positive");
  if (!(spec.reaction_ttc >= 0.0)) throw InvalidSpec("reaction TTC must be non-negative");
  if (!(spec.corridor_length > 0.0) || !(spec.corridor_width > 0.0)) {
    throw InvalidSpec("corridor dimensions must be positive");
  }
  if (!(spec.initial_gap > 0.0) || spec.initial_gap > spec.corridor_length) {
    throw InvalidSpec("initial gap must be positive and fit the corridor");
  }
  if (std::abs(spec.lateral_offset) + swerve_clearance(spec.reaction) >
      spec.corridor_width) {
    throw InvalidSpec("lateral offset plus swerve clearance exceeds the corridor width");
  }
  if (const auto* brake = std::get_if<BrakeReaction>(&spec.reaction)) {
    if (brake->decel < 0.0) throw InvalidSpec("brake deceleration must be non-negative");
  }
  if (const auto* swerve = std::get_if<SwerveReaction>(&spec.reaction)) {
    if (swerve->lateral_speed < 0.0 || swerve->clearance < 0.0) {
      throw InvalidSpec("swerve parameters must be non-negative");
    }
  }
}

TrialRecord generate(const ScenarioSpec& spec, const std::string& trial_id) {
  validate(spec);

  const double dt = 1.0 / spec.sample_rate;
  const bool facing = spec.kind == TrialKind::Facing;
  const auto* swerve = std::get_if<SwerveReaction>(&spec.reaction);
  const auto* brake = std::get_if<BrakeReaction>(&spec.reaction);

  // Lane layout. The occupied lateral band spans from the swerve target to
  // the pedestrian lane and is centered on the corridor axis, so every
  // position stays within |y| <= corridor_width/2.
  const double side = spec.lateral_offset >= 0.0 ? 1.0 : -1.0;
  const double band =
      std::max(std::abs(spec.lateral_offset), swerve ? swerve->clearance : 0.0);
  const double ped_y = side * band / 2.0;
  const double rider_y0 = ped_y - spec.lateral_offset;
  const double swerve_target_y = -side * band / 2.0;

  const double rider_x0 = facing ? (spec.corridor_length - spec.initial_gap) / 2.0 : 0.0;
  const double ped_x0 = rider_x0 + spec.initial_gap;
  const double ped_vx = facing ? -spec.pedestrian_speed : spec.pedestrian_speed;

  // Record long enough to cover the pass plus a margin, clipped so nobody
  // leaves the corridor in x.
  const double closure =
      facing ? spec.rider_speed + spec.pedestrian_speed
             : spec.rider_speed - spec.pedestrian_speed;
  double horizon = closure > kNoApproachEpsilon
                       ? spec.initial_gap / closure + kPostPassMargin
                       : 2.0 * kMinTrialSeconds;
  const double rider_exit = (spec.corridor_length - rider_x0) / spec.rider_speed;
  horizon = std::min(horizon, rider_exit);
  if (spec.pedestrian_speed > 0.0) {
    const double ped_exit = facing
                                ? ped_x0 / spec.pedestrian_speed
                                : (spec.corridor_length - ped_x0) / spec.pedestrian_speed;
    horizon = std::min(horizon, ped_exit);
  }
  if (horizon < kMinTrialSeconds) {
    throw InvalidSpec("corridor too short for the configured approach");
  }

  const bool reaction_enabled = spec.reaction_ttc > 0.0;
  Vec2 rider_pos{rider_x0, rider_y0};
  Vec2 rider_vel{spec.rider_speed, 0.0};
  const Vec2 ped_vel{ped_vx, 0.0};
  Vec2 ped_pos{ped_x0, ped_y};

  TrialRecord trial;
  trial.trial_id = trial_id;
  trial.kind = spec.kind;
  trial.rider.agent_id = "rider";
  trial.pedestrian.agent_id = "pedestrian";

  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  trial.rider.samples.reserve(steps + 1);
  trial.pedestrian.samples.reserve(steps + 1);

  // The brake releases once the TTC recovers above the threshold; the swerve
  // latches until the clearance is reached, otherwise it would chatter at the
  // sample rate because the lateral escape velocity itself raises the TTC.
  bool swerving = false;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    trial.rider.samples.push_back({t, rider_pos.x, rider_pos.y});
    trial.pedestrian.samples.push_back({t, ped_pos.x, ped_pos.y});
    if (k == steps) break;

    const RelativeState rel =
        relative_state({t, rider_pos, rider_vel}, {t, ped_pos, ped_vel});
    const TtcValue ttc = perceived_ttc(rel);
    const bool reacting = reaction_enabled && ttc.is_finite() &&
                          ttc.seconds() > 0.0 &&
                          ttc.seconds() <= spec.reaction_ttc;

    if (reacting && brake) {
      rider_vel.x = std::max(0.0, rider_vel.x - brake->decel * dt);
    }
    if (swerve) {
      if (reacting) swerving = true;
      if (std::abs(rider_pos.y - ped_y) >= swerve->clearance) swerving = false;
      rider_vel.y = swerving ? -side * swerve->lateral_speed : 0.0;
    }

    rider_pos = rider_pos + rider_vel * dt;
    if (swerve) {
      rider_pos.y = side > 0.0 ? std::max(rider_pos.y, swerve_target_y)
                               : std::min(rider_pos.y, swerve_target_y);
    }
    ped_pos = ped_pos + ped_vel * dt;

    if (reaction_enabled &&
        segment_min_range(rel.relative_position, ped_vel - rider_vel, dt) <
            kCoincidenceEpsilon) {
      throw InfeasibleSpec("configured reaction cannot prevent coincidence");
    }
  }
  return trial;
}

DiscomfortLevel synth_label(double min_ttc, const LabelModel& model) {
  if (!(min_ttc > 0.0)) throw InvalidInput("synth_label requires a positive TTC");
  Rng rng(model.seed);
  const double raw = estimate(model.calibration, min_ttc).raw +
                     rng.gaussian(0.0, model.noise_sigma);
  const auto level = static_cast<int>(std::lround(std::clamp(raw, 0.0, 6.0)));
  return discomfort_level(level);
}

std::vector<TrialRecord> generate_ensemble(const ScenarioSpec& base,
                                           std::size_t count, std::size_t sets,
                                           const std::optional<LabelModel>& labels,
                                           const std::string& id_prefix) {
  validate(base);
  if (sets == 0) sets = 1;

  std::vector<TrialRecord> trials;
  trials.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t set = i % sets;

    // Per-set factors model one participant pair's habits; per-trial factors
    // model trial-to-trial scatter. The threshold spread leans low so the
    // ensemble covers the short-TTC region where discomfort varies most.
    Rng set_rng(derive_seed(base.seed, 1000 + set));
    const double set_ttc = set_rng.uniform(0.65, 1.10);
    const double set_rider = set_rng.uniform(0.90, 1.10);
    const double set_ped = set_rng.uniform(0.90, 1.10);

    Rng rng(derive_seed(base.seed, 2000 + i));
    ScenarioSpec spec = base;
    spec.rider_speed =
        std::min(kMaxRiderSpeed, base.rider_speed * set_rider * rng.uniform(0.95, 1.05));
    spec.pedestrian_speed = base.pedestrian_speed * set_ped * rng.uniform(0.95, 1.05);
    spec.initial_gap = base.initial_gap * rng.uniform(0.90, 1.10);
    spec.reaction_ttc = base.reaction_ttc * set_ttc * rng.uniform(0.85, 1.15);
    const double max_offset =
        spec.corridor_width - swerve_clearance(spec.reaction);
    spec.lateral_offset = std::clamp(base.lateral_offset + rng.uniform(-0.15, 0.15),
                                     -max_offset, max_offset);
    spec.seed = derive_seed(base.seed, 3000 + i);

    char suffix[32];
    std::snprintf(suffix, sizeof(suffix), "-%04zu", i + 1);
    TrialRecord trial = generate(spec, id_prefix + suffix);
    trial.rider.agent_id = "rider-" + set_tag(set);
    trial.pedestrian.agent_id = "ped-" + set_tag(set);

    if (labels) {
      const TrialAnalysis analysis = analyze_trial(trial);
      for (Role role : {Role::Rider, Role::Pedestrian}) {
        LabelModel per_trial = *labels;
        per_trial.seed = derive_seed(labels->seed,
                                     2 * i + (role == Role::Rider ? 0 : 1));
        trial.reported_discomfort[role] =
            synth_label(analysis.min_ttc, per_trial).value;
      }
    }
    trials.push_back(std::move(trial));
  }
  return trials;
}

}  // namespace pttc
