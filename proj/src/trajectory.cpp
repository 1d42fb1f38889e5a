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

#include "pttc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "pttc/errors.hpp"

namespace pttc {

namespace {

constexpr double kJitterTolerance = 0.20;     // fraction of the median interval
constexpr double kMinOverlapSeconds = 1.0;
constexpr double kGridTolerance = 1e-9;       // seconds

double median_interval(const Trajectory& traj) {
  std::vector<double> intervals;
  intervals.reserve(traj.samples.size());
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    intervals.push_back(traj.samples[k].t - traj.samples[k - 1].t);
  }
  std::sort(intervals.begin(), intervals.end());
  return intervals[intervals.size() / 2];
}

// Linear interpolation between estimated states; t must lie within the span.
KinematicState interpolate_state(const std::vector<KinematicState>& states, double t) {
  auto it = std::lower_bound(
      states.begin(), states.end(), t,
      [](const KinematicState& s, double value) { return s.t < value; });
  if (it == states.end()) return states.back();
  if (it == states.begin() || std::abs(it->t - t) <= kGridTolerance) {
    KinematicState out = *it;
    out.t = t;
    return out;
  }
  const KinematicState& hi = *it;
  const KinematicState& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  KinematicState out;
  out.t = t;
  out.position = lo.position + (hi.position - lo.position) * w;
  out.velocity = lo.velocity + (hi.velocity - lo.velocity) * w;
  return out;
}

std::vector<double> timestamps_within(const std::vector<KinematicState>& states,
                                      double start, double end) {
  std::vector<double> out;
  for (const auto& s : states) {
    if (s.t >= start - kGridTolerance && s.t <= end + kGridTolerance) {
      out.push_back(s.t);
    }
  }
  return out;
}

bool same_timeline(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > kGridTolerance) return false;
  }
  return true;
}

}  // namespace

std::string to_string(TrialKind kind) {
  return kind == TrialKind::Facing ? "facing" : "passing";
}

std::string to_string(Role role) {
  return role == Role::Rider ? "rider" : "pedestrian";
}

TrialKind trial_kind_from_string(const std::string& text) {
  if (text == "facing") return TrialKind::Facing;
  if (text == "passing") return TrialKind::Passing;
  throw ParseError("unknown trial kind '" + text + "'");
}

std::vector<std::string> validate(const Trajectory& traj) {
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    if (!(std::isfinite(s.t) && std::isfinite(s.x) && std::isfinite(s.y))) {
      throw InvalidTrajectory("trajectory '" + traj.agent_id +
                              "': non-finite sample at index " + std::to_string(k));
    }
    if (k > 0 && s.t <= traj.samples[k - 1].t) {
      throw InvalidTrajectory("trajectory '" + traj.agent_id +
                              "': timestamps not strictly increasing at index " +
                              std::to_string(k));
    }
  }

  std::vector<std::string> warnings;
  if (traj.samples.size() >= 3) {
    const double median = median_interval(traj);
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
      const double dt = traj.samples[k].t - traj.samples[k - 1].t;
      if (std::abs(dt - median) > kJitterTolerance * median) {
        warnings.push_back("trajectory '" + traj.agent_id +
                           "': sample interval at t=" + std::to_string(traj.samples[k].t) +
                           " deviates more than 20% from the median interval");
        break;
      }
    }
  }
  return warnings;
}

std::vector<KinematicState> estimate_velocities(const Trajectory& traj,
                                                double smoothing_window) {
  validate(traj);
  if (traj.samples.size() < 3) {
    throw TooFewSamples("trajectory '" + traj.agent_id + "' has " +
                        std::to_string(traj.samples.size()) +
                        " samples; velocity estimation needs at least 3");
  }
  if (!(smoothing_window >= 0.0) || !std::isfinite(smoothing_window)) {
    throw InvalidInput("smoothing window must be finite and non-negative");
  }

  const auto& s = traj.samples;
  const std::size_t n = s.size();
  std::vector<KinematicState> states(n);
  for (std::size_t k = 0; k < n; ++k) {
    states[k].t = s[k].t;
    states[k].position = {s[k].x, s[k].y};
  }

  auto diff = [&](std::size_t hi, std::size_t lo) {
    const double dt = s[hi].t - s[lo].t;
    return Vec2{(s[hi].x - s[lo].x) / dt, (s[hi].y - s[lo].y) / dt};
  };

  states[0].velocity = diff(1, 0);
  states[n - 1].velocity = diff(n - 1, n - 2);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    states[k].velocity = diff(k + 1, k - 1);
  }

  if (smoothing_window > 0.0) {
    const double half = smoothing_window / 2.0;
    std::vector<Vec2> smoothed(n);
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t k = 0; k < n; ++k) {
      while (s[lo].t < s[k].t - half) ++lo;
      while (hi < n && s[hi].t <= s[k].t + half) ++hi;
      Vec2 sum;
      for (std::size_t j = lo; j < hi; ++j) sum = sum + states[j].velocity;
      smoothed[k] = sum * (1.0 / static_cast<double>(hi - lo));
    }
    for (std::size_t k = 0; k < n; ++k) states[k].velocity = smoothed[k];
  }
  return states;
}

AlignedPair align_pair(const Trajectory& a, const Trajectory& b,
                       double smoothing_window) {
  auto states_a = estimate_velocities(a, smoothing_window);
  auto states_b = estimate_velocities(b, smoothing_window);

  const double start = std::max(states_a.front().t, states_b.front().t);
  const double end = std::min(states_a.back().t, states_b.back().t);
  if (end - start < kMinOverlapSeconds - kGridTolerance) {
    throw NoOverlap("trajectories '" + a.agent_id + "' and '" + b.agent_id +
                    "' overlap for " + std::to_string(std::max(0.0, end - start)) +
                    " s; at least 1 s required");
  }

  // Identical timelines pass through; otherwise resample onto the coarser
  // native rate.
  std::vector<double> grid = timestamps_within(states_a, start, end);
  const auto grid_b = timestamps_within(states_b, start, end);
  if (!same_timeline(grid, grid_b)) {
    const double dt = std::max(median_interval(a), median_interval(b));
    grid.clear();
    for (double t = start; t <= end + kGridTolerance; t += dt) grid.push_back(t);
  }

  AlignedPair out;
  out.first.reserve(grid.size());
  out.second.reserve(grid.size());
  for (double t : grid) {
    out.first.push_back(interpolate_state(states_a, t));
    out.second.push_back(interpolate_state(states_b, t));
  }
  return out;
}

TtcSeries ttc_series(const Trajectory& a, const Trajectory& b,
                     double smoothing_window) {
  const AlignedPair aligned = align_pair(a, b, smoothing_window);
  TtcSeries series;
  series.reserve(aligned.first.size());
  for (std::size_t k = 0; k < aligned.first.size(); ++k) {
    const RelativeState rel = relative_state(aligned.first[k], aligned.second[k]);
    series.push_back({aligned.first[k].t, perceived_ttc(rel), rel.range,
                      rel.closing_speed});
  }
  return series;
}

double detect_pass(const TtcSeries& series) {
  if (series.empty()) throw EmptySeries("cannot detect the passing moment of an empty series");
  std::size_t best = 0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (series[k].range < series[best].range) best = k;
  }
  return series[best].t;
}

MinTtc min_perceived_ttc(const TtcSeries& series, double pass_time) {
  if (series.empty()) throw EmptySeries("cannot scan an empty series");
  bool found = false;
  MinTtc result;
  for (const auto& sample : series) {
    if (sample.t >= pass_time) continue;
    if (!sample.ttc.is_finite() || sample.ttc.seconds() <= 0.0) continue;
    if (!found || sample.ttc.seconds() < result.value) {
      result.value = sample.ttc.seconds();
      result.time = sample.t;
      found = true;
    }
  }
  if (!found) {
    throw NoApproachPhase("no positive finite perceived TTC before the passing moment");
  }
  return result;
}

TrialAnalysis analyze_trial(const TrialRecord& trial, const AnalysisOptions& options) {
  for (const auto& [role, level] : trial.reported_discomfort) {
    if (level < 0 || level > 6) {
      throw InvalidInput("trial '" + trial.trial_id + "': discomfort for " +
                         to_string(role) + " outside 0..6");
    }
  }
  TrialAnalysis analysis;
  analysis.series = ttc_series(trial.rider, trial.pedestrian, options.smoothing_window);
  analysis.pass_time = detect_pass(analysis.series);
  const MinTtc minimum = min_perceived_ttc(analysis.series, analysis.pass_time);
  analysis.min_ttc = minimum.value;
  analysis.min_ttc_time = minimum.time;
  return analysis;
}

}  // namespace pttc
