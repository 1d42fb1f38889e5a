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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <utility>

#include "pttc/errors.hpp"
#include "pttc/io.hpp"
#include "pttc/random.hpp"
#include "pttc/trajectory.hpp"

using namespace pttc;

namespace {

constexpr double kRate = 120.0;

Trajectory sampled(const std::string& id, double duration, double rate,
                   const std::function<Vec2(double)>& position) {
  Trajectory traj;
  traj.agent_id = id;
  const auto steps = static_cast<std::size_t>(std::llround(duration * rate));
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) / rate;
    const Vec2 p = position(t);
    traj.samples.push_back({t, p.x, p.y});
  }
  return traj;
}

Trajectory line_mover(const std::string& id, Vec2 start, Vec2 velocity,
                      double duration, double rate = kRate) {
  return sampled(id, duration, rate,
                 [=](double t) { return start + velocity * t; });
}

// The offset-pass fixture: mover at 2 m/s along y=0, static agent at (10,1).
// Closed form: min TTC is 1.0 s at t=4.5, minimum range at t=5.0.
TrialRecord offset_pass_trial() {
  TrialRecord trial;
  trial.trial_id = "offset-pass";
  trial.kind = TrialKind::Passing;
  trial.rider = line_mover("rider", {0, 0}, {2, 0}, 10.0);
  trial.pedestrian = line_mover("pedestrian", {10, 1}, {0, 0}, 10.0);
  return trial;
}

}  // namespace

TEST_CASE("velocities of linear motion are exact") {
  const auto states = estimate_velocities(line_mover("a", {0, 0}, {2, 0}, 1.0));
  for (std::size_t k = 1; k + 1 < states.size(); ++k) {
    CHECK(states[k].velocity.x == 2.0);
    CHECK(states[k].velocity.y == 0.0);
  }
}

TEST_CASE("velocities of quadratic motion are exact at interior samples") {
  const auto traj = sampled("a", 1.0, kRate, [](double t) { return Vec2{t * t, 0}; });
  const auto states = estimate_velocities(traj);
  for (std::size_t k = 1; k + 1 < states.size(); ++k) {
    CHECK(states[k].velocity.x ==
          doctest::Approx(2.0 * states[k].t).epsilon(1e-9));
  }
}

TEST_CASE("smoothing reduces the velocity error of a noisy sinusoid") {
  Rng rng(7);
  const double amplitude = 1.0;
  const double omega = 2.0 * 3.14159265358979 * 0.5;
  Trajectory traj = sampled("a", 4.0, kRate, [&](double t) {
    return Vec2{amplitude * std::sin(omega * t), 0};
  });
  for (auto& s : traj.samples) s.x += rng.gaussian(0.0, 0.002);

  auto rms_error = [&](const std::vector<KinematicState>& states) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
      const double truth = amplitude * omega * std::cos(omega * states[k].t);
      sum += (states[k].velocity.x - truth) * (states[k].velocity.x - truth);
      ++count;
    }
    return std::sqrt(sum / static_cast<double>(count));
  };

  const double raw = rms_error(estimate_velocities(traj, 0.0));
  const double smoothed = rms_error(estimate_velocities(traj, 0.25));
  CHECK(smoothed < raw);
}

TEST_CASE("velocity estimation needs at least three samples") {
  Trajectory tiny{"a", {{0, 0, 0}, {1, 1, 0}}};
  CHECK_THROWS_AS(estimate_velocities(tiny), TooFewSamples);
}

TEST_CASE("trajectory validation") {
  Trajectory bad{"a", {{0, 0, 0}, {1, 1, 0}, {1, 2, 0}}};
  CHECK_THROWS_AS(validate(bad), InvalidTrajectory);

  Trajectory gap{"a", {}};
  for (int k = 0; k <= 60; ++k) gap.samples.push_back({k / 60.0, 0, 0});
  gap.samples.push_back({1.5, 0, 0});  // missing stretch
  CHECK(!validate(gap).empty());

  CHECK(validate(line_mover("a", {0, 0}, {1, 0}, 1.0)).empty());
}

TEST_CASE("identical timelines pass through alignment untouched") {
  const auto a = line_mover("a", {0, 0}, {1, 0}, 2.0);
  const auto b = line_mover("b", {5, 0}, {-1, 0}, 2.0);
  const auto aligned = align_pair(a, b);
  REQUIRE(aligned.first.size() == a.samples.size());
  for (std::size_t k = 0; k < aligned.first.size(); ++k) {
    CHECK(aligned.first[k].t == a.samples[k].t);
    CHECK(aligned.first[k].position.x == a.samples[k].x);
    CHECK(aligned.second[k].position.x == b.samples[k].x);
  }
}

TEST_CASE("mixed rates resample onto the coarser timeline") {
  const auto fast = line_mover("a", {0, 0}, {1, 0}, 2.0, 120.0);
  const auto slow = line_mover("b", {5, 0}, {-1, 0}, 2.0, 60.0);
  const auto aligned = align_pair(fast, slow);
  REQUIRE(aligned.first.size() >= 2);
  for (std::size_t k = 1; k < aligned.first.size(); ++k) {
    CHECK(aligned.first[k].t - aligned.first[k - 1].t ==
          doctest::Approx(1.0 / 60.0).epsilon(1e-9));
  }
}

TEST_CASE("linear motion is resampled exactly") {
  const auto fast = line_mover("a", {0, 0}, {1.5, -0.5}, 2.0, 120.0);
  const auto slow = line_mover("b", {5, 1}, {-1, 0.25}, 2.0, 60.0);
  const auto aligned = align_pair(fast, slow);
  for (const auto& s : aligned.first) {
    CHECK(s.position.x == doctest::Approx(1.5 * s.t).epsilon(1e-12));
    CHECK(s.position.y == doctest::Approx(-0.5 * s.t).epsilon(1e-12));
  }
}

TEST_CASE("alignment requires one second of overlap") {
  const auto a = line_mover("a", {0, 0}, {1, 0}, 2.0);
  auto late = line_mover("b", {5, 0}, {-1, 0}, 2.0);
  for (auto& s : late.samples) s.t += 1.5;
  CHECK_THROWS_AS(align_pair(a, late), NoOverlap);
}

TEST_CASE("head-on series counts down to the coincidence tag") {
  const auto a = line_mover("a", {0, 0}, {2, 0}, 3.0);
  const auto b = line_mover("b", {10, 0}, {-3, 0}, 3.0);
  const auto series = ttc_series(a, b);
  for (const auto& sample : series) {
    if (sample.t < 2.0 - 1.0 / kRate) {
      REQUIRE(sample.ttc.is_finite());
      CHECK(sample.ttc.seconds() == doctest::Approx(2.0 - sample.t).epsilon(1e-9));
    }
    CHECK(std::isfinite(sample.range));
    CHECK(std::isfinite(sample.closing_speed));
  }
  // the crossing instant lands on a sample and tags as coincident
  const auto at_two = std::find_if(series.begin(), series.end(),
                                   [](const TtcSample& s) { return s.t == 2.0; });
  REQUIRE(at_two != series.end());
  CHECK(at_two->ttc == TtcValue::coincident());
}

TEST_CASE("parallel walkers never approach") {
  const auto a = line_mover("a", {0, 0}, {1.2, 0}, 2.0);
  const auto b = line_mover("b", {0, 1.5}, {1.2, 0}, 2.0);
  for (const auto& sample : ttc_series(a, b)) {
    CHECK(sample.ttc == TtcValue::no_approach());
  }
}

TEST_CASE("pass detection") {
  SUBCASE("monotone head-on approach") {
    const auto series = ttc_series(line_mover("a", {0, 0}, {2, 0}, 3.0),
                                   line_mover("b", {10, 0}, {-3, 0}, 3.0));
    CHECK(detect_pass(series) == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("offset pass at the closest point") {
    const auto trial = offset_pass_trial();
    const auto series = ttc_series(trial.rider, trial.pedestrian);
    CHECK(std::abs(detect_pass(series) - 5.0) <= 1.0 / kRate);
  }
  SUBCASE("constant range ties break earliest") {
    const auto a = line_mover("a", {0, 0}, {1, 0}, 2.0);
    const auto b = line_mover("b", {0, 2}, {1, 0}, 2.0);
    const auto series = ttc_series(a, b);
    CHECK(detect_pass(series) == series.front().t);
  }
  SUBCASE("empty series") {
    CHECK_THROWS_AS(detect_pass({}), EmptySeries);
  }
}

TEST_CASE("minimum perceived TTC of the offset pass") {
  const auto trial = offset_pass_trial();
  const auto series = ttc_series(trial.rider, trial.pedestrian);
  const double pass = detect_pass(series);
  const auto minimum = min_perceived_ttc(series, pass);
  CHECK(std::abs(minimum.value - 1.0) <= 1.0 / kRate);
  CHECK(std::abs(minimum.time - 4.5) <= 1.0 / kRate);
}

TEST_CASE("head-on minimum is the last pre-pass countdown value") {
  const auto series = ttc_series(line_mover("a", {0, 0}, {2, 0}, 3.0),
                                 line_mover("b", {10, 0}, {-3, 0}, 3.0));
  const double pass = detect_pass(series);
  const auto minimum = min_perceived_ttc(series, pass);
  CHECK(minimum.value == doctest::Approx(1.0 / kRate).epsilon(1e-6));
  CHECK(minimum.time == doctest::Approx(pass - 1.0 / kRate).epsilon(1e-9));
}

TEST_CASE("receding-only series has no approach phase") {
  const auto a = line_mover("a", {0, 0}, {-2, 0}, 2.0);
  const auto b = line_mover("b", {5, 0}, {2, 0}, 2.0);
  const auto series = ttc_series(a, b);
  CHECK_THROWS_AS(min_perceived_ttc(series, detect_pass(series)), NoApproachPhase);
}

TEST_CASE("minimum scan agrees with a brute-force oracle on random series") {
  Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    TtcSeries series;
    const auto count = static_cast<std::size_t>(rng.uniform(1, 60));
    for (std::size_t k = 0; k < count; ++k) {
      TtcSample sample;
      sample.t = static_cast<double>(k) * 0.1;
      const double flavor = rng.uniform();
      if (flavor < 0.15) {
        sample.ttc = TtcValue::no_approach();
      } else if (flavor < 0.2) {
        sample.ttc = TtcValue::coincident();
      } else {
        sample.ttc = TtcValue::finite(rng.uniform(-5, 5));
      }
      sample.range = rng.uniform(0, 10);
      series.push_back(sample);
    }
    const double pass_time = rng.uniform(0, static_cast<double>(count) * 0.1);

    // independent scan
    bool found = false;
    double best = 0.0;
    double best_time = 0.0;
    for (const auto& s : series) {
      if (s.t >= pass_time || !s.ttc.is_finite() || s.ttc.seconds() <= 0.0) continue;
      if (!found || s.ttc.seconds() < best) {
        best = s.ttc.seconds();
        best_time = s.t;
        found = true;
      }
    }

    if (!found) {
      CHECK_THROWS_AS(min_perceived_ttc(series, pass_time), NoApproachPhase);
    } else {
      const auto minimum = min_perceived_ttc(series, pass_time);
      CHECK(minimum.value == best);
      CHECK(minimum.time == best_time);
    }
  }
}

TEST_CASE("trial analysis equals the composition of its stages") {
  const auto trial = offset_pass_trial();
  const auto analysis = analyze_trial(trial);

  const auto series = ttc_series(trial.rider, trial.pedestrian);
  const double pass = detect_pass(series);
  const auto minimum = min_perceived_ttc(series, pass);
  CHECK(analysis.pass_time == pass);
  CHECK(analysis.min_ttc == minimum.value);
  CHECK(analysis.min_ttc_time == minimum.time);
  CHECK(analysis.series.size() == series.size());
  CHECK(analysis.min_ttc > 0.0);
  CHECK(analysis.min_ttc_time < analysis.pass_time);
}

TEST_CASE("trial analysis is deterministic") {
  const auto trial = offset_pass_trial();
  const auto first = analyze_trial(trial);
  const auto second = analyze_trial(trial);
  CHECK(first.pass_time == second.pass_time);
  CHECK(first.min_ttc == second.min_ttc);
  CHECK(first.min_ttc_time == second.min_ttc_time);
  REQUIRE(first.series.size() == second.series.size());
  for (std::size_t k = 0; k < first.series.size(); ++k) {
    CHECK(first.series[k].ttc == second.series[k].ttc);
    CHECK(first.series[k].range == second.series[k].range);
  }
}

TEST_CASE("swapping the role labels changes nothing") {
  auto trial = offset_pass_trial();
  const auto forward = analyze_trial(trial);
  std::swap(trial.rider, trial.pedestrian);
  const auto backward = analyze_trial(trial);
  CHECK(forward.min_ttc == backward.min_ttc);
  CHECK(forward.pass_time == backward.pass_time);
}

TEST_CASE("out-of-range discomfort is rejected") {
  auto trial = offset_pass_trial();
  trial.reported_discomfort[Role::Rider] = 7;
  CHECK_THROWS_AS(analyze_trial(trial), InvalidInput);
}

TEST_CASE("trajectory CSV round-trips exactly") {
  Rng rng(21);
  Trajectory traj;
  traj.agent_id = "probe";
  double t = 0.0;
  for (int k = 0; k < 50; ++k) {
    t += rng.uniform(0.005, 0.02);
    traj.samples.push_back({t, rng.uniform(-30, 30), rng.uniform(-2, 2)});
  }

  const auto path = std::filesystem::temp_directory_path() / "pttc_roundtrip.csv";
  io::write_trajectory_csv(path, {traj});
  const auto loaded = io::read_trajectory_csv(path);
  std::filesystem::remove(path);

  REQUIRE(loaded.count("probe") == 1);
  const auto& back = loaded.at("probe");
  REQUIRE(back.samples.size() == traj.samples.size());
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    CHECK(back.samples[k] == traj.samples[k]);
  }
}

TEST_CASE("trajectory CSV accepts interleaved agents and rejects bad headers") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = dir / "pttc_interleaved.csv";
  io::write_text_atomic(path,
                        "t,agent_id,x,y\n"
                        "0,a,0,0\n"
                        "0,b,5,0\n"
                        "0.5,a,1,0\n"
                        "0.5,b,4,0\n");
  const auto loaded = io::read_trajectory_csv(path);
  CHECK(loaded.size() == 2);
  CHECK(loaded.at("a").samples.size() == 2);
  std::filesystem::remove(path);

  const auto bad = dir / "pttc_badheader.csv";
  io::write_text_atomic(bad, "time,x,y\n0,0,0\n");
  CHECK_THROWS_AS(io::read_trajectory_csv(bad), ParseError);
  std::filesystem::remove(bad);
}

TEST_CASE("trial manifests round-trip including labels") {
  auto trial = offset_pass_trial();
  trial.reported_discomfort[Role::Rider] = 2;
  trial.reported_discomfort[Role::Pedestrian] = 3;

  const auto dir = std::filesystem::temp_directory_path() / "pttc_manifest_test";
  io::write_trial_set(dir, {trial});
  const auto loaded = io::read_trial_manifest(dir / "manifest.json");
  std::filesystem::remove_all(dir);

  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].trial_id == trial.trial_id);
  CHECK(loaded[0].kind == trial.kind);
  CHECK(loaded[0].rider.samples == trial.rider.samples);
  CHECK(loaded[0].pedestrian.samples == trial.pedestrian.samples);
  CHECK(loaded[0].reported_discomfort == trial.reported_discomfort);
}
