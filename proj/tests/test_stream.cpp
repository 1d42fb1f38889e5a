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

#include <cmath>
#include <map>
#include <vector>

#include "pttc/errors.hpp"
#include "pttc/scenario.hpp"
#include "pttc/stream.hpp"
#include "pttc/trajectory.hpp"

using namespace pttc;

namespace {

StreamConfig reference_config() {
  StreamConfig config;
  config.model = {FitKind::Exponential, 33.9, -6.5, 0.82, 200};
  config.alert_threshold = 2.0;
  config.staleness_window = 0.5;
  return config;
}

AgentUpdate update(const std::string& id, double t, Vec2 position, Vec2 velocity) {
  return {id, t, position, velocity};
}

}  // namespace

TEST_CASE("two agents at the same instant produce the head-on TTC") {
  StreamEstimator estimator(reference_config());
  CHECK(estimator.push_update(update("a", 0.0, {0, 0}, {2, 0})).empty());
  const auto events = estimator.push_update(update("b", 0.0, {10, 0}, {-3, 0}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].ttc == TtcValue::finite(2.0));
  CHECK(events[0].pair.first == "a");
  CHECK(events[0].pair.second == "b");
  CHECK(events[0].t == 0.0);
  CHECK_FALSE(events[0].alert);
}

TEST_CASE("a lone agent produces no events") {
  StreamEstimator estimator(reference_config());
  CHECK(estimator.push_update(update("solo", 0.0, {0, 0}, {1, 0})).empty());
  CHECK(estimator.push_update(update("solo", 0.1, {0.1, 0}, {1, 0})).empty());
}

TEST_CASE("stale peers are skipped") {
  StreamEstimator estimator(reference_config());
  estimator.push_update(update("a", 0.0, {0, 0}, {2, 0}));
  CHECK(estimator.push_update(update("b", 1.0, {10, 0}, {-3, 0})).empty());
}

TEST_CASE("timestamps must not regress per agent") {
  StreamEstimator estimator(reference_config());
  estimator.push_update(update("a", 1.0, {0, 0}, {2, 0}));
  CHECK_THROWS_AS(estimator.push_update(update("a", 0.5, {0, 0}, {2, 0})),
                  TimeRegression);
  // equal timestamps are fine
  CHECK_NOTHROW(estimator.push_update(update("a", 1.0, {0, 0}, {2, 0})));
}

TEST_CASE("velocity falls back to consecutive finite differences") {
  StreamEstimator estimator(reference_config());
  AgentUpdate first{"a", 0.0, {0, 0}, std::nullopt};
  AgentUpdate second{"a", 0.1, {0.2, 0}, std::nullopt};
  CHECK(estimator.push_update(first).empty());
  CHECK(estimator.push_update(second).empty());

  // the event uses a's differenced velocity (2, 0): gap 9.8 m closing 5 m/s
  const auto events = estimator.push_update(update("b", 0.1, {10, 0}, {-3, 0}));
  REQUIRE(events.size() == 1);
  REQUIRE(events[0].ttc.is_finite());
  CHECK(events[0].ttc.seconds() == doctest::Approx(9.8 / 5.0).epsilon(1e-9));
}

TEST_CASE("the fresher agent is rewound to the older timestamp") {
  StreamEstimator estimator(reference_config());
  estimator.push_update(update("a", 0.0, {0, 0}, {2, 0}));
  const auto events = estimator.push_update(update("b", 0.2, {9.4, 0}, {-3, 0}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].t == 0.0);
  // b rewound to t=0: position 9.4 + 0.2*3 = 10, closing 5 -> 2 s
  REQUIRE(events[0].ttc.is_finite());
  CHECK(events[0].ttc.seconds() == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("alert threshold is applied and adjustable") {
  StreamEstimator estimator(reference_config());
  estimator.push_update(update("a", 0.0, {0, 0}, {2, 0}));
  // head-on gap 2.6 m closing 5 m/s -> TTC 0.52 s -> raw estimate ~1.15
  auto events = estimator.push_update(update("b", 0.0, {2.6, 0}, {-3, 0}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].discomfort_raw == doctest::Approx(1.15).epsilon(0.01));
  CHECK_FALSE(events[0].alert);  // threshold 2.0

  estimator.set_threshold(1.0);
  // advance both agents; the event at t=0.1 sees TTC 0.42 s, raw ~2.2
  CHECK(estimator.push_update(update("b", 0.1, {2.3, 0}, {-3, 0})).empty());
  events = estimator.push_update(update("a", 0.1, {0.2, 0}, {2, 0}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].alert);

  CHECK_THROWS_AS(estimator.set_threshold(7.0), OutOfRange);
  CHECK_THROWS_AS(estimator.set_threshold(-0.5), OutOfRange);
}

TEST_CASE("non-approaching pairs report zero discomfort") {
  StreamEstimator estimator(reference_config());
  estimator.push_update(update("a", 0.0, {0, 0}, {1, 0}));
  const auto events = estimator.push_update(update("b", 0.0, {0, 2}, {1, 0}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].ttc == TtcValue::no_approach());
  CHECK(events[0].discomfort_raw == 0.0);
  CHECK(events[0].discomfort_clamped == 0.0);
}

TEST_CASE("replaying an aligned trial reproduces the batch series") {
  ScenarioSpec spec = facing_defaults();
  spec.seed = 3;
  const TrialRecord trial = generate(spec, "replay");
  const AlignedPair aligned = align_pair(trial.rider, trial.pedestrian);
  const TtcSeries batch = ttc_series(trial.rider, trial.pedestrian);

  StreamConfig config = reference_config();
  config.staleness_window = 0.5;
  StreamEstimator estimator(config);

  std::vector<TtcValue> streamed;
  for (std::size_t k = 0; k < aligned.first.size(); ++k) {
    const auto& rider = aligned.first[k];
    const auto& ped = aligned.second[k];
    for (const auto& event : estimator.push_update(
             {"rider", rider.t, rider.position, rider.velocity})) {
      streamed.push_back(event.ttc);
    }
    for (const auto& event :
         estimator.push_update({"ped", ped.t, ped.position, ped.velocity})) {
      streamed.push_back(event.ttc);
    }
  }

  REQUIRE(streamed.size() == batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    REQUIRE(streamed[k].kind() == batch[k].ttc.kind());
    if (batch[k].ttc.is_finite()) {
      CHECK(std::abs(streamed[k].seconds() - batch[k].ttc.seconds()) <=
            1e-9 * std::max(1.0, std::abs(batch[k].ttc.seconds())));
    }
  }
}

TEST_CASE("event stream is strictly monotone per pair") {
  StreamEstimator estimator(reference_config());
  std::map<std::pair<std::string, std::string>, double> last;
  std::vector<AgentUpdate> updates;
  for (int k = 0; k < 50; ++k) {
    const double t = 0.02 * k;
    updates.push_back(update("a", t, {2.0 * t, 0}, {2, 0}));
    updates.push_back(update("b", t + 0.005, {10 - 3.0 * t, 0.5}, {-3, 0}));
  }
  for (const auto& u : updates) {
    for (const auto& event : estimator.push_update(u)) {
      const auto it = last.find(event.pair);
      if (it != last.end()) CHECK(event.t > it->second);
      last[event.pair] = event.t;
    }
  }
  CHECK(!last.empty());
}
