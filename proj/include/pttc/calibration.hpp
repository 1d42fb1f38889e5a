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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pttc {

// Seven-level ordinal discomfort report.
struct DiscomfortLevel {
  int value = 0;
  std::string_view label;
};

// Fixed value <-> label mapping of the report scale. Throws OutOfRange for
// values outside 0..6.
DiscomfortLevel discomfort_level(int value);

// One trial reduced to its minimum perceived TTC and a reported discomfort.
struct ObservationPoint {
  double min_ttc = 0.0;    // seconds, > 0
  double discomfort = 0.0; // 0..6, treated as a real-valued target
};

enum class FitKind { Line, Exponential, Power };

std::string to_string(FitKind kind);
FitKind fit_kind_from_string(const std::string& text);

// Fitted discomfort-vs-TTC model: y = a*x + b, y = a*e^(b*x) or y = a*x^b.
struct CalibrationModel {
  FitKind kind = FitKind::Line;
  double a = 0.0;
  double b = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// Least-squares fit of the requested family. The line is solved in closed
// form; exponential and power fits run a damped Gauss-Newton on the
// original-space residuals, initialized from a log-space regression.
CalibrationModel fit(std::span<const ObservationPoint> points, FitKind kind);

// Coefficient of determination: 1 - SS_res/SS_tot with SS_tot about the
// observed mean. Throws DegenerateObservations when all observations are
// equal (SS_tot = 0).
double r_squared(std::span<const double> observed, std::span<const double> predicted);

struct DiscomfortEstimate {
  double raw = 0.0;
  double clamped = 0.0;  // raw clipped to [0, 6]
};

// Model evaluated at a perceived TTC. Power models require ttc > 0.
DiscomfortEstimate estimate(const CalibrationModel& model, double ttc);

enum class Correlation { Weak, Moderate, Strong };

std::string to_string(Correlation c);

// Weak for r2 <= 0.3, Moderate up to 0.6, Strong above.
Correlation classify_correlation(double r2);

}  // namespace pttc
