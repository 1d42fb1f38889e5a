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

#include "pttc/calibration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pttc/errors.hpp"

namespace pttc {

namespace {

constexpr std::array<std::string_view, 7> kDiscomfortLabels = {
    "Comfortable",
    "Slightly uncomfortable",
    "Uncomfortable",
    "Annoying",
    "Dangerous",
    "Very dangerous or near crash",
    "Collision",
};

constexpr double kSseTolerance = 1e-12;
constexpr int kMaxIterations = 200;
constexpr int kMaxHalvings = 30;
constexpr double kLogInitFloor = 0.05;  // labels at/below this are left out of the log-space init

double model_value(FitKind kind, double a, double b, double x) {
  switch (kind) {
    case FitKind::Line:
      return a * x + b;
    case FitKind::Exponential:
      return a * std::exp(b * x);
    case FitKind::Power:
      return a * std::pow(x, b);
  }
  return 0.0;
}

double sum_squared_error(std::span<const ObservationPoint> points, FitKind kind,
                         double a, double b) {
  double sse = 0.0;
  for (const auto& p : points) {
    const double predicted = model_value(kind, a, b, p.min_ttc);
    if (!std::isfinite(predicted)) return std::numeric_limits<double>::infinity();
    const double r = p.discomfort - predicted;
    sse += r * r;
  }
  return sse;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares on (x, y); caller guarantees a non-singular design.
LineFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mean_x += x[k];
    mean_y += y[k];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mean_x) * (x[k] - mean_x);
    sxy += (x[k] - mean_x) * (y[k] - mean_y);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  return fit;
}

bool all_equal(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *lo == *hi;
}

// Starting point for the nonlinear fits: a linear regression in log space on
// the points with labels above kLogInitFloor, falling back to a trend
// heuristic when too few such points exist.
void initial_guess(std::span<const ObservationPoint> points, FitKind kind,
                   double& a, double& b) {
  std::vector<double> u;
  std::vector<double> z;
  for (const auto& p : points) {
    if (p.discomfort > kLogInitFloor) {
      u.push_back(kind == FitKind::Power ? std::log(p.min_ttc) : p.min_ttc);
      z.push_back(std::log(p.discomfort));
    }
  }
  if (u.size() >= 2 && !all_equal(u)) {
    const LineFit log_fit = ols(u, z);
    a = std::exp(log_fit.intercept);
    b = log_fit.slope;
    if (std::isfinite(a) && std::isfinite(b)) return;
  }

  double max_y = points[0].discomfort;
  double cov = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    max_y = std::max(max_y, p.discomfort);
    mean_x += p.min_ttc;
    mean_y += p.discomfort;
  }
  mean_x /= static_cast<double>(points.size());
  mean_y /= static_cast<double>(points.size());
  for (const auto& p : points) {
    cov += (p.min_ttc - mean_x) * (p.discomfort - mean_y);
  }
  a = max_y;
  b = cov <= 0.0 ? -1.0 : 1.0;
}

// Damped Gauss-Newton on the original-space residuals. Steps are accepted
// only when they decrease the SSE.
void gauss_newton(std::span<const ObservationPoint> points, FitKind kind,
                  double& a, double& b) {
  double sse = sum_squared_error(points, kind, a, b);
  for (int iteration = 0; iteration < kMaxIterations; ++iteration) {
    double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0;
    double jtr0 = 0.0, jtr1 = 0.0;
    for (const auto& p : points) {
      const double x = p.min_ttc;
      double da;  // d f / d a
      double db;  // d f / d b
      if (kind == FitKind::Exponential) {
        da = std::exp(b * x);
        db = a * x * da;
      } else {
        da = std::pow(x, b);
        db = a * da * std::log(x);
      }
      const double r = p.discomfort - model_value(kind, a, b, x);
      jtj00 += da * da;
      jtj01 += da * db;
      jtj11 += db * db;
      jtr0 += da * r;
      jtr1 += db * r;
    }
    const double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
    const double step_a = (jtj11 * jtr0 - jtj01 * jtr1) / det;
    const double step_b = (jtj00 * jtr1 - jtj01 * jtr0) / det;
    if (!std::isfinite(step_a) || !std::isfinite(step_b)) break;

    double scale = 1.0;
    bool improved = false;
    double next_sse = sse;
    for (int halving = 0; halving <= kMaxHalvings; ++halving) {
      const double candidate_sse =
          sum_squared_error(points, kind, a + scale * step_a, b + scale * step_b);
      if (candidate_sse < sse) {
        a += scale * step_a;
        b += scale * step_b;
        next_sse = candidate_sse;
        improved = true;
        break;
      }
      scale /= 2.0;
    }
    if (!improved) break;
    const bool converged = sse - next_sse <= kSseTolerance * std::max(sse, 1e-300);
    sse = next_sse;
    if (converged) break;
  }
}

}  // namespace

DiscomfortLevel discomfort_level(int value) {
  if (value < 0 || value > 6) {
    throw OutOfRange("discomfort level " + std::to_string(value) + " outside 0..6");
  }
  return {value, kDiscomfortLabels[static_cast<std::size_t>(value)]};
}

std::string to_string(FitKind kind) {
  switch (kind) {
    case FitKind::Line:
      return "line";
    case FitKind::Exponential:
      return "exponential";
    case FitKind::Power:
      return "power";
  }
  return "line";
}

FitKind fit_kind_from_string(const std::string& text) {
  if (text == "line") return FitKind::Line;
  if (text == "exp" || text == "exponential") return FitKind::Exponential;
  if (text == "power") return FitKind::Power;
  throw ParseError("unknown fit kind '" + text + "'");
}

CalibrationModel fit(std::span<const ObservationPoint> points, FitKind kind) {
  const std::size_t minimum = kind == FitKind::Line ? 2 : 3;
  if (points.size() < minimum) {
    throw TooFewPoints(to_string(kind) + " fit needs at least " +
                       std::to_string(minimum) + " points, got " +
                       std::to_string(points.size()));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    if (!std::isfinite(p.min_ttc) || !std::isfinite(p.discomfort)) {
      throw InvalidInput("fit: non-finite observation");
    }
    if (kind == FitKind::Power && p.min_ttc <= 0.0) {
      throw NonPositiveX("power fit requires positive TTC values");
    }
    xs.push_back(p.min_ttc);
    ys.push_back(p.discomfort);
  }
  if (all_equal(xs)) {
    throw SingularDesign("all TTC values are equal; the fit is underdetermined");
  }

  CalibrationModel model;
  model.kind = kind;
  model.n = points.size();

  if (kind == FitKind::Line) {
    const LineFit line = ols(xs, ys);
    model.a = line.slope;
    model.b = line.intercept;
  } else {
    initial_guess(points, kind, model.a, model.b);
    gauss_newton(points, kind, model.a, model.b);
  }

  std::vector<double> predicted(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    predicted[k] = model_value(kind, model.a, model.b, xs[k]);
  }
  model.r2 = r_squared(ys, predicted);
  return model;
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size() || observed.size() < 2) {
    throw InvalidInput("r_squared requires two equally sized series of length >= 2");
  }
  const auto [lo, hi] = std::minmax_element(observed.begin(), observed.end());
  if (*lo == *hi) {
    throw DegenerateObservations("all observations are equal; R^2 is undefined");
  }
  double mean = 0.0;
  for (double y : observed) mean += y;
  mean /= static_cast<double>(observed.size());

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    ss_res += (observed[k] - predicted[k]) * (observed[k] - predicted[k]);
    ss_tot += (observed[k] - mean) * (observed[k] - mean);
  }
  return 1.0 - ss_res / ss_tot;
}

DiscomfortEstimate estimate(const CalibrationModel& model, double ttc) {
  if (!std::isfinite(ttc)) {
    throw OutOfRange("estimate requires a finite TTC");
  }
  if (model.kind == FitKind::Power && ttc <= 0.0) {
    throw NonPositiveTtc("power model requires a positive TTC");
  }
  DiscomfortEstimate result;
  result.raw = model_value(model.kind, model.a, model.b, ttc);
  result.clamped = std::clamp(result.raw, 0.0, 6.0);
  return result;
}

std::string to_string(Correlation c) {
  switch (c) {
    case Correlation::Weak:
      return "weak";
    case Correlation::Moderate:
      return "moderate";
    case Correlation::Strong:
      return "strong";
  }
  return "weak";
}

Correlation classify_correlation(double r2) {
  if (r2 <= 0.3) return Correlation::Weak;
  if (r2 <= 0.6) return Correlation::Moderate;
  return Correlation::Strong;
}

}  // namespace pttc
