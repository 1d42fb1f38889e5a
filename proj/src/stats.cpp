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

#include "pttc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "pttc/errors.hpp"

namespace pttc {

namespace {

constexpr double kWhiskerReach = 1.5;   // in IQRs beyond the quartiles
constexpr double kNotchFactor = 1.57;   // notch half-width in IQR/sqrt(n)

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double position = static_cast<double>(sorted.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(position);
  const double fraction = position - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + fraction * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

BoxStats box_stats(std::span<const double> samples) {
  if (samples.empty()) throw EmptyInput("box_stats requires at least one sample");
  for (double v : samples) {
    if (!std::isfinite(v)) throw InvalidInput("box_stats: non-finite sample");
  }

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  BoxStats stats;
  stats.n = sorted.size();
  stats.q1 = quantile_sorted(sorted, 0.25);
  stats.median = quantile_sorted(sorted, 0.50);
  stats.q3 = quantile_sorted(sorted, 0.75);

  const double iqr = stats.q3 - stats.q1;
  const double fence_low = stats.q1 - kWhiskerReach * iqr;
  const double fence_high = stats.q3 + kWhiskerReach * iqr;

  stats.whisker_low = stats.q1;
  stats.whisker_high = stats.q3;
  for (double v : sorted) {
    if (v >= fence_low) {
      stats.whisker_low = v;
      break;
    }
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= fence_high) {
      stats.whisker_high = *it;
      break;
    }
  }
  for (double v : sorted) {
    if (v < fence_low || v > fence_high) stats.outliers.push_back(v);
  }

  const double half_notch =
      kNotchFactor * iqr / std::sqrt(static_cast<double>(stats.n));
  stats.notch_low = stats.median - half_notch;
  stats.notch_high = stats.median + half_notch;
  return stats;
}

bool notches_overlap(const BoxStats& a, const BoxStats& b) {
  return a.notch_low <= b.notch_high && b.notch_low <= a.notch_high;
}

std::map<std::string, BoxStats> group_by(
    const std::vector<std::pair<std::string, double>>& values) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& [key, value] : values) groups[key].push_back(value);

  std::map<std::string, BoxStats> out;
  for (const auto& [key, group] : groups) out.emplace(key, box_stats(group));
  return out;
}

}  // namespace pttc
