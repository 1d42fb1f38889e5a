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
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pttc {

// Notched box-plot summary of one sample group.
//
// Quartiles use linear interpolation at rank position (n-1)*q on the sorted
// data. Whiskers are the most extreme data points within the Tukey fences
// q1 -/+ 1.5*IQR; points beyond the fences are outliers. The notch is
// median -/+ 1.57*IQR/sqrt(n).
struct BoxStats {
  std::size_t n = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  double notch_low = 0.0;
  double notch_high = 0.0;
  std::vector<double> outliers;  // ascending
};

BoxStats box_stats(std::span<const double> samples);

// True iff the notch intervals intersect. Overlapping notches mean the
// medians are not clearly different.
bool notches_overlap(const BoxStats& a, const BoxStats& b);

// Partition values by key, then box_stats per key. Keys come out in
// lexicographic order.
std::map<std::string, BoxStats> group_by(
    const std::vector<std::pair<std::string, double>>& values);

}  // namespace pttc
