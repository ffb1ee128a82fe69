// Copyright 2026 The flexagg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     https://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "flexagg/timegrid.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace flexagg {

const char* TimescaleName(Timescale t) {
  switch (t) {
    case Timescale::kHorizon:
      return "T_H";
    case Timescale::kSfr:
      return "T_SFR";
    case Timescale::kDayAhead:
      return "T_DA";
    case Timescale::kIntraDay:
      return "T_ID";
    case Timescale::kSystem:
      return "T_S";
    case Timescale::kControl:
      return "T_C";
  }
  return "?";
}

absl::StatusOr<TimeGrid> TimeGrid::Build(const GridDurations& d) {
  TimeGrid g;
  g.durations_ = d;
  g.seconds_ = {d.horizon_s, d.sfr_s,    d.day_ahead_s,
                d.intra_day_s, d.system_s, d.control_s};
  for (int i = 0; i < 6; ++i) {
    if (g.seconds_[i] <= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat(TimescaleName(static_cast<Timescale>(i)),
                       " must be positive, got ", g.seconds_[i]));
    }
  }
  for (int i = 0; i + 1 < 6; ++i) {
    const auto longer = static_cast<Timescale>(i);
    const auto shorter = static_cast<Timescale>(i + 1);
    const int64_t a = g.seconds_[i];
    const int64_t b = g.seconds_[i + 1];
    const bool strict = shorter == Timescale::kControl;
    if (strict ? a <= b : a < b) {
      return absl::InvalidArgumentError(absl::StrCat(
          TimescaleName(longer), " (", a, " s) must be ",
          strict ? "greater than " : "at least ", TimescaleName(shorter), " (",
          b, " s)"));
    }
    if (a % b != 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          TimescaleName(longer), " (", a, " s) is not an integer multiple of ",
          TimescaleName(shorter), " (", b, " s)"));
    }
  }
  for (int i = 0; i < 6; ++i) {
    g.counts_[i] = static_cast<int>(d.horizon_s / g.seconds_[i]);
  }
  if (d.lead_day_ahead_s < 0 || d.lead_intra_day_s < 0) {
    return absl::InvalidArgumentError("market lead times must be nonnegative");
  }
  g.lead_day_ahead_s_ = d.lead_day_ahead_s;
  g.lead_intra_day_s_ = d.lead_intra_day_s;
  return g;
}

absl::StatusOr<int> TimeGrid::IndexMap(Timescale fine, Timescale coarse,
                                       int k) const {
  const int64_t tf = seconds(fine);
  const int64_t tcoarse = seconds(coarse);
  if (tf > tcoarse) {
    return absl::InvalidArgumentError(
        absl::StrCat(TimescaleName(fine), " is coarser than ",
                     TimescaleName(coarse)));
  }
  if (k < 1 || k > count(fine)) {
    return absl::OutOfRangeError(absl::StrCat(
        "index ", k, " outside [1, ", count(fine), "] for ",
        TimescaleName(fine)));
  }
  return static_cast<int>((k * tf + tcoarse - 1) / tcoarse);
}

}  // namespace flexagg
