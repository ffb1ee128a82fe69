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
#ifndef FLEXAGG_TIMEGRID_H_
#define FLEXAGG_TIMEGRID_H_

#include <array>
#include <cstdint>

#include "absl/status/statusor.h"

namespace flexagg {

// Ordered from longest to shortest.
enum class Timescale : uint8_t {
  kHorizon,
  kSfr,
  kDayAhead,
  kIntraDay,
  kSystem,
  kControl,
};

const char* TimescaleName(Timescale t);

struct GridDurations {
  int64_t horizon_s = 86400;
  int64_t sfr_s = 86400;
  int64_t day_ahead_s = 3600;
  int64_t intra_day_s = 900;
  int64_t system_s = 300;
  int64_t control_s = 10;
  int64_t lead_day_ahead_s = 0;
  int64_t lead_intra_day_s = 0;
};

// All market and system timescales of one planning problem. Interval k of a
// timescale is the half-open [(k-1) T, k T), k = 1..N.
class TimeGrid {
 public:
  // Rejects non-positive durations, ordering violations and any duration
  // that is not an integer multiple of the next shorter one.
  static absl::StatusOr<TimeGrid> Build(const GridDurations& d);

  int64_t seconds(Timescale t) const { return seconds_[Index(t)]; }
  int count(Timescale t) const { return counts_[Index(t)]; }

  int64_t lead_day_ahead_s() const { return lead_day_ahead_s_; }
  int64_t lead_intra_day_s() const { return lead_intra_day_s_; }
  const GridDurations& durations() const { return durations_; }

  // Shorthands used throughout the formulation.
  int n_s() const { return count(Timescale::kSystem); }
  int n_c() const { return count(Timescale::kControl); }
  double ts() const { return static_cast<double>(seconds(Timescale::kSystem)); }
  double tc() const {
    return static_cast<double>(seconds(Timescale::kControl));
  }
  // Control steps per system interval.
  int steps_per_interval() const {
    return static_cast<int>(seconds(Timescale::kSystem) /
                            seconds(Timescale::kControl));
  }

  // Coarse interval containing fine interval k, i.e. ceil(k Tf / Tc).
  absl::StatusOr<int> IndexMap(Timescale fine, Timescale coarse, int k) const;

 private:
  static int Index(Timescale t) { return static_cast<int>(t); }

  GridDurations durations_;
  std::array<int64_t, 6> seconds_{};
  std::array<int, 6> counts_{};
  int64_t lead_day_ahead_s_ = 0;
  int64_t lead_intra_day_s_ = 0;
};

}  // namespace flexagg

#endif  // FLEXAGG_TIMEGRID_H_
