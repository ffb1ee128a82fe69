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
#ifndef FLEXAGG_RESOURCE_H_
#define FLEXAGG_RESOURCE_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "flexagg/timegrid.h"

namespace flexagg {

// Flexibility parameters of one resource. Power in kW, ramps in kW/s, states
// in kWh. The state obeys
//
//   dx/dt = 3600 a x + b u_s + c p(t)   (t in hours, x in kWh),
//
// so a is given per second while b u and c p are powers.
struct ResourceParams {
  std::string label;
  std::vector<double> p_min, p_max;  // per system interval
  std::vector<double> r_min, r_max;  // may be -inf / +inf
  std::vector<double> x_min, x_max;  // may be -inf / +inf
  double x0_min = 0.0;
  double x0_max = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  std::vector<double> u;
  double delay_s = 0.0;

  bool has_ramp() const;
  bool has_state() const;
  // 3600 a, the rate in 1/h used by the state equations.
  double a_per_hour() const { return 3600.0 * a; }

  absl::Status Validate(int n_s) const;
};

struct FreezerSpec {
  double p_min = 0.0;
  double p_max = 300.0;
  double r_min = -100.0 / 60.0;
  double r_max = 100.0 / 60.0;
  double x_bar = 1800.0;
  double theta_in_min = -29.0;
  double theta_in_max = -27.0;
  double theta_out = 5.0;
  double t_dis_s = 36000.0;
  double fill = 0.5;
  double delay_s = 300.0;
};

absl::StatusOr<ResourceParams> MakeBattery(double p_max, double x_bar,
                                           double x0, const TimeGrid& grid);
absl::StatusOr<ResourceParams> MakeFreezer(const FreezerSpec& spec,
                                           const TimeGrid& grid);
// ramp in kW/min.
absl::StatusOr<ResourceParams> MakeTurbine(double p_min, double p_max,
                                           double ramp_kw_per_min,
                                           const TimeGrid& grid);

// Largest symmetric time-invariant capacity the resource offers on its own:
// the minimum of the power, energy, ramp and delay limits.
double StandaloneCapacity(const ResourceParams& phi, const TimeGrid& grid);

// Exact response of dx/dt = a_h x + v(t) over one segment of length h hours
// with v affine from v0 to v1:
//   x(h) = e x(0) + beta0 v0 + beta1 v1, alpha = beta0 + beta1.
struct SegmentWeights {
  double e = 1.0;
  double alpha = 0.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
};
SegmentWeights ExactSegment(double a_per_hour, double hours);

// Temperature corresponding to a freezer state (high state is cold).
double FreezerTemperature(const FreezerSpec& spec, double x);

}  // namespace flexagg

#endif  // FLEXAGG_RESOURCE_H_
