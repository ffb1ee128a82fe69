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
#include "flexagg/resource.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "flexagg/rows.h"

namespace flexagg {
namespace {

bool AllFinite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

bool AnyFinite(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

ResourceParams Blank(const std::string& label, int n) {
  ResourceParams r;
  r.label = label;
  r.p_min.assign(n, 0.0);
  r.p_max.assign(n, 0.0);
  r.r_min.assign(n, -kInf);
  r.r_max.assign(n, kInf);
  r.x_min.assign(n, -kInf);
  r.x_max.assign(n, kInf);
  r.u.assign(n, 0.0);
  return r;
}

}  // namespace

bool ResourceParams::has_ramp() const {
  return AnyFinite(r_min) || AnyFinite(r_max);
}

bool ResourceParams::has_state() const {
  return AnyFinite(x_min) || AnyFinite(x_max);
}

absl::Status ResourceParams::Validate(int n_s) const {
  for (const auto* v : {&p_min, &p_max, &r_min, &r_max, &x_min, &x_max, &u}) {
    if (static_cast<int>(v->size()) != n_s) {
      return absl::InvalidArgumentError(absl::StrCat(
          label, ": parameter sequence of length ", v->size(), ", expected ",
          n_s));
    }
  }
  if (!AllFinite(p_min) || !AllFinite(p_max) || !AllFinite(u)) {
    return absl::InvalidArgumentError(
        absl::StrCat(label, ": power bounds and inputs must be finite"));
  }
  for (int s = 0; s < n_s; ++s) {
    if (p_min[s] > p_max[s] || r_min[s] > r_max[s] || x_min[s] > x_max[s]) {
      return absl::InvalidArgumentError(absl::StrCat(
          label, ": lower bound above upper bound in interval ", s + 1));
    }
  }
  if (!(a <= 0.0) || !std::isfinite(a)) {
    return absl::InvalidArgumentError(
        absl::StrCat(label, ": dissipation a must be <= 0, got ", a));
  }
  if (!std::isfinite(b) || !std::isfinite(c)) {
    return absl::InvalidArgumentError(absl::StrCat(label, ": b, c must be finite"));
  }
  if (!(delay_s >= 0.0)) {
    return absl::InvalidArgumentError(absl::StrCat(label, ": negative delay"));
  }
  if (has_state()) {
    if (!(x0_min <= x0_max) || !std::isfinite(x0_min) ||
        !std::isfinite(x0_max)) {
      return absl::InvalidArgumentError(
          absl::StrCat(label, ": initial state interval invalid"));
    }
    if (x0_min < x_min[0] || x0_max > x_max[0]) {
      return absl::InvalidArgumentError(absl::StrCat(
          label, ": initial state outside the first interval's bounds"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<ResourceParams> MakeBattery(double p_max, double x_bar,
                                           double x0, const TimeGrid& grid) {
  if (!(p_max > 0.0) || !(x_bar >= 0.0) || !(x0 >= 0.0) || x0 > x_bar) {
    return absl::InvalidArgumentError(absl::StrCat(
        "battery needs p_max > 0 and 0 <= x0 <= x_bar, got p_max=", p_max,
        " x_bar=", x_bar, " x0=", x0));
  }
  const int n = grid.n_s();
  ResourceParams r = Blank("battery", n);
  r.p_min.assign(n, -p_max);
  r.p_max.assign(n, p_max);
  r.x_min.assign(n, 0.0);
  r.x_max.assign(n, x_bar);
  r.x0_min = r.x0_max = x0;
  return r;
}

absl::StatusOr<ResourceParams> MakeFreezer(const FreezerSpec& spec,
                                           const TimeGrid& grid) {
  if (!(spec.theta_in_min < spec.theta_in_max &&
        spec.theta_in_max < spec.theta_out)) {
    return absl::InvalidArgumentError(
        "freezer needs theta_in_min < theta_in_max < theta_out");
  }
  if (!(spec.t_dis_s > 0.0) || !(spec.fill >= 0.0 && spec.fill <= 1.0) ||
      !(spec.x_bar > 0.0) || spec.p_min > spec.p_max ||
      spec.r_min > spec.r_max || !(spec.delay_s >= 0.0)) {
    return absl::InvalidArgumentError("freezer parameters out of range");
  }
  const int n = grid.n_s();
  ResourceParams r = Blank("freezer", n);
  r.p_min.assign(n, spec.p_min);
  r.p_max.assign(n, spec.p_max);
  r.r_min.assign(n, spec.r_min);
  r.r_max.assign(n, spec.r_max);
  r.x_min.assign(n, 0.0);
  r.x_max.assign(n, spec.x_bar);
  r.x0_min = r.x0_max = spec.fill * spec.x_bar;
  r.a = std::log((spec.theta_in_max - spec.theta_out) /
                 (spec.theta_in_min - spec.theta_out)) /
        spec.t_dis_s;
  r.b = r.a_per_hour() * spec.x_bar / (spec.theta_in_min - spec.theta_in_max);
  r.c = 1.0;
  r.u.assign(n, spec.theta_in_max - spec.theta_out);
  r.delay_s = spec.delay_s;
  return r;
}

absl::StatusOr<ResourceParams> MakeTurbine(double p_min, double p_max,
                                           double ramp_kw_per_min,
                                           const TimeGrid& grid) {
  if (!(p_min <= p_max) || !(ramp_kw_per_min > 0.0)) {
    return absl::InvalidArgumentError(
        "turbine needs p_min <= p_max and a positive ramp");
  }
  const int n = grid.n_s();
  ResourceParams r = Blank("turbine", n);
  r.p_min.assign(n, p_min);
  r.p_max.assign(n, p_max);
  const double ramp = ramp_kw_per_min / 60.0;
  r.r_min.assign(n, -ramp);
  r.r_max.assign(n, ramp);
  return r;
}

double StandaloneCapacity(const ResourceParams& phi, const TimeGrid& grid) {
  if (phi.delay_s > grid.tc()) return 0.0;
  const double t_sfr_h =
      static_cast<double>(grid.seconds(Timescale::kSfr)) / 3600.0;
  double g = kInf;
  const int n = static_cast<int>(phi.p_min.size());
  for (int s = 0; s < n; ++s) {
    g = std::min(g, (phi.p_max[s] - phi.p_min[s]) / 2.0);
    if (std::isfinite(phi.x_max[s])) {
      g = std::min(g, (phi.x_max[s] - phi.x0_max) / t_sfr_h);
    }
    if (std::isfinite(phi.x_min[s])) {
      g = std::min(g, (phi.x0_min - phi.x_min[s]) / t_sfr_h);
    }
    if (std::isfinite(phi.r_max[s])) g = std::min(g, phi.r_max[s] * grid.tc() / 2.0);
    if (std::isfinite(phi.r_min[s])) g = std::min(g, -phi.r_min[s] * grid.tc() / 2.0);
  }
  return std::max(g, 0.0);
}

SegmentWeights ExactSegment(double a_per_hour, double hours) {
  SegmentWeights w;
  const double z = a_per_hour * hours;
  w.e = std::exp(z);
  if (std::abs(z) < 1e-4) {
    // Series of (e^z - 1)/z and (e^z - 1 - z)/z^2.
    w.alpha = hours * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
    w.beta1 = hours * (0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0);
  } else {
    w.alpha = std::expm1(z) / a_per_hour;
    w.beta1 = hours * (std::expm1(z) - z) / (z * z);
  }
  w.beta0 = w.alpha - w.beta1;
  return w;
}

double FreezerTemperature(const FreezerSpec& spec, double x) {
  return spec.theta_in_max -
         x / spec.x_bar * (spec.theta_in_max - spec.theta_in_min);
}

}  // namespace flexagg
