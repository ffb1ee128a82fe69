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
// Randomized resource pairs and the bound transformations used by the
// monotonicity and scaling checks.

#ifndef FLEXAGG_TESTS_BIDDING_PROPS_H_
#define FLEXAGG_TESTS_BIDDING_PROPS_H_

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "flexagg/bidding.h"
#include "flexagg/resource.h"

namespace flexagg::testing {

// A battery paired with a freezer or a turbine, all drawn at random.
inline std::vector<ResourceParams> RandomPair(std::mt19937_64& rng,
                                              const TimeGrid& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x_bar = 5 + 95 * u(rng);
  std::vector<ResourceParams> out;
  out.push_back(*MakeBattery(2 + 40 * u(rng), x_bar,
                             x_bar * (0.2 + 0.6 * u(rng)), g));
  if (u(rng) < 0.5) {
    FreezerSpec f;
    f.p_max = 50 + 300 * u(rng);
    f.x_bar = 300 + 1800 * u(rng);
    f.r_max = 0.5 + 2 * u(rng);
    f.r_min = -f.r_max;
    f.delay_s = u(rng) < 0.5 ? 0.0 : 300.0;
    out.push_back(*MakeFreezer(f, g));
  } else {
    const double p_max = 100 + 900 * u(rng);
    out.push_back(*MakeTurbine(0.1 * p_max, p_max, 5 + 60 * u(rng), g));
  }
  return out;
}

// Widens one randomly chosen bound of one interval.
inline ResourceParams Enlarge(const ResourceParams& r, std::mt19937_64& rng) {
  ResourceParams e = r;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = static_cast<int>(r.p_max.size());
  const int s = std::min(n - 1, static_cast<int>(u(rng) * n));
  const double scale = std::max(1.0, std::abs(r.p_max[s]));
  auto widen = [&](std::vector<double>& v, double sign, double mag) {
    if (std::isfinite(v[s])) v[s] += sign * mag * u(rng);
  };
  switch (static_cast<int>(u(rng) * 6)) {
    case 0: widen(e.p_max, 1, 0.3 * scale); break;
    case 1: widen(e.p_min, -1, 0.3 * scale); break;
    case 2: widen(e.r_max, 1, 0.05 * scale); break;
    case 3: widen(e.r_min, -1, 0.05 * scale); break;
    case 4: widen(e.x_max, 1, 0.3 * std::max(1.0, std::abs(r.x_max[s]))); break;
    default: widen(e.x_min, -1, 0.3 * std::max(1.0, std::abs(r.x_max[s]))); break;
  }
  return e;
}

// Power, ramp, state and the exogenous input multiplied by lambda.
inline ResourceParams Scale(const ResourceParams& r, double lambda) {
  ResourceParams s = r;
  for (std::vector<double>* v :
       {&s.p_min, &s.p_max, &s.r_min, &s.r_max, &s.x_min, &s.x_max, &s.u}) {
    for (double& x : *v) x *= lambda;
  }
  s.x0_min *= lambda;
  s.x0_max *= lambda;
  return s;
}

inline double Capacity(const TimeGrid& g, std::vector<ResourceParams> rs) {
  absl::StatusOr<Scenario> scn = MakeCapacityScenario(g, std::move(rs));
  if (!scn.ok()) return std::nan("");
  absl::StatusOr<BidResult> r = MaxCapacity(*scn);
  if (!r.ok() || !r->ok()) return std::nan("");
  return r->objective_value;
}

}  // namespace flexagg::testing

#endif  // FLEXAGG_TESTS_BIDDING_PROPS_H_
