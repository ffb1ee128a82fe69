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

#include <chrono>
#include <cmath>
#include <random>

#include "gtest/gtest.h"

namespace flexagg {
namespace {

TimeGrid Day() { return *TimeGrid::Build({}); }

// Classic RK4 on dx/dt = a_h x + b u + c p with constant p (t in hours).
double Rk4(double a_h, double bu, double cp, double x, double hours, int steps) {
  const double h = hours / steps;
  auto f = [&](double y) { return a_h * y + bu + cp; };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(x), k2 = f(x + h / 2 * k1), k3 = f(x + h / 2 * k2),
                 k4 = f(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

TEST(ResourceTest, BatteryModelS) {
  absl::StatusOr<ResourceParams> b = MakeBattery(17.2, 100, 50, Day());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(b->p_max[0], 17.2);
  EXPECT_EQ(b->p_min[0], -17.2);
  EXPECT_EQ(b->x_max[0], 100);
  EXPECT_EQ(b->x_min[0], 0);
  EXPECT_FALSE(b->has_ramp());
  EXPECT_TRUE(b->has_state());
  EXPECT_EQ(b->a, 0.0);
  EXPECT_EQ(b->b, 0.0);
  EXPECT_EQ(b->c, 1.0);
  EXPECT_EQ(b->delay_s, 0.0);
  EXPECT_TRUE(b->Validate(288).ok());
}

TEST(ResourceTest, BatteryBoundaryAndRejection) {
  EXPECT_TRUE(MakeBattery(14, 27, 27, Day()).ok());
  EXPECT_TRUE(MakeBattery(14, 27, 13.5, Day()).ok());
  EXPECT_FALSE(MakeBattery(-1, 27, 1, Day()).ok());
  EXPECT_FALSE(MakeBattery(14, 27, 28, Day()).ok());
  EXPECT_FALSE(MakeBattery(14, 27, -1, Day()).ok());
}

TEST(ResourceTest, FreezerCoefficients) {
  absl::StatusOr<ResourceParams> f = MakeFreezer({}, Day());
  ASSERT_TRUE(f.ok());
  EXPECT_NEAR(f->a_per_hour(), -0.0061, 0.0061 * 0.01);
  EXPECT_NEAR(f->b, 5.4562, 5.4562 * 0.01);
  EXPECT_EQ(f->u[0], -32.0);
  EXPECT_EQ(f->x0_min, 900.0);
  EXPECT_EQ(f->delay_s, 300.0);
}

TEST(ResourceTest, FreezerSteadyStatePower) {
  const ResourceParams f = *MakeFreezer({}, Day());
  const double p = -(f.a_per_hour() * 900.0 + f.b * f.u[0]) / f.c;
  EXPECT_NEAR(p, 180.05, 180.05 * 0.005);
}

TEST(ResourceTest, FreezerGenericPlacement) {
  FreezerSpec s;
  s.theta_in_min = -30;
  s.theta_in_max = -20;
  s.theta_out = -10;
  const ResourceParams f = *MakeFreezer(s, Day());
  const double expected = std::log((-20.0 + 10.0) / (-30.0 + 10.0)) / 36000.0;
  EXPECT_DOUBLE_EQ(f.a, expected);
  // One hand Euler step over 1 s from x = x_bar with p = 0 agrees with the
  // exact derivative.
  const double dxdt = f.a_per_hour() * s.x_bar + f.b * f.u[0];
  const double euler = s.x_bar + dxdt / 3600.0;
  EXPECT_NEAR(Rk4(f.a_per_hour(), f.b * f.u[0], 0, s.x_bar, 1 / 3600.0, 1), euler,
              1e-6);
}

TEST(ResourceTest, FreezerRejectsBadOrdering) {
  FreezerSpec s;
  s.theta_in_min = -26;
  EXPECT_FALSE(MakeFreezer(s, Day()).ok());
  FreezerSpec t;
  t.theta_out = -28;
  EXPECT_FALSE(MakeFreezer(t, Day()).ok());
  FreezerSpec u;
  u.fill = 1.5;
  EXPECT_FALSE(MakeFreezer(u, Day()).ok());
}

TEST(ResourceTest, FreezerPassiveDischarge) {
  const ResourceParams f = *MakeFreezer({}, Day());
  const double x = Rk4(f.a_per_hour(), f.b * f.u[0], 0.0, 1800.0, 10.0, 10000);
  EXPECT_NEAR(x, 0.0, 0.02 * 1800.0);
}

TEST(ResourceTest, FreezerTemperatureMap) {
  const FreezerSpec s;
  EXPECT_DOUBLE_EQ(FreezerTemperature(s, 0.0), -27.0);
  EXPECT_DOUBLE_EQ(FreezerTemperature(s, 1800.0), -29.0);
}

TEST(ResourceTest, Turbine) {
  absl::StatusOr<ResourceParams> t = MakeTurbine(0, 250000, 4500, Day());
  ASSERT_TRUE(t.ok());
  EXPECT_DOUBLE_EQ(t->r_max[0], 75.0);
  EXPECT_DOUBLE_EQ(t->r_min[0], -75.0);
  EXPECT_FALSE(t->has_state());
  EXPECT_FALSE(MakeTurbine(10, 5, 1, Day()).ok());
  EXPECT_FALSE(MakeTurbine(0, 5, 0, Day()).ok());
  EXPECT_DOUBLE_EQ(StandaloneCapacity(*MakeTurbine(7, 7, 100, Day()), Day()), 0.0);
}

TEST(ResourceTest, StandaloneExamples) {
  const TimeGrid g = Day();
  EXPECT_NEAR(StandaloneCapacity(*MakeBattery(17.2, 100, 50, g), g), 2.08, 0.01);
  EXPECT_NEAR(StandaloneCapacity(*MakeBattery(86, 500, 250, g), g), 10.42, 0.01);
  EXPECT_NEAR(StandaloneCapacity(*MakeBattery(50, 210, 105, g), g), 4.38, 0.01);
  EXPECT_NEAR(StandaloneCapacity(*MakeBattery(100, 420, 210, g), g), 8.75, 0.01);
  EXPECT_NEAR(StandaloneCapacity(*MakeBattery(14, 27, 13.5, g), g), 0.56, 0.01);
  EXPECT_NEAR(StandaloneCapacity(*MakeBattery(70, 135, 67.5, g), g), 2.81, 0.01);
  EXPECT_NEAR(StandaloneCapacity(*MakeTurbine(0, 250000, 4500, g), g), 375.0, 1e-9);
  EXPECT_EQ(StandaloneCapacity(*MakeFreezer({}, g), g), 0.0);
}

TEST(ResourceTest, StandaloneIsFast) {
  const TimeGrid g = Day();
  const ResourceParams b = *MakeBattery(17.2, 100, 50, g);
  const auto t0 = std::chrono::steady_clock::now();
  volatile double sink = StandaloneCapacity(b, g);
  (void)sink;
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(ms, 1.0);
}

TEST(ResourceTest, StandaloneMonotoneAndEnergyBound) {
  const TimeGrid g = Day();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1.0, 200.0);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng), x = u(rng), f = u(rng) / 200.0;
    const ResourceParams b = *MakeBattery(p, x, f * x, g);
    const double gam = StandaloneCapacity(b, g);
    EXPECT_GE(gam, 0.0);
    EXPECT_LE(gam * 24.0, std::min(x - f * x, f * x) + 1e-9);
    EXPECT_GE(StandaloneCapacity(*MakeBattery(p * 1.1, x, f * x, g), g), gam);
    EXPECT_GE(StandaloneCapacity(*MakeBattery(p, x * 1.1, f * x, g), g), gam);
    ResourceParams hi = b;
    hi.x0_max = std::min(x, hi.x0_max + 1.0);
    EXPECT_LE(StandaloneCapacity(hi, g), gam);
    ResourceParams t = *MakeTurbine(0, p, u(rng), g);
    const double gt = StandaloneCapacity(t, g);
    for (double& r : t.r_max) r *= 1.2;
    EXPECT_GE(StandaloneCapacity(t, g), gt);
  }
}

TEST(ResourceTest, ValidateCatchesBadParams) {
  ResourceParams b = *MakeBattery(10, 10, 5, Day());
  EXPECT_FALSE(b.Validate(100).ok());
  ResourceParams c = b;
  c.a = 1e-3;
  EXPECT_FALSE(c.Validate(288).ok());
  ResourceParams d = b;
  d.x0_max = 11;
  EXPECT_FALSE(d.Validate(288).ok());
  ResourceParams e = b;
  e.p_min[3] = 20;
  EXPECT_FALSE(e.Validate(288).ok());
}

TEST(ResourceTest, ExactSegmentAgreesWithRk4) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double a = -std::abs(u(rng)) * (i % 2 ? 1e-6 : 2.0);
    const double h = 0.1 + std::abs(u(rng));
    const double v0 = 10 * u(rng), v1 = 10 * u(rng), x0 = 5 * u(rng);
    const SegmentWeights w = ExactSegment(a, h);
    const double exact = w.e * x0 + w.beta0 * v0 + w.beta1 * v1;
    const int n = 20000;
    double x = x0;
    const double dt = h / n;
    auto f = [&](double t, double y) { return a * y + v0 + (v1 - v0) * t / h; };
    for (int k = 0; k < n; ++k) {
      const double t = k * dt;
      const double k1 = f(t, x), k2 = f(t + dt / 2, x + dt / 2 * k1),
                   k3 = f(t + dt / 2, x + dt / 2 * k2), k4 = f(t + dt, x + dt * k3);
      x += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    EXPECT_NEAR(exact, x, 1e-9 * std::max(1.0, std::abs(x)));
  }
}

}  // namespace
}  // namespace flexagg
