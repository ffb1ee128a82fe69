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
#ifndef FLEXAGG_SIMULATE_H_
#define FLEXAGG_SIMULATE_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "flexagg/policy.h"
#include "flexagg/resource.h"
#include "flexagg/timegrid.h"

namespace flexagg {

// Samples w_1..w_{N_C}; w_l is the value at time l T_C and w(t) is linear in
// between. Before the first sample the signal holds w_1.
struct ActivationSignal {
  std::vector<double> w;
  std::string source;

  // Value at knot l = 0..N_C.
  double Knot(int l) const { return w[l == 0 ? 0 : l - 1]; }
};

struct SignalSpec {
  enum class Kind { kConstant, kSquare, kWalk } kind = Kind::kConstant;
  double value = 0.0;       // constant
  double period_s = 20.0;   // square
  double amplitude = 1.0;   // square
  double step = 0.1;        // walk
  double bias = 0.0;        // walk
  uint64_t seed = 1;        // walk
};

absl::StatusOr<ActivationSignal> GenSignal(const TimeGrid& grid,
                                           const SignalSpec& spec);

// One value per line; out-of-range values are clipped and counted.
absl::StatusOr<ActivationSignal> ReadSignalCsv(const std::string& path,
                                               const TimeGrid& grid,
                                               int* clipped = nullptr);
absl::Status WriteSignalCsv(const ActivationSignal& signal,
                            const std::string& path);

// Exact mean of w(t) over every system interval.
Eigen::VectorXd IntervalAverages(const ActivationSignal& signal,
                                 const TimeGrid& grid);

struct PowerSample {
  double p_ref = 0.0;
  double p_tgt = 0.0;
};

// Reference and target power at time t in [0, T_H]. A boundary instant
// belongs to the interval that starts there; T_H belongs to interval N_S.
absl::StatusOr<PowerSample> EvalPower(const AffinePolicy& policy,
                                      const Eigen::VectorXd& w_avg,
                                      const ActivationSignal& signal,
                                      const TimeGrid& grid, double t);

// Target power at the start and end of every control step, each using the
// reserve of the interval the step lies in.
struct PowerSegments {
  std::vector<double> start;  // N_C
  std::vector<double> end;    // N_C
};

PowerSegments TargetSegments(const AffinePolicy& policy,
                             const Eigen::VectorXd& w_avg,
                             const ActivationSignal& signal,
                             const TimeGrid& grid);

// States at knots 0..N_C by exact propagation of each affine step.
std::vector<double> IntegrateState(const ResourceParams& phi,
                                   const PowerSegments& power,
                                   const TimeGrid& grid, double x0);

struct ResourceTrace {
  std::vector<double> p_ref;  // knots 0..N_C
  std::vector<double> p_tgt;  // knots 0..N_C
  std::vector<double> x;      // knots 0..N_C; empty without state
  PowerSegments segments;
  std::vector<double> e_up;   // N_ID, kWh
  std::vector<double> e_dn;   // N_ID, kWh
};

struct SimulationTrace {
  std::vector<double> time_s;  // knots 0..N_C
  std::vector<double> w;       // knots 0..N_C
  std::vector<ResourceTrace> resources;
  std::vector<double> agg_p_ref;
  std::vector<double> agg_p_tgt;
  std::vector<double> agg_gamma;  // N_S
};

// Simulates every resource from the midpoint of its initial state interval.
absl::StatusOr<SimulationTrace> Simulate(
    const std::vector<ResourceParams>& resources,
    const std::vector<AffinePolicy>& policies, const ActivationSignal& signal,
    const TimeGrid& grid);

struct FamilyViolation {
  int count = 0;
  double worst = 0.0;      // largest excess over the bound
  double time_s = 0.0;     // where it occurs
  int resource = -1;
};

struct ViolationReport {
  FamilyViolation power;
  FamilyViolation ramp;
  FamilyViolation state;

  bool empty() const {
    return power.count == 0 && ramp.count == 0 && state.count == 0;
  }
  std::string Summary() const;
};

// Power bounds at both ends of every step, ramp bounds on knot differences,
// state bounds at knots. An excess counts when it exceeds
// tolerance * max(1, |bound|).
ViolationReport VerifyTrace(const SimulationTrace& trace,
                            const std::vector<ResourceParams>& resources,
                            const TimeGrid& grid, double tolerance);

struct RegulationEnergy {
  std::vector<double> up;  // kWh per intra-day interval
  std::vector<double> dn;
};

// Rectified energy of gamma_s w(t) per intra-day interval.
RegulationEnergy ComputeRegulationEnergy(const Eigen::VectorXd& gamma,
                                         const ActivationSignal& signal,
                                         const TimeGrid& grid);

// Wide CSV: time, w, per resource p_ref, p_tgt, x, then the aggregate.
void WriteTraceCsv(const SimulationTrace& trace,
                   const std::vector<std::string>& labels, std::ostream& out);

}  // namespace flexagg

#endif  // FLEXAGG_SIMULATE_H_
