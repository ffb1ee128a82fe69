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
#ifndef FLEXAGG_BIDDING_H_
#define FLEXAGG_BIDDING_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "flexagg/lp.h"
#include "flexagg/market.h"
#include "flexagg/policy.h"
#include "flexagg/resource.h"
#include "flexagg/timegrid.h"

namespace flexagg {

enum class ObjectiveMode { kMaxCapacity, kProfit };

struct Scenario {
  TimeGrid grid;
  std::vector<ResourceParams> resources;
  std::vector<PolicyStructure> structures;
  MarketMode market_mode = MarketMode::kFrozen;
  ObjectiveMode objective = ObjectiveMode::kMaxCapacity;
  std::optional<PriceForecast> prices;

  absl::Status Validate() const;
};

// Scenario with the given resources, one structure each from their delays.
absl::StatusOr<Scenario> MakeCapacityScenario(
    const TimeGrid& grid, std::vector<ResourceParams> resources,
    int bandwidth = 4, bool time_invariant_gamma = true);

struct SolveStats {
  int num_vars = 0;
  int num_rows = 0;
  int num_nonzeros = 0;
  int iterations = 0;
  double seconds = 0.0;
  double max_violation = 0.0;
  double balance_residual = 0.0;
  std::string backend;
};

struct BidResult {
  LpStatus status = LpStatus::kIterationLimit;
  // Constraint family whose removal restores feasibility, when infeasible.
  std::string diagnosis;
  std::vector<AffinePolicy> policies;
  MarketPolicies markets;
  Eigen::VectorXd gamma_agg;
  double objective_value = 0.0;
  SolveStats stats;

  bool ok() const { return status == LpStatus::kOptimal; }
};

// Families that can be left out of the LP, for diagnosis and tests.
struct Relaxation {
  bool power = false;
  bool ramp = false;
  bool state = false;
  bool delay = false;
};

// Builds the bidding LP of a scenario.
absl::StatusOr<LinearProgram> BuildLp(const Scenario& scn,
                                      const Relaxation& relax = {});

// Expected-profit bidding in full-market mode.
absl::StatusOr<BidResult> SolveBidding(const Scenario& scn,
                                       const SolveOptions& options = {});
// Largest reserve min_k sum_j gamma_k the aggregation can hold.
absl::StatusOr<BidResult> MaxCapacity(const Scenario& scn,
                                      const SolveOptions& options = {});
// Dispatches on scn.objective.
absl::StatusOr<BidResult> SolveScenario(const Scenario& scn,
                                        const SolveOptions& options = {});

// gamma_agg_max / sum(standalone) - 1; FailedPrecondition when the sum is 0.
absl::StatusOr<double> SynergyFactor(double gamma_agg_max,
                                     const std::vector<double>& standalone);

// Largest |sum_j Q^(j) - Q_DA - Q_ID| and |sum_j q^(j) - q_DA - q_ID|.
double BalanceResidual(const BidResult& result);

struct SweepPoint {
  double p_bar_kw = 0.0;
  double x_bar_kwh = 0.0;
};

struct SweepRow {
  SweepPoint point;
  double gamma_b = 0.0;
  double gamma_agg = 0.0;
  std::optional<double> sigma;
  std::string status;  // "optimal" or the failure
};

// Replaces resource battery_index of the base scenario by a battery of each
// point (half full) and solves the capacity problem. Rows are returned in
// input order; failures are recorded in the row.
std::vector<SweepRow> Sweep(const Scenario& base, int battery_index,
                            const std::vector<SweepPoint>& points,
                            const SolveOptions& options = {}, int threads = 0);

}  // namespace flexagg

#endif  // FLEXAGG_BIDDING_H_
