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
#ifndef FLEXAGG_MARKET_H_
#define FLEXAGG_MARKET_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "flexagg/lp.h"
#include "flexagg/policy.h"
#include "flexagg/robust.h"
#include "flexagg/rows.h"
#include "flexagg/timegrid.h"

namespace flexagg {

// Expected prices and activation statistics. Energy prices per kWh,
// reserve price per kW and system interval.
struct PriceForecast {
  std::vector<double> c_da;      // N_DA
  std::vector<double> c_id;      // N_ID
  std::vector<double> c_sfr;     // N_S
  std::vector<double> c_up;      // N_ID
  std::vector<double> c_dn;      // N_ID
  std::vector<double> w_exp;     // N_S
  std::vector<double> up_frac;   // N_ID
  std::vector<double> dn_frac;   // N_ID

  static PriceForecast Zero(const TimeGrid& grid);
  absl::Status Validate(const TimeGrid& grid) const;
};

// Reads columns c_DA, c_ID, c_SFR, c_up, c_dn, w_exp, up_frac, dn_frac.
// Columns may be shorter than the file; trailing cells stay empty.
// Missing columns default to zero.
absl::StatusOr<PriceForecast> ReadPriceCsv(const std::string& path,
                                           const TimeGrid& grid);

// Energy (kWh) of each market interval as weights (h) on the breakpoints.
struct EnergyMaps {
  Eigen::MatrixXd da;  // N_DA x (N_S + 1)
  Eigen::MatrixXd id;  // N_ID x (N_S + 1)
};
EnergyMaps MakeEnergyMaps(const TimeGrid& grid);

struct MarketMasks {
  EntryMask da;
  EntryMask id;
};
// Entries of Q_DA, Q_ID whose activation average is known at gate closure.
MarketMasks LeadTimeMasks(const TimeGrid& grid);

// Seconds from the horizon start to the day-ahead gate that governs
// breakpoint k.
double DayAheadGate(const TimeGrid& grid, int k);

enum class MarketMode { kFull, kFrozen };

// Decision variables of the two energy markets. In frozen mode only q_DA
// exists; Q_DA, Q_ID and q_ID are zero.
struct MarketVars {
  MarketMode mode = MarketMode::kFrozen;
  int n_s = 0;
  EntryMask da;
  EntryMask id;

  static VarRef Q(int owner, int k, int n) { return {owner, VarKind::kQ, k, n}; }
  static VarRef q(int owner, int k) { return {owner, VarKind::kq, k, 0}; }
  std::vector<VariableDecl> Declarations() const;
};

// Market masks restricted to entries that can take part in a balance row:
// those some resource may use or that the other market may offset.
MarketVars MakeMarketVars(const TimeGrid& grid, MarketMode mode,
                          const std::vector<PolicyVars>& resources);

// sum_j Q^(j) = Q_DA + Q_ID and sum_j q^(j) = q_DA + q_ID entrywise.
RobustRowSet BalanceRows(const std::vector<PolicyVars>& resources,
                         const MarketVars& market);

// Expected reserve income plus regulation income minus energy cost.
LinearExpr ExpectedProfit(const PriceForecast& prices,
                          const std::vector<PolicyVars>& resources,
                          const MarketVars& market, const EnergyMaps& maps,
                          const TimeGrid& grid);

struct MarketPolicies {
  AffinePolicy da;
  AffinePolicy id;
};

}  // namespace flexagg

#endif  // FLEXAGG_MARKET_H_
