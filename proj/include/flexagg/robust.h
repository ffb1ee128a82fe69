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
#ifndef FLEXAGG_ROBUST_H_
#define FLEXAGG_ROBUST_H_

#include <vector>

#include "flexagg/lp.h"
#include "flexagg/policy.h"
#include "flexagg/resource.h"
#include "flexagg/rows.h"
#include "flexagg/timegrid.h"

namespace flexagg {

// Auxiliary family codes (VarRef::i of kAux variables).
inline constexpr int kPowerFamily = 1;
inline constexpr int kRampFamily = 2;
inline constexpr int kStateFamily = 3;
inline constexpr int kMarketFamily = 4;
inline constexpr int kObjectiveFamily = 5;

// Hands out consecutive auxiliary references of one owner and family.
class AuxAllocator {
 public:
  AuxAllocator(int owner, int family) : owner_(owner), family_(family) {}
  VarRef Next() { return {owner_, VarKind::kAux, family_, next_++}; }
  int issued() const { return next_; }

 private:
  int owner_;
  int family_;
  int next_ = 0;
};

// The decision variables {Q, q, gamma} of one resource.
struct PolicyVars {
  int owner = 0;
  PolicyStructure structure;

  VarRef Q(int k, int n) const { return {owner, VarKind::kQ, k, n}; }
  VarRef q(int k) const { return {owner, VarKind::kq, k, 0}; }
  VarRef gamma(int s) const {
    return {owner, VarKind::kGamma, structure.time_invariant_gamma ? 0 : s, 0};
  }
  // Q entries of the allowed pattern and q are free, gamma >= 0.
  std::vector<VariableDecl> Declarations() const;
};

// New auxiliary t with t >= expr and t >= -expr.
VarRef AbsAux(const LinearExpr& expr, AuxAllocator& alloc, RobustRowSet& out);

// Sum of auxiliaries bounding |entries[i]|, gathered in a new variable s
// with s = sum t_i. Empty entries are skipped; with nothing left the result
// is the constant 0 and no rows are added.
LinearExpr Norm1Epigraph(const std::vector<LinearExpr>& entries,
                         AuxAllocator& alloc, RobustRowSet& out);

// Worst case over the activation box of the power limits at every
// breakpoint, including the reserve of both adjacent intervals.
RobustRowSet PowerRows(const ResourceParams& phi, const PolicyVars& vars);

// Ramp limits on the target power, with the reserve term of a full swing
// inside one interval and of a swing across an interval boundary.
RobustRowSet RampRows(const ResourceParams& phi, const PolicyVars& vars,
                      const TimeGrid& grid);

// Conservative state limits at every breakpoint, covering the uncertain
// initial state, the averaged activation and the deviation of the state
// within each interval.
RobustRowSet StateRows(const ResourceParams& phi, const PolicyVars& vars,
                       const TimeGrid& grid);

// gamma <= 0 in every interval when the control delay exceeds T_C.
RobustRowSet DelayRows(const ResourceParams& phi, const PolicyVars& vars,
                       const TimeGrid& grid);

// Per-interval safety margin used by StateRows, for a fixed policy. Exposed
// for tests and reports.
double StateMargin(const ResourceParams& phi, const AffinePolicy& policy,
                   const TimeGrid& grid, int s);

}  // namespace flexagg

#endif  // FLEXAGG_ROBUST_H_
