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
#ifndef FLEXAGG_TESTS_TEST_UTIL_H_
#define FLEXAGG_TESTS_TEST_UTIL_H_

#include <vector>

#include "flexagg/lp.h"
#include "flexagg/policy.h"
#include "flexagg/robust.h"
#include "flexagg/timegrid.h"

namespace flexagg::testing {

// T_H = T_SFR = T_DA = n_s system intervals of 5 min, T_ID = 5 min.
inline TimeGrid ShortGrid(int n_s, int64_t tc = 10) {
  GridDurations d;
  d.system_s = 300;
  d.control_s = tc;
  d.intra_day_s = 300;
  d.day_ahead_s = 300 * n_s;
  d.horizon_s = d.sfr_s = 300 * n_s;
  return *TimeGrid::Build(d);
}

// True when the fixed policy admits auxiliaries satisfying every row.
inline bool FixedPolicyFeasible(const PolicyVars& vars,
                                const AffinePolicy& policy,
                                const std::vector<RobustRowSet>& rows) {
  std::vector<VariableDecl> decls;
  for (VariableDecl d : vars.Declarations()) {
    double v = 0.0;
    switch (d.ref.kind) {
      case VarKind::kQ:
        v = policy.Q(d.ref.i, d.ref.j - 1);
        break;
      case VarKind::kq:
        v = policy.q[d.ref.i];
        break;
      case VarKind::kGamma:
        v = policy.gamma[std::max(d.ref.i, 1) - 1];
        break;
      default:
        break;
    }
    d.lo = d.hi = v;
    decls.push_back(d);
  }
  absl::StatusOr<LinearProgram> lp = Assemble(decls, rows, RobustRowSet{}, {});
  if (!lp.ok()) return false;
  return Solve(*lp).status == LpStatus::kOptimal;
}

}  // namespace flexagg::testing

#endif  // FLEXAGG_TESTS_TEST_UTIL_H_
