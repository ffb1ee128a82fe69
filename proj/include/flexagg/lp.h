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

// Solver-neutral linear program container and the solver contract.
//
// A LinearProgram owns a deduplicated column table (one column per VarRef)
// and a list of sparse rows. Two backends sit behind Solve():
//
//   * a dense two-phase tableau simplex (Dantzig pricing, Bland's rule and
//     then a small bound perturbation on degenerate stalls, periodic
//     reinversion), the zero-dependency reference for small instances;
//   * a sparse primal-dual interior point method (Mehrotra predictor-corrector
//     on the regularized augmented system), used for the full-day problems.
//
// Backend::kAuto picks the dense simplex whenever its tableau stays small.

#ifndef FLEXAGG_LP_H_
#define FLEXAGG_LP_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "flexagg/rows.h"

namespace flexagg {

enum class Sense : uint8_t { kMinimize, kMaximize };

struct Objective {
  Sense sense = Sense::kMaximize;
  LinearExpr expr;
};

struct VariableDecl {
  VarRef ref;
  double lo = -kInf;
  double hi = kInf;
};

struct SparseRow {
  std::vector<int> cols;
  std::vector<double> vals;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  int family = 0;  // index into LinearProgram::families
};

class LinearProgram {
 public:
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int num_nonzeros() const;

  const std::vector<VariableDecl>& vars() const { return vars_; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<std::string>& families() const { return families_; }
  // Per-column objective coefficients in the stated sense.
  const std::vector<double>& objective() const { return objective_; }
  double objective_constant() const { return objective_constant_; }
  Sense sense() const { return sense_; }

  std::optional<int> ColumnOf(const VarRef& v) const;

  // Largest violation of any row or bound by x, each row scaled by its
  // largest absolute coefficient.
  double MaxNormalizedViolation(std::span<const double> x) const;
  double ObjectiveValue(std::span<const double> x) const;

  // Builder interface used by Assemble() and by tests.
  int AddVariable(const VariableDecl& decl);
  int AddFamily(std::string tag);
  void AddRow(SparseRow row) { rows_.push_back(std::move(row)); }
  void SetObjective(Sense sense, std::vector<double> coefs, double constant);
  void SetBounds(int col, double lo, double hi) {
    vars_[col].lo = lo;
    vars_[col].hi = hi;
  }

 private:
  std::vector<VariableDecl> vars_;
  absl::flat_hash_map<VarRef, int> column_of_;
  std::vector<SparseRow> rows_;
  std::vector<std::string> families_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  Sense sense_ = Sense::kMaximize;
};

// Builds the LP from explicitly declared decision variables, constraint
// families and equality rows. Variables declared more than once have their
// bounds intersected. Rows and objective may only reference declared
// variables or auxiliaries owned by one of the parts.
absl::StatusOr<LinearProgram> Assemble(std::span<const VariableDecl> declared,
                                       std::span<const RobustRowSet> parts,
                                       const RobustRowSet& equalities,
                                       const Objective& objective);

enum class LpStatus : uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
};

const char* ToString(LpStatus status);

enum class Backend : uint8_t { kAuto, kDenseSimplex, kInteriorPoint };

struct SolveOptions {
  // Relative optimality and feasibility tolerance.
  double tolerance = 1e-9;
  // 0 selects the backend default.
  int iteration_cap = 0;
  Backend backend = Backend::kAuto;
  bool verbose = false;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> values;
  double objective_value = 0.0;
  // Sensitivity of objective_value to each row's right-hand side.
  std::vector<double> row_duals;
  int iterations = 0;
  double max_violation = 0.0;
  std::string backend;

  double Value(const LinearProgram& lp, const VarRef& v) const;
};

LpSolution Solve(const LinearProgram& lp, const SolveOptions& options = {});

LpSolution SolveDenseSimplex(const LinearProgram& lp,
                             const SolveOptions& options);
LpSolution SolveInteriorPoint(const LinearProgram& lp,
                              const SolveOptions& options);

// CPLEX-style text LP ("Maximize / Subject To / Bounds / End"). Brackets
// in canonical names become underscores ("Q_1_3_1") so external readers
// accept them.
void WriteLpFormat(const LinearProgram& lp, std::ostream& out);

}  // namespace flexagg

#endif  // FLEXAGG_LP_H_
