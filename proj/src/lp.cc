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

#include "flexagg/lp.h"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace flexagg {

int LinearProgram::num_nonzeros() const {
  int nnz = 0;
  for (const SparseRow& r : rows_) nnz += static_cast<int>(r.cols.size());
  return nnz;
}

std::optional<int> LinearProgram::ColumnOf(const VarRef& v) const {
  auto it = column_of_.find(v);
  if (it == column_of_.end()) return std::nullopt;
  return it->second;
}

int LinearProgram::AddVariable(const VariableDecl& decl) {
  auto [it, inserted] = column_of_.try_emplace(decl.ref, num_vars());
  if (inserted) {
    vars_.push_back(decl);
    objective_.push_back(0.0);
  } else {
    VariableDecl& d = vars_[it->second];
    d.lo = std::max(d.lo, decl.lo);
    d.hi = std::min(d.hi, decl.hi);
  }
  return it->second;
}

int LinearProgram::AddFamily(std::string tag) {
  families_.push_back(std::move(tag));
  return static_cast<int>(families_.size()) - 1;
}

void LinearProgram::SetObjective(Sense sense, std::vector<double> coefs,
                                 double constant) {
  sense_ = sense;
  objective_ = std::move(coefs);
  objective_.resize(vars_.size(), 0.0);
  objective_constant_ = constant;
}

double LinearProgram::MaxNormalizedViolation(std::span<const double> x) const {
  double worst = 0.0;
  for (int j = 0; j < num_vars(); ++j) {
    worst = std::max({worst, vars_[j].lo - x[j], x[j] - vars_[j].hi});
  }
  for (const SparseRow& r : rows_) {
    double act = 0.0;
    double scale = 0.0;
    for (size_t t = 0; t < r.cols.size(); ++t) {
      act += r.vals[t] * x[r.cols[t]];
      scale = std::max(scale, std::abs(r.vals[t]));
    }
    if (scale == 0.0) scale = 1.0;
    double v = (act - r.rhs) / scale;
    if (r.relation == Relation::kEqual) v = std::abs(v);
    worst = std::max(worst, v);
  }
  return worst;
}

double LinearProgram::ObjectiveValue(std::span<const double> x) const {
  double v = objective_constant_;
  for (int j = 0; j < num_vars(); ++j) v += objective_[j] * x[j];
  return v;
}

double LpSolution::Value(const LinearProgram& lp, const VarRef& v) const {
  auto col = lp.ColumnOf(v);
  if (!col || values.empty()) return 0.0;
  return values[*col];
}

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

absl::StatusOr<LinearProgram> Assemble(std::span<const VariableDecl> declared,
                                       std::span<const RobustRowSet> parts,
                                       const RobustRowSet& equalities,
                                       const Objective& objective) {
  LinearProgram lp;
  for (const VariableDecl& d : declared) lp.AddVariable(d);
  for (const RobustRowSet& part : parts) {
    for (const AuxVar& a : part.aux) lp.AddVariable({a.ref, a.lo, a.hi});
  }
  for (const AuxVar& a : equalities.aux) lp.AddVariable({a.ref, a.lo, a.hi});
  for (int j = 0; j < lp.num_vars(); ++j) {
    const VariableDecl& d = lp.vars()[j];
    if (!(d.lo <= d.hi)) {
      return absl::InvalidArgumentError(
          absl::StrCat("conflicting bounds on ", CanonicalName(d.ref), ": ",
                       d.lo, " > ", d.hi));
    }
  }

  auto add_set = [&lp](const RobustRowSet& set) -> absl::Status {
    const int family = lp.AddFamily(set.tag);
    for (const LinearRow& row : set.rows) {
      SparseRow sr;
      sr.relation = row.relation;
      sr.rhs = row.rhs;
      sr.family = family;
      sr.cols.reserve(row.terms.size());
      sr.vals.reserve(row.terms.size());
      for (const Term& t : row.terms) {
        auto col = lp.ColumnOf(t.var);
        if (!col) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row in family '", set.tag, "' references undeclared variable ",
              CanonicalName(t.var)));
        }
        auto pos = std::find(sr.cols.begin(), sr.cols.end(), *col);
        if (pos == sr.cols.end()) {
          sr.cols.push_back(*col);
          sr.vals.push_back(t.coef);
        } else {
          sr.vals[pos - sr.cols.begin()] += t.coef;
        }
      }
      if (!std::isfinite(sr.rhs)) {
        return absl::InvalidArgumentError(
            absl::StrCat("non-finite right-hand side in family '", set.tag,
                         "'"));
      }
      lp.AddRow(std::move(sr));
    }
    return absl::OkStatus();
  };
  for (const RobustRowSet& part : parts) {
    if (absl::Status s = add_set(part); !s.ok()) return s;
  }
  if (absl::Status s = add_set(equalities); !s.ok()) return s;

  std::vector<double> coefs(lp.num_vars(), 0.0);
  for (const Term& t : objective.expr.terms()) {
    auto col = lp.ColumnOf(t.var);
    if (!col) {
      return absl::InvalidArgumentError(absl::StrCat(
          "objective references undeclared variable ", CanonicalName(t.var)));
    }
    coefs[*col] += t.coef;
  }
  lp.SetObjective(objective.sense, std::move(coefs),
                  objective.expr.constant());
  return lp;
}

namespace {
// Dense tableau entries above which kAuto switches to the interior point
// method.
constexpr double kDenseTableauLimit = 4.0e6;

double EstimatedTableauSize(const LinearProgram& lp) {
  int extra = 0;
  for (const VariableDecl& d : lp.vars()) {
    if (std::isfinite(d.lo) && std::isfinite(d.hi)) ++extra;
  }
  const double rows = lp.num_rows() + extra;
  const double cols = 2.0 * lp.num_vars() + 2.0 * rows;
  return rows * cols;
}
}  // namespace

LpSolution Solve(const LinearProgram& lp, const SolveOptions& options) {
  switch (options.backend) {
    case Backend::kDenseSimplex:
      return SolveDenseSimplex(lp, options);
    case Backend::kInteriorPoint:
      return SolveInteriorPoint(lp, options);
    case Backend::kAuto:
      break;
  }
  if (EstimatedTableauSize(lp) <= kDenseTableauLimit) {
    return SolveDenseSimplex(lp, options);
  }
  return SolveInteriorPoint(lp, options);
}

void WriteLpFormat(const LinearProgram& lp, std::ostream& out) {
  auto name = [&lp](int col) {
    if (lp.vars()[col].ref.kind == VarKind::kAux) return absl::StrCat("aux_", col);
    std::string n;
    for (char ch : CanonicalName(lp.vars()[col].ref)) {
      if (ch == '[') {
        n += '_';
      } else if (ch != ']') {
        n += ch;
      }
    }
    return n;
  };
  auto write_terms = [&](const std::vector<int>& cols,
                         const std::vector<double>& vals) {
    bool first = true;
    for (size_t t = 0; t < cols.size(); ++t) {
      if (vals[t] == 0.0) continue;
      out << (vals[t] < 0 ? " - " : (first ? " " : " + "))
          << std::abs(vals[t]) << " " << name(cols[t]);
      first = false;
    }
    if (first) out << " 0 " << name(0);
  };
  out << std::setprecision(17);
  out << (lp.sense() == Sense::kMaximize ? "Maximize\n" : "Minimize\n");
  std::vector<int> cols;
  std::vector<double> vals;
  for (int j = 0; j < lp.num_vars(); ++j) {
    if (lp.objective()[j] != 0.0) {
      cols.push_back(j);
      vals.push_back(lp.objective()[j]);
    }
  }
  out << " obj:";
  if (cols.empty() && lp.num_vars() == 0) {
    out << " 0";
  } else {
    write_terms(cols, vals);
  }
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const SparseRow& r = lp.rows()[i];
    out << " r" << i << ":";
    write_terms(r.cols, r.vals);
    out << (r.relation == Relation::kEqual ? " = " : " <= ") << r.rhs << "\n";
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const VariableDecl& d = lp.vars()[j];
    if (d.lo == -kInf && d.hi == kInf) {
      out << " " << name(j) << " free\n";
    } else if (d.lo == d.hi) {
      out << " " << name(j) << " = " << d.lo << "\n";
    } else {
      out << " ";
      if (d.lo == -kInf) {
        out << "-inf";
      } else {
        out << d.lo;
      }
      out << " <= " << name(j) << " <= ";
      if (d.hi == kInf) {
        out << "+inf";
      } else {
        out << d.hi;
      }
      out << "\n";
    }
  }
  out << "End\n";
}

}  // namespace flexagg
