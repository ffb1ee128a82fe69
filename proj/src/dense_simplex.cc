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

// Two-phase dense tableau simplex with Bland's anti-cycling rule.
//
// Every original column is mapped to one or two nonnegative tableau columns
// (shifted by a finite lower bound, mirrored at a finite upper bound, or split
// when free); finite upper bounds of shifted columns become extra <= rows.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "flexagg/lp.h"

namespace flexagg {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kRelativePivotTol = 1e-7;

struct ColumnMap {
  enum Kind { kShifted, kMirrored, kSplit } kind = kShifted;
  int first = 0;  // tableau column
  double offset = 0.0;
};

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  double& at(int r, int c) { return data_[r * (cols_ + 1) + c]; }
  double& rhs(int r) { return at(r, cols_); }
  // Row rows_ holds reduced costs; its rhs slot holds -objective.
  double& cost(int c) { return at(rows_, c); }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &data_[pr * (cols_ + 1)];
    for (int c = 0; c <= cols_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      double* row = &data_[r * (cols_ + 1)];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

constexpr int kBlandAfter = 50;
constexpr int kPerturbAfter = 500;
constexpr double kBlandPivotShare = 1e-2;
constexpr double kHarrisTol = 1e-10;

}  // namespace

LpSolution SolveDenseSimplex(const LinearProgram& lp,
                             const SolveOptions& options) {
  LpSolution sol;
  sol.backend = "dense-simplex";
  const int n = lp.num_vars();
  const double sign = lp.sense() == Sense::kMaximize ? -1.0 : 1.0;
  const double tol = std::max(options.tolerance, 1e-12);
  const int cap = options.iteration_cap > 0 ? options.iteration_cap : 200000;

  // Column mapping.
  std::vector<ColumnMap> cmap(n);
  int ny = 0;
  std::vector<int> bound_rows;  // original columns needing y <= hi - lo
  for (int j = 0; j < n; ++j) {
    const VariableDecl& d = lp.vars()[j];
    if (std::isfinite(d.lo)) {
      cmap[j] = {ColumnMap::kShifted, ny++, d.lo};
      if (std::isfinite(d.hi)) bound_rows.push_back(j);
    } else if (std::isfinite(d.hi)) {
      cmap[j] = {ColumnMap::kMirrored, ny++, d.hi};
    } else {
      cmap[j] = {ColumnMap::kSplit, ny, 0.0};
      ny += 2;
    }
  }

  const int m0 = lp.num_rows();
  const int m = m0 + static_cast<int>(bound_rows.size());
  // Dense rows over y with relation and rhs.
  std::vector<std::vector<double>> a(m, std::vector<double>(ny, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<Relation> rel(m, Relation::kLessEqual);
  for (int i = 0; i < m0; ++i) {
    const SparseRow& r = lp.rows()[i];
    rel[i] = r.relation;
    b[i] = r.rhs;
    for (size_t t = 0; t < r.cols.size(); ++t) {
      const ColumnMap& cm = cmap[r.cols[t]];
      const double v = r.vals[t];
      switch (cm.kind) {
        case ColumnMap::kShifted:
          a[i][cm.first] += v;
          b[i] -= v * cm.offset;
          break;
        case ColumnMap::kMirrored:
          a[i][cm.first] -= v;
          b[i] -= v * cm.offset;
          break;
        case ColumnMap::kSplit:
          a[i][cm.first] += v;
          a[i][cm.first + 1] -= v;
          break;
      }
    }
  }
  for (size_t t = 0; t < bound_rows.size(); ++t) {
    const int j = bound_rows[t];
    const int i = m0 + static_cast<int>(t);
    a[i][cmap[j].first] = 1.0;
    b[i] = lp.vars()[j].hi - lp.vars()[j].lo;
  }

  // Row orientation: rhs >= 0 after flipping; flipped <= rows become >=.
  std::vector<double> flip(m, 1.0);
  std::vector<bool> ge(m, false);
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      flip[i] = -1.0;
      b[i] = -b[i];
      for (double& v : a[i]) v = -v;
      if (rel[i] == Relation::kLessEqual) ge[i] = true;
    }
  }

  // Tableau columns: y, then one unit column per row (slack or artificial),
  // then surplus columns for >= rows.
  int num_surplus = 0;
  for (int i = 0; i < m; ++i) num_surplus += ge[i] ? 1 : 0;
  const int unit0 = ny;
  const int surplus0 = ny + m;
  const int ncols = ny + m + num_surplus;
  std::vector<bool> artificial(ncols, false);
  // The two halves of a split free variable must never be basic together.
  std::vector<int> partner(ncols, -1);
  for (const ColumnMap& cm : cmap) {
    if (cm.kind != ColumnMap::kSplit) continue;
    partner[cm.first] = cm.first + 1;
    partner[cm.first + 1] = cm.first;
  }
  std::vector<bool> is_basic(ncols, false);
  Tableau tab(m, ncols);
  std::vector<int> basis(m);
  int sp = surplus0;
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < ny; ++c) tab.at(i, c) = a[i][c];
    tab.at(i, unit0 + i) = 1.0;
    if (ge[i]) tab.at(i, sp++) = -1.0;
    tab.rhs(i) = b[i];
    basis[i] = unit0 + i;
    is_basic[unit0 + i] = true;
    if (ge[i] || rel[i] == Relation::kEqual) artificial[unit0 + i] = true;
  }

  double bscale = 1.0;
  for (double v : b) bscale = std::max(bscale, std::abs(v));

  // Original constraint block, kept for reinversion.
  Eigen::MatrixXd a0(m, ncols);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < ncols; ++c) a0(i, c) = tab.at(i, c);
  }
  Eigen::VectorXd rhs_run = Eigen::Map<const Eigen::VectorXd>(b.data(), m);
  std::vector<double> active_cost(ncols, 0.0);

  auto set_costs = [&](const std::vector<double>& cost) {
    active_cost = cost;
    for (int c = 0; c <= ncols; ++c) tab.cost(c) = 0.0;
    for (int c = 0; c < ncols; ++c) tab.cost(c) = cost[c];
    for (int i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      for (int c = 0; c <= ncols; ++c) tab.cost(c) -= cb * tab.at(i, c);
    }
  };

  auto basis_matrix = [&]() {
    Eigen::MatrixXd bm(m, m);
    for (int i = 0; i < m; ++i) bm.col(i) = a0.col(basis[i]);
    return bm;
  };
  // Rebuilds B^-1 [A | rhs] and the cost row from the original data.
  auto reinvert = [&](const Eigen::VectorXd& rhs) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix());
    const Eigen::MatrixXd t = lu.solve(a0);
    const Eigen::VectorXd r = lu.solve(rhs);
    for (int i = 0; i < m; ++i) {
      for (int c = 0; c < ncols; ++c) tab.at(i, c) = t(i, c);
      tab.rhs(i) = r[i];
      tab.at(i, basis[i]) = 1.0;
    }
    set_costs(active_cost);
  };
  const int reinvert_every = std::max(200, m);

  int iterations = 0;
  bool perturbed = false;
  // Returns false on unboundedness; stops early when the cap is hit.
  // Dantzig pricing; Bland's rule takes over during runs of degenerate
  // pivots and guarantees termination.
  auto run = [&](const std::vector<bool>& barred, double dtol) -> bool {
    int degenerate = 0;
    while (iterations < cap) {
      const bool bland = degenerate >= kBlandAfter;
      int enter = -1;
      double most = -dtol;
      for (int c = 0; c < ncols; ++c) {
        if (barred[c] || tab.cost(c) >= most) continue;
        if (partner[c] >= 0 && is_basic[partner[c]]) continue;
        enter = c;
        if (bland) break;
        most = tab.cost(c);
      }
      if (enter < 0) return true;
      // Harris two-pass ratio test: bound the step with a small feasibility
      // allowance, then take the largest pivot within it. Under Bland's rule
      // ties go to the lowest basic index instead.
      const double allowance = bland ? 0.0 : kHarrisTol * bscale;
      double col_max = 0.0;
      for (int i = 0; i < m; ++i) col_max = std::max(col_max, tab.at(i, enter));
      const double piv_tol = std::max(kPivotTol, kRelativePivotTol * col_max);
      double bound = kInf;
      for (int i = 0; i < m; ++i) {
        const double v = tab.at(i, enter);
        if (v <= piv_tol) continue;
        bound = std::min(bound, (std::max(tab.rhs(i), 0.0) + allowance) / v);
      }
      // Largest pivot among the rows within the bound. Bland's rule instead
      // takes the lowest basic index, skipping pivots much smaller than the
      // largest candidate.
      double top = 0.0;
      for (int i = 0; i < m; ++i) {
        const double v = tab.at(i, enter);
        if (v <= piv_tol) continue;
        if (std::max(tab.rhs(i), 0.0) / v <= bound * (1.0 + 1e-12)) {
          top = std::max(top, v);
        }
      }
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < m; ++i) {
        const double v = tab.at(i, enter);
        if (v <= piv_tol) continue;
        const double ratio = std::max(tab.rhs(i), 0.0) / v;
        if (ratio > bound * (1.0 + 1e-12)) continue;
        bool take = leave < 0;
        if (bland) {
          if (v < kBlandPivotShare * top) continue;
          take = take || basis[i] < basis[leave];
        } else {
          take = take || v > tab.at(leave, enter);
        }
        if (take) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      degenerate = best <= 1e-12 * bscale ? degenerate + 1 : 0;
      if (degenerate >= kPerturbAfter && !perturbed) {
        // Long stall: spread the degenerate vertex apart.
        uint64_t state = 0x9e3779b97f4a7c15ULL;
        Eigen::VectorXd eps(m);
        for (int i = 0; i < m; ++i) {
          state = state * 6364136223846793005ULL + 1442695040888963407ULL;
          const double r = static_cast<double>(state >> 11) * 0x1.0p-53;
          eps[i] = (1.0 + r) * 1e-7 * bscale;
          tab.rhs(i) += eps[i];
        }
        rhs_run += basis_matrix() * eps;
        perturbed = true;
        degenerate = 0;
        continue;
      }
      tab.Pivot(leave, enter);
      is_basic[basis[leave]] = false;
      is_basic[enter] = true;
      basis[leave] = enter;
      ++iterations;
      if (iterations % reinvert_every == 0) reinvert(rhs_run);
      for (int i = 0; i < m; ++i) {
        if (tab.rhs(i) < 0.0 && tab.rhs(i) > -1e-9 * bscale) tab.rhs(i) = 0.0;
      }
    }
    return true;
  };

  // Phase 1.
  std::vector<double> phase1(ncols, 0.0);
  bool need_phase1 = false;
  for (int c = 0; c < ncols; ++c) {
    if (artificial[c]) {
      phase1[c] = 1.0;
      need_phase1 = true;
    }
  }
  std::vector<bool> none(ncols, false);
  if (need_phase1) {
    set_costs(phase1);
    run(none, 1e-10);
    if (iterations >= cap) {
      sol.status = LpStatus::kIterationLimit;
      sol.iterations = iterations;
      return sol;
    }
    const double infeas = -tab.cost(ncols);
    if (infeas > tol * bscale * 10.0) {
      sol.status = LpStatus::kInfeasible;
      sol.iterations = iterations;
      return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (!artificial[basis[i]]) continue;
      int pc = -1;
      double best = kPivotTol * 1e3;
      for (int c = 0; c < ncols; ++c) {
        if (artificial[c] || is_basic[c]) continue;
        if (partner[c] >= 0 && is_basic[partner[c]]) continue;
        if (std::abs(tab.at(i, c)) > best) {
          best = std::abs(tab.at(i, c));
          pc = c;
        }
      }
      if (pc >= 0) {
        tab.Pivot(i, pc);
        is_basic[basis[i]] = false;
        is_basic[pc] = true;
        basis[i] = pc;
      }
    }
  }

  // Phase 2.
  std::vector<double> cost(ncols, 0.0);
  double cost_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const double cj = sign * lp.objective()[j];
    const ColumnMap& cm = cmap[j];
    switch (cm.kind) {
      case ColumnMap::kShifted:
        cost[cm.first] += cj;
        break;
      case ColumnMap::kMirrored:
        cost[cm.first] -= cj;
        break;
      case ColumnMap::kSplit:
        cost[cm.first] += cj;
        cost[cm.first + 1] -= cj;
        break;
    }
    cost_scale = std::max(cost_scale, std::abs(cj));
  }
  set_costs(cost);
  const bool bounded = run(artificial, 1e-10 * std::max(1.0, cost_scale));
  sol.iterations = iterations;
  if (iterations >= cap) {
    sol.status = LpStatus::kIterationLimit;
    return sol;
  }
  if (!bounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  {
    // Exact right-hand side B^-1 b of the final basis. Any primal
    // infeasibility left over is removed by dual pivots.
    reinvert(Eigen::Map<const Eigen::VectorXd>(b.data(), m));
    while (iterations < cap) {
      // Dual simplex under Bland's rule: lowest basic index leaves, ties
      // in the ratio go to the lowest column.
      int row = -1;
      for (int i = 0; i < m; ++i) {
        if (tab.rhs(i) < -1e-9 * bscale && (row < 0 || basis[i] < basis[row])) {
          row = i;
        }
      }
      if (row < 0) break;
      int enter = -1;
      double ratio = kInf;
      double row_max = 0.0;
      for (int c = 0; c < ncols; ++c) {
        if (!artificial[c]) row_max = std::max(row_max, -tab.at(row, c));
      }
      const double piv_tol = std::max(kPivotTol, kRelativePivotTol * row_max);
      for (int c = 0; c < ncols; ++c) {
        const double v = tab.at(row, c);
        if (artificial[c] || v >= -piv_tol) continue;
        if (partner[c] >= 0 && is_basic[partner[c]]) continue;
        const double r = std::max(tab.cost(c), 0.0) / -v;
        if (r < ratio - 1e-12 * std::max(1.0, ratio)) {
          ratio = r;
          enter = c;
        }
      }
      if (enter < 0) {
        sol.status = LpStatus::kInfeasible;
        sol.iterations = iterations;
        return sol;
      }
      tab.Pivot(row, enter);
      is_basic[basis[row]] = false;
      is_basic[enter] = true;
      basis[row] = enter;
      ++iterations;
      if (iterations % reinvert_every == 0) {
        reinvert(Eigen::Map<const Eigen::VectorXd>(b.data(), m));
      }
    }
    sol.iterations = iterations;
    if (iterations >= cap) {
      sol.status = LpStatus::kIterationLimit;
      return sol;
    }
  }

  std::vector<double> y(ncols, 0.0);
  for (int i = 0; i < m; ++i) y[basis[i]] = std::max(tab.rhs(i), 0.0);
  sol.values.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const ColumnMap& cm = cmap[j];
    switch (cm.kind) {
      case ColumnMap::kShifted:
        sol.values[j] = cm.offset + y[cm.first];
        break;
      case ColumnMap::kMirrored:
        sol.values[j] = cm.offset - y[cm.first];
        break;
      case ColumnMap::kSplit:
        sol.values[j] = y[cm.first] - y[cm.first + 1];
        break;
    }
  }
  // Row duals of the minimization: pi_i = -reduced cost of unit column i.
  sol.row_duals.assign(m0, 0.0);
  for (int i = 0; i < m0; ++i) {
    const double pi = -tab.cost(unit0 + i);
    sol.row_duals[i] = sign * flip[i] * pi;
  }
  sol.status = LpStatus::kOptimal;
  sol.objective_value = lp.ObjectiveValue(sol.values);
  sol.max_violation = lp.MaxNormalizedViolation(sol.values);
  return sol;
}

}  // namespace flexagg
