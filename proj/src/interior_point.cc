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

// Primal-dual interior point method for
//
//   min c'x  s.t.  A x (<=, =) b,  lo <= x <= hi.
//
// Inequality rows get a nonnegative slack. Each Newton system is reduced to
// the quasidefinite augmented form
//
//   [ -(D + rho I)   A'          ] [dx]   [xi]
//   [  A             S + delta I ] [dy] = [r ]
//
// with slacks eliminated into the diagonal S, and factored by a sparse
// LDL' with a fixed fill-reducing ordering. Free columns are handled by the
// primal regularization rho alone; iterative refinement against the
// unregularized matrix restores accuracy.

#include <Eigen/Sparse>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "flexagg/lp.h"
#include "sparse_ldl.h"

namespace flexagg {
namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

constexpr double kPrimalReg = 1e-8;
constexpr double kDualReg = 1e-8;
constexpr double kPivotFloor = 1e-13;
constexpr double kPivotValue = 1e-8;
constexpr double kStepFraction = 0.995;
constexpr int kDefaultIterationCap = 200;
constexpr double kLooseTolerance = 1e-7;

// Problem after fixed-column removal, empty-row removal and scaling.
struct Reduced {
  int n = 0;   // structural columns
  int m = 0;   // rows
  int ns = 0;  // slacks
  SpMat a;     // m x n
  VectorXd b, c, lo, hi;  // lo/hi over n + ns columns
  std::vector<int> row_slack;  // -1 for equality rows
  std::vector<int> slack_row;
  std::vector<int> col_of;
  std::vector<int> row_of;
  VectorXd row_scale, col_scale;
  double b_scale = 1.0;
  double c_scale = 1.0;
  bool infeasible = false;
};

Reduced Reduce(const LinearProgram& lp, double sign, std::vector<double>& fixed) {
  Reduced red;
  const int n0 = lp.num_vars();
  fixed.assign(n0, 0.0);
  std::vector<int> new_col(n0, -1);
  for (int j = 0; j < n0; ++j) {
    const VariableDecl& d = lp.vars()[j];
    if (d.lo == d.hi) {
      fixed[j] = d.lo;
    } else {
      new_col[j] = red.n++;
      red.col_of.push_back(j);
    }
  }
  std::vector<Eigen::Triplet<double>> trips;
  std::vector<double> rhs;
  for (int i = 0; i < lp.num_rows(); ++i) {
    const SparseRow& r = lp.rows()[i];
    double bi = r.rhs;
    int live = 0;
    for (size_t t = 0; t < r.cols.size(); ++t) {
      const int j = r.cols[t];
      if (new_col[j] < 0) {
        bi -= r.vals[t] * fixed[j];
      } else if (r.vals[t] != 0.0) {
        ++live;
      }
    }
    if (live == 0) {
      const double slack_tol = 1e-9 * std::max(1.0, std::abs(r.rhs));
      if (r.relation == Relation::kEqual ? std::abs(bi) > slack_tol
                                         : bi < -slack_tol) {
        red.infeasible = true;
      }
      continue;
    }
    const int row = red.m++;
    red.row_of.push_back(i);
    for (size_t t = 0; t < r.cols.size(); ++t) {
      const int j = new_col[r.cols[t]];
      if (j >= 0 && r.vals[t] != 0.0) trips.emplace_back(row, j, r.vals[t]);
    }
    rhs.push_back(bi);
    if (r.relation == Relation::kLessEqual) {
      red.row_slack.push_back(red.ns);
      red.slack_row.push_back(row);
      ++red.ns;
    } else {
      red.row_slack.push_back(-1);
    }
  }
  red.a.resize(red.m, red.n);
  red.a.setFromTriplets(trips.begin(), trips.end());
  red.a.makeCompressed();
  red.b = Eigen::Map<VectorXd>(rhs.data(), red.m);
  red.c.setZero(red.n);
  red.lo.resize(red.n + red.ns);
  red.hi.resize(red.n + red.ns);
  for (int j = 0; j < red.n; ++j) {
    const int oj = red.col_of[j];
    red.c[j] = sign * lp.objective()[oj];
    red.lo[j] = lp.vars()[oj].lo;
    red.hi[j] = lp.vars()[oj].hi;
  }
  for (int k = 0; k < red.ns; ++k) {
    red.lo[red.n + k] = 0.0;
    red.hi[red.n + k] = kInf;
  }

  // Ruiz equilibration of A.
  red.row_scale.setOnes(red.m);
  red.col_scale.setOnes(red.n);
  for (int pass = 0; pass < 12; ++pass) {
    VectorXd rmax = VectorXd::Zero(red.m);
    VectorXd cmax = VectorXd::Zero(red.n);
    for (int j = 0; j < red.n; ++j) {
      for (SpMat::InnerIterator it(red.a, j); it; ++it) {
        const double v = std::abs(it.value());
        rmax[it.row()] = std::max(rmax[it.row()], v);
        cmax[j] = std::max(cmax[j], v);
      }
    }
    double worst = 0.0;
    for (int i = 0; i < red.m; ++i) {
      rmax[i] = rmax[i] > 0 ? 1.0 / std::sqrt(rmax[i]) : 1.0;
      worst = std::max(worst, std::abs(1.0 - rmax[i]));
    }
    for (int j = 0; j < red.n; ++j) {
      cmax[j] = cmax[j] > 0 ? 1.0 / std::sqrt(cmax[j]) : 1.0;
      worst = std::max(worst, std::abs(1.0 - cmax[j]));
    }
    for (int j = 0; j < red.n; ++j) {
      for (SpMat::InnerIterator it(red.a, j); it; ++it) {
        it.valueRef() *= rmax[it.row()] * cmax[j];
      }
    }
    red.row_scale.array() *= rmax.array();
    red.col_scale.array() *= cmax.array();
    if (worst < 1e-3) break;
  }
  red.b.array() *= red.row_scale.array();
  for (int j = 0; j < red.n; ++j) {
    red.c[j] *= red.col_scale[j];
    red.lo[j] /= red.col_scale[j];
    red.hi[j] /= red.col_scale[j];
  }
  double bmax = red.b.size() ? red.b.cwiseAbs().maxCoeff() : 0.0;
  for (int j = 0; j < red.n; ++j) {
    if (std::isfinite(red.lo[j])) bmax = std::max(bmax, std::abs(red.lo[j]));
    if (std::isfinite(red.hi[j])) bmax = std::max(bmax, std::abs(red.hi[j]));
  }
  red.b_scale = std::max(1.0, bmax);
  red.b /= red.b_scale;
  red.lo /= red.b_scale;
  red.hi /= red.b_scale;
  const double cmax = red.c.size() ? red.c.cwiseAbs().maxCoeff() : 0.0;
  red.c_scale = cmax > 0 ? cmax : 1.0;
  red.c /= red.c_scale;
  return red;
}

class KktSystem {
 public:
  explicit KktSystem(const Reduced& red) : red_(red), ldl_(Build(red)) {
    top_.resize(red.n);
    bot_.resize(red.m);
  }

  // d holds the barrier diagonal for all n + ns columns.
  void Factor(const VectorXd& d) {
    d_ = d;
    const int n = red_.n;
    for (int j = 0; j < n; ++j) {
      top_[j] = d[j];
      ldl_.diagonal(j) = -(d[j] + kPrimalReg);
    }
    for (int i = 0; i < red_.m; ++i) {
      const int k = red_.row_slack[i];
      bot_[i] = k >= 0 ? 1.0 / d[n + k] : 0.0;
      ldl_.diagonal(n + i) = bot_[i] + kDualReg;
    }
    ldl_.Factor(kPivotFloor, kPivotValue);
  }

  // Solves the full Newton system for dx (n + ns) and dy (m).
  void Solve(const VectorXd& xi, const VectorXd& rp, VectorXd& dx,
             VectorXd& dy) {
    const int n = red_.n;
    const int m = red_.m;
    VectorXd rhs(n + m);
    rhs.head(n) = xi.head(n);
    for (int i = 0; i < m; ++i) {
      const int k = red_.row_slack[i];
      rhs[n + i] = rp[i] + (k >= 0 ? xi[n + k] / d_[n + k] : 0.0);
    }
    VectorXd v = rhs;
    ldl_.Solve(v);
    double last = kInf;
    for (int pass = 0; pass < 6; ++pass) {
      VectorXd res = rhs - Apply(v);
      const double norm = res.lpNorm<Eigen::Infinity>();
      if (!(norm > 1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) ||
          norm > 0.5 * last) {
        break;
      }
      last = norm;
      ldl_.Solve(res);
      if (!res.allFinite()) break;
      v += res;
    }
    dx.resize(n + red_.ns);
    dx.head(n) = v.head(n);
    dy = v.tail(m);
    for (int k = 0; k < red_.ns; ++k) {
      dx[n + k] = (dy[red_.slack_row[k]] - xi[n + k]) / d_[n + k];
    }
  }

 private:
  static internal::SparseLdl Build(const Reduced& red) {
    const int n = red.n;
    const int m = red.m;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(n + m + red.a.nonZeros());
    for (int j = 0; j < n; ++j) {
      trips.emplace_back(j, j, -1.0);
      for (SpMat::InnerIterator it(red.a, j); it; ++it) {
        trips.emplace_back(n + it.row(), j, it.value());
      }
    }
    for (int i = 0; i < m; ++i) trips.emplace_back(n + i, n + i, 1.0);
    SpMat k(n + m, n + m);
    k.setFromTriplets(trips.begin(), trips.end());
    std::vector<int> signs(n + m, 1);
    std::fill(signs.begin(), signs.begin() + n, -1);
    return internal::SparseLdl(k, std::move(signs));
  }

  // Unregularized reduced matrix times v.
  VectorXd Apply(const VectorXd& v) const {
    const int n = red_.n;
    VectorXd out(n + red_.m);
    out.head(n) = -top_.cwiseProduct(v.head(n)) +
                  red_.a.transpose() * v.tail(red_.m);
    out.tail(red_.m) = red_.a * v.head(n) + bot_.cwiseProduct(v.tail(red_.m));
    return out;
  }

  const Reduced& red_;
  internal::SparseLdl ldl_;
  VectorXd d_, top_, bot_;
};

struct IpmOutcome {
  LpStatus status = LpStatus::kIterationLimit;
  VectorXd x, y;
  int iterations = 0;
};

IpmOutcome RunIpm(const Reduced& red, const SolveOptions& options) {
  IpmOutcome out;
  const int n = red.n;
  const int m = red.m;
  const int nt = n + red.ns;
  std::vector<char> has_lo(nt), has_hi(nt);
  int nb = 0;
  for (int j = 0; j < nt; ++j) {
    has_lo[j] = std::isfinite(red.lo[j]);
    has_hi[j] = std::isfinite(red.hi[j]);
    nb += has_lo[j] + has_hi[j];
  }
  const double tol = std::max(options.tolerance, 1e-13);
  const int cap =
      options.iteration_cap > 0 ? options.iteration_cap : kDefaultIterationCap;

  auto times_a = [&](const VectorXd& x) {
    VectorXd r = red.a * x.head(n);
    for (int k = 0; k < red.ns; ++k) r[red.slack_row[k]] += x[n + k];
    return r;
  };
  auto times_at = [&](const VectorXd& y) {
    VectorXd r(nt);
    r.head(n) = red.a.transpose() * y;
    for (int k = 0; k < red.ns; ++k) r[n + k] = y[red.slack_row[k]];
    return r;
  };
  VectorXd cfull = VectorXd::Zero(nt);
  cfull.head(n) = red.c;

  KktSystem kkt(red);

  // Starting point: least-norm primal and least-squares dual estimates,
  // pushed into the interior.
  VectorXd x(nt), y(m), zl = VectorXd::Zero(nt), zu = VectorXd::Zero(nt);
  {
    kkt.Factor(VectorXd::Ones(nt));
    VectorXd dx, dy;
    kkt.Solve(VectorXd::Zero(nt), red.b, dx, dy);
    x = dx;
    kkt.Solve(cfull, VectorXd::Zero(m), dx, dy);
    y = dy;
    VectorXd z = cfull - times_at(y);
    double min_gap = kInf;
    for (int j = 0; j < nt; ++j) {
      if (has_lo[j] && has_hi[j]) {
        const double w = red.hi[j] - red.lo[j];
        x[j] = std::clamp(x[j], red.lo[j] + 0.1 * w, red.hi[j] - 0.1 * w);
      }
      if (has_lo[j]) min_gap = std::min(min_gap, x[j] - red.lo[j]);
      if (has_hi[j]) min_gap = std::min(min_gap, red.hi[j] - x[j]);
    }
    const double shift_p = nb ? std::max(-1.5 * min_gap, 0.0) + 1e-2 : 0.0;
    double min_z = kInf;
    for (int j = 0; j < nt; ++j) {
      if (has_lo[j] && !has_hi[j]) {
        x[j] += shift_p;
        zl[j] = z[j];
        min_z = std::min(min_z, zl[j]);
      } else if (has_hi[j] && !has_lo[j]) {
        x[j] -= shift_p;
        zu[j] = -z[j];
        min_z = std::min(min_z, zu[j]);
      } else if (has_lo[j] && has_hi[j]) {
        zl[j] = std::max(z[j], 0.0);
        zu[j] = std::max(-z[j], 0.0);
        min_z = std::min(min_z, 0.0);
      }
    }
    const double shift_d = nb ? std::max(-1.5 * min_z, 0.0) + 1e-2 : 0.0;
    double gz = 0.0, gsum = 0.0, zsum = 0.0;
    for (int j = 0; j < nt; ++j) {
      if (has_lo[j]) {
        zl[j] += shift_d;
        const double g = x[j] - red.lo[j];
        gz += g * zl[j];
        gsum += g;
        zsum += zl[j];
      }
      if (has_hi[j]) {
        zu[j] += shift_d;
        const double t = red.hi[j] - x[j];
        gz += t * zu[j];
        gsum += t;
        zsum += zu[j];
      }
    }
    if (nb > 0) {
      const double dp = 0.5 * gz / zsum;
      const double dd = 0.5 * gz / gsum;
      for (int j = 0; j < nt; ++j) {
        if (has_lo[j] && !has_hi[j]) x[j] += dp;
        if (has_hi[j] && !has_lo[j]) x[j] -= dp;
        if (has_lo[j]) zl[j] += dd;
        if (has_hi[j]) zu[j] += dd;
      }
    }
  }

  const double bnorm = red.b.size() ? red.b.lpNorm<Eigen::Infinity>() : 0.0;
  const double cnorm = red.c.size() ? red.c.lpNorm<Eigen::Infinity>() : 0.0;
  VectorXd g(nt), t(nt), d(nt), xi(nt), rl(nt), ru(nt);
  VectorXd dx, dy, dzl(nt), dzu(nt), dx_aff, dzl_aff(nt), dzu_aff(nt);
  const auto start = std::chrono::steady_clock::now();
  double best_err = kInf;
  VectorXd best_x, best_y;

  for (int iter = 0; iter <= cap; ++iter) {
    out.iterations = iter;
    const VectorXd rp = red.b - times_a(x);
    const VectorXd rd = cfull - times_at(y) - zl + zu;
    double comp = 0.0;
    for (int j = 0; j < nt; ++j) {
      g[j] = has_lo[j] ? x[j] - red.lo[j] : 1.0;
      t[j] = has_hi[j] ? red.hi[j] - x[j] : 1.0;
      if (has_lo[j]) comp += g[j] * zl[j];
      if (has_hi[j]) comp += t[j] * zu[j];
    }
    const double mu = nb ? comp / nb : 0.0;
    const double pobj = cfull.dot(x);
    double dobj = red.b.dot(y);
    for (int j = 0; j < nt; ++j) {
      if (has_lo[j]) dobj += red.lo[j] * zl[j];
      if (has_hi[j]) dobj -= red.hi[j] * zu[j];
    }
    const double rel_p = rp.size() ? rp.lpNorm<Eigen::Infinity>() / (1.0 + bnorm) : 0.0;
    const double rel_d = rd.lpNorm<Eigen::Infinity>() / (1.0 + cnorm);
    const double rel_gap =
        std::abs(pobj - dobj) / (1e-6 + std::max(std::abs(pobj), std::abs(dobj)));
    if (options.verbose) {
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      std::fprintf(stderr,
                   "ipm %3d  p %+.8e  d %+.8e  rp %.1e  rd %.1e  mu %.1e  "
                   "%.1fs\n",
                   iter, pobj, dobj, rel_p, rel_d, mu, secs);
    }
    if (rel_p <= tol && rel_d <= tol && rel_gap <= tol) {
      out.status = LpStatus::kOptimal;
      best_err = -1.0;
      break;
    }
    const double err = std::max({rel_p, rel_d, rel_gap});
    if (std::isfinite(err) && err < best_err) {
      best_err = err;
      best_x = x;
      best_y = y;
    }
    if (!std::isfinite(pobj) || !std::isfinite(dobj) ||
        x.lpNorm<Eigen::Infinity>() > 1e30 || y.lpNorm<Eigen::Infinity>() > 1e30) {
      if (options.verbose) std::fprintf(stderr, "ipm: iterates diverged\n");
      break;
    }
    if (iter == cap) break;

    for (int j = 0; j < nt; ++j) {
      d[j] = (has_lo[j] ? zl[j] / g[j] : 0.0) + (has_hi[j] ? zu[j] / t[j] : 0.0);
      if (j >= n || has_lo[j] || has_hi[j]) d[j] = std::clamp(d[j], 1e-20, 1e20);
    }
    kkt.Factor(d);

    auto solve_direction = [&]() {
      for (int j = 0; j < nt; ++j) {
        xi[j] = rd[j] - (has_lo[j] ? rl[j] / g[j] : 0.0) +
                (has_hi[j] ? ru[j] / t[j] : 0.0);
      }
      kkt.Solve(xi, rp, dx, dy);
      for (int j = 0; j < nt; ++j) {
        dzl[j] = has_lo[j] ? (rl[j] - zl[j] * dx[j]) / g[j] : 0.0;
        dzu[j] = has_hi[j] ? (ru[j] + zu[j] * dx[j]) / t[j] : 0.0;
      }
    };
    auto step_lengths = [&](double& ap, double& ad) {
      ap = 1.0 / kStepFraction;
      ad = 1.0 / kStepFraction;
      for (int j = 0; j < nt; ++j) {
        if (has_lo[j] && dx[j] < 0) ap = std::min(ap, -g[j] / dx[j]);
        if (has_hi[j] && dx[j] > 0) ap = std::min(ap, t[j] / dx[j]);
        if (has_lo[j] && dzl[j] < 0) ad = std::min(ad, -zl[j] / dzl[j]);
        if (has_hi[j] && dzu[j] < 0) ad = std::min(ad, -zu[j] / dzu[j]);
      }
    };

    // Predictor.
    for (int j = 0; j < nt; ++j) {
      rl[j] = has_lo[j] ? -g[j] * zl[j] : 0.0;
      ru[j] = has_hi[j] ? -t[j] * zu[j] : 0.0;
    }
    solve_direction();
    if (!dx.allFinite() || !dy.allFinite()) {
      if (options.verbose) std::fprintf(stderr, "ipm: non-finite direction\n");
      break;
    }
    double ap, ad;
    step_lengths(ap, ad);
    ap = std::min(ap, 1.0);
    ad = std::min(ad, 1.0);
    double comp_aff = 0.0;
    for (int j = 0; j < nt; ++j) {
      if (has_lo[j]) comp_aff += (g[j] + ap * dx[j]) * (zl[j] + ad * dzl[j]);
      if (has_hi[j]) comp_aff += (t[j] - ap * dx[j]) * (zu[j] + ad * dzu[j]);
    }
    const double mu_aff = nb ? comp_aff / nb : 0.0;
    const double sigma = mu > 0 ? std::pow(mu_aff / mu, 3) : 0.0;
    dx_aff = dx;
    dzl_aff = dzl;
    dzu_aff = dzu;

    // Corrector.
    for (int j = 0; j < nt; ++j) {
      rl[j] = has_lo[j]
                  ? sigma * mu - g[j] * zl[j] - dx_aff[j] * dzl_aff[j]
                  : 0.0;
      ru[j] = has_hi[j]
                  ? sigma * mu - t[j] * zu[j] + dx_aff[j] * dzu_aff[j]
                  : 0.0;
    }
    solve_direction();
    if (!dx.allFinite() || !dy.allFinite()) {
      if (options.verbose) std::fprintf(stderr, "ipm: non-finite direction\n");
      break;
    }
    step_lengths(ap, ad);
    ap = std::min(1.0, kStepFraction * ap);
    ad = std::min(1.0, kStepFraction * ad);
    x += ap * dx;
    y += ad * dy;
    zl += ad * dzl;
    zu += ad * dzu;
  }
  if (out.status != LpStatus::kOptimal && best_err <= kLooseTolerance) {
    // Numerical trouble close to the end: fall back to the best iterate.
    out.status = LpStatus::kOptimal;
    x = std::move(best_x);
    y = std::move(best_y);
  }
  out.x = std::move(x);
  out.y = std::move(y);
  return out;
}

LpSolution Unscale(const LinearProgram& lp, const Reduced& red,
                   const std::vector<double>& fixed, const IpmOutcome& run,
                   double sign) {
  LpSolution sol;
  sol.backend = "interior-point";
  sol.status = run.status;
  sol.iterations = run.iterations;
  sol.values = fixed;
  for (int j = 0; j < red.n; ++j) {
    sol.values[red.col_of[j]] = run.x[j] * red.col_scale[j] * red.b_scale;
  }
  sol.row_duals.assign(lp.num_rows(), 0.0);
  for (int i = 0; i < red.m; ++i) {
    sol.row_duals[red.row_of[i]] =
        sign * run.y[i] * red.row_scale[i] * red.c_scale;
  }
  sol.objective_value = lp.ObjectiveValue(sol.values);
  sol.max_violation = lp.MaxNormalizedViolation(sol.values);
  return sol;
}

LpSolution SolveCore(const LinearProgram& lp, const SolveOptions& options) {
  const double sign = lp.sense() == Sense::kMaximize ? -1.0 : 1.0;
  std::vector<double> fixed;
  Reduced red = Reduce(lp, sign, fixed);
  if (red.infeasible) {
    LpSolution sol;
    sol.backend = "interior-point";
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  IpmOutcome run = RunIpm(red, options);
  if (run.x.size() == 0) {
    LpSolution sol;
    sol.backend = "interior-point";
    return sol;
  }
  return Unscale(lp, red, fixed, run, sign);
}

// Elastic feasibility problem: every row may be violated at unit cost.
LinearProgram ElasticCopy(const LinearProgram& lp) {
  LinearProgram e;
  for (const VariableDecl& d : lp.vars()) e.AddVariable(d);
  const int family = e.AddFamily("elastic");
  std::vector<double> cost(e.num_vars(), 0.0);
  for (int i = 0; i < lp.num_rows(); ++i) {
    SparseRow r = lp.rows()[i];
    r.family = family;
    const int up = e.AddVariable({VarRef{kGlobalOwner, VarKind::kAux, -1, 2 * i}, 0.0, kInf});
    r.cols.push_back(up);
    r.vals.push_back(-1.0);
    cost.push_back(1.0);
    if (r.relation == Relation::kEqual) {
      const int dn = e.AddVariable(
          {VarRef{kGlobalOwner, VarKind::kAux, -1, 2 * i + 1}, 0.0, kInf});
      r.cols.push_back(dn);
      r.vals.push_back(1.0);
      cost.push_back(1.0);
    }
    e.AddRow(std::move(r));
  }
  e.SetObjective(Sense::kMinimize, std::move(cost), 0.0);
  return e;
}

}  // namespace

LpSolution SolveInteriorPoint(const LinearProgram& lp,
                              const SolveOptions& options) {
  LpSolution sol = SolveCore(lp, options);
  if (sol.status == LpStatus::kOptimal || sol.status == LpStatus::kInfeasible) {
    return sol;
  }
  // Classify the failure: an elastic copy is always feasible and bounded.
  SolveOptions sub = options;
  sub.verbose = false;
  LpSolution elastic = SolveCore(ElasticCopy(lp), sub);
  if (elastic.status != LpStatus::kOptimal) return sol;
  double scale = 1.0;
  for (const SparseRow& r : lp.rows()) scale = std::max(scale, std::abs(r.rhs));
  if (elastic.objective_value > 1e-6 * scale) {
    sol.status = LpStatus::kInfeasible;
    return sol;
  }
  // Feasible: box the free directions and look for a ray.
  LinearProgram boxed = lp;
  double bound_scale = scale;
  for (const VariableDecl& d : lp.vars()) {
    if (std::isfinite(d.lo)) bound_scale = std::max(bound_scale, std::abs(d.lo));
    if (std::isfinite(d.hi)) bound_scale = std::max(bound_scale, std::abs(d.hi));
  }
  const double big = 1e6 * bound_scale;
  for (int j = 0; j < boxed.num_vars(); ++j) {
    const VariableDecl& d = lp.vars()[j];
    boxed.SetBounds(j, std::isfinite(d.lo) ? d.lo : -big,
                    std::isfinite(d.hi) ? d.hi : big);
  }
  LpSolution box = SolveCore(boxed, sub);
  if (box.status == LpStatus::kOptimal) {
    for (int j = 0; j < lp.num_vars(); ++j) {
      const VariableDecl& d = lp.vars()[j];
      const double v = box.values[j];
      if ((!std::isfinite(d.hi) && v > 0.5 * big) ||
          (!std::isfinite(d.lo) && v < -0.5 * big)) {
        sol.status = LpStatus::kUnbounded;
        return sol;
      }
    }
  }
  return sol;
}

}  // namespace flexagg
