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
#include "flexagg/robust.h"

#include <algorithm>
#include <cmath>

namespace flexagg {

std::vector<VariableDecl> PolicyVars::Declarations() const {
  std::vector<VariableDecl> decls;
  const int n_s = structure.n_s;
  for (int k = 0; k <= n_s; ++k) {
    for (int n = structure.RowFirst(k); n <= structure.RowLast(k); ++n) {
      decls.push_back({Q(k, n), -kInf, kInf});
    }
  }
  for (int k = 0; k <= n_s; ++k) decls.push_back({q(k), -kInf, kInf});
  if (structure.time_invariant_gamma) {
    decls.push_back({gamma(1), 0.0, kInf});
  } else {
    for (int s = 1; s <= n_s; ++s) decls.push_back({gamma(s), 0.0, kInf});
  }
  return decls;
}

VarRef AbsAux(const LinearExpr& expr, AuxAllocator& alloc, RobustRowSet& out) {
  const VarRef t = alloc.Next();
  out.aux.push_back({t, 0.0, kInf});
  LinearExpr up = expr;
  up.Add(t, -1.0);
  out.rows.push_back(LessEqual(up, 0.0));
  LinearExpr dn;
  dn.AddScaled(expr, -1.0);
  dn.Add(t, -1.0);
  out.rows.push_back(LessEqual(dn, 0.0));
  return t;
}

LinearExpr Norm1Epigraph(const std::vector<LinearExpr>& entries,
                         AuxAllocator& alloc, RobustRowSet& out) {
  LinearExpr sum;
  for (const LinearExpr& e : entries) {
    if (e.empty()) continue;
    sum.Add(AbsAux(e, alloc, out), 1.0);
  }
  if (sum.empty()) return LinearExpr(0.0);
  const VarRef s = alloc.Next();
  out.aux.push_back({s, 0.0, kInf});
  LinearExpr def = sum;
  def.Add(s, -1.0);
  out.rows.push_back(Equal(def, 0.0));
  return LinearExpr::Var(s);
}

namespace {

std::vector<LinearExpr> QRow(const PolicyVars& v, int k) {
  std::vector<LinearExpr> out;
  for (int n = v.structure.RowFirst(k); n <= v.structure.RowLast(k); ++n) {
    out.push_back(LinearExpr::Var(v.Q(k, n)));
  }
  return out;
}

// Entries of Q_k - Q_{k-1} over the union of both rows' patterns.
std::vector<LinearExpr> QRowDifference(const PolicyVars& v, int k) {
  const PolicyStructure& st = v.structure;
  std::vector<LinearExpr> out;
  const int lo = std::min(st.RowFirst(k), st.RowFirst(k - 1));
  const int hi = std::max(st.RowLast(k), st.RowLast(k - 1));
  for (int n = lo; n <= hi; ++n) {
    LinearExpr e;
    if (st.Allowed(k, n)) e.Add(v.Q(k, n), 1.0);
    if (st.Allowed(k - 1, n)) e.Add(v.Q(k - 1, n), -1.0);
    if (!e.empty()) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

RobustRowSet PowerRows(const ResourceParams& phi, const PolicyVars& vars) {
  RobustRowSet out;
  out.tag = "power";
  AuxAllocator alloc(vars.owner, kPowerFamily);
  const int n_s = vars.structure.n_s;
  for (int k = 0; k <= n_s; ++k) {
    const LinearExpr norm = Norm1Epigraph(QRow(vars, k), alloc, out);
    const int k1 = std::max(1, k);
    const int k2 = std::min(n_s, k + 1);
    for (int s : {k1, k2}) {
      // Bounds of the interval the breakpoint belongs to, tightened by the
      // other side for the reserve of interval k + 1.
      double hi = phi.p_max[k1 - 1];
      double lo = phi.p_min[k1 - 1];
      if (s == k2) {
        hi = std::min(hi, phi.p_max[k2 - 1]);
        lo = std::max(lo, phi.p_min[k2 - 1]);
      }
      LinearExpr up = norm;
      up.Add(vars.q(k), 1.0).Add(vars.gamma(s), 1.0);
      out.rows.push_back(LessEqual(up, hi));
      LinearExpr dn = norm;
      dn.Add(vars.q(k), -1.0).Add(vars.gamma(s), 1.0);
      out.rows.push_back(LessEqual(dn, -lo));
    }
  }
  return out;
}

RobustRowSet RampRows(const ResourceParams& phi, const PolicyVars& vars,
                      const TimeGrid& grid) {
  RobustRowSet out;
  out.tag = "ramp";
  if (!phi.has_ramp()) return out;
  AuxAllocator alloc(vars.owner, kRampFamily);
  const int n_s = vars.structure.n_s;
  const double ts = grid.ts();
  const double tc = grid.tc();
  for (int k = 1; k <= n_s; ++k) {
    const double rmax = phi.r_max[k - 1];
    const double rmin = phi.r_min[k - 1];
    if (!std::isfinite(rmax) && !std::isfinite(rmin)) continue;
    LinearExpr norm = Norm1Epigraph(QRowDifference(vars, k), alloc, out);
    std::vector<LinearExpr> reserve;
    reserve.push_back(LinearExpr::Var(vars.gamma(k), 2.0 / tc));
    if (k < n_s) {
      LinearExpr g = LinearExpr::Var(vars.gamma(k), 1.0 / tc);
      g.Add(vars.gamma(k + 1), 1.0 / tc);
      reserve.push_back(std::move(g));
    }
    for (const LinearExpr& g : reserve) {
      if (std::isfinite(rmax)) {
        LinearExpr e;
        e.AddScaled(norm, 1.0 / ts);
        e.Add(vars.q(k), 1.0 / ts).Add(vars.q(k - 1), -1.0 / ts);
        e += g;
        out.rows.push_back(LessEqual(e, rmax));
      }
      if (std::isfinite(rmin)) {
        LinearExpr e;
        e.AddScaled(norm, 1.0 / ts);
        e.Add(vars.q(k), -1.0 / ts).Add(vars.q(k - 1), 1.0 / ts);
        e += g;
        out.rows.push_back(LessEqual(e, -rmin));
      }
    }
  }
  return out;
}

namespace {

struct StateConstants {
  SegmentWeights w;
  double hours = 0.0;
  double psi = 0.0;
  double margin_gamma = 0.0;  // margin per kW of reserve
  double margin_bow = 0.0;    // margin per kW of breakpoint step
};

StateConstants MakeStateConstants(const ResourceParams& phi,
                                  const TimeGrid& grid) {
  StateConstants k;
  k.hours = grid.ts() / 3600.0;
  k.w = ExactSegment(phi.a_per_hour(), k.hours);
  k.psi = phi.c * k.w.alpha;
  const double ac = std::abs(phi.c);
  k.margin_gamma = ac * (1.0 - k.w.e) * k.hours / 2.0 + ac * k.hours / 2.0;
  k.margin_bow = ac * k.hours / 8.0;
  return k;
}

}  // namespace

double StateMargin(const ResourceParams& phi, const AffinePolicy& policy,
                   const TimeGrid& grid, int s) {
  const StateConstants k = MakeStateConstants(phi, grid);
  const double gamma = policy.gamma[s - 1];
  double step = std::abs(policy.q[s] - policy.q[s - 1]);
  for (int n = 1; n <= policy.n_s(); ++n) {
    step += std::abs(policy.At(s, n) - policy.At(s - 1, n));
  }
  return k.margin_gamma * gamma + k.margin_bow * step;
}

RobustRowSet StateRows(const ResourceParams& phi, const PolicyVars& vars,
                       const TimeGrid& grid) {
  RobustRowSet out;
  out.tag = "state";
  if (!phi.has_state()) return out;
  AuxAllocator alloc(vars.owner, kStateFamily);
  const PolicyStructure& st = vars.structure;
  const int n_s = st.n_s;
  const int r = st.bandwidth;
  const StateConstants sc = MakeStateConstants(phi, grid);
  const double e1 = sc.w.e;
  const double c = phi.c;
  auto epow = [e1](int p) { return std::pow(e1, p); };
  auto free_aux = [&]() {
    const VarRef v = alloc.Next();
    out.aux.push_back({v, -kInf, kInf});
    return v;
  };

  // Nominal state X_s: zero initial state, w = 0.
  std::vector<VarRef> x(n_s + 1);
  for (int s = 0; s <= n_s; ++s) x[s] = free_aux();
  out.rows.push_back(Equal(LinearExpr::Var(x[0]), 0.0));
  for (int s = 1; s <= n_s; ++s) {
    LinearExpr e = LinearExpr::Var(x[s]);
    e.Add(x[s - 1], -e1);
    e.Add(vars.q(s - 1), -c * sc.w.beta0);
    e.Add(vars.q(s), -c * sc.w.beta1);
    out.rows.push_back(Equal(e, sc.w.alpha * phi.b * phi.u[s - 1]));
  }

  // Weight of Q(k, n) in the state at breakpoint e.
  auto weight = [&](int e, int k) {
    double v = 0.0;
    if (k >= 1 && k <= e) v += epow(e - k) * sc.w.beta1;
    if (k <= e - 1) v += epow(e - k - 1) * sc.w.beta0;
    return c * v;
  };

  // Settled coefficients: the weight of w_n in the state at e >= n + r + 2
  // is e1^(e - n) * C_n.
  std::vector<VarRef> t_settled(n_s + 1);
  for (int n = 1; n <= n_s; ++n) {
    LinearExpr cn = LinearExpr::Var(vars.gamma(n), sc.psi);
    for (int k = n + 1; k <= n + r + 1; ++k) {
      if (!st.Allowed(k, n)) continue;
      cn.Add(vars.Q(k, n), c * (e1 * sc.w.beta1 + sc.w.beta0) *
                               epow(n - k - 1));
    }
    t_settled[n] = AbsAux(cn, alloc, out);
  }

  // Ns_e bounds the 1-norm of the w-coefficients of the state at e.
  std::vector<VarRef> ns(n_s + 1);
  std::vector<VarRef> settled(n_s + 1);
  bool have_settled = false;
  for (int e = 1; e <= n_s; ++e) {
    LinearExpr sum;
    for (int n = std::max(1, e - r - 1); n <= e; ++n) {
      LinearExpr coef = LinearExpr::Var(vars.gamma(n), sc.psi * epow(e - n));
      for (int k = n + 1; k <= e; ++k) {
        if (st.Allowed(k, n)) coef.Add(vars.Q(k, n), weight(e, k));
      }
      sum.Add(AbsAux(coef, alloc, out), 1.0);
    }
    if (e - r - 2 >= 1) {
      settled[e] = free_aux();
      LinearExpr def = LinearExpr::Var(settled[e]);
      def.Add(t_settled[e - r - 2], -epow(r + 2));
      if (have_settled) def.Add(settled[e - 1], -e1);
      out.rows.push_back(Equal(def, 0.0));
      have_settled = true;
      sum.Add(settled[e], 1.0);
    }
    ns[e] = free_aux();
    sum.Add(ns[e], -1.0);
    out.rows.push_back(Equal(sum, 0.0));
  }

  for (int s = 1; s <= n_s; ++s) {
    const double xmax = phi.x_max[s - 1];
    const double xmin = phi.x_min[s - 1];
    if (!std::isfinite(xmax) && !std::isfinite(xmin)) continue;
    std::vector<LinearExpr> step = QRowDifference(vars, s);
    LinearExpr dq = LinearExpr::Var(vars.q(s));
    dq.Add(vars.q(s - 1), -1.0);
    step.push_back(std::move(dq));
    const LinearExpr bow = Norm1Epigraph(step, alloc, out);
    LinearExpr margin = LinearExpr::Var(vars.gamma(s), sc.margin_gamma);
    margin.AddScaled(bow, sc.margin_bow);
    for (int e : {s - 1, s}) {
      const double decay = epow(e);
      if (std::isfinite(xmax)) {
        LinearExpr row = margin;
        if (e > 0) row.Add(x[e], 1.0).Add(ns[e], 1.0);
        out.rows.push_back(LessEqual(row, xmax - decay * phi.x0_max));
      }
      if (std::isfinite(xmin)) {
        LinearExpr row = margin;
        if (e > 0) row.Add(x[e], -1.0).Add(ns[e], 1.0);
        out.rows.push_back(LessEqual(row, decay * phi.x0_min - xmin));
      }
    }
  }
  return out;
}

RobustRowSet DelayRows(const ResourceParams& phi, const PolicyVars& vars,
                       const TimeGrid& grid) {
  RobustRowSet out;
  out.tag = "delay";
  if (phi.delay_s <= grid.tc()) return out;
  const int last = vars.structure.time_invariant_gamma ? 1 : vars.structure.n_s;
  for (int s = 1; s <= last; ++s) {
    out.rows.push_back(LessEqual(LinearExpr::Var(vars.gamma(s)), 0.0));
  }
  return out;
}

}  // namespace flexagg
