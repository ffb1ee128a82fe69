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
#include "flexagg/bidding.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "absl/strings/str_cat.h"
#include "flexagg/robust.h"

namespace flexagg {
namespace {

VarRef Epigraph() { return {kGlobalOwner, VarKind::kEpigraph, 0, 0}; }

std::vector<PolicyVars> MakeVars(const Scenario& scn, const Relaxation& relax) {
  std::vector<PolicyVars> vars;
  for (size_t j = 0; j < scn.resources.size(); ++j) {
    PolicyVars v{static_cast<int>(j), scn.structures[j]};
    if (relax.delay) v.structure.delay_steps = 0;
    vars.push_back(v);
  }
  return vars;
}

bool AllTimeInvariant(const Scenario& scn) {
  return std::all_of(scn.structures.begin(), scn.structures.end(),
                     [](const PolicyStructure& s) { return s.time_invariant_gamma; });
}

AffinePolicy ExtractPolicy(const LinearProgram& lp, const LpSolution& sol,
                           const PolicyVars& v) {
  const int n_s = v.structure.n_s;
  AffinePolicy p = AffinePolicy::Zero(n_s);
  for (int k = 0; k <= n_s; ++k) {
    for (int n = v.structure.RowFirst(k); n <= v.structure.RowLast(k); ++n) {
      p.Q(k, n - 1) = sol.Value(lp, v.Q(k, n));
    }
    p.q[k] = sol.Value(lp, v.q(k));
  }
  for (int s = 1; s <= n_s; ++s) {
    p.gamma[s - 1] = std::max(0.0, sol.Value(lp, v.gamma(s)));
  }
  return p;
}

AffinePolicy ExtractMarket(const LinearProgram& lp, const LpSolution& sol,
                           int owner, const EntryMask& mask, bool has_q,
                           int n_s) {
  AffinePolicy p = AffinePolicy::Zero(n_s, false);
  for (int k = 0; k <= n_s; ++k) {
    for (int n : mask.Row(k)) p.Q(k, n - 1) = sol.Value(lp, MarketVars::Q(owner, k, n));
    if (has_q) p.q[k] = sol.Value(lp, MarketVars::q(owner, k));
  }
  return p;
}

struct Built {
  LinearProgram lp;
  std::vector<PolicyVars> vars;
  MarketVars market;
};

absl::StatusOr<Built> Build(const Scenario& scn, const Relaxation& relax) {
  if (absl::Status s = scn.Validate(); !s.ok()) return s;
  Built b;
  b.vars = MakeVars(scn, relax);
  b.market = MakeMarketVars(scn.grid, scn.market_mode, b.vars);

  std::vector<VariableDecl> declared;
  for (size_t j = 0; j < b.vars.size(); ++j) {
    std::vector<VariableDecl> d = b.vars[j].Declarations();
    // A blocked reserve is fixed outright as well, so no solver round-off
    // can leak into it.
    const bool blocked =
        !relax.delay && scn.resources[j].delay_s > scn.grid.tc();
    for (VariableDecl& v : d) {
      if (blocked && v.ref.kind == VarKind::kGamma) v.hi = 0.0;
    }
    declared.insert(declared.end(), d.begin(), d.end());
  }
  {
    std::vector<VariableDecl> d = b.market.Declarations();
    declared.insert(declared.end(), d.begin(), d.end());
  }

  std::vector<RobustRowSet> parts;
  for (size_t j = 0; j < b.vars.size(); ++j) {
    const ResourceParams& phi = scn.resources[j];
    if (!relax.power) parts.push_back(PowerRows(phi, b.vars[j]));
    if (!relax.ramp) parts.push_back(RampRows(phi, b.vars[j], scn.grid));
    if (!relax.state) parts.push_back(StateRows(phi, b.vars[j], scn.grid));
    if (!relax.delay) parts.push_back(DelayRows(phi, b.vars[j], scn.grid));
  }

  Objective obj;
  obj.sense = Sense::kMaximize;
  if (scn.objective == ObjectiveMode::kMaxCapacity) {
    declared.push_back({Epigraph(), -kInf, kInf});
    RobustRowSet cap;
    cap.tag = "capacity";
    const int last = AllTimeInvariant(scn) ? 1 : scn.grid.n_s();
    for (int k = 1; k <= last; ++k) {
      LinearExpr e = LinearExpr::Var(Epigraph());
      for (const PolicyVars& v : b.vars) e.Add(v.gamma(k), -1.0);
      cap.rows.push_back(LessEqual(e, 0.0));
    }
    parts.push_back(std::move(cap));
    obj.expr = LinearExpr::Var(Epigraph());
  } else {
    obj.expr = ExpectedProfit(*scn.prices, b.vars, b.market,
                              MakeEnergyMaps(scn.grid), scn.grid);
  }
  const RobustRowSet balance = BalanceRows(b.vars, b.market);
  absl::StatusOr<LinearProgram> lp =
      Assemble(declared, parts, balance, obj);
  if (!lp.ok()) return lp.status();
  b.lp = *std::move(lp);
  return b;
}

bool Feasible(LpStatus s) {
  return s == LpStatus::kOptimal || s == LpStatus::kUnbounded;
}

std::string Diagnose(const Scenario& scn, const SolveOptions& options) {
  const std::pair<const char*, Relaxation> probes[] = {
      {"power", {.power = true}},
      {"ramp", {.ramp = true}},
      {"state", {.state = true}},
      {"delay", {.delay = true}}};
  for (const auto& [name, relax] : probes) {
    absl::StatusOr<Built> b = Build(scn, relax);
    if (!b.ok()) continue;
    if (Feasible(Solve(b->lp, options).status)) return name;
  }
  return "";
}

absl::StatusOr<BidResult> Run(const Scenario& scn, const SolveOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  absl::StatusOr<Built> b = Build(scn, {});
  if (!b.ok()) return b.status();
  const LpSolution sol = Solve(b->lp, options);
  BidResult r;
  r.status = sol.status;
  r.stats.num_vars = b->lp.num_vars();
  r.stats.num_rows = b->lp.num_rows();
  r.stats.num_nonzeros = b->lp.num_nonzeros();
  r.stats.iterations = sol.iterations;
  r.stats.backend = sol.backend;
  const int n_s = scn.grid.n_s();
  if (sol.status == LpStatus::kOptimal) {
    r.objective_value = sol.objective_value;
    r.stats.max_violation = sol.max_violation;
    r.gamma_agg = Eigen::VectorXd::Zero(n_s);
    for (const PolicyVars& v : b->vars) {
      r.policies.push_back(ExtractPolicy(b->lp, sol, v));
      r.gamma_agg += r.policies.back().gamma;
    }
    const bool full = b->market.mode == MarketMode::kFull;
    r.markets.da = ExtractMarket(b->lp, sol, kDayAheadOwner, b->market.da,
                                 true, n_s);
    r.markets.id = ExtractMarket(b->lp, sol, kIntraDayOwner, b->market.id,
                                 full, n_s);
    r.stats.balance_residual = BalanceResidual(r);
    if (scn.objective == ObjectiveMode::kMaxCapacity) {
      r.objective_value = r.gamma_agg.minCoeff();
    }
  } else if (sol.status == LpStatus::kInfeasible) {
    r.diagnosis = Diagnose(scn, options);
  }
  r.stats.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return r;
}

}  // namespace

absl::Status Scenario::Validate() const {
  if (resources.empty()) {
    return absl::InvalidArgumentError("scenario has no resources");
  }
  if (resources.size() != structures.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat(resources.size(), " resources but ", structures.size(),
                     " structures"));
  }
  const int n_s = grid.n_s();
  for (size_t j = 0; j < resources.size(); ++j) {
    if (absl::Status s = resources[j].Validate(n_s); !s.ok()) return s;
    if (structures[j].n_s != n_s) {
      return absl::InvalidArgumentError(
          absl::StrCat("structure ", j + 1, " does not match the grid"));
    }
  }
  if (market_mode == MarketMode::kFrozen && objective == ObjectiveMode::kProfit) {
    return absl::InvalidArgumentError(
        "mode conflict: the profit objective needs full markets");
  }
  if (objective == ObjectiveMode::kProfit) {
    if (!prices.has_value()) {
      return absl::InvalidArgumentError("profit objective needs prices");
    }
    if (absl::Status s = prices->Validate(grid); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<Scenario> MakeCapacityScenario(
    const TimeGrid& grid, std::vector<ResourceParams> resources, int bandwidth,
    bool time_invariant_gamma) {
  Scenario scn;
  scn.grid = grid;
  for (const ResourceParams& r : resources) {
    scn.structures.push_back(
        MakeStructure(grid, bandwidth, r.delay_s, time_invariant_gamma));
  }
  scn.resources = std::move(resources);
  if (absl::Status s = scn.Validate(); !s.ok()) return s;
  return scn;
}

absl::StatusOr<LinearProgram> BuildLp(const Scenario& scn,
                                      const Relaxation& relax) {
  absl::StatusOr<Built> b = Build(scn, relax);
  if (!b.ok()) return b.status();
  return std::move(b->lp);
}

absl::StatusOr<BidResult> SolveBidding(const Scenario& scn,
                                       const SolveOptions& options) {
  if (scn.market_mode != MarketMode::kFull ||
      scn.objective != ObjectiveMode::kProfit) {
    return absl::InvalidArgumentError(
        "expected-profit bidding needs full markets and the profit objective");
  }
  return Run(scn, options);
}

absl::StatusOr<BidResult> MaxCapacity(const Scenario& scn,
                                      const SolveOptions& options) {
  if (scn.objective != ObjectiveMode::kMaxCapacity ||
      scn.market_mode != MarketMode::kFrozen) {
    return absl::InvalidArgumentError(
        "capacity maximization needs frozen markets and the max-capacity "
        "objective");
  }
  return Run(scn, options);
}

absl::StatusOr<BidResult> SolveScenario(const Scenario& scn,
                                        const SolveOptions& options) {
  return Run(scn, options);
}

absl::StatusOr<double> SynergyFactor(double gamma_agg_max,
                                     const std::vector<double>& standalone) {
  double sum = 0.0;
  for (double g : standalone) sum += g;
  if (!(sum > 0.0)) {
    return absl::FailedPreconditionError("undefined (infinite synergy)");
  }
  return gamma_agg_max / sum - 1.0;
}

double BalanceResidual(const BidResult& r) {
  if (r.policies.empty()) return 0.0;
  Eigen::MatrixXd dq = -r.markets.da.Q - r.markets.id.Q;
  Eigen::VectorXd dv = -r.markets.da.q - r.markets.id.q;
  for (const AffinePolicy& p : r.policies) {
    dq += p.Q;
    dv += p.q;
  }
  return std::max(dq.size() ? dq.cwiseAbs().maxCoeff() : 0.0,
                  dv.size() ? dv.cwiseAbs().maxCoeff() : 0.0);
}

std::vector<SweepRow> Sweep(const Scenario& base, int battery_index,
                            const std::vector<SweepPoint>& points,
                            const SolveOptions& options, int threads) {
  std::vector<SweepRow> rows(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < points.size(); i = next++) {
      SweepRow& row = rows[i];
      row.point = points[i];
      absl::StatusOr<ResourceParams> bat =
          MakeBattery(points[i].p_bar_kw, points[i].x_bar_kwh,
                      points[i].x_bar_kwh / 2.0, base.grid);
      if (!bat.ok()) {
        row.status = std::string(bat.status().message());
        continue;
      }
      Scenario scn = base;
      scn.resources[battery_index] = *bat;
      scn.structures[battery_index].delay_steps = 0;
      row.gamma_b = StandaloneCapacity(*bat, base.grid);
      std::vector<double> standalone;
      for (const ResourceParams& r : scn.resources) {
        standalone.push_back(StandaloneCapacity(r, base.grid));
      }
      absl::StatusOr<BidResult> res = MaxCapacity(scn, options);
      if (!res.ok()) {
        row.status = std::string(res.status().message());
        continue;
      }
      if (!res->ok()) {
        row.status = ToString(res->status);
        continue;
      }
      row.status = "optimal";
      row.gamma_agg = res->objective_value;
      absl::StatusOr<double> sigma = SynergyFactor(row.gamma_agg, standalone);
      if (sigma.ok()) row.sigma = *sigma;
    }
  };
  int n = threads > 0 ? threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n = std::min<int>(n, static_cast<int>(points.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

}  // namespace flexagg
