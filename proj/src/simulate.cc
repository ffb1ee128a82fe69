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
#include "flexagg/simulate.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/strip.h"

namespace flexagg {
namespace {

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Interval (1-based) of control step l = 1..N_C.
int IntervalOfStep(const TimeGrid& grid, int l) {
  const int per = grid.steps_per_interval();
  return (l - 1) / per + 1;
}

// Interval owning knot l = 0..N_C under the half-open convention.
int IntervalOfKnot(const TimeGrid& grid, int l) {
  return std::min(l / grid.steps_per_interval() + 1, grid.n_s());
}

double Positive(double y0, double y1, double h) {
  if (y0 >= 0.0 && y1 >= 0.0) return h * (y0 + y1) / 2.0;
  if (y0 <= 0.0 && y1 <= 0.0) return 0.0;
  const double pos = std::max(y0, y1);
  return h * pos * pos / (2.0 * (std::abs(y0) + std::abs(y1)));
}

void Record(FamilyViolation& f, double excess, double t, int j) {
  ++f.count;
  if (excess > f.worst) {
    f.worst = excess;
    f.time_s = t;
    f.resource = j;
  }
}

}  // namespace

absl::StatusOr<ActivationSignal> GenSignal(const TimeGrid& grid,
                                           const SignalSpec& spec) {
  const int n = grid.n_c();
  ActivationSignal sig;
  sig.w.resize(n);
  switch (spec.kind) {
    case SignalSpec::Kind::kConstant:
      if (std::abs(spec.value) > 1.0) {
        return absl::InvalidArgumentError("constant signal outside [-1, 1]");
      }
      std::fill(sig.w.begin(), sig.w.end(), spec.value);
      sig.source = absl::StrCat("constant(", spec.value, ")");
      break;
    case SignalSpec::Kind::kSquare: {
      if (std::abs(spec.amplitude) > 1.0 || !(spec.period_s > 0.0)) {
        return absl::InvalidArgumentError(
            "square signal needs |amplitude| <= 1 and a positive period");
      }
      const double half = spec.period_s / 2.0;
      for (int l = 1; l <= n; ++l) {
        const double t = (l - 1) * grid.tc();
        const long phase = static_cast<long>(std::floor(t / half + 1e-9));
        sig.w[l - 1] = phase % 2 == 0 ? spec.amplitude : -spec.amplitude;
      }
      sig.source = absl::StrCat("square(", spec.period_s, ",", spec.amplitude, ")");
      break;
    }
    case SignalSpec::Kind::kWalk: {
      if (!(spec.step >= 0.0) || std::abs(spec.bias) > 1.0) {
        return absl::InvalidArgumentError("walk needs step >= 0 and |bias| <= 1");
      }
      std::mt19937_64 rng(spec.seed);
      double w = 0.0;
      for (int l = 0; l < n; ++l) {
        sig.w[l] = w;
        const double du = (2.0 * Uniform01(rng) - 1.0) * spec.step;
        w = std::clamp(w + du + spec.bias, -1.0, 1.0);
      }
      sig.source = absl::StrCat("walk(", spec.step, ",", spec.bias, ",",
                                spec.seed, ")");
      break;
    }
  }
  return sig;
}

absl::StatusOr<ActivationSignal> ReadSignalCsv(const std::string& path,
                                               const TimeGrid& grid,
                                               int* clipped) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  ActivationSignal sig;
  sig.source = path;
  int clips = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell(absl::StripAsciiWhitespace(line));
    if (cell.empty()) continue;
    double v;
    if (!absl::SimpleAtod(cell, &v) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": not a number: '", cell, "'"));
    }
    if (v > 1.0 || v < -1.0) {
      ++clips;
      v = std::clamp(v, -1.0, 1.0);
    }
    sig.w.push_back(v);
  }
  if (static_cast<int>(sig.w.size()) != grid.n_c()) {
    return absl::InvalidArgumentError(absl::StrCat(
        path, ": ", sig.w.size(), " samples, grid needs ", grid.n_c()));
  }
  if (clipped != nullptr) *clipped = clips;
  return sig;
}

absl::Status WriteSignalCsv(const ActivationSignal& signal,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::InternalError(absl::StrCat("cannot write ", path));
  for (double v : signal.w) out << absl::StrFormat("%.17g\n", v);
  return absl::OkStatus();
}

Eigen::VectorXd IntervalAverages(const ActivationSignal& signal,
                                 const TimeGrid& grid) {
  const int per = grid.steps_per_interval();
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(grid.n_s());
  for (int l = 1; l <= grid.n_c(); ++l) {
    avg[IntervalOfStep(grid, l) - 1] +=
        (signal.Knot(l - 1) + signal.Knot(l)) / 2.0;
  }
  return avg / per;
}

absl::StatusOr<PowerSample> EvalPower(const AffinePolicy& policy,
                                      const Eigen::VectorXd& w_avg,
                                      const ActivationSignal& signal,
                                      const TimeGrid& grid, double t) {
  const double horizon = grid.n_s() * grid.ts();
  if (!(t >= 0.0 && t <= horizon)) {
    return absl::OutOfRangeError(absl::StrCat("time ", t, " outside [0, ",
                                              horizon, "]"));
  }
  const Eigen::VectorXd p = policy.Breakpoints(w_avg);
  const int s = std::min(static_cast<int>(std::floor(t / grid.ts())) + 1,
                         grid.n_s());
  const double frac = (t - (s - 1) * grid.ts()) / grid.ts();
  PowerSample out;
  out.p_ref = p[s - 1] + (p[s] - p[s - 1]) * frac;
  const int l = std::min(static_cast<int>(std::floor(t / grid.tc())) + 1,
                         grid.n_c());
  const double fl = (t - (l - 1) * grid.tc()) / grid.tc();
  const double w = signal.Knot(l - 1) + (signal.Knot(l) - signal.Knot(l - 1)) * fl;
  out.p_tgt = out.p_ref + policy.gamma[s - 1] * w;
  return out;
}

PowerSegments TargetSegments(const AffinePolicy& policy,
                             const Eigen::VectorXd& w_avg,
                             const ActivationSignal& signal,
                             const TimeGrid& grid) {
  const Eigen::VectorXd p = policy.Breakpoints(w_avg);
  const int per = grid.steps_per_interval();
  PowerSegments seg;
  seg.start.resize(grid.n_c());
  seg.end.resize(grid.n_c());
  for (int l = 1; l <= grid.n_c(); ++l) {
    const int s = IntervalOfStep(grid, l);
    const int i = l - (s - 1) * per;  // step within the interval, 1..per
    const double r0 = p[s - 1] + (p[s] - p[s - 1]) * (i - 1) / per;
    const double r1 = p[s - 1] + (p[s] - p[s - 1]) * i / per;
    const double g = policy.gamma[s - 1];
    seg.start[l - 1] = r0 + g * signal.Knot(l - 1);
    seg.end[l - 1] = r1 + g * signal.Knot(l);
  }
  return seg;
}

std::vector<double> IntegrateState(const ResourceParams& phi,
                                   const PowerSegments& power,
                                   const TimeGrid& grid, double x0) {
  const SegmentWeights sw = ExactSegment(phi.a_per_hour(), grid.tc() / 3600.0);
  const int n = static_cast<int>(power.start.size());
  std::vector<double> x(n + 1);
  x[0] = x0;
  for (int l = 1; l <= n; ++l) {
    const double bu = phi.b * phi.u[IntervalOfStep(grid, l) - 1];
    const double v0 = phi.c * power.start[l - 1] + bu;
    const double v1 = phi.c * power.end[l - 1] + bu;
    x[l] = sw.e * x[l - 1] + sw.beta0 * v0 + sw.beta1 * v1;
  }
  return x;
}

RegulationEnergy ComputeRegulationEnergy(const Eigen::VectorXd& gamma,
                                         const ActivationSignal& signal,
                                         const TimeGrid& grid) {
  const int n_id = grid.count(Timescale::kIntraDay);
  const int steps_per_id = static_cast<int>(
      grid.seconds(Timescale::kIntraDay) / grid.seconds(Timescale::kControl));
  const double h = grid.tc() / 3600.0;
  RegulationEnergy e{std::vector<double>(n_id, 0.0),
                     std::vector<double>(n_id, 0.0)};
  for (int l = 1; l <= grid.n_c(); ++l) {
    const double g = gamma[IntervalOfStep(grid, l) - 1];
    const double y0 = g * signal.Knot(l - 1);
    const double y1 = g * signal.Knot(l);
    const int m = (l - 1) / steps_per_id;
    e.up[m] += Positive(y0, y1, h);
    e.dn[m] += Positive(-y0, -y1, h);
  }
  return e;
}

absl::StatusOr<SimulationTrace> Simulate(
    const std::vector<ResourceParams>& resources,
    const std::vector<AffinePolicy>& policies, const ActivationSignal& signal,
    const TimeGrid& grid) {
  if (resources.size() != policies.size()) {
    return absl::InvalidArgumentError("resources and policies not aligned");
  }
  const int n_c = grid.n_c();
  const int n_s = grid.n_s();
  if (static_cast<int>(signal.w.size()) != n_c) {
    return absl::InvalidArgumentError(absl::StrCat(
        "signal has ", signal.w.size(), " samples, grid needs ", n_c));
  }
  for (const AffinePolicy& p : policies) {
    if (p.n_s() != n_s || p.q.size() != n_s + 1 || p.gamma.size() != n_s) {
      return absl::InvalidArgumentError(
          "policy dimensions do not match the grid");
    }
  }
  SimulationTrace tr;
  tr.time_s.resize(n_c + 1);
  tr.w.resize(n_c + 1);
  for (int l = 0; l <= n_c; ++l) {
    tr.time_s[l] = l * grid.tc();
    tr.w[l] = signal.Knot(l);
  }
  tr.agg_p_ref.assign(n_c + 1, 0.0);
  tr.agg_p_tgt.assign(n_c + 1, 0.0);
  tr.agg_gamma = std::vector<double>(n_s, 0.0);
  const Eigen::VectorXd w_avg = IntervalAverages(signal, grid);
  const int per = grid.steps_per_interval();
  for (size_t j = 0; j < resources.size(); ++j) {
    const AffinePolicy& pol = policies[j];
    const Eigen::VectorXd p = pol.Breakpoints(w_avg);
    ResourceTrace rt;
    rt.p_ref.resize(n_c + 1);
    rt.p_tgt.resize(n_c + 1);
    for (int l = 0; l <= n_c; ++l) {
      const int s = IntervalOfKnot(grid, l);
      const double frac = static_cast<double>(l - (s - 1) * per) / per;
      rt.p_ref[l] = p[s - 1] + (p[s] - p[s - 1]) * frac;
      rt.p_tgt[l] = rt.p_ref[l] + pol.gamma[s - 1] * tr.w[l];
      tr.agg_p_ref[l] += rt.p_ref[l];
      tr.agg_p_tgt[l] += rt.p_tgt[l];
    }
    rt.segments = TargetSegments(pol, w_avg, signal, grid);
    const ResourceParams& phi = resources[j];
    if (phi.has_state()) {
      rt.x = IntegrateState(phi, rt.segments, grid,
                            (phi.x0_min + phi.x0_max) / 2.0);
    }
    const RegulationEnergy e = ComputeRegulationEnergy(pol.gamma, signal, grid);
    rt.e_up = e.up;
    rt.e_dn = e.dn;
    for (int s = 0; s < n_s; ++s) tr.agg_gamma[s] += pol.gamma[s];
    tr.resources.push_back(std::move(rt));
  }
  return tr;
}

ViolationReport VerifyTrace(const SimulationTrace& trace,
                            const std::vector<ResourceParams>& resources,
                            const TimeGrid& grid, double tolerance) {
  ViolationReport rep;
  const int n_c = grid.n_c();
  const int per = grid.steps_per_interval();
  auto slack = [tolerance](double bound) {
    return tolerance * std::max(1.0, std::abs(bound));
  };
  for (size_t jj = 0; jj < trace.resources.size() && jj < resources.size(); ++jj) {
    const int j = static_cast<int>(jj);
    const ResourceTrace& rt = trace.resources[jj];
    const ResourceParams& phi = resources[jj];
    for (int l = 1; l <= n_c; ++l) {
      const int s = IntervalOfStep(grid, l);
      const double hi = phi.p_max[s - 1];
      const double lo = phi.p_min[s - 1];
      const double t0 = (l - 1) * grid.tc();
      const std::pair<double, double> ends[] = {
          {rt.segments.start[l - 1], t0}, {rt.segments.end[l - 1], t0 + grid.tc()}};
      for (const auto& [v, t] : ends) {
        if (v - hi > slack(hi)) Record(rep.power, v - hi, t, j);
        if (lo - v > slack(lo)) Record(rep.power, lo - v, t, j);
      }
      const double rate = (rt.p_tgt[l] - rt.p_tgt[l - 1]) / grid.tc();
      const double rmax = phi.r_max[s - 1];
      const double rmin = phi.r_min[s - 1];
      if (std::isfinite(rmax) && rate - rmax > slack(rmax)) {
        Record(rep.ramp, rate - rmax, t0, j);
      }
      if (std::isfinite(rmin) && rmin - rate > slack(rmin)) {
        Record(rep.ramp, rmin - rate, t0, j);
      }
    }
    if (rt.x.empty()) continue;
    for (int l = 0; l <= n_c; ++l) {
      // A knot on an interval boundary is checked against both sides.
      int s_lo = std::max(1, (l + per - 1) / per);
      int s_hi = std::min(grid.n_s(), l / per + 1);
      if (s_lo > s_hi) std::swap(s_lo, s_hi);
      for (int s = s_lo; s <= s_hi; ++s) {
        const double hi = phi.x_max[s - 1];
        const double lo = phi.x_min[s - 1];
        const double v = rt.x[l];
        if (std::isfinite(hi) && v - hi > slack(hi)) {
          Record(rep.state, v - hi, l * grid.tc(), j);
        }
        if (std::isfinite(lo) && lo - v > slack(lo)) {
          Record(rep.state, lo - v, l * grid.tc(), j);
        }
      }
    }
  }
  return rep;
}

std::string ViolationReport::Summary() const {
  if (empty()) return "no violations";
  std::string out;
  const std::pair<const char*, const FamilyViolation*> fams[] = {
      {"power", &power}, {"ramp", &ramp}, {"state", &state}};
  for (const auto& [name, f] : fams) {
    if (f->count == 0) continue;
    absl::StrAppend(&out, out.empty() ? "" : "; ",
                    absl::StrFormat("%s: %d violations, worst %.6g at t=%.0f s "
                                    "(resource %d)",
                                    name, f->count, f->worst, f->time_s,
                                    f->resource + 1));
  }
  return out;
}

void WriteTraceCsv(const SimulationTrace& trace,
                   const std::vector<std::string>& labels, std::ostream& out) {
  out << "time_s,w";
  for (size_t j = 0; j < trace.resources.size(); ++j) {
    const std::string& name =
        j < labels.size() ? labels[j] : absl::StrCat("r", j + 1);
    out << "," << name << "_p_ref_kW," << name << "_p_tgt_kW";
    if (!trace.resources[j].x.empty()) out << "," << name << "_x_kWh";
  }
  out << ",agg_p_ref_kW,agg_p_tgt_kW\n";
  for (size_t l = 0; l < trace.time_s.size(); ++l) {
    out << absl::StrFormat("%.0f,%.10g", trace.time_s[l], trace.w[l]);
    for (const ResourceTrace& rt : trace.resources) {
      out << absl::StrFormat(",%.10g,%.10g", rt.p_ref[l], rt.p_tgt[l]);
      if (!rt.x.empty()) out << absl::StrFormat(",%.10g", rt.x[l]);
    }
    out << absl::StrFormat(",%.10g,%.10g\n", trace.agg_p_ref[l],
                           trace.agg_p_tgt[l]);
  }
}

}  // namespace flexagg
