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
// Command line front end: solve, simulate, reproduce and sweep.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/strings/str_format.h"
#include "flexagg/bidding.h"
#include "flexagg/io.h"
#include "flexagg/reproduce.h"
#include "flexagg/simulate.h"

namespace flexagg {
namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInfeasible = 2;
constexpr int kInvalid = 3;
constexpr int kViolation = 4;

int Fail(int code, const absl::Status& s) {
  std::cerr << "error: " << s.message() << "\n";
  return code;
}

absl::StatusOr<Backend> ParseBackend(const std::string& name) {
  if (name == "auto") return Backend::kAuto;
  if (name == "simplex") return Backend::kDenseSimplex;
  if (name == "ipm") return Backend::kInteriorPoint;
  return absl::InvalidArgumentError("backend must be auto, simplex or ipm");
}

std::string Summary(const BidResult& r, const Scenario& scn) {
  std::string out;
  absl::StrAppendFormat(&out, "status: %s\n", ToString(r.status));
  if (!r.diagnosis.empty()) {
    absl::StrAppendFormat(&out, "feasible without: %s constraints\n", r.diagnosis);
  }
  if (r.ok()) {
    absl::StrAppendFormat(&out, "objective: %.6f\n", r.objective_value);
    absl::StrAppendFormat(&out, "gamma_agg: min %.4f kW, max %.4f kW\n",
                          r.gamma_agg.minCoeff(), r.gamma_agg.maxCoeff());
    std::vector<double> standalone;
    for (size_t j = 0; j < scn.resources.size(); ++j) {
      const double g = StandaloneCapacity(scn.resources[j], scn.grid);
      standalone.push_back(g);
      absl::StrAppendFormat(
          &out, "  %-12s gamma %.4f kW (standalone %.4f kW)\n",
          scn.resources[j].label, r.policies[j].gamma.minCoeff(), g);
    }
    absl::StatusOr<double> sigma = SynergyFactor(r.gamma_agg.minCoeff(), standalone);
    if (sigma.ok()) {
      absl::StrAppendFormat(&out, "synergy factor: %.4f\n", *sigma);
    } else {
      absl::StrAppendFormat(&out, "synergy factor: %s\n", sigma.status().message());
    }
    absl::StrAppendFormat(&out, "balance residual: %.3g\n", r.stats.balance_residual);
  }
  absl::StrAppendFormat(&out,
                        "lp: %d variables, %d rows, %d nonzeros; %s, %d "
                        "iterations, %.2f s\n",
                        r.stats.num_vars, r.stats.num_rows, r.stats.num_nonzeros,
                        r.stats.backend, r.stats.iterations, r.stats.seconds);
  return out;
}

absl::StatusOr<ActivationSignal> LoadSignal(const std::string& spec,
                                            std::optional<uint64_t> seed,
                                            const TimeGrid& grid) {
  if (std::filesystem::exists(spec)) {
    int clipped = 0;
    absl::StatusOr<ActivationSignal> s = ReadSignalCsv(spec, grid, &clipped);
    if (s.ok() && clipped > 0) {
      std::cerr << "warning: " << clipped << " samples clipped to [-1, 1]\n";
    }
    return s;
  }
  absl::StatusOr<SignalSpec> parsed = ParseSignalSpec(spec);
  if (!parsed.ok()) return parsed.status();
  if (seed.has_value()) parsed->seed = *seed;
  return GenSignal(grid, *parsed);
}

// Simulates and writes trace.csv into dir; returns the exit code.
int SimulateAndReport(const Scenario& scn, const BidResult& r,
                      const ActivationSignal& sig, const std::string& dir,
                      double tolerance) {
  absl::StatusOr<SimulationTrace> tr = Simulate(scn.resources, r.policies, sig, scn.grid);
  if (!tr.ok()) return Fail(kInvalid, tr.status());
  std::vector<std::string> labels;
  for (const ResourceParams& p : scn.resources) labels.push_back(p.label);
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / "trace.csv").string();
  std::ofstream out(path);
  WriteTraceCsv(*tr, labels, out);
  const ViolationReport rep = VerifyTrace(*tr, scn.resources, scn.grid, tolerance);
  std::cout << "signal: " << sig.source << "\n"
            << "trace: " << path << "\n"
            << "verification: " << rep.Summary() << "\n";
  return rep.empty() ? kOk : kViolation;
}

int RunSolve(const std::string& path, const std::string& out_flag,
             const SolveOptions& options) {
  absl::StatusOr<ScenarioFile> sf = LoadScenario(path);
  if (!sf.ok()) return Fail(kInvalid, sf.status());
  const std::string dir = out_flag.empty() ? sf->out_dir : out_flag;
  absl::StatusOr<BidResult> r = SolveScenario(sf->scenario, options);
  if (!r.ok()) return Fail(kInvalid, r.status());
  std::filesystem::create_directories(dir);
  const std::string summary = Summary(*r, sf->scenario);
  {
    std::ofstream out(std::filesystem::path(dir) / "result.json");
    out << ResultToJson(*r, sf->scenario).dump(1) << "\n";
    std::ofstream s(std::filesystem::path(dir) / "summary.txt");
    s << summary;
  }
  std::cout << summary;
  if (!r->ok()) return kInfeasible;
  if (sf->signal.has_value() || sf->signal_csv.has_value()) {
    absl::StatusOr<ActivationSignal> sig =
        sf->signal_csv.has_value() ? ReadSignalCsv(*sf->signal_csv, sf->scenario.grid)
                                   : GenSignal(sf->scenario.grid, *sf->signal);
    if (!sig.ok()) return Fail(kInvalid, sig.status());
    return SimulateAndReport(sf->scenario, *r, *sig, dir, 1e-6);
  }
  return kOk;
}

int RunSimulate(const std::string& path, const std::string& signal,
                std::optional<uint64_t> seed, const std::string& dir,
                double tolerance) {
  absl::StatusOr<LoadedResult> lr = LoadResult(path);
  if (!lr.ok()) return Fail(kInvalid, lr.status());
  if (!lr->result.ok() ||
      lr->result.policies.size() != lr->scenario.resources.size()) {
    return Fail(kInfeasible, absl::FailedPreconditionError(
                                 "result holds no solved policies"));
  }
  absl::StatusOr<ActivationSignal> sig = LoadSignal(signal, seed, lr->scenario.grid);
  if (!sig.ok()) return Fail(kInvalid, sig.status());
  return SimulateAndReport(lr->scenario, lr->result, *sig, dir, tolerance);
}

std::vector<SweepPoint> DefaultSweepGrid() {
  std::vector<SweepPoint> pts;
  for (double p : {10.0, 25.0, 50.0, 100.0}) {
    for (double x : {25.0, 100.0, 250.0, 500.0}) pts.push_back({p, x});
  }
  return pts;
}

int RunReproduce(const std::string& name, double tolerance_pct,
                 const std::string& out_path, const SolveOptions& options) {
  std::ostringstream csv;
  bool within = true;
  if (name == "sweep") {
    const TimeGrid grid = ReproductionGrid();
    absl::StatusOr<Scenario> base = ReproductionScenario(
        BatteryFreezerCases().front(), ReferenceFreezer(grid), grid);
    if (!base.ok()) return Fail(kFailure, base.status());
    const std::vector<SweepRow> rows = Sweep(*base, 0, DefaultSweepGrid(), options);
    WriteSweepCsv(rows, csv);
    for (const SweepRow& r : rows) within = within && r.status == "optimal";
  } else {
    absl::StatusOr<std::vector<ReproductionRow>> rows = RunReproduction(name, options);
    if (!rows.ok()) return Fail(kInvalid, rows.status());
    WriteReproductionCsv(*rows, csv);
    for (const ReproductionRow& r : *rows) {
      within = within && r.status == "optimal" &&
               std::abs(r.GammaDeviation()) * 100.0 <= tolerance_pct &&
               std::abs(r.SigmaDeviation()) * 100.0 <= tolerance_pct;
    }
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream(out_path) << csv.str();
  }
  if (!within) {
    std::cerr << "some rows deviate by more than " << tolerance_pct << "%\n";
    return kFailure;
  }
  return kOk;
}

int RunSweep(const std::string& path, const std::string& grid_path,
             const std::string& out_path, int threads,
             const SolveOptions& options) {
  absl::StatusOr<ScenarioFile> sf = LoadScenario(path);
  if (!sf.ok()) return Fail(kInvalid, sf.status());
  absl::StatusOr<std::vector<SweepPoint>> pts = ReadSweepGrid(grid_path);
  if (!pts.ok()) return Fail(kInvalid, pts.status());
  int battery = -1;
  for (size_t j = 0; j < sf->scenario.resources.size(); ++j) {
    if (sf->scenario.resources[j].label == "battery") {
      battery = static_cast<int>(j);
      break;
    }
  }
  if (battery < 0) battery = 0;
  if (sf->scenario.objective != ObjectiveMode::kMaxCapacity) {
    return Fail(kInvalid, absl::InvalidArgumentError(
                              "sweep needs the max-capacity objective"));
  }
  const std::vector<SweepRow> rows = Sweep(sf->scenario, battery, *pts, options, threads);
  std::ostringstream csv;
  WriteSweepCsv(rows, csv);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream(out_path) << csv.str();
  }
  for (const SweepRow& r : rows) {
    if (r.status != "optimal") {
      std::cerr << "point (" << r.point.p_bar_kw << ", " << r.point.x_bar_kwh
                << "): " << r.status << "\n";
    }
  }
  return kOk;
}

}  // namespace
}  // namespace flexagg

int main(int argc, char** argv) {
  using namespace flexagg;
  CLI::App app{"Reserve bidding and verification for flexible resource aggregations"};
  app.require_subcommand(1);
  std::string backend_name = "auto";
  bool verbose = false;
  app.add_option("--backend", backend_name, "LP backend: auto, simplex or ipm");
  app.add_flag("--verbose", verbose, "Print solver progress");

  std::string scenario_path, out_dir;
  auto* solve = app.add_subcommand("solve", "Solve a scenario file");
  solve->add_option("scenario", scenario_path)->required();
  solve->add_option("--out", out_dir, "Output directory");

  std::string result_path, signal_spec, sim_out = ".";
  std::optional<uint64_t> seed;
  double sim_tol = 1e-6;
  auto* simulate = app.add_subcommand("simulate", "Simulate a solved result");
  simulate->add_option("result", result_path)->required();
  simulate->add_option("--signal", signal_spec, "Signal spec or CSV path")->required();
  simulate->add_option("--seed", seed, "Seed for a random walk signal");
  simulate->add_option("--out", sim_out, "Output directory");
  simulate->add_option("--tolerance", sim_tol, "Relative violation tolerance");

  std::string case_name, repro_out;
  double tolerance_pct = 5.0;
  auto* reproduce = app.add_subcommand("reproduce", "Run a built-in case");
  reproduce->add_option("case", case_name, "battery-freezer, battery-turbine or sweep")
      ->required();
  reproduce->add_option("--tolerance", tolerance_pct, "Allowed deviation in percent");
  reproduce->add_option("--out", repro_out, "CSV output file");

  std::string sweep_scenario, grid_path, sweep_out;
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Sweep battery sizes");
  sweep->add_option("scenario", sweep_scenario)->required();
  sweep->add_option("--grid", grid_path, "CSV of p_bar_kW,x_bar_kWh")->required();
  sweep->add_option("--out", sweep_out, "CSV output file");
  sweep->add_option("--threads", threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  absl::StatusOr<Backend> backend = ParseBackend(backend_name);
  if (!backend.ok()) {
    std::cerr << "error: " << backend.status().message() << "\n";
    return 3;
  }
  SolveOptions options;
  options.backend = *backend;
  options.verbose = verbose;

  if (*solve) return RunSolve(scenario_path, out_dir, options);
  if (*simulate) return RunSimulate(result_path, signal_spec, seed, sim_out, sim_tol);
  if (*reproduce) return RunReproduce(case_name, tolerance_pct, repro_out, options);
  if (*sweep) return RunSweep(sweep_scenario, grid_path, sweep_out, threads, options);
  return 1;
}
