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
#include "flexagg/reproduce.h"

#include <chrono>
#include <cmath>

#include "absl/strings/str_format.h"

namespace flexagg {

const std::vector<ReferenceCase>& BatteryFreezerCases() {
  static const std::vector<ReferenceCase> cases = {
      {"Model-S", 17.2, 100, 2.08, 9.61, 3.61},
      {"5x Model-S", 86, 500, 10.42, 48.04, 3.61},
      {"Powerpack", 50, 210, 4.38, 27.09, 5.19},
      {"2x Powerpack", 100, 420, 8.75, 49.47, 4.65},
      {"2x Powerwall", 14, 27, 0.56, 7.25, 11.90},
      {"10x Powerwall", 70, 135, 2.81, 36.26, 11.90},
  };
  return cases;
}

const std::vector<ReferenceCase>& BatteryTurbineCases() {
  static const std::vector<ReferenceCase> cases = {
      {"10x Model-S", 172, 1000, 20.83, 468.70, 0.18},
      {"50x Model-S", 860, 5000, 104.17, 843.50, 0.76},
      {"100x Model-S", 1720, 10000, 208.33, 1312.00, 1.25},
      {"5x Powerpack", 250, 1050, 21.88, 506.84, 0.28},
      {"10x Powerpack", 500, 2100, 43.75, 638.68, 0.53},
      {"20x Powerpack", 1000, 4200, 87.50, 902.35, 0.95},
      {"50x Powerwall", 350, 675, 14.06, 551.00, 0.42},
      {"100x Powerwall", 700, 1350, 28.13, 726.99, 0.80},
  };
  return cases;
}

TimeGrid ReproductionGrid() { return *TimeGrid::Build(GridDurations{}); }

ResourceParams ReferenceFreezer(const TimeGrid& grid) {
  return *MakeFreezer(FreezerSpec{}, grid);
}

ResourceParams ReferenceTurbine(const TimeGrid& grid) {
  return *MakeTurbine(0.0, 250000.0, 4500.0, grid);
}

absl::StatusOr<Scenario> ReproductionScenario(const ReferenceCase& c,
                                              const ResourceParams& partner,
                                              const TimeGrid& grid) {
  absl::StatusOr<ResourceParams> bat =
      MakeBattery(c.p_bar_kw, c.x_bar_kwh, c.x_bar_kwh / 2.0, grid);
  if (!bat.ok()) return bat.status();
  return MakeCapacityScenario(grid, {*bat, partner});
}

double ReproductionRow::GammaDeviation() const {
  return (gamma_agg_kw - ref.gamma_agg_kw) / ref.gamma_agg_kw;
}

double ReproductionRow::SigmaDeviation() const {
  if (!sigma.has_value()) return INFINITY;
  return (*sigma - ref.sigma) / ref.sigma;
}

absl::StatusOr<std::vector<ReproductionRow>> RunReproduction(
    const std::string& case_name, const SolveOptions& options) {
  const TimeGrid grid = ReproductionGrid();
  const std::vector<ReferenceCase>* cases;
  ResourceParams partner;
  if (case_name == "battery-freezer") {
    cases = &BatteryFreezerCases();
    partner = ReferenceFreezer(grid);
  } else if (case_name == "battery-turbine") {
    cases = &BatteryTurbineCases();
    partner = ReferenceTurbine(grid);
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown case '%s'", case_name));
  }
  std::vector<ReproductionRow> rows;
  for (const ReferenceCase& c : *cases) {
    ReproductionRow row;
    row.ref = c;
    absl::StatusOr<Scenario> scn = ReproductionScenario(c, partner, grid);
    if (!scn.ok()) return scn.status();
    row.gamma_b_kw = StandaloneCapacity(scn->resources[0], grid);
    const auto t0 = std::chrono::steady_clock::now();
    absl::StatusOr<BidResult> res = MaxCapacity(*scn, options);
    row.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (!res.ok()) return res.status();
    row.status = ToString(res->status);
    if (res->ok()) {
      row.gamma_agg_kw = res->objective_value;
      absl::StatusOr<double> s = SynergyFactor(
          row.gamma_agg_kw, {row.gamma_b_kw, StandaloneCapacity(partner, grid)});
      if (s.ok()) row.sigma = *s;
    }
    rows.push_back(row);
  }
  return rows;
}

void WriteReproductionCsv(const std::vector<ReproductionRow>& rows,
                          std::ostream& out) {
  out << "battery,p_bar_kW,x_bar_kWh,gamma_B_kW,gamma_agg_kW,sigma,"
         "ref_gamma_B_kW,ref_gamma_agg_kW,ref_sigma,dev_gamma_agg,dev_sigma,"
         "status\n";
  for (const ReproductionRow& r : rows) {
    out << absl::StrFormat(
        "%s,%g,%g,%.4f,%.4f,%s,%.2f,%.2f,%.2f,%+.4f,%+.4f,%s\n", r.ref.label,
        r.ref.p_bar_kw, r.ref.x_bar_kwh, r.gamma_b_kw, r.gamma_agg_kw,
        r.sigma.has_value() ? absl::StrFormat("%.4f", *r.sigma) : "",
        r.ref.gamma_b_kw, r.ref.gamma_agg_kw, r.ref.sigma, r.GammaDeviation(),
        r.SigmaDeviation(), r.status);
  }
}

}  // namespace flexagg
