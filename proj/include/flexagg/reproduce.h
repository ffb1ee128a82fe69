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
#ifndef FLEXAGG_REPRODUCE_H_
#define FLEXAGG_REPRODUCE_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "flexagg/bidding.h"

namespace flexagg {

// One battery configuration with its published reference values.
struct ReferenceCase {
  std::string label;
  double p_bar_kw = 0.0;
  double x_bar_kwh = 0.0;
  double gamma_b_kw = 0.0;
  double gamma_agg_kw = 0.0;
  double sigma = 0.0;
};

const std::vector<ReferenceCase>& BatteryFreezerCases();
const std::vector<ReferenceCase>& BatteryTurbineCases();

// 24 h horizon and reserve tender, 1 h / 15 min markets, 5 min system and
// 10 s control steps.
TimeGrid ReproductionGrid();

ResourceParams ReferenceFreezer(const TimeGrid& grid);
ResourceParams ReferenceTurbine(const TimeGrid& grid);

// Battery (half full) aggregated with the partner resource; bandwidth 4 and
// time-invariant reserve.
absl::StatusOr<Scenario> ReproductionScenario(const ReferenceCase& c,
                                              const ResourceParams& partner,
                                              const TimeGrid& grid);

struct ReproductionRow {
  ReferenceCase ref;
  double gamma_b_kw = 0.0;
  double gamma_agg_kw = 0.0;
  std::optional<double> sigma;
  std::string status;
  double seconds = 0.0;

  double GammaDeviation() const;  // relative to the reference
  double SigmaDeviation() const;
};

// case_name is "battery-freezer" or "battery-turbine".
absl::StatusOr<std::vector<ReproductionRow>> RunReproduction(
    const std::string& case_name, const SolveOptions& options = {});

void WriteReproductionCsv(const std::vector<ReproductionRow>& rows,
                          std::ostream& out);

}  // namespace flexagg

#endif  // FLEXAGG_REPRODUCE_H_
