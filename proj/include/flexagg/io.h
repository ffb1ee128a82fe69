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
#ifndef FLEXAGG_IO_H_
#define FLEXAGG_IO_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "flexagg/bidding.h"
#include "flexagg/simulate.h"
#include "json.hpp"

namespace flexagg {

// A scenario document with everything the CLI needs to run it.
struct ScenarioFile {
  Scenario scenario;
  std::optional<SignalSpec> signal;
  std::optional<std::string> signal_csv;
  std::string out_dir = ".";
};

// Every schema violation is reported, one per line, prefixed by its JSON
// pointer. Relative file names are resolved against base_dir.
absl::StatusOr<ScenarioFile> ParseScenario(const nlohmann::json& doc,
                                           const std::string& base_dir);
absl::StatusOr<ScenarioFile> LoadScenario(const std::string& path);

nlohmann::json GridToJson(const TimeGrid& grid);
absl::StatusOr<TimeGrid> GridFromJson(const nlohmann::json& j);

// Explicit per-interval form; infinite bounds are written as null.
nlohmann::json ResourceToJson(const ResourceParams& r);
absl::StatusOr<ResourceParams> ResourceFromJson(const nlohmann::json& j,
                                                int n_s);

nlohmann::json PolicyToJson(const AffinePolicy& p);
absl::StatusOr<AffinePolicy> PolicyFromJson(const nlohmann::json& j, int n_s,
                                            bool with_gamma);

// The result document embeds grid and resources so a simulation can run
// from it alone.
nlohmann::json ResultToJson(const BidResult& result, const Scenario& scn);

struct LoadedResult {
  Scenario scenario;
  BidResult result;
};
absl::StatusOr<LoadedResult> ResultFromJson(const nlohmann::json& doc);
absl::StatusOr<LoadedResult> LoadResult(const std::string& path);

// "constant:0.5", "square:period_s=20,amplitude=1",
// "walk:step=0.1,bias=0.02,seed=7".
absl::StatusOr<SignalSpec> ParseSignalSpec(const std::string& text);

absl::StatusOr<std::vector<SweepPoint>> ReadSweepGrid(const std::string& path);
void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace flexagg

#endif  // FLEXAGG_IO_H_
