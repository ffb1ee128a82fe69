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
#include "flexagg/io.h"

#include <fstream>
#include <sstream>

#include "absl/strings/match.h"
#include "flexagg/reproduce.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace flexagg {
namespace {

using nlohmann::json;

json Minimal() {
  return json::parse(R"({
    "grid": {"horizon_s": 3600, "sfr_s": 3600, "day_ahead_s": 3600,
             "intra_day_s": 900, "system_s": 300, "control_s": 10},
    "resources": [{"type": "battery", "p_max_kW": 10, "x_bar_kWh": 20}]
  })");
}

TEST(ParseScenarioTest, Minimal) {
  absl::StatusOr<ScenarioFile> sf = ParseScenario(Minimal(), "/base");
  ASSERT_TRUE(sf.ok()) << sf.status();
  EXPECT_EQ(sf->scenario.grid.n_s(), 12);
  ASSERT_EQ(sf->scenario.resources.size(), 1u);
  EXPECT_EQ(sf->scenario.resources[0].label, "battery");
  EXPECT_EQ(sf->scenario.resources[0].x0_min, 10.0);
  EXPECT_EQ(sf->scenario.structures[0].bandwidth, 4);
  EXPECT_EQ(sf->scenario.market_mode, MarketMode::kFrozen);
  EXPECT_EQ(sf->out_dir, ".");
}

TEST(ParseScenarioTest, ErrorsCarryJsonPointers) {
  json doc = Minimal();
  doc["resources"].push_back({{"type", "freezer"}, {"p_max_kW", "lots"}});
  doc["resources"].push_back({{"type", "pump"}});
  doc["resources"].push_back({{"type", "turbine"}, {"p_max_kW", 100}});
  doc["structures"] = {{"bandwidth", -1}};
  absl::StatusOr<ScenarioFile> sf = ParseScenario(doc, "");
  ASSERT_FALSE(sf.ok());
  const std::string msg(sf.status().message());
  EXPECT_TRUE(absl::StrContains(msg, "/resources/1/p_max_kW: expected a number")) << msg;
  EXPECT_TRUE(absl::StrContains(msg, "/resources/2/type")) << msg;
  EXPECT_TRUE(absl::StrContains(msg, "/resources/3/ramp_kW_per_min: required")) << msg;
  EXPECT_TRUE(absl::StrContains(msg, "/structures/bandwidth")) << msg;
}

TEST(ParseScenarioTest, SequencesAndNulls) {
  json doc = Minimal();
  doc["resources"] = json::array(
      {{{"type", "generic"},
        {"p_min_kW", -5},
        {"p_max_kW", json::array({5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 6})},
        {"x_max_kWh", nullptr}}});
  absl::StatusOr<ScenarioFile> sf = ParseScenario(doc, "");
  ASSERT_TRUE(sf.ok()) << sf.status();
  EXPECT_EQ(sf->scenario.resources[0].p_max[11], 6.0);
  EXPECT_TRUE(std::isinf(sf->scenario.resources[0].x_max[0]));
  doc["resources"][0]["p_max_kW"] = json::array({1, 2});
  sf = ParseScenario(doc, "");
  ASSERT_FALSE(sf.ok());
  EXPECT_TRUE(absl::StrContains(sf.status().message(), "/resources/0/p_max_kW"));
}

TEST(ParseScenarioTest, GridError) {
  json doc = Minimal();
  doc["grid"]["control_s"] = 7;
  absl::StatusOr<ScenarioFile> sf = ParseScenario(doc, "");
  ASSERT_FALSE(sf.ok());
  EXPECT_TRUE(absl::StartsWith(sf.status().message(), "/grid: ")) << sf.status();
}

TEST(ParseScenarioTest, ModeConflict) {
  json doc = Minimal();
  doc["mode"] = {{"markets", "frozen"}, {"objective", "profit"}};
  absl::StatusOr<ScenarioFile> sf = ParseScenario(doc, "");
  ASSERT_FALSE(sf.ok());
  EXPECT_TRUE(absl::StrContains(sf.status().message(), "mode conflict"));
  doc["mode"] = {{"markets", "full"}, {"objective", "profit"}};
  sf = ParseScenario(doc, "");
  ASSERT_FALSE(sf.ok());  // no prices
  doc["prices"] = {{"c_SFR", 1.0}};
  sf = ParseScenario(doc, "");
  ASSERT_TRUE(sf.ok()) << sf.status();
  EXPECT_EQ(sf->scenario.prices->c_sfr[3], 1.0);
}

TEST(ParseScenarioTest, SignalSection) {
  json doc = Minimal();
  doc["signal"] = {{"kind", "walk"}, {"bias", 0.02}, {"seed", 9}};
  absl::StatusOr<ScenarioFile> sf = ParseScenario(doc, "");
  ASSERT_TRUE(sf.ok());
  ASSERT_TRUE(sf->signal.has_value());
  EXPECT_EQ(sf->signal->seed, 9u);
  EXPECT_EQ(sf->signal->bias, 0.02);
  doc["signal"] = {{"csv", "w.csv"}};
  sf = ParseScenario(doc, "/d");
  ASSERT_TRUE(sf.ok());
  EXPECT_EQ(*sf->signal_csv, "/d/w.csv");
}

TEST(SignalSpecTest, Parse) {
  absl::StatusOr<SignalSpec> c = ParseSignalSpec("constant:0.5");
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c->kind, SignalSpec::Kind::kConstant);
  EXPECT_EQ(c->value, 0.5);
  absl::StatusOr<SignalSpec> q = ParseSignalSpec("square:period_s=40,amplitude=0.5");
  ASSERT_TRUE(q.ok());
  EXPECT_EQ(q->period_s, 40.0);
  EXPECT_EQ(q->amplitude, 0.5);
  absl::StatusOr<SignalSpec> w = ParseSignalSpec("walk:step=0.1,bias=-0.02,seed=7");
  ASSERT_TRUE(w.ok());
  EXPECT_EQ(w->bias, -0.02);
  EXPECT_EQ(w->seed, 7u);
  EXPECT_FALSE(ParseSignalSpec("sine:1").ok());
  EXPECT_FALSE(ParseSignalSpec("walk:step=x").ok());
}

TEST(ResultJsonTest, RoundTrip) {
  const TimeGrid g = testing::ShortGrid(12);
  const Scenario scn = *MakeCapacityScenario(
      g, {*MakeBattery(17.2, 100, 50, g), *MakeTurbine(0, 1000, 60, g)});
  const BidResult r = *MaxCapacity(scn);
  ASSERT_TRUE(r.ok());
  const json doc = json::parse(ResultToJson(r, scn).dump());
  absl::StatusOr<LoadedResult> back = ResultFromJson(doc);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->result.status, LpStatus::kOptimal);
  ASSERT_EQ(back->result.policies.size(), 2u);
  for (size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(back->result.policies[j].Q, r.policies[j].Q);
    EXPECT_EQ(back->result.policies[j].q, r.policies[j].q);
    EXPECT_EQ(back->result.policies[j].gamma, r.policies[j].gamma);
    EXPECT_EQ(back->scenario.resources[j].p_max, scn.resources[j].p_max);
    EXPECT_EQ(back->scenario.resources[j].r_max, scn.resources[j].r_max);
    EXPECT_EQ(back->scenario.structures[j].delay_steps, scn.structures[j].delay_steps);
    EXPECT_TRUE(Validate(back->result.policies[j], back->scenario.structures[j]).empty());
  }
  EXPECT_LE(BalanceResidual(back->result), 1e-8);
  EXPECT_EQ(back->result.gamma_agg, r.gamma_agg);
  EXPECT_FALSE(ResultFromJson(json{{"format", "other"}}).ok());
}

TEST(SweepIoTest, GridAndCsv) {
  const std::string path = ::testing::TempDir() + "/grid.csv";
  std::ofstream(path) << "p_bar_kW,x_bar_kWh\n17.2,100\n\n86, 500\n";
  absl::StatusOr<std::vector<SweepPoint>> pts = ReadSweepGrid(path);
  ASSERT_TRUE(pts.ok()) << pts.status();
  ASSERT_EQ(pts->size(), 2u);
  EXPECT_EQ((*pts)[1].x_bar_kwh, 500.0);
  std::ofstream(path) << "p_bar_kW,x_bar_kWh\n17.2\n";
  EXPECT_FALSE(ReadSweepGrid(path).ok());
  std::ofstream(path) << "p_bar_kW,x_bar_kWh\n";
  EXPECT_FALSE(ReadSweepGrid(path).ok());

  std::vector<SweepRow> rows(2);
  rows[0] = {{17.2, 100}, 2.0833, 9.6, 3.6, "optimal"};
  rows[1] = {{-1, 10}, 0.0, 0.0, std::nullopt, "bad battery"};
  std::ostringstream out;
  WriteSweepCsv(rows, out);
  EXPECT_EQ(out.str(),
            "p_bar_kW,x_bar_kWh,gamma_B_kW,gamma_agg_kW,sigma\n"
            "17.2,100,2.083300,9.600000,3.600000\n"
            "-1,10,0,,\n");
}

}  // namespace
}  // namespace flexagg
