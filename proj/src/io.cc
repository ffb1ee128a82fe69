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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace flexagg {

using nlohmann::json;

namespace {

// Collects schema errors while reading fields.
class Reader {
 public:
  std::vector<std::string> errors;

  void Error(const std::string& ptr, const std::string& what) {
    errors.push_back(absl::StrCat(ptr.empty() ? "/" : ptr, ": ", what));
  }

  const json* Field(const json& obj, const std::string& ptr, const char* key,
                    bool required) {
    if (!obj.is_object()) {
      Error(ptr, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) Error(absl::StrCat(ptr, "/", key), "required field missing");
      return nullptr;
    }
    return &*it;
  }

  double Number(const json& obj, const std::string& ptr, const char* key,
                std::optional<double> def) {
    const json* v = Field(obj, ptr, key, !def.has_value());
    if (v == nullptr) return def.value_or(0.0);
    if (!v->is_number()) {
      Error(absl::StrCat(ptr, "/", key), "expected a number");
      return def.value_or(0.0);
    }
    return v->get<double>();
  }

  int64_t Integer(const json& obj, const std::string& ptr, const char* key,
                  int64_t def) {
    const json* v = Field(obj, ptr, key, false);
    if (v == nullptr) return def;
    if (!v->is_number_integer()) {
      Error(absl::StrCat(ptr, "/", key), "expected an integer");
      return def;
    }
    return v->get<int64_t>();
  }

  bool Bool(const json& obj, const std::string& ptr, const char* key, bool def) {
    const json* v = Field(obj, ptr, key, false);
    if (v == nullptr) return def;
    if (!v->is_boolean()) {
      Error(absl::StrCat(ptr, "/", key), "expected true or false");
      return def;
    }
    return v->get<bool>();
  }

  std::string String(const json& obj, const std::string& ptr, const char* key,
                     std::optional<std::string> def) {
    const json* v = Field(obj, ptr, key, !def.has_value());
    if (v == nullptr) return def.value_or("");
    if (!v->is_string()) {
      Error(absl::StrCat(ptr, "/", key), "expected a string");
      return def.value_or("");
    }
    return v->get<std::string>();
  }

  // Scalar broadcast to n entries, or an array of n numbers; null entries
  // and a missing field give fill.
  std::vector<double> Sequence(const json& obj, const std::string& ptr,
                               const char* key, int n, std::optional<double> fill) {
    const json* v = Field(obj, ptr, key, !fill.has_value());
    const std::string p = absl::StrCat(ptr, "/", key);
    std::vector<double> out(n, fill.value_or(0.0));
    if (v == nullptr || v->is_null()) return out;
    if (v->is_number()) {
      out.assign(n, v->get<double>());
      return out;
    }
    if (!v->is_array() || static_cast<int>(v->size()) != n) {
      Error(p, absl::StrCat("expected a number or an array of ", n, " numbers"));
      return out;
    }
    for (int i = 0; i < n; ++i) {
      const json& e = (*v)[i];
      if (e.is_number()) {
        out[i] = e.get<double>();
      } else if (e.is_null() && fill.has_value()) {
        out[i] = *fill;
      } else {
        Error(absl::StrCat(p, "/", i), "expected a number");
      }
    }
    return out;
  }

  absl::Status Finish() const {
    if (errors.empty()) return absl::OkStatus();
    return absl::InvalidArgumentError(absl::StrJoin(errors, "\n"));
  }
};

std::string Resolve(const std::string& base, const std::string& name) {
  const std::filesystem::path p(name);
  if (p.is_absolute() || base.empty()) return name;
  return (std::filesystem::path(base) / p).string();
}

json Finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json FiniteArray(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(Finite(x));
  return a;
}

void ReadGrid(Reader& rd, const json& g, const std::string& ptr,
              GridDurations& d) {
  d.horizon_s = rd.Integer(g, ptr, "horizon_s", d.horizon_s);
  d.sfr_s = rd.Integer(g, ptr, "sfr_s", d.sfr_s);
  d.day_ahead_s = rd.Integer(g, ptr, "day_ahead_s", d.day_ahead_s);
  d.intra_day_s = rd.Integer(g, ptr, "intra_day_s", d.intra_day_s);
  d.system_s = rd.Integer(g, ptr, "system_s", d.system_s);
  d.control_s = rd.Integer(g, ptr, "control_s", d.control_s);
  d.lead_day_ahead_s = rd.Integer(g, ptr, "lead_day_ahead_s", d.lead_day_ahead_s);
  d.lead_intra_day_s = rd.Integer(g, ptr, "lead_intra_day_s", d.lead_intra_day_s);
}

void ReadGeneric(Reader& rd, const json& r, const std::string& ptr, int n,
                 ResourceParams& out) {
  out.p_min = rd.Sequence(r, ptr, "p_min_kW", n, std::nullopt);
  out.p_max = rd.Sequence(r, ptr, "p_max_kW", n, std::nullopt);
  out.r_min = rd.Sequence(r, ptr, "r_min_kW_per_s", n, -kInf);
  out.r_max = rd.Sequence(r, ptr, "r_max_kW_per_s", n, kInf);
  out.x_min = rd.Sequence(r, ptr, "x_min_kWh", n, -kInf);
  out.x_max = rd.Sequence(r, ptr, "x_max_kWh", n, kInf);
  out.x0_min = rd.Number(r, ptr, "x0_min_kWh", 0.0);
  out.x0_max = rd.Number(r, ptr, "x0_max_kWh", 0.0);
  out.a = rd.Number(r, ptr, "a_per_s", 0.0);
  out.b = rd.Number(r, ptr, "b_kW", 0.0);
  out.c = rd.Number(r, ptr, "c", 1.0);
  out.u = rd.Sequence(r, ptr, "u", n, 0.0);
  out.delay_s = rd.Number(r, ptr, "delay_s", 0.0);
}

std::optional<ResourceParams> ReadResource(Reader& rd, const json& r,
                                           const std::string& ptr,
                                           const TimeGrid& grid) {
  const std::string type = rd.String(r, ptr, "type", std::nullopt);
  const std::string label = rd.String(r, ptr, "label", type);
  const size_t before = rd.errors.size();
  absl::StatusOr<ResourceParams> made = absl::InvalidArgumentError("");
  if (type == "battery") {
    const double p = rd.Number(r, ptr, "p_max_kW", std::nullopt);
    const double x = rd.Number(r, ptr, "x_bar_kWh", std::nullopt);
    const double x0 = rd.Number(r, ptr, "x0_kWh", x / 2.0);
    if (rd.errors.size() != before) return std::nullopt;
    made = MakeBattery(p, x, x0, grid);
  } else if (type == "freezer") {
    FreezerSpec f;
    f.p_min = rd.Number(r, ptr, "p_min_kW", f.p_min);
    f.p_max = rd.Number(r, ptr, "p_max_kW", f.p_max);
    if (r.contains("r_min_kW_per_min") || r.contains("r_max_kW_per_min")) {
      f.r_min = rd.Number(r, ptr, "r_min_kW_per_min", f.r_min * 60.0) / 60.0;
      f.r_max = rd.Number(r, ptr, "r_max_kW_per_min", f.r_max * 60.0) / 60.0;
    } else {
      f.r_min = rd.Number(r, ptr, "r_min_kW_per_s", f.r_min);
      f.r_max = rd.Number(r, ptr, "r_max_kW_per_s", f.r_max);
    }
    f.x_bar = rd.Number(r, ptr, "x_bar_kWh", f.x_bar);
    f.theta_in_min = rd.Number(r, ptr, "theta_in_min_C", f.theta_in_min);
    f.theta_in_max = rd.Number(r, ptr, "theta_in_max_C", f.theta_in_max);
    f.theta_out = rd.Number(r, ptr, "theta_out_C", f.theta_out);
    f.t_dis_s = rd.Number(r, ptr, "t_dis_s", f.t_dis_s);
    f.fill = rd.Number(r, ptr, "fill", f.fill);
    f.delay_s = rd.Number(r, ptr, "delay_s", f.delay_s);
    if (rd.errors.size() != before) return std::nullopt;
    made = MakeFreezer(f, grid);
  } else if (type == "turbine") {
    const double lo = rd.Number(r, ptr, "p_min_kW", 0.0);
    const double hi = rd.Number(r, ptr, "p_max_kW", std::nullopt);
    const double ramp = rd.Number(r, ptr, "ramp_kW_per_min", std::nullopt);
    if (rd.errors.size() != before) return std::nullopt;
    made = MakeTurbine(lo, hi, ramp, grid);
  } else if (type == "generic") {
    ResourceParams g;
    ReadGeneric(rd, r, ptr, grid.n_s(), g);
    if (rd.errors.size() != before) return std::nullopt;
    if (absl::Status s = g.Validate(grid.n_s()); !s.ok()) {
      made = s;
    } else {
      made = g;
    }
  } else {
    if (!type.empty()) {
      rd.Error(absl::StrCat(ptr, "/type"),
               "expected battery, freezer, turbine or generic");
    }
    return std::nullopt;
  }
  if (!made.ok()) {
    rd.Error(ptr, std::string(made.status().message()));
    return std::nullopt;
  }
  made->label = label;
  return *made;
}

void ReadStructure(Reader& rd, const json& s, const std::string& ptr,
                   int& bandwidth, bool& time_invariant) {
  const int64_t bw = rd.Integer(s, ptr, "bandwidth", bandwidth);
  if (bw < 0) {
    rd.Error(absl::StrCat(ptr, "/bandwidth"), "must be >= 0");
  } else {
    bandwidth = static_cast<int>(bw);
  }
  time_invariant = rd.Bool(s, ptr, "time_invariant_gamma", time_invariant);
}

std::optional<PriceForecast> ReadPrices(Reader& rd, const json& p,
                                        const std::string& ptr,
                                        const TimeGrid& grid,
                                        const std::string& base) {
  if (p.contains("csv")) {
    const std::string path = Resolve(base, rd.String(p, ptr, "csv", ""));
    absl::StatusOr<PriceForecast> f = ReadPriceCsv(path, grid);
    if (!f.ok()) {
      rd.Error(absl::StrCat(ptr, "/csv"), std::string(f.status().message()));
      return std::nullopt;
    }
    return *f;
  }
  PriceForecast f = PriceForecast::Zero(grid);
  const int n_da = grid.count(Timescale::kDayAhead);
  const int n_id = grid.count(Timescale::kIntraDay);
  const int n_s = grid.n_s();
  f.c_da = rd.Sequence(p, ptr, "c_DA", n_da, 0.0);
  f.c_id = rd.Sequence(p, ptr, "c_ID", n_id, 0.0);
  f.c_sfr = rd.Sequence(p, ptr, "c_SFR", n_s, 0.0);
  f.c_up = rd.Sequence(p, ptr, "c_up", n_id, 0.0);
  f.c_dn = rd.Sequence(p, ptr, "c_dn", n_id, 0.0);
  f.w_exp = rd.Sequence(p, ptr, "w_exp", n_s, 0.0);
  f.up_frac = rd.Sequence(p, ptr, "up_frac", n_id, 0.0);
  f.dn_frac = rd.Sequence(p, ptr, "dn_frac", n_id, 0.0);
  if (absl::Status s = f.Validate(grid); !s.ok()) {
    rd.Error(ptr, std::string(s.message()));
    return std::nullopt;
  }
  return f;
}

std::optional<SignalSpec> ReadSignal(Reader& rd, const json& s,
                                     const std::string& ptr) {
  SignalSpec spec;
  const std::string kind = rd.String(s, ptr, "kind", std::nullopt);
  if (kind == "constant") {
    spec.kind = SignalSpec::Kind::kConstant;
    spec.value = rd.Number(s, ptr, "value", std::nullopt);
  } else if (kind == "square") {
    spec.kind = SignalSpec::Kind::kSquare;
    spec.period_s = rd.Number(s, ptr, "period_s", std::nullopt);
    spec.amplitude = rd.Number(s, ptr, "amplitude", 1.0);
  } else if (kind == "walk") {
    spec.kind = SignalSpec::Kind::kWalk;
    spec.step = rd.Number(s, ptr, "step", 0.1);
    spec.bias = rd.Number(s, ptr, "bias", 0.0);
    spec.seed = static_cast<uint64_t>(rd.Integer(s, ptr, "seed", 1));
  } else {
    if (!kind.empty()) {
      rd.Error(absl::StrCat(ptr, "/kind"), "expected constant, square or walk");
    }
    return std::nullopt;
  }
  return spec;
}

}  // namespace

absl::StatusOr<ScenarioFile> ParseScenario(const json& doc,
                                           const std::string& base_dir) {
  Reader rd;
  if (!doc.is_object()) return absl::InvalidArgumentError("/: expected an object");
  GridDurations d;
  if (const json* g = rd.Field(doc, "", "grid", false)) ReadGrid(rd, *g, "/grid", d);
  if (absl::Status s = rd.Finish(); !s.ok()) return s;
  absl::StatusOr<TimeGrid> grid = TimeGrid::Build(d);
  if (!grid.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("/grid: ", grid.status().message()));
  }

  ScenarioFile out;
  out.scenario.grid = *grid;
  const json* res = rd.Field(doc, "", "resources", true);
  if (res != nullptr && (!res->is_array() || res->empty())) {
    rd.Error("/resources", "expected a nonempty array");
    res = nullptr;
  }
  if (res != nullptr) {
    for (size_t j = 0; j < res->size(); ++j) {
      auto r = ReadResource(rd, (*res)[j], absl::StrCat("/resources/", j), *grid);
      if (r.has_value()) out.scenario.resources.push_back(*std::move(r));
    }
  }

  int bandwidth = 4;
  bool time_invariant = true;
  std::vector<std::pair<int, bool>> per;
  if (const json* s = rd.Field(doc, "", "structures", false)) {
    if (s->is_array()) {
      const size_t n = res != nullptr ? res->size() : 0;
      if (s->size() != n) {
        rd.Error("/structures", absl::StrCat("expected ", n, " entries"));
      }
      for (size_t j = 0; j < s->size(); ++j) {
        int bw = bandwidth;
        bool ti = time_invariant;
        ReadStructure(rd, (*s)[j], absl::StrCat("/structures/", j), bw, ti);
        per.push_back({bw, ti});
      }
    } else {
      ReadStructure(rd, *s, "/structures", bandwidth, time_invariant);
    }
  }

  if (const json* m = rd.Field(doc, "", "mode", false)) {
    const std::string markets = rd.String(*m, "/mode", "markets", "frozen");
    const std::string objective = rd.String(*m, "/mode", "objective", "max-capacity");
    if (markets == "frozen") {
      out.scenario.market_mode = MarketMode::kFrozen;
    } else if (markets == "full") {
      out.scenario.market_mode = MarketMode::kFull;
    } else {
      rd.Error("/mode/markets", "expected frozen or full");
    }
    if (objective == "max-capacity") {
      out.scenario.objective = ObjectiveMode::kMaxCapacity;
    } else if (objective == "profit") {
      out.scenario.objective = ObjectiveMode::kProfit;
    } else {
      rd.Error("/mode/objective", "expected max-capacity or profit");
    }
    if (markets == "frozen" && objective == "profit") {
      rd.Error("/mode", "mode conflict: the profit objective needs full markets");
    }
  }
  if (const json* p = rd.Field(doc, "", "prices", false)) {
    out.scenario.prices = ReadPrices(rd, *p, "/prices", *grid, base_dir);
  }
  if (const json* s = rd.Field(doc, "", "signal", false)) {
    if (s->contains("csv")) {
      out.signal_csv = Resolve(base_dir, rd.String(*s, "/signal", "csv", ""));
    } else {
      out.signal = ReadSignal(rd, *s, "/signal");
    }
  }
  if (const json* o = rd.Field(doc, "", "outputs", false)) {
    out.out_dir = Resolve(base_dir, rd.String(*o, "/outputs", "dir", "."));
  }
  if (absl::Status s = rd.Finish(); !s.ok()) return s;

  for (size_t j = 0; j < out.scenario.resources.size(); ++j) {
    const int bw = j < per.size() ? per[j].first : bandwidth;
    const bool ti = j < per.size() ? per[j].second : time_invariant;
    out.scenario.structures.push_back(
        MakeStructure(*grid, bw, out.scenario.resources[j].delay_s, ti));
  }
  if (absl::Status s = out.scenario.Validate(); !s.ok()) return s;
  return out;
}

absl::StatusOr<ScenarioFile> LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": not valid JSON"));
  }
  return ParseScenario(doc, std::filesystem::path(path).parent_path().string());
}

json GridToJson(const TimeGrid& grid) {
  const GridDurations& d = grid.durations();
  return {{"horizon_s", d.horizon_s},
          {"sfr_s", d.sfr_s},
          {"day_ahead_s", d.day_ahead_s},
          {"intra_day_s", d.intra_day_s},
          {"system_s", d.system_s},
          {"control_s", d.control_s},
          {"lead_day_ahead_s", d.lead_day_ahead_s},
          {"lead_intra_day_s", d.lead_intra_day_s}};
}

absl::StatusOr<TimeGrid> GridFromJson(const json& j) {
  Reader rd;
  GridDurations d;
  ReadGrid(rd, j, "/grid", d);
  if (absl::Status s = rd.Finish(); !s.ok()) return s;
  return TimeGrid::Build(d);
}

json ResourceToJson(const ResourceParams& r) {
  return {{"type", "generic"},
          {"label", r.label},
          {"p_min_kW", FiniteArray(r.p_min)},
          {"p_max_kW", FiniteArray(r.p_max)},
          {"r_min_kW_per_s", FiniteArray(r.r_min)},
          {"r_max_kW_per_s", FiniteArray(r.r_max)},
          {"x_min_kWh", FiniteArray(r.x_min)},
          {"x_max_kWh", FiniteArray(r.x_max)},
          {"x0_min_kWh", r.x0_min},
          {"x0_max_kWh", r.x0_max},
          {"a_per_s", r.a},
          {"b_kW", r.b},
          {"c", r.c},
          {"u", FiniteArray(r.u)},
          {"delay_s", r.delay_s}};
}

absl::StatusOr<ResourceParams> ResourceFromJson(const json& j, int n_s) {
  Reader rd;
  ResourceParams r;
  r.label = rd.String(j, "", "label", "generic");
  ReadGeneric(rd, j, "", n_s, r);
  if (absl::Status s = rd.Finish(); !s.ok()) return s;
  if (absl::Status s = r.Validate(n_s); !s.ok()) return s;
  return r;
}

json PolicyToJson(const AffinePolicy& p) {
  json q_rows = json::array();
  for (int k = 0; k < p.Q.rows(); ++k) {
    json row = json::array();
    for (int n = 0; n < p.Q.cols(); ++n) row.push_back(p.Q(k, n));
    q_rows.push_back(std::move(row));
  }
  json out = {{"Q", std::move(q_rows)},
              {"q", std::vector<double>(p.q.data(), p.q.data() + p.q.size())}};
  if (p.gamma.size() > 0) {
    out["gamma"] =
        std::vector<double>(p.gamma.data(), p.gamma.data() + p.gamma.size());
  }
  return out;
}

absl::StatusOr<AffinePolicy> PolicyFromJson(const json& j, int n_s,
                                            bool with_gamma) {
  AffinePolicy p = AffinePolicy::Zero(n_s, with_gamma);
  if (!j.is_object() || !j.contains("Q") || !j.contains("q")) {
    return absl::InvalidArgumentError("policy needs Q and q");
  }
  const json& q_rows = j["Q"];
  if (!q_rows.is_array() || static_cast<int>(q_rows.size()) != n_s + 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("policy Q needs ", n_s + 1, " rows"));
  }
  for (int k = 0; k <= n_s; ++k) {
    const json& row = q_rows[k];
    if (!row.is_array() || static_cast<int>(row.size()) != n_s) {
      return absl::InvalidArgumentError(
          absl::StrCat("policy Q row ", k + 1, " needs ", n_s, " entries"));
    }
    for (int n = 0; n < n_s; ++n) {
      if (!row[n].is_number()) return absl::InvalidArgumentError("Q entry not a number");
      p.Q(k, n) = row[n].get<double>();
    }
  }
  auto read_vec = [&j](const char* key, Eigen::VectorXd& v) -> absl::Status {
    const json& a = j[key];
    if (!a.is_array() || a.size() != static_cast<size_t>(v.size())) {
      return absl::InvalidArgumentError(
          absl::StrCat("policy ", key, " needs ", v.size(), " entries"));
    }
    for (int i = 0; i < v.size(); ++i) {
      if (!a[i].is_number()) return absl::InvalidArgumentError("entry not a number");
      v[i] = a[i].get<double>();
    }
    return absl::OkStatus();
  };
  if (absl::Status s = read_vec("q", p.q); !s.ok()) return s;
  if (with_gamma) {
    if (!j.contains("gamma")) return absl::InvalidArgumentError("policy needs gamma");
    if (absl::Status s = read_vec("gamma", p.gamma); !s.ok()) return s;
  }
  return p;
}

json ResultToJson(const BidResult& r, const Scenario& scn) {
  json doc;
  doc["format"] = "flexagg-result";
  doc["version"] = 1;
  doc["status"] = ToString(r.status);
  if (!r.diagnosis.empty()) doc["diagnosis"] = r.diagnosis;
  doc["mode"] = {
      {"markets", scn.market_mode == MarketMode::kFull ? "full" : "frozen"},
      {"objective",
       scn.objective == ObjectiveMode::kProfit ? "profit" : "max-capacity"}};
  doc["objective_value"] = r.objective_value;
  doc["grid"] = GridToJson(scn.grid);
  json resources = json::array();
  for (size_t j = 0; j < scn.resources.size(); ++j) {
    json e = {{"params", ResourceToJson(scn.resources[j])},
              {"structure",
               {{"bandwidth", scn.structures[j].bandwidth},
                {"delay_steps", scn.structures[j].delay_steps},
                {"time_invariant_gamma", scn.structures[j].time_invariant_gamma}}}};
    if (j < r.policies.size()) e["policy"] = PolicyToJson(r.policies[j]);
    resources.push_back(std::move(e));
  }
  doc["resources"] = std::move(resources);
  if (r.ok()) {
    doc["gamma_agg_kW"] = std::vector<double>(
        r.gamma_agg.data(), r.gamma_agg.data() + r.gamma_agg.size());
    doc["markets"] = {{"day_ahead", PolicyToJson(r.markets.da)},
                      {"intra_day", PolicyToJson(r.markets.id)}};
  }
  doc["stats"] = {{"variables", r.stats.num_vars},
                  {"rows", r.stats.num_rows},
                  {"nonzeros", r.stats.num_nonzeros},
                  {"iterations", r.stats.iterations},
                  {"seconds", r.stats.seconds},
                  {"max_violation", r.stats.max_violation},
                  {"balance_residual", r.stats.balance_residual},
                  {"backend", r.stats.backend}};
  return doc;
}

absl::StatusOr<LoadedResult> ResultFromJson(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "flexagg-result") {
    return absl::InvalidArgumentError("not a result document");
  }
  if (!doc.contains("grid") || !doc.contains("resources")) {
    return absl::InvalidArgumentError("result lacks grid or resources");
  }
  absl::StatusOr<TimeGrid> grid = GridFromJson(doc["grid"]);
  if (!grid.ok()) return grid.status();
  LoadedResult out;
  out.scenario.grid = *grid;
  const int n_s = grid->n_s();
  const std::string status = doc.value("status", "");
  out.result.status = status == "optimal"      ? LpStatus::kOptimal
                      : status == "infeasible" ? LpStatus::kInfeasible
                      : status == "unbounded"  ? LpStatus::kUnbounded
                                               : LpStatus::kIterationLimit;
  out.result.objective_value = doc.value("objective_value", 0.0);
  out.result.gamma_agg = Eigen::VectorXd::Zero(n_s);
  for (const json& e : doc["resources"]) {
    if (!e.contains("params")) return absl::InvalidArgumentError("resource lacks params");
    absl::StatusOr<ResourceParams> phi = ResourceFromJson(e["params"], n_s);
    if (!phi.ok()) return phi.status();
    out.scenario.resources.push_back(*phi);
    PolicyStructure st;
    st.n_s = n_s;
    if (e.contains("structure")) {
      st.bandwidth = e["structure"].value("bandwidth", 4);
      st.delay_steps = e["structure"].value("delay_steps", 0);
      st.time_invariant_gamma = e["structure"].value("time_invariant_gamma", true);
    }
    out.scenario.structures.push_back(st);
    if (e.contains("policy")) {
      absl::StatusOr<AffinePolicy> p = PolicyFromJson(e["policy"], n_s, true);
      if (!p.ok()) return p.status();
      out.result.gamma_agg += p->gamma;
      out.result.policies.push_back(*std::move(p));
    }
  }
  if (doc.contains("markets")) {
    absl::StatusOr<AffinePolicy> da = PolicyFromJson(doc["markets"]["day_ahead"], n_s, false);
    absl::StatusOr<AffinePolicy> id = PolicyFromJson(doc["markets"]["intra_day"], n_s, false);
    if (!da.ok()) return da.status();
    if (!id.ok()) return id.status();
    out.result.markets = {*da, *id};
  } else {
    out.result.markets = {AffinePolicy::Zero(n_s, false), AffinePolicy::Zero(n_s, false)};
  }
  if (doc.contains("mode")) {
    out.scenario.market_mode = doc["mode"].value("markets", "frozen") == "full"
                                   ? MarketMode::kFull
                                   : MarketMode::kFrozen;
    out.scenario.objective = doc["mode"].value("objective", "") == "profit"
                                 ? ObjectiveMode::kProfit
                                 : ObjectiveMode::kMaxCapacity;
  }
  return out;
}

absl::StatusOr<LoadedResult> LoadResult(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": not valid JSON"));
  }
  return ResultFromJson(doc);
}

absl::StatusOr<SignalSpec> ParseSignalSpec(const std::string& text) {
  std::pair<std::string, std::string> kv =
      absl::StrSplit(text, absl::MaxSplits(':', 1));
  SignalSpec spec;
  std::vector<std::pair<std::string, double>> args;
  if (!kv.second.empty()) {
    for (absl::string_view part : absl::StrSplit(kv.second, ',')) {
      std::pair<std::string, std::string> a =
          absl::StrSplit(part, absl::MaxSplits('=', 1));
      double v;
      const std::string value = a.second.empty() ? a.first : a.second;
      const std::string key = a.second.empty() ? "" : a.first;
      if (!absl::SimpleAtod(value, &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("signal spec: cannot parse '", std::string(part), "'"));
      }
      args.push_back({key, v});
    }
  }
  auto take = [&](const std::string& key, double def) {
    for (const auto& [k, v] : args) {
      if (k == key) return v;
    }
    return def;
  };
  const std::string& kind = kv.first;
  if (kind == "constant") {
    spec.kind = SignalSpec::Kind::kConstant;
    spec.value = !args.empty() && args[0].first.empty() ? args[0].second
                                                          : take("value", 0.0);
  } else if (kind == "square") {
    spec.kind = SignalSpec::Kind::kSquare;
    spec.period_s = take("period_s", spec.period_s);
    spec.amplitude = take("amplitude", spec.amplitude);
  } else if (kind == "walk") {
    spec.kind = SignalSpec::Kind::kWalk;
    spec.step = take("step", spec.step);
    spec.bias = take("bias", spec.bias);
    spec.seed = static_cast<uint64_t>(take("seed", 1.0));
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown signal kind '", kind, "'"));
  }
  return spec;
}

absl::StatusOr<std::vector<SweepPoint>> ReadSweepGrid(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  std::vector<SweepPoint> pts;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s(absl::StripAsciiWhitespace(line));
    if (s.empty()) continue;
    std::vector<std::string> cells = absl::StrSplit(s, ',');
    double p, x;
    if (cells.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cells[0]), &p) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(cells[1]), &x)) {
      if (line_no == 1) continue;  // header
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": expected p_bar_kW,x_bar_kWh"));
    }
    pts.push_back({p, x});
  }
  if (pts.empty()) return absl::InvalidArgumentError(absl::StrCat(path, ": empty grid"));
  return pts;
}

void WriteSweepCsv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "p_bar_kW,x_bar_kWh,gamma_B_kW,gamma_agg_kW,sigma\n";
  for (const SweepRow& r : rows) {
    out << r.point.p_bar_kw << "," << r.point.x_bar_kwh << ",";
    if (r.status != "optimal") {
      out << r.gamma_b << ",," << "\n";
      continue;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,", r.gamma_b, r.gamma_agg);
    out << buf;
    if (r.sigma.has_value()) {
      std::snprintf(buf, sizeof(buf), "%.6f", *r.sigma);
      out << buf;
    } else {
      out << "inf";
    }
    out << "\n";
  }
}

}  // namespace flexagg
