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
#include "flexagg/market.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace flexagg {

constexpr double kDaySeconds = 86400.0;

PriceForecast PriceForecast::Zero(const TimeGrid& grid) {
  PriceForecast p;
  const int n_da = static_cast<int>(grid.count(Timescale::kDayAhead));
  const int n_id = static_cast<int>(grid.count(Timescale::kIntraDay));
  p.c_da.assign(n_da, 0.0);
  p.c_id.assign(n_id, 0.0);
  p.c_sfr.assign(grid.n_s(), 0.0);
  p.c_up.assign(n_id, 0.0);
  p.c_dn.assign(n_id, 0.0);
  p.w_exp.assign(grid.n_s(), 0.0);
  p.up_frac.assign(n_id, 0.0);
  p.dn_frac.assign(n_id, 0.0);
  return p;
}

absl::Status PriceForecast::Validate(const TimeGrid& grid) const {
  const size_t n_da = grid.count(Timescale::kDayAhead);
  const size_t n_id = grid.count(Timescale::kIntraDay);
  const size_t n_s = grid.n_s();
  const std::pair<const char*, std::pair<const std::vector<double>*, size_t>>
      cols[] = {{"c_DA", {&c_da, n_da}},       {"c_ID", {&c_id, n_id}},
                {"c_SFR", {&c_sfr, n_s}},      {"c_up", {&c_up, n_id}},
                {"c_dn", {&c_dn, n_id}},       {"w_exp", {&w_exp, n_s}},
                {"up_frac", {&up_frac, n_id}}, {"dn_frac", {&dn_frac, n_id}}};
  for (const auto& [name, spec] : cols) {
    if (spec.first->size() != spec.second) {
      return absl::InvalidArgumentError(
          absl::StrCat("price series ", name, " has length ",
                       spec.first->size(), ", expected ", spec.second));
    }
    for (double v : *spec.first) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("price series ", name, " has a non-finite entry"));
      }
    }
  }
  for (double w : w_exp) {
    if (w < -1.0 || w > 1.0) {
      return absl::InvalidArgumentError("w_exp outside [-1, 1]");
    }
  }
  for (size_t m = 0; m < n_id; ++m) {
    if (up_frac[m] < 0.0 || dn_frac[m] < 0.0 ||
        up_frac[m] + dn_frac[m] > 1.0 + 1e-12) {
      return absl::InvalidArgumentError(absl::StrCat(
          "activation fractions of intra-day interval ", m + 1,
          " must be nonnegative with sum <= 1"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<PriceForecast> ReadPriceCsv(const std::string& path,
                                           const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": empty file"));
  }
  std::vector<std::string> header =
      absl::StrSplit(absl::StripAsciiWhitespace(line), ',');
  std::map<std::string, std::vector<double>> data;
  for (auto& h : header) h = std::string(absl::StripAsciiWhitespace(h));
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> cells = absl::StrSplit(line, ',');
    for (size_t c = 0; c < cells.size() && c < header.size(); ++c) {
      const std::string cell(absl::StripAsciiWhitespace(cells[c]));
      if (cell.empty()) continue;
      double v;
      if (!absl::SimpleAtod(cell, &v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ":", line_no, ": cannot parse '", cell, "'"));
      }
      data[header[c]].push_back(v);
    }
  }
  PriceForecast p = PriceForecast::Zero(grid);
  const std::pair<const char*, std::vector<double>*> slots[] = {
      {"c_DA", &p.c_da},   {"c_ID", &p.c_id},       {"c_SFR", &p.c_sfr},
      {"c_up", &p.c_up},   {"c_dn", &p.c_dn},       {"w_exp", &p.w_exp},
      {"up_frac", &p.up_frac}, {"dn_frac", &p.dn_frac}};
  for (const auto& h : header) {
    bool known = false;
    for (const auto& [name, dst] : slots) {
      if (h == name) {
        *dst = data[h];
        known = true;
      }
    }
    if (!known) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": unknown column '", h, "'"));
    }
  }
  if (absl::Status s = p.Validate(grid); !s.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": ", s.message()));
  }
  return p;
}

namespace {

Eigen::MatrixXd TrapezoidMap(const TimeGrid& grid, Timescale market) {
  const int n_m = static_cast<int>(grid.count(market));
  const int per = static_cast<int>(grid.seconds(market) / grid.seconds(Timescale::kSystem));
  const double h = grid.ts() / 3600.0;
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n_m, grid.n_s() + 1);
  for (int m = 0; m < n_m; ++m) {
    for (int s = m * per + 1; s <= (m + 1) * per; ++s) {
      e(m, s - 1) += h / 2.0;
      e(m, s) += h / 2.0;
    }
  }
  return e;
}

}  // namespace

EnergyMaps MakeEnergyMaps(const TimeGrid& grid) {
  return {TrapezoidMap(grid, Timescale::kDayAhead),
          TrapezoidMap(grid, Timescale::kIntraDay)};
}

double DayAheadGate(const TimeGrid& grid, int k) {
  const double t = std::max(k - 1, 0) * grid.ts();
  const double day = std::floor(t / kDaySeconds);
  return day * kDaySeconds - static_cast<double>(grid.lead_day_ahead_s());
}

MarketMasks LeadTimeMasks(const TimeGrid& grid) {
  const int n_s = grid.n_s();
  MarketMasks m{EntryMask(n_s), EntryMask(n_s)};
  const double ts = grid.ts();
  const int id_lag = static_cast<int>(std::ceil(static_cast<double>(grid.lead_intra_day_s()) / ts - 1e-12));
  for (int k = 0; k <= n_s; ++k) {
    const double gate = DayAheadGate(grid, k);
    const int da_last =
        std::min(k - 1, static_cast<int>(std::floor(gate / ts + 1e-12)));
    for (int n = 1; n <= da_last; ++n) m.da.Set(k, n, true);
    const int id_last = std::min(k - 1, k - id_lag);
    for (int n = 1; n <= id_last; ++n) m.id.Set(k, n, true);
  }
  return m;
}

std::vector<VariableDecl> MarketVars::Declarations() const {
  std::vector<VariableDecl> decls;
  for (int k = 0; k <= n_s; ++k) {
    decls.push_back({q(kDayAheadOwner, k), -kInf, kInf});
  }
  if (mode == MarketMode::kFrozen) return decls;
  for (int k = 0; k <= n_s; ++k) {
    decls.push_back({q(kIntraDayOwner, k), -kInf, kInf});
    for (int n : da.Row(k)) decls.push_back({Q(kDayAheadOwner, k, n), -kInf, kInf});
    for (int n : id.Row(k)) decls.push_back({Q(kIntraDayOwner, k, n), -kInf, kInf});
  }
  return decls;
}

MarketVars MakeMarketVars(const TimeGrid& grid, MarketMode mode,
                          const std::vector<PolicyVars>& resources) {
  MarketVars v;
  v.mode = mode;
  v.n_s = grid.n_s();
  v.da = EntryMask(v.n_s);
  v.id = EntryMask(v.n_s);
  if (mode == MarketMode::kFrozen) return v;
  EntryMask used(v.n_s);
  for (const PolicyVars& r : resources) used |= r.structure.Mask();
  const MarketMasks lead = LeadTimeMasks(grid);
  EntryMask keep_da = used;
  keep_da |= lead.id;
  keep_da &= lead.da;
  EntryMask keep_id = used;
  keep_id |= lead.da;
  keep_id &= lead.id;
  v.da = std::move(keep_da);
  v.id = std::move(keep_id);
  return v;
}

RobustRowSet BalanceRows(const std::vector<PolicyVars>& resources,
                         const MarketVars& market) {
  RobustRowSet out;
  out.tag = "balance";
  const int n_s = market.n_s;
  const bool full = market.mode == MarketMode::kFull;
  for (int k = 0; k <= n_s; ++k) {
    LinearExpr e;
    for (const PolicyVars& r : resources) e.Add(r.q(k), 1.0);
    e.Add(MarketVars::q(kDayAheadOwner, k), -1.0);
    if (full) e.Add(MarketVars::q(kIntraDayOwner, k), -1.0);
    out.rows.push_back(Equal(e, 0.0));
  }
  for (int k = 0; k <= n_s; ++k) {
    for (int n = 1; n <= n_s; ++n) {
      LinearExpr e;
      for (const PolicyVars& r : resources) {
        if (r.structure.Allowed(k, n)) e.Add(r.Q(k, n), 1.0);
      }
      if (full && market.da.Allowed(k, n)) {
        e.Add(MarketVars::Q(kDayAheadOwner, k, n), -1.0);
      }
      if (full && market.id.Allowed(k, n)) {
        e.Add(MarketVars::Q(kIntraDayOwner, k, n), -1.0);
      }
      if (!e.empty()) out.rows.push_back(Equal(e, 0.0));
    }
  }
  return out;
}

LinearExpr ExpectedProfit(const PriceForecast& prices,
                          const std::vector<PolicyVars>& resources,
                          const MarketVars& market, const EnergyMaps& maps,
                          const TimeGrid& grid) {
  LinearExpr obj;
  const int n_s = grid.n_s();
  const int n_id = static_cast<int>(grid.count(Timescale::kIntraDay));
  const int per_id = static_cast<int>(grid.seconds(Timescale::kIntraDay) /
                                      grid.seconds(Timescale::kSystem));
  const double t_id_h = grid.seconds(Timescale::kIntraDay) / 3600.0;
  // Reserve and regulation income per kW of gamma_s.
  std::vector<double> per_gamma(n_s + 1, 0.0);
  for (int s = 1; s <= n_s; ++s) per_gamma[s] += prices.c_sfr[s - 1];
  for (int m = 0; m < n_id; ++m) {
    const double v = (prices.c_up[m] * prices.up_frac[m] -
                      prices.c_dn[m] * prices.dn_frac[m]) *
                     t_id_h / per_id;
    for (int s = m * per_id + 1; s <= (m + 1) * per_id; ++s) per_gamma[s] += v;
  }
  for (const PolicyVars& r : resources) {
    for (int s = 1; s <= n_s; ++s) obj.Add(r.gamma(s), per_gamma[s]);
  }

  auto energy_cost = [&](int owner, const Eigen::MatrixXd& e,
                         const std::vector<double>& price,
                         const EntryMask* mask) {
    const Eigen::VectorXd per_k =
        e.transpose() * Eigen::Map<const Eigen::VectorXd>(price.data(), price.size());
    for (int k = 0; k <= n_s; ++k) {
      if (per_k[k] == 0.0) continue;
      obj.Add(MarketVars::q(owner, k), -per_k[k]);
      if (mask == nullptr) continue;
      for (int n : mask->Row(k)) {
        obj.Add(MarketVars::Q(owner, k, n), -per_k[k] * prices.w_exp[n - 1]);
      }
    }
  };
  const bool full = market.mode == MarketMode::kFull;
  energy_cost(kDayAheadOwner, maps.da, prices.c_da, full ? &market.da : nullptr);
  if (full) energy_cost(kIntraDayOwner, maps.id, prices.c_id, &market.id);
  obj.Compact();
  return obj;
}

}  // namespace flexagg
