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

#include "flexagg/rows.h"

#include <algorithm>
#include <cmath>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"

namespace flexagg {

std::string CanonicalName(const VarRef& v) {
  std::string prefix;
  switch (v.owner) {
    case kDayAheadOwner:
      prefix = "DA";
      break;
    case kIntraDayOwner:
      prefix = "ID";
      break;
    default:
      break;
  }
  const bool resource = v.owner >= 0;
  const std::string owner = resource ? absl::StrCat("[", v.owner + 1, "]") : "";
  switch (v.kind) {
    case VarKind::kQ:
      return absl::StrCat("Q", prefix, owner, "[", v.i + 1, "][", v.j, "]");
    case VarKind::kq:
      return absl::StrCat("q", prefix, owner, "[", v.i + 1, "]");
    case VarKind::kGamma:
      return absl::StrCat("g", owner, "[", std::max(v.i, 1), "]");
    case VarKind::kEpigraph:
      return "z";
    case VarKind::kAux:
      return absl::StrCat("aux", owner, "[", v.i, ".", v.j, "]");
  }
  return "?";
}

LinearExpr& LinearExpr::AddScaled(const LinearExpr& other, double scale) {
  if (scale == 0.0) return *this;
  for (const Term& t : other.terms_) Add(t.var, t.coef * scale);
  constant_ += scale * other.constant_;
  return *this;
}

void LinearExpr::Compact() {
  absl::flat_hash_map<VarRef, size_t> slot;
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    auto [it, inserted] = slot.try_emplace(t.var, merged.size());
    if (inserted) {
      merged.push_back(t);
    } else {
      merged[it->second].coef += t.coef;
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

namespace {
LinearRow MakeRow(const LinearExpr& expr, Relation rel, double rhs) {
  LinearExpr e = expr;
  e.Compact();
  return LinearRow{e.terms(), rel, rhs - e.constant()};
}
}  // namespace

LinearRow LessEqual(const LinearExpr& expr, double rhs) {
  return MakeRow(expr, Relation::kLessEqual, rhs);
}

LinearRow Equal(const LinearExpr& expr, double rhs) {
  return MakeRow(expr, Relation::kEqual, rhs);
}

void RobustRowSet::Append(RobustRowSet other) {
  aux.insert(aux.end(), std::make_move_iterator(other.aux.begin()),
             std::make_move_iterator(other.aux.end()));
  rows.insert(rows.end(), std::make_move_iterator(other.rows.begin()),
              std::make_move_iterator(other.rows.end()));
}

void DumpRows(const RobustRowSet& set, std::ostream& out) {
  absl::flat_hash_map<VarRef, int> aux_number;
  for (const AuxVar& a : set.aux) {
    aux_number.try_emplace(a.ref, static_cast<int>(aux_number.size()));
  }
  auto name = [&](const VarRef& v) {
    if (v.kind == VarKind::kAux) {
      auto it = aux_number.find(v);
      if (it != aux_number.end()) return absl::StrCat("aux[", it->second, "]");
    }
    return CanonicalName(v);
  };
  for (const LinearRow& row : set.rows) {
    out << set.tag << ":";
    bool first = true;
    for (const Term& t : row.terms) {
      const double mag = std::abs(t.coef);
      out << (t.coef < 0 ? " - " : (first ? " " : " + "));
      if (mag != 1.0) out << mag << " ";
      out << name(t.var);
      first = false;
    }
    if (first) out << " 0";
    out << (row.relation == Relation::kEqual ? " = " : " <= ") << row.rhs
        << "\n";
  }
}

}  // namespace flexagg
