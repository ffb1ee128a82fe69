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

#ifndef FLEXAGG_ROWS_H_
#define FLEXAGG_ROWS_H_

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace flexagg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Owners of decision variables. Resources use their index j >= 0.
inline constexpr int kDayAheadOwner = -1;
inline constexpr int kIntraDayOwner = -2;
inline constexpr int kGlobalOwner = -3;

enum class VarKind : uint8_t {
  kQ,          // Q entry, (i, j) = (breakpoint k, interval n).
  kq,          // q entry, i = breakpoint k.
  kGamma,      // reserve capacity, i = interval s (0 when time invariant).
  kAux,        // auxiliary, (i, j) = (family, serial).
  kEpigraph,   // max-min epigraph variable.
};

// Names one decision variable of the bidding problem. Breakpoints k run
// over [0, N_S], intervals n and s over [1, N_S].
struct VarRef {
  int owner = 0;
  VarKind kind = VarKind::kAux;
  int i = 0;
  int j = 0;

  friend bool operator==(const VarRef&, const VarRef&) = default;
  friend auto operator<=>(const VarRef&, const VarRef&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const VarRef& v) {
    return H::combine(std::move(h), v.owner, static_cast<int>(v.kind), v.i,
                      v.j);
  }
};

// "Q[j][m][n]", "q[j][m]", "g[j][k]", "QDA[m][n]", ... with 1-based
// indices (m = k + 1 for breakpoint rows). Auxiliaries have no stable
// name of their own; listings number them by position.
std::string CanonicalName(const VarRef& v);

struct Term {
  VarRef var;
  double coef = 0.0;
};

// Affine expression sum(coef * var) + constant.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(double constant) : constant_(constant) {}
  static LinearExpr Var(const VarRef& v, double coef = 1.0) {
    LinearExpr e;
    e.Add(v, coef);
    return e;
  }

  LinearExpr& Add(const VarRef& v, double coef) {
    if (coef != 0.0) terms_.push_back({v, coef});
    return *this;
  }
  LinearExpr& AddScaled(const LinearExpr& other, double scale);
  LinearExpr& AddConstant(double c) {
    constant_ += c;
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& other) {
    return AddScaled(other, 1.0);
  }
  LinearExpr& operator-=(const LinearExpr& other) {
    return AddScaled(other, -1.0);
  }

  // Merges duplicate variables and drops zero coefficients.
  void Compact();

  const std::vector<Term>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<Term> terms_;
  double constant_ = 0.0;
};

enum class Relation : uint8_t { kLessEqual, kEqual };

struct LinearRow {
  std::vector<Term> terms;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

// expr <= rhs and expr == rhs with the expression constant moved right.
LinearRow LessEqual(const LinearExpr& expr, double rhs);
LinearRow Equal(const LinearExpr& expr, double rhs);

struct AuxVar {
  VarRef ref;
  double lo = -kInf;
  double hi = kInf;
};

// One family of constraint rows together with the auxiliaries it owns.
struct RobustRowSet {
  std::string tag;
  std::vector<AuxVar> aux;
  std::vector<LinearRow> rows;

  void Append(RobustRowSet other);
};

// One row per line: "tag: 2 Q[1][3][1] - g[1][1] <= 5".
void DumpRows(const RobustRowSet& set, std::ostream& out);

}  // namespace flexagg

#endif  // FLEXAGG_ROWS_H_
