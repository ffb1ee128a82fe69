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
#include "flexagg/lp.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"

namespace flexagg {
namespace {

VarRef X(int i) { return {kGlobalOwner, VarKind::kAux, 0, i}; }

LinearProgram Build(int n, const std::vector<std::vector<double>>& a,
                    const std::vector<double>& b, const std::vector<double>& c,
                    Sense sense, double lo = 0.0) {
  LinearProgram lp;
  for (int j = 0; j < n; ++j) lp.AddVariable({X(j), lo, kInf});
  lp.AddFamily("rows");
  for (size_t i = 0; i < a.size(); ++i) {
    SparseRow r;
    for (int j = 0; j < n; ++j) {
      if (a[i][j] != 0.0) {
        r.cols.push_back(j);
        r.vals.push_back(a[i][j]);
      }
    }
    r.rhs = b[i];
    lp.AddRow(r);
  }
  lp.SetObjective(sense, c, 0.0);
  return lp;
}

SolveOptions With(Backend b) {
  SolveOptions o;
  o.backend = b;
  return o;
}

class LpBackendTest : public ::testing::TestWithParam<Backend> {};

TEST_P(LpBackendTest, SingleVariable) {
  const LpSolution s = Solve(Build(1, {{1}}, {3}, {1}, Sense::kMaximize), With(GetParam()));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 3.0, 1e-8);
  EXPECT_NEAR(s.values[0], 3.0, 1e-7);
}

TEST_P(LpBackendTest, Simplex2D) {
  const LpSolution s =
      Solve(Build(2, {{1, 1}}, {1}, {1, 1}, Sense::kMaximize), With(GetParam()));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-8);
}

TEST_P(LpBackendTest, Infeasible) {
  const LpSolution s = Solve(Build(1, {{1}}, {-1}, {1}, Sense::kMinimize), With(GetParam()));
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
}

TEST_P(LpBackendTest, Unbounded) {
  const LpSolution s = Solve(Build(2, {{1, -1}}, {1}, {1, 0}, Sense::kMaximize), With(GetParam()));
  EXPECT_EQ(s.status, LpStatus::kUnbounded);
}

TEST_P(LpBackendTest, FreeAndFixedVariables) {
  // max x - y, x + y = 2, x free, -1 <= y <= 5 fixed at y = 0.5.
  LinearProgram lp;
  lp.AddVariable({X(0), -kInf, kInf});
  lp.AddVariable({X(1), 0.5, 0.5});
  lp.AddFamily("eq");
  lp.AddRow({{0, 1}, {1, 1}, Relation::kEqual, 2.0, 0});
  lp.SetObjective(Sense::kMaximize, {1, -1}, 0.0);
  const LpSolution s = Solve(lp, With(GetParam()));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-7);
  EXPECT_NEAR(s.values[0], 1.5, 1e-7);
}

TEST_P(LpBackendTest, Deterministic) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<std::vector<double>> a(20, std::vector<double>(15));
  std::vector<double> b(20), c(15);
  for (auto& r : a) for (double& v : r) v = u(rng);
  for (double& v : b) v = u(rng) * 10;
  for (double& v : c) v = u(rng);
  const LinearProgram lp = Build(15, a, b, c, Sense::kMaximize);
  const LpSolution s1 = Solve(lp, With(GetParam()));
  const LpSolution s2 = Solve(lp, With(GetParam()));
  EXPECT_EQ(s1.values, s2.values);
  EXPECT_EQ(s1.objective_value, s2.objective_value);
}

INSTANTIATE_TEST_SUITE_P(Backends, LpBackendTest,
                         ::testing::Values(Backend::kDenseSimplex, Backend::kInteriorPoint));

TEST(LpTest, IterationCapReportsStatus) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<std::vector<double>> a(30, std::vector<double>(30));
  std::vector<double> b(30), c(30);
  for (auto& r : a) for (double& v : r) v = u(rng);
  for (double& v : b) v = u(rng);
  for (double& v : c) v = u(rng);
  const LinearProgram lp = Build(30, a, b, c, Sense::kMaximize);
  for (Backend be : {Backend::kDenseSimplex, Backend::kInteriorPoint}) {
    SolveOptions o = With(be);
    o.iteration_cap = 1;
    EXPECT_EQ(Solve(lp, o).status, LpStatus::kIterationLimit);
  }
}

TEST(AssembleTest, EmptyIsTrivial) {
  absl::StatusOr<LinearProgram> lp = Assemble({}, {}, RobustRowSet{}, {});
  ASSERT_TRUE(lp.ok());
  const LpSolution s = Solve(*lp);
  EXPECT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.objective_value, 0.0);
}

TEST(AssembleTest, SharedVariableSingleColumn) {
  const std::vector<VariableDecl> decls = {{X(0), 0, kInf}};
  RobustRowSet a, b;
  a.tag = "a";
  b.tag = "b";
  a.rows.push_back(LessEqual(LinearExpr::Var(X(0)), 3));
  b.rows.push_back(LessEqual(LinearExpr::Var(X(0), 2.0), 4));
  absl::StatusOr<LinearProgram> lp =
      Assemble(decls, std::vector<RobustRowSet>{a, b}, RobustRowSet{},
               {Sense::kMaximize, LinearExpr::Var(X(0))});
  ASSERT_TRUE(lp.ok());
  EXPECT_EQ(lp->num_vars(), 1);
  EXPECT_EQ(lp->num_rows(), 2);
  EXPECT_NEAR(Solve(*lp).objective_value, 2.0, 1e-8);
}

TEST(AssembleTest, Rejections) {
  const std::vector<VariableDecl> bad = {{X(0), 1, 0}};
  EXPECT_FALSE(Assemble(bad, {}, RobustRowSet{}, {}).ok());
  RobustRowSet r;
  r.tag = "r";
  r.rows.push_back(LessEqual(LinearExpr::Var(X(7)), 1));
  const std::vector<VariableDecl> decls = {{X(0), 0, 1}};
  EXPECT_FALSE(Assemble(decls, std::vector<RobustRowSet>{r}, RobustRowSet{}, {}).ok());
  EXPECT_FALSE(Assemble(decls, {}, RobustRowSet{},
                        {Sense::kMaximize, LinearExpr::Var(X(3))}).ok());
}

TEST(LpFormatTest, Listing) {
  std::ostringstream out;
  WriteLpFormat(Build(2, {{1, 1}}, {1}, {1, 1}, Sense::kMaximize), out);
  const std::string s = out.str();
  EXPECT_NE(s.find("Maximize"), std::string::npos);
  EXPECT_NE(s.find("Subject To"), std::string::npos);
  EXPECT_NE(s.find("Bounds"), std::string::npos);
  EXPECT_NE(s.find("End"), std::string::npos);
}

struct Random {
  int n, m;
  std::vector<std::vector<double>> a;
  std::vector<double> b, c;
};

Random MakeRandom(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(5, 60);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Random r;
  r.n = dim(rng);
  r.m = dim(rng);
  r.a.assign(r.m, std::vector<double>(r.n));
  for (auto& row : r.a) for (double& v : row) v = u(rng);
  // A positive row keeps the problem bounded; b > 0 keeps 0 feasible.
  for (double& v : r.a[0]) v = std::abs(v) + 0.1;
  r.b.resize(r.m);
  for (double& v : r.b) v = std::abs(u(rng)) + 0.1;
  r.c.resize(r.n);
  for (double& v : r.c) v = u(rng);
  return r;
}

// max c'x, Ax <= b, x >= 0. Dual: y >= 0, A'y >= c, b'y = c'x.
TEST(LpPropertyTest, DualCertificate) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Random r = MakeRandom(rng);
    const LinearProgram lp = Build(r.n, r.a, r.b, r.c, Sense::kMaximize);
    for (Backend be : {Backend::kDenseSimplex, Backend::kInteriorPoint}) {
      const LpSolution s = Solve(lp, With(be));
      ASSERT_EQ(s.status, LpStatus::kOptimal) << trial;
      ASSERT_EQ(s.row_duals.size(), static_cast<size_t>(r.m));
      const double scale = std::max(1.0, std::abs(s.objective_value));
      double dual_obj = 0.0;
      for (int i = 0; i < r.m; ++i) {
        EXPECT_GE(s.row_duals[i], -1e-6 * scale);
        dual_obj += r.b[i] * s.row_duals[i];
      }
      for (int j = 0; j < r.n; ++j) {
        double aty = 0.0;
        for (int i = 0; i < r.m; ++i) aty += r.a[i][j] * s.row_duals[i];
        EXPECT_GE(aty, r.c[j] - 1e-6 * scale) << trial << " col " << j;
      }
      EXPECT_NEAR(dual_obj, s.objective_value, 1e-6 * scale) << trial;
      EXPECT_LE(lp.MaxNormalizedViolation(s.values), 1e-7);
    }
  }
}

TEST(LpPropertyTest, PermutedRowsSameObjective) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    Random r = MakeRandom(rng);
    const LinearProgram lp = Build(r.n, r.a, r.b, r.c, Sense::kMaximize);
    std::vector<int> perm(r.m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Random p = r;
    for (int i = 0; i < r.m; ++i) {
      p.a[i] = r.a[perm[i]];
      p.b[i] = r.b[perm[i]];
    }
    const LinearProgram lq = Build(r.n, p.a, p.b, p.c, Sense::kMaximize);
    for (Backend be : {Backend::kDenseSimplex, Backend::kInteriorPoint}) {
      const double v1 = Solve(lp, With(be)).objective_value;
      const double v2 = Solve(lq, With(be)).objective_value;
      EXPECT_NEAR(v1, v2, 1e-8 * std::max(1.0, std::abs(v1))) << trial;
    }
  }
}

TEST(LpPropertyTest, BackendsAgree) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Random r = MakeRandom(rng);
    // Free variables with finite box through extra rows.
    LinearProgram lp = Build(r.n, r.a, r.b, r.c, Sense::kMaximize, -kInf);
    for (int j = 0; j < r.n; ++j) {
      lp.AddRow({{j}, {1.0}, Relation::kLessEqual, 2.0, 0});
      lp.AddRow({{j}, {-1.0}, Relation::kLessEqual, 2.0 + std::abs(u(rng)), 0});
    }
    const LpSolution a = Solve(lp, With(Backend::kDenseSimplex));
    const LpSolution b = Solve(lp, With(Backend::kInteriorPoint));
    ASSERT_EQ(a.status, b.status) << trial;
    if (a.status == LpStatus::kOptimal) {
      EXPECT_NEAR(a.objective_value, b.objective_value,
                  1e-7 * std::max(1.0, std::abs(a.objective_value)));
    }
  }
}

}  // namespace
}  // namespace flexagg
