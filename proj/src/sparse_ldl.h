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

// Up-looking sparse LDL' for quasidefinite matrices with a known sign per
// pivot. Pivots that come out with the wrong sign or too close to zero are
// replaced by a signed static value.

#ifndef FLEXAGG_SRC_SPARSE_LDL_H_
#define FLEXAGG_SRC_SPARSE_LDL_H_

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

namespace flexagg::internal {

class SparseLdl {
 public:
  // lower: lower triangle (diagonal included) of a symmetric matrix whose
  // pattern stays fixed. signs[i] is +1 or -1.
  SparseLdl(const Eigen::SparseMatrix<double>& lower, std::vector<int> signs);

  // Mutable slot holding value (i, i) of the matrix in the original order.
  double& diagonal(int i) { return ux_[diag_slot_[i]]; }

  // Returns the number of pivots that had to be replaced.
  int Factor(double pivot_floor, double pivot_value);

  // In place solve with the factored matrix.
  void Solve(Eigen::VectorXd& rhs) const;

  int dimension() const { return n_; }
  long factor_nonzeros() const { return static_cast<long>(li_.size()); }

 private:
  int n_;
  std::vector<int> perm_;  // perm_[old] = new
  std::vector<int> signs_;  // in permuted order
  // Upper triangle of the permuted matrix in compressed columns.
  std::vector<int> up_, ui_;
  std::vector<double> ux_;
  std::vector<int> diag_slot_;
  // Elimination tree and factor.
  std::vector<int> parent_, lp_, lnz_;
  std::vector<int> li_;
  std::vector<double> lx_, d_;
  // Workspace.
  std::vector<double> y_;
  std::vector<int> pattern_, flag_;
};

}  // namespace flexagg::internal

#endif  // FLEXAGG_SRC_SPARSE_LDL_H_
