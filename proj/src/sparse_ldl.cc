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

#include "sparse_ldl.h"

#include <Eigen/OrderingMethods>
#include <algorithm>
#include <cmath>

namespace flexagg::internal {

SparseLdl::SparseLdl(const Eigen::SparseMatrix<double>& lower,
                     std::vector<int> signs)
    : n_(static_cast<int>(lower.rows())) {
  Eigen::SparseMatrix<double> full = lower;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pinv;
  Eigen::AMDOrdering<int> amd;
  amd(full, pinv);
  const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p =
      pinv.inverse();
  perm_.assign(p.indices().data(), p.indices().data() + n_);
  signs_.assign(n_, 1);
  for (int i = 0; i < n_; ++i) signs_[perm_[i]] = signs[i];

  // Permuted upper triangle: entry (i, j) with i >= j lands at
  // (min(pi, pj), max(pi, pj)).
  struct Entry {
    int row, col, src;
  };
  std::vector<Entry> entries;
  entries.reserve(lower.nonZeros());
  std::vector<double> src_val;
  src_val.reserve(lower.nonZeros());
  std::vector<int> src_diag(n_, -1);
  for (int j = 0; j < lower.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(lower, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (i < j) continue;
      const int pi = perm_[i];
      const int pj = perm_[j];
      const int src = static_cast<int>(src_val.size());
      src_val.push_back(it.value());
      entries.push_back({std::min(pi, pj), std::max(pi, pj), src});
      if (i == j) src_diag[i] = src;
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  up_.assign(n_ + 1, 0);
  ui_.resize(entries.size());
  ux_.resize(entries.size());
  std::vector<int> slot_of_src(src_val.size());
  for (size_t t = 0; t < entries.size(); ++t) {
    ++up_[entries[t].col + 1];
    ui_[t] = entries[t].row;
    ux_[t] = src_val[entries[t].src];
    slot_of_src[entries[t].src] = static_cast<int>(t);
  }
  for (int k = 0; k < n_; ++k) up_[k + 1] += up_[k];
  diag_slot_.assign(n_, -1);
  for (int i = 0; i < n_; ++i) {
    diag_slot_[i] = src_diag[i] >= 0 ? slot_of_src[src_diag[i]] : -1;
  }

  // Elimination tree and column counts.
  parent_.assign(n_, -1);
  lnz_.assign(n_, 0);
  flag_.assign(n_, -1);
  for (int k = 0; k < n_; ++k) {
    flag_[k] = k;
    for (int q = up_[k]; q < up_[k + 1]; ++q) {
      int i = ui_[q];
      if (i >= k) continue;
      for (; flag_[i] != k; i = parent_[i]) {
        if (parent_[i] == -1) parent_[i] = k;
        ++lnz_[i];
        flag_[i] = k;
      }
    }
  }
  lp_.assign(n_ + 1, 0);
  for (int k = 0; k < n_; ++k) lp_[k + 1] = lp_[k] + lnz_[k];
  li_.resize(lp_[n_]);
  lx_.resize(lp_[n_]);
  d_.assign(n_, 0.0);
  y_.assign(n_, 0.0);
  pattern_.assign(n_, 0);
}

int SparseLdl::Factor(double pivot_floor, double pivot_value) {
  int replaced = 0;
  std::fill(lnz_.begin(), lnz_.end(), 0);
  std::fill(flag_.begin(), flag_.end(), -1);
  for (int k = 0; k < n_; ++k) {
    y_[k] = 0.0;
    int top = n_;
    flag_[k] = k;
    for (int q = up_[k]; q < up_[k + 1]; ++q) {
      int i = ui_[q];
      y_[i] += ux_[q];
      int len = 0;
      for (; flag_[i] != k; i = parent_[i]) {
        pattern_[len++] = i;
        flag_[i] = k;
      }
      while (len > 0) pattern_[--top] = pattern_[--len];
    }
    double dk = y_[k];
    y_[k] = 0.0;
    for (; top < n_; ++top) {
      const int i = pattern_[top];
      const double yi = y_[i];
      y_[i] = 0.0;
      const int end = lp_[i] + lnz_[i];
      for (int q = lp_[i]; q < end; ++q) y_[li_[q]] -= lx_[q] * yi;
      const double lki = yi / d_[i];
      dk -= lki * yi;
      li_[end] = k;
      lx_[end] = lki;
      ++lnz_[i];
    }
    if (!(signs_[k] * dk >= pivot_floor)) {
      dk = signs_[k] * pivot_value;
      ++replaced;
    }
    d_[k] = dk;
  }
  return replaced;
}

void SparseLdl::Solve(Eigen::VectorXd& rhs) const {
  Eigen::VectorXd x(n_);
  for (int i = 0; i < n_; ++i) x[perm_[i]] = rhs[i];
  for (int j = 0; j < n_; ++j) {
    const double xj = x[j];
    for (int q = lp_[j]; q < lp_[j + 1]; ++q) x[li_[q]] -= lx_[q] * xj;
  }
  for (int j = 0; j < n_; ++j) x[j] /= d_[j];
  for (int j = n_ - 1; j >= 0; --j) {
    double xj = x[j];
    for (int q = lp_[j]; q < lp_[j + 1]; ++q) xj -= lx_[q] * x[li_[q]];
    x[j] = xj;
  }
  for (int i = 0; i < n_; ++i) rhs[i] = x[perm_[i]];
}

}  // namespace flexagg::internal
