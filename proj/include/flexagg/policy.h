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
#ifndef FLEXAGG_POLICY_H_
#define FLEXAGG_POLICY_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "absl/status/statusor.h"
#include "flexagg/timegrid.h"

namespace flexagg {

// Boolean pattern over the (N_S+1) x N_S entries of a policy matrix.
// Breakpoints k run over [0, N_S] (row m = k + 1), intervals n over [1, N_S].
class EntryMask {
 public:
  EntryMask() = default;
  explicit EntryMask(int n_s, bool value = false)
      : n_s_(n_s), bits_((n_s + 1) * n_s, value ? 1 : 0) {}

  int n_s() const { return n_s_; }
  bool Allowed(int k, int n) const {
    return k >= 0 && k <= n_s_ && n >= 1 && n <= n_s_ &&
           bits_[k * n_s_ + n - 1] != 0;
  }
  void Set(int k, int n, bool value) { bits_[k * n_s_ + n - 1] = value; }
  // Allowed n of breakpoint k in increasing order.
  std::vector<int> Row(int k) const;
  int Count() const;

  EntryMask& operator&=(const EntryMask& other);
  EntryMask& operator|=(const EntryMask& other);

 private:
  int n_s_ = 0;
  std::vector<unsigned char> bits_;
};

// Structural restrictions on one resource's policy: causality, delay and
// the band of recent measurements.
struct PolicyStructure {
  int n_s = 0;
  int bandwidth = 4;
  int delay_steps = 0;
  bool time_invariant_gamma = true;
  bool symmetric_gamma = true;

  // Entry (k, n) may be nonzero iff k - 1 - bandwidth <= n <= k - 1 -
  // delay_steps.
  bool Allowed(int k, int n) const;
  // First and last allowed n for breakpoint k; first > last when none.
  int RowFirst(int k) const;
  int RowLast(int k) const;
  EntryMask Mask() const;
};

PolicyStructure MakeStructure(const TimeGrid& grid, int bandwidth,
                              double delay_s, bool time_invariant_gamma);

// Breakpoints p = Q w + q with w the interval-average activations. Q is
// stored as Q(k, n - 1). gamma is empty for market policies.
struct AffinePolicy {
  Eigen::MatrixXd Q;
  Eigen::VectorXd q;
  Eigen::VectorXd gamma;

  static AffinePolicy Zero(int n_s, bool with_gamma = true);
  int n_s() const { return static_cast<int>(Q.cols()); }
  double At(int k, int n) const { return Q(k, n - 1); }
  Eigen::VectorXd Breakpoints(const Eigen::VectorXd& w_avg) const {
    return Q * w_avg + q;
  }
};

absl::StatusOr<AffinePolicy> Aggregate(const std::vector<AffinePolicy>& parts);

struct PolicyViolation {
  std::string what;  // "mask", "gamma_negative", "gamma_varies", "shape"
  int k = 0;
  int n = 0;
  double value = 0.0;
};

std::vector<PolicyViolation> Validate(const AffinePolicy& policy,
                                      const PolicyStructure& structure);
std::vector<PolicyViolation> Validate(const AffinePolicy& policy,
                                      const EntryMask& mask);

}  // namespace flexagg

#endif  // FLEXAGG_POLICY_H_
