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
#include "flexagg/policy.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace flexagg {

std::vector<int> EntryMask::Row(int k) const {
  std::vector<int> out;
  for (int n = 1; n <= n_s_; ++n) {
    if (bits_[k * n_s_ + n - 1]) out.push_back(n);
  }
  return out;
}

int EntryMask::Count() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

EntryMask& EntryMask::operator&=(const EntryMask& other) {
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
  return *this;
}

EntryMask& EntryMask::operator|=(const EntryMask& other) {
  for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

int PolicyStructure::RowFirst(int k) const {
  return std::max(1, k - 1 - bandwidth);
}

int PolicyStructure::RowLast(int k) const {
  return std::min(n_s, k - 1 - delay_steps);
}

bool PolicyStructure::Allowed(int k, int n) const {
  return k >= 0 && k <= n_s && n >= RowFirst(k) && n <= RowLast(k);
}

EntryMask PolicyStructure::Mask() const {
  EntryMask m(n_s);
  for (int k = 0; k <= n_s; ++k) {
    for (int n = RowFirst(k); n <= RowLast(k); ++n) m.Set(k, n, true);
  }
  return m;
}

PolicyStructure MakeStructure(const TimeGrid& grid, int bandwidth,
                              double delay_s, bool time_invariant_gamma) {
  PolicyStructure s;
  s.n_s = grid.n_s();
  s.bandwidth = std::max(bandwidth, 0);
  s.delay_steps =
      delay_s > 0.0 ? static_cast<int>(std::ceil(delay_s / grid.ts() - 1e-12))
                    : 0;
  s.time_invariant_gamma = time_invariant_gamma;
  return s;
}

AffinePolicy AffinePolicy::Zero(int n_s, bool with_gamma) {
  AffinePolicy p;
  p.Q = Eigen::MatrixXd::Zero(n_s + 1, n_s);
  p.q = Eigen::VectorXd::Zero(n_s + 1);
  p.gamma = with_gamma ? Eigen::VectorXd::Zero(n_s) : Eigen::VectorXd();
  return p;
}

absl::StatusOr<AffinePolicy> Aggregate(const std::vector<AffinePolicy>& parts) {
  if (parts.empty()) return absl::InvalidArgumentError("nothing to aggregate");
  AffinePolicy sum = parts.front();
  for (size_t j = 1; j < parts.size(); ++j) {
    const AffinePolicy& p = parts[j];
    if (p.Q.rows() != sum.Q.rows() || p.Q.cols() != sum.Q.cols() ||
        p.q.size() != sum.q.size() || p.gamma.size() != sum.gamma.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("policy ", j, " has mismatching dimensions"));
    }
    sum.Q += p.Q;
    sum.q += p.q;
    sum.gamma += p.gamma;
  }
  return sum;
}

namespace {

bool ShapeOk(const AffinePolicy& p, int n_s, std::vector<PolicyViolation>& out) {
  if (p.Q.rows() != n_s + 1 || p.Q.cols() != n_s || p.q.size() != n_s + 1 ||
      (p.gamma.size() != 0 && p.gamma.size() != n_s)) {
    out.push_back({"shape", 0, 0, 0.0});
    return false;
  }
  return true;
}

void CheckGamma(const AffinePolicy& p, bool time_invariant,
                std::vector<PolicyViolation>& out) {
  for (int s = 0; s < p.gamma.size(); ++s) {
    if (p.gamma[s] < 0.0) out.push_back({"gamma_negative", 0, s + 1, p.gamma[s]});
    if (time_invariant && p.gamma[s] != p.gamma[0]) {
      out.push_back({"gamma_varies", 0, s + 1, p.gamma[s] - p.gamma[0]});
    }
  }
}

}  // namespace

std::vector<PolicyViolation> Validate(const AffinePolicy& policy,
                                      const PolicyStructure& structure) {
  std::vector<PolicyViolation> out;
  if (!ShapeOk(policy, structure.n_s, out)) return out;
  for (int k = 0; k <= structure.n_s; ++k) {
    for (int n = 1; n <= structure.n_s; ++n) {
      if (policy.At(k, n) != 0.0 && !structure.Allowed(k, n)) {
        out.push_back({"mask", k, n, policy.At(k, n)});
      }
    }
  }
  CheckGamma(policy, structure.time_invariant_gamma, out);
  return out;
}

std::vector<PolicyViolation> Validate(const AffinePolicy& policy,
                                      const EntryMask& mask) {
  std::vector<PolicyViolation> out;
  if (!ShapeOk(policy, mask.n_s(), out)) return out;
  for (int k = 0; k <= mask.n_s(); ++k) {
    for (int n = 1; n <= mask.n_s(); ++n) {
      if (policy.At(k, n) != 0.0 && !mask.Allowed(k, n)) {
        out.push_back({"mask", k, n, policy.At(k, n)});
      }
    }
  }
  CheckGamma(policy, false, out);
  return out;
}

}  // namespace flexagg
