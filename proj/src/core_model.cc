// Copyright 2026 The OSDP Leakage Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "osdp/core_model.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace osdp {

absl::StatusOr<QueryCount> QueryCount::Create(int64_t n) {
  if (n < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("query count must be >= 1, got ", n));
  }
  return QueryCount(n);
}

bool IsProbability(double p) { return std::isfinite(p) && p >= 0 && p <= 1; }

absl::Status ValidateProbability(double p, const char* name) {
  if (!IsProbability(p)) {
    return absl::InvalidArgumentError(
        absl::StrCat(name, " must be a probability in [0, 1], got ", p));
  }
  return absl::OkStatus();
}

absl::Status ValidateEpsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "epsilon must be finite and nonnegative, got ", epsilon));
  }
  return absl::OkStatus();
}

absl::Status ValidateAttribute(const AttributeSpec& attr) {
  if (auto s = ValidateProbability(attr.theta, "theta"); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", attr.id, "': ", s.message()));
  }
  if (auto s = ValidateEpsilon(attr.epsilon); !s.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("attribute '", attr.id, "': ", s.message()));
  }
  return absl::OkStatus();
}

absl::Status ValidateDependency(const DependencyPair& dep) {
  if (dep.source == dep.target) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dependency source and target must differ, both are '", dep.source,
        "'"));
  }
  if (auto s = ValidateProbability(dep.delta1, "delta1"); !s.ok()) return s;
  return ValidateProbability(dep.delta2, "delta2");
}

absl::StatusOr<JointDistribution2> JointFromMarginalAndDeps(
    double theta_j, const DependencyPair& dep) {
  if (auto s = ValidateProbability(theta_j, "theta_j"); !s.ok()) return s;
  if (auto s = ValidateDependency(dep); !s.ok()) return s;
  JointDistribution2 joint;
  joint.p00 = dep.delta1 * theta_j;
  joint.p10 = (1 - dep.delta1) * theta_j;
  joint.p01 = dep.delta2 * (1 - theta_j);
  joint.p11 = (1 - dep.delta2) * (1 - theta_j);
  return joint;
}

double ImpliedSourceTheta(double theta_j, const DependencyPair& dep) {
  return dep.delta1 * theta_j + dep.delta2 * (1 - theta_j);
}

bool ValidateConsistency(double theta_i, double theta_j,
                         const DependencyPair& dep, double tol) {
  return std::abs(theta_i - ImpliedSourceTheta(theta_j, dep)) <= tol;
}

bool MutuallyConsistent(double theta_i, double theta_j,
                        const DependencyPair& forward,
                        const DependencyPair& backward, double tol) {
  if (!ValidateConsistency(theta_i, theta_j, forward, tol) ||
      !ValidateConsistency(theta_j, theta_i, backward, tol)) {
    return false;
  }
  // Conditionals of X_j given X_i, read off the forward joint.
  const double p00 = forward.delta1 * theta_j;
  const double p01 = forward.delta2 * (1 - theta_j);
  const double p10 = (1 - forward.delta1) * theta_j;
  const double p11 = (1 - forward.delta2) * (1 - theta_j);
  if (p00 + p01 > 0 &&
      std::abs(p00 / (p00 + p01) - backward.delta1) > tol) {
    return false;
  }
  if (p10 + p11 > 0 &&
      std::abs(p10 / (p10 + p11) - backward.delta2) > tol) {
    return false;
  }
  return true;
}

}  // namespace osdp
