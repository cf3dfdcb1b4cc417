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

// Mutual-information leakage of a mechanism output M_i about the sensitivity
// of its own record (X_i) and of dependent records (X_j). All values are in
// bits.
//
// The per-attribute leakage functional is
//   I_i(eps_i) = I(X_i; M_i) + sum over declared targets j of I(X_j; M_i),
// with targets taken from the dependency pairs whose source is i. When both
// (i, j) and (j, i) are declared, the shared information is counted once in
// I_i and once in I_j.

#ifndef OSDP_INFOLEAK_H_
#define OSDP_INFOLEAK_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "osdp/core_model.h"

namespace osdp {

// Entropies are reported in bits.
inline constexpr double kLogBase = 2.0;

struct LeakageTerm {
  std::string source;
  // Empty for the self term.
  std::string target;
  double bits = 0.0;
};

struct LeakageProfile {
  std::string attribute_id;
  double epsilon = 0.0;
  LeakageTerm self_term;
  std::vector<LeakageTerm> cross_terms;
  double total = 0.0;
};

// A dependency of the attribute under study on target j, with j's prior.
struct CrossDependency {
  double theta_j = 0.5;
  DependencyPair dep;
};

// H2(theta) in bits, with 0 log 0 = 0. Requires theta in [0, 1].
double BinaryEntropy(double theta);

// I(X_i; M_i).
absl::StatusOr<double> MutualInformationSelf(double theta_i, double epsilon_i);

// I(X_j; M_i), with P(X_i = 0) taken from the marginal implied by dep.
absl::StatusOr<double> MutualInformationCross(double theta_j,
                                              const DependencyPair& dep,
                                              double epsilon_i);

absl::StatusOr<LeakageProfile> TotalLeakage(
    const AttributeSpec& attr, std::span<const CrossDependency> deps);

}  // namespace osdp

#endif  // OSDP_INFOLEAK_H_
