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

#include "osdp/infoleak.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "osdp/leakage.h"

namespace osdp {
namespace {

double XLogX(double x) { return x > 0 ? x * std::log(x) : 0.0; }

const double kNatsToBase = 1.0 / std::log(kLogBase);

}  // namespace

double BinaryEntropy(double theta) {
  return -(XLogX(theta) + XLogX(1 - theta)) * kNatsToBase;
}

absl::StatusOr<double> MutualInformationSelf(double theta_i,
                                             double epsilon_i) {
  if (auto s = ValidateProbability(theta_i, "theta_i"); !s.ok()) return s;
  if (auto s = ValidateEpsilon(epsilon_i); !s.ok()) return s;
  if (theta_i == 0 || theta_i == 1 || epsilon_i == 0) return 0.0;
  // Given M_i = 1 the record is certainly non-sensitive, so only the
  // suppressed branch carries conditional entropy.
  const double posterior_suppressed =
      Logistic(epsilon_i + LogPriorOdds(theta_i));
  const double p_suppressed = theta_i + std::exp(-epsilon_i) * (1 - theta_i);
  return std::max(0.0, BinaryEntropy(theta_i) -
                           BinaryEntropy(posterior_suppressed) * p_suppressed);
}

absl::StatusOr<double> MutualInformationCross(double theta_j,
                                              const DependencyPair& dep,
                                              double epsilon_i) {
  if (auto s = ValidateProbability(theta_j, "theta_j"); !s.ok()) return s;
  if (theta_j == 0 || theta_j == 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("theta_j must lie strictly inside (0, 1), got ", theta_j));
  }
  if (auto s = ValidateDependency(dep); !s.ok()) return s;
  if (auto s = ValidateEpsilon(epsilon_i); !s.ok()) return s;
  if (epsilon_i == 0) return 0.0;

  const double theta_i = ImpliedSourceTheta(theta_j, dep);
  const double prior_log_odds = LogPriorOdds(theta_j);
  const double p_suppressed = theta_i + std::exp(-epsilon_i) * (1 - theta_i);
  const double p_released = -std::expm1(-epsilon_i) * (1 - theta_i);

  double conditional = BinaryEntropy(Logistic(
                           LogSuppressionFactor(dep, epsilon_i) +
                           prior_log_odds)) *
                       p_suppressed;
  if (p_released > 0) {
    auto release_factor = ReleaseFactor(dep);
    if (!release_factor.ok()) return release_factor.status();
    const double posterior_released =
        *release_factor == 0
            ? 0.0
            : Logistic(std::log(*release_factor) + prior_log_odds);
    conditional += BinaryEntropy(posterior_released) * p_released;
  }
  return std::max(0.0, BinaryEntropy(theta_j) - conditional);
}

absl::StatusOr<LeakageProfile> TotalLeakage(
    const AttributeSpec& attr, std::span<const CrossDependency> deps) {
  if (auto s = ValidateAttribute(attr); !s.ok()) return s;
  LeakageProfile profile;
  profile.attribute_id = attr.id;
  profile.epsilon = attr.epsilon;

  auto self_bits = MutualInformationSelf(attr.theta, attr.epsilon);
  if (!self_bits.ok()) return self_bits.status();
  profile.self_term = LeakageTerm{attr.id, "", *self_bits};
  profile.total = *self_bits;

  for (const CrossDependency& cd : deps) {
    if (cd.dep.source != attr.id) {
      return absl::InvalidArgumentError(absl::StrCat(
          "dependency ", cd.dep.source, " -> ", cd.dep.target,
          " does not originate at attribute '", attr.id, "'"));
    }
    auto bits = MutualInformationCross(cd.theta_j, cd.dep, attr.epsilon);
    if (!bits.ok()) {
      return absl::Status(bits.status().code(),
                          absl::StrCat("dependency ", cd.dep.source, " -> ",
                                       cd.dep.target, ": ",
                                       bits.status().message()));
    }
    profile.cross_terms.push_back(LeakageTerm{attr.id, cd.dep.target, *bits});
    profile.total += *bits;
  }
  return profile;
}

}  // namespace osdp
