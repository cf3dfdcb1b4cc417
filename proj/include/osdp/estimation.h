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

// Empirical priors and pairwise dependencies from labeled records, with
// add-one smoothing:
//
//   theta_i = (#{X_i = 0} + 1) / (N + 2)
//   delta1  = (#{X_i = 0, X_j = 0} + 1) / (#{X_j = 0} + 2)
//   delta2  = (#{X_i = 0, X_j = 1} + 1) / (#{X_j = 1} + 2)

#ifndef OSDP_ESTIMATION_H_
#define OSDP_ESTIMATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "osdp/core_model.h"
#include "osdp/policy.h"

namespace osdp::pipeline {

inline constexpr double kSmoothing = 1.0;
// Empirical estimates only need to agree loosely with the consistency
// identity; disagreement beyond this is reported as a warning.
inline constexpr double kEstimateConsistencyTol = 0.05;

struct ParameterEstimate {
  double theta_i = 0.5;
  double theta_j = 0.5;
  DependencyPair dep;
  uint64_t records = 0;
  uint64_t target_sensitive = 0;
  uint64_t target_nonsensitive = 0;
  bool consistent = true;
  std::vector<std::string> warnings;
};

// Smoothed frequency of X = 0.
double EstimateTheta(uint64_t sensitive, uint64_t total);

// Estimates from co-observed (X_i, X_j) pairs. Fails with
// kFailedPrecondition on an empty sample.
absl::StatusOr<ParameterEstimate> EstimateFromPairs(
    std::span<const std::pair<SensitivityIndicator, SensitivityIndicator>>
        pairs,
    const std::string& source, const std::string& target);

absl::StatusOr<ParameterEstimate> EstimateParameters(
    std::span<const LabeledRecord> records, const std::string& source,
    const std::string& target);

}  // namespace osdp::pipeline

#endif  // OSDP_ESTIMATION_H_
