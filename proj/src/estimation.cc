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

#include "osdp/estimation.h"

#include "absl/strings/str_cat.h"

namespace osdp::pipeline {

double EstimateTheta(uint64_t sensitive, uint64_t total) {
  return (static_cast<double>(sensitive) + kSmoothing) /
         (static_cast<double>(total) + 2 * kSmoothing);
}

absl::StatusOr<ParameterEstimate> EstimateFromPairs(
    std::span<const std::pair<SensitivityIndicator, SensitivityIndicator>>
        pairs,
    const std::string& source, const std::string& target) {
  if (source == target) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot estimate a dependency of '", source,
                     "' on itself"));
  }
  if (pairs.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "insufficient data: no co-observed records for ", source, " -> ",
        target));
  }
  // counts[x_i][x_j]
  uint64_t counts[2][2] = {{0, 0}, {0, 0}};
  for (const auto& [x_i, x_j] : pairs) ++counts[ToBit(x_i)][ToBit(x_j)];

  ParameterEstimate e;
  e.records = pairs.size();
  e.target_sensitive = counts[0][0] + counts[1][0];
  e.target_nonsensitive = counts[0][1] + counts[1][1];
  e.theta_i = EstimateTheta(counts[0][0] + counts[0][1], e.records);
  e.theta_j = EstimateTheta(e.target_sensitive, e.records);
  e.dep.source = source;
  e.dep.target = target;
  e.dep.delta1 = EstimateTheta(counts[0][0], e.target_sensitive);
  e.dep.delta2 = EstimateTheta(counts[0][1], e.target_nonsensitive);

  if (e.target_sensitive == 0) {
    e.warnings.push_back(absl::StrCat(
        "insufficient data: '", target,
        "' is never sensitive; delta1 is the smoothing prior only"));
  }
  if (e.target_nonsensitive == 0) {
    e.warnings.push_back(absl::StrCat(
        "insufficient data: '", target,
        "' is always sensitive; delta2 is the smoothing prior only"));
  }
  e.consistent =
      ValidateConsistency(e.theta_i, e.theta_j, e.dep, kEstimateConsistencyTol);
  if (!e.consistent) {
    e.warnings.push_back(absl::StrCat(
        "estimates for ", source, " -> ", target,
        " disagree with the marginal identity by more than ",
        kEstimateConsistencyTol));
  }
  return e;
}

absl::StatusOr<ParameterEstimate> EstimateParameters(
    std::span<const LabeledRecord> records, const std::string& source,
    const std::string& target) {
  std::vector<std::pair<SensitivityIndicator, SensitivityIndicator>> pairs;
  pairs.reserve(records.size());
  for (const LabeledRecord& r : records) {
    auto i = r.labels.find(source);
    auto j = r.labels.find(target);
    if (i == r.labels.end() || j == r.labels.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "labeled records have no attribute '",
          i == r.labels.end() ? source : target, "'"));
    }
    pairs.emplace_back(i->second, j->second);
  }
  return EstimateFromPairs(pairs, source, target);
}

}  // namespace osdp::pipeline
