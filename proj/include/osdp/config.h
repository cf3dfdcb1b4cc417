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

// JSON run configuration.
//
//   {
//     "attributes":   [{"id": "start_time", "theta": 0.4, "epsilon": 0.7}],
//     "dependencies": [{"source": "start_time", "target": "exit_count",
//                       "delta1": 0.8, "delta2": 0.2}],
//     "policy":       [{"attribute": "start_time", "comparator": ">",
//                       "threshold": "09:00"}],
//     "budget":       {"T": 0.4, "epsilon_max": 10, "tol": 0.001},
//     "scenarios":    {"n_queries": 4,
//                      "collusion_pairs": [["start_time", "exit_count"]]},
//     "work_hours":   {"start": "08:00", "end": "17:00"},
//     "day_start":    "00:00",
//     "input":        "occupancy.csv",
//     "seed":         7
//   }
//
// "dependencies" may instead be {"estimate": true, "pairs": [[i, j], ...]};
// without "pairs" every ordered pair of attributes is estimated. Attributes
// without "theta" are estimated from "input". "input" is resolved relative to
// the config file's directory.

#ifndef OSDP_CONFIG_H_
#define OSDP_CONFIG_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "osdp/core_model.h"
#include "osdp/mechanism.h"
#include "osdp/occupancy.h"
#include "osdp/policy.h"

namespace osdp::pipeline {

struct AttributeConfig {
  std::string id;
  std::optional<double> theta;
  std::optional<double> epsilon;
};

struct BudgetConfig {
  double budget_bits = 0.0;
  double epsilon_max = 10.0;
  double tol = 1e-3;
};

struct ScenarioConfig {
  int64_t n_queries = 1;
  std::vector<std::pair<std::string, std::string>> collusion_pairs;
};

struct ReportConfig {
  std::vector<AttributeConfig> attributes;
  std::vector<DependencyPair> dependencies;
  bool estimate_dependencies = false;
  // Pairs to estimate; empty means every ordered pair.
  std::vector<std::pair<std::string, std::string>> estimate_pairs;
  std::vector<PolicyRule> policy;
  std::optional<BudgetConfig> budget;
  ScenarioConfig scenarios;
  ExtractionOptions extraction;
  std::optional<std::string> input;
  RngSeed seed = 0;
};

absl::StatusOr<ReportConfig> ParseConfig(absl::string_view json_text,
                                         const std::string& base_dir = "");
absl::StatusOr<ReportConfig> LoadConfig(const std::string& path);

}  // namespace osdp::pipeline

#endif  // OSDP_CONFIG_H_
