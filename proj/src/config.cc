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

#include "osdp/config.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace osdp::pipeline {
namespace {

using nlohmann::json;

absl::Status ConfigError(absl::string_view where, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("config ", where, ": ", what));
}

absl::Status CheckKeys(const json& obj, absl::string_view where,
                       const std::set<std::string>& allowed) {
  if (!obj.is_object()) return ConfigError(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      return ConfigError(where, absl::StrCat("unknown key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> GetNumber(const json& obj, const std::string& key,
                                 absl::string_view where) {
  if (!obj.contains(key)) {
    return ConfigError(where, absl::StrCat("missing '", key, "'"));
  }
  if (!obj[key].is_number()) {
    return ConfigError(where, absl::StrCat("'", key, "' must be a number"));
  }
  return obj[key].get<double>();
}

absl::StatusOr<std::string> GetString(const json& obj, const std::string& key,
                                      absl::string_view where) {
  if (!obj.contains(key)) {
    return ConfigError(where, absl::StrCat("missing '", key, "'"));
  }
  if (!obj[key].is_string()) {
    return ConfigError(where, absl::StrCat("'", key, "' must be a string"));
  }
  return obj[key].get<std::string>();
}

absl::StatusOr<std::vector<std::pair<std::string, std::string>>> GetPairs(
    const json& value, absl::string_view where) {
  if (!value.is_array()) return ConfigError(where, "expected a list of pairs");
  std::vector<std::pair<std::string, std::string>> out;
  for (const json& p : value) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() ||
        !p[1].is_string()) {
      return ConfigError(where, "each pair must be [\"source\", \"target\"]");
    }
    out.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
  }
  return out;
}

absl::Status ParseAttributes(const json& value, ReportConfig& config) {
  if (!value.is_array()) return ConfigError("attributes", "expected a list");
  std::set<std::string> seen;
  for (size_t k = 0; k < value.size(); ++k) {
    const std::string where = absl::StrCat("attributes[", k, "]");
    const json& a = value[k];
    if (auto s = CheckKeys(a, where, {"id", "theta", "epsilon"}); !s.ok()) {
      return s;
    }
    AttributeConfig attr;
    auto id = GetString(a, "id", where);
    if (!id.ok()) return id.status();
    attr.id = *id;
    if (!seen.insert(attr.id).second) {
      return ConfigError(where, absl::StrCat("duplicate id '", attr.id, "'"));
    }
    if (a.contains("theta")) {
      auto theta = GetNumber(a, "theta", where);
      if (!theta.ok()) return theta.status();
      if (auto s = ValidateProbability(*theta, "theta"); !s.ok()) {
        return ConfigError(where, s.message());
      }
      attr.theta = *theta;
    }
    if (a.contains("epsilon")) {
      auto eps = GetNumber(a, "epsilon", where);
      if (!eps.ok()) return eps.status();
      if (auto s = ValidateEpsilon(*eps); !s.ok()) {
        return ConfigError(where, s.message());
      }
      attr.epsilon = *eps;
    }
    config.attributes.push_back(std::move(attr));
  }
  return absl::OkStatus();
}

absl::Status ParseDependencies(const json& value, ReportConfig& config) {
  if (value.is_object()) {
    if (auto s = CheckKeys(value, "dependencies", {"estimate", "pairs"});
        !s.ok()) {
      return s;
    }
    if (!value.contains("estimate") || !value["estimate"].is_boolean()) {
      return ConfigError("dependencies", "expected {\"estimate\": true}");
    }
    config.estimate_dependencies = value["estimate"].get<bool>();
    if (value.contains("pairs")) {
      auto pairs = GetPairs(value["pairs"], "dependencies.pairs");
      if (!pairs.ok()) return pairs.status();
      config.estimate_pairs = *std::move(pairs);
    }
    return absl::OkStatus();
  }
  if (!value.is_array()) {
    return ConfigError("dependencies",
                       "expected a list or {\"estimate\": true}");
  }
  for (size_t k = 0; k < value.size(); ++k) {
    const std::string where = absl::StrCat("dependencies[", k, "]");
    const json& d = value[k];
    if (auto s = CheckKeys(d, where, {"source", "target", "delta1", "delta2"});
        !s.ok()) {
      return s;
    }
    DependencyPair dep;
    auto source = GetString(d, "source", where);
    if (!source.ok()) return source.status();
    auto target = GetString(d, "target", where);
    if (!target.ok()) return target.status();
    auto d1 = GetNumber(d, "delta1", where);
    if (!d1.ok()) return d1.status();
    auto d2 = GetNumber(d, "delta2", where);
    if (!d2.ok()) return d2.status();
    dep = DependencyPair{*source, *target, *d1, *d2};
    if (auto s = ValidateDependency(dep); !s.ok()) {
      return ConfigError(where, s.message());
    }
    config.dependencies.push_back(std::move(dep));
  }
  return absl::OkStatus();
}

absl::Status ParsePolicy(const json& value, ReportConfig& config) {
  if (!value.is_array()) return ConfigError("policy", "expected a list");
  for (size_t k = 0; k < value.size(); ++k) {
    const std::string where = absl::StrCat("policy[", k, "]");
    const json& r = value[k];
    if (auto s = CheckKeys(r, where, {"attribute", "comparator", "threshold"});
        !s.ok()) {
      return s;
    }
    auto attribute = GetString(r, "attribute", where);
    if (!attribute.ok()) return attribute.status();
    auto comparator = GetString(r, "comparator", where);
    if (!comparator.ok()) return comparator.status();
    if (!r.contains("threshold")) return ConfigError(where, "missing threshold");
    absl::StatusOr<PolicyRule> rule =
        r["threshold"].is_string()
            ? MakeRule(*attribute, *comparator,
                       r["threshold"].get<std::string>())
        : r["threshold"].is_number()
            ? MakeRule(*attribute, *comparator, r["threshold"].get<double>())
            : absl::InvalidArgumentError("threshold must be a string or number");
    if (!rule.ok()) return ConfigError(where, rule.status().message());
    config.policy.push_back(*std::move(rule));
  }
  return absl::OkStatus();
}

absl::Status ParseBudget(const json& value, ReportConfig& config) {
  if (auto s = CheckKeys(value, "budget", {"T", "epsilon_max", "tol"});
      !s.ok()) {
    return s;
  }
  BudgetConfig budget;
  auto t = GetNumber(value, "T", "budget");
  if (!t.ok()) return t.status();
  budget.budget_bits = *t;
  if (value.contains("epsilon_max")) {
    auto v = GetNumber(value, "epsilon_max", "budget");
    if (!v.ok()) return v.status();
    budget.epsilon_max = *v;
  }
  if (value.contains("tol")) {
    auto v = GetNumber(value, "tol", "budget");
    if (!v.ok()) return v.status();
    budget.tol = *v;
  }
  if (!(budget.budget_bits >= 0) || !(budget.epsilon_max > 0) ||
      !(budget.tol > 0)) {
    return ConfigError("budget", "need T >= 0, epsilon_max > 0 and tol > 0");
  }
  config.budget = budget;
  return absl::OkStatus();
}

absl::Status ParseScenarios(const json& value, ReportConfig& config) {
  if (auto s = CheckKeys(value, "scenarios", {"n_queries", "collusion_pairs"});
      !s.ok()) {
    return s;
  }
  if (value.contains("n_queries")) {
    if (!value["n_queries"].is_number_integer() ||
        value["n_queries"].get<int64_t>() < 1) {
      return ConfigError("scenarios", "'n_queries' must be an integer >= 1");
    }
    config.scenarios.n_queries = value["n_queries"].get<int64_t>();
  }
  if (value.contains("collusion_pairs")) {
    auto pairs =
        GetPairs(value["collusion_pairs"], "scenarios.collusion_pairs");
    if (!pairs.ok()) return pairs.status();
    config.scenarios.collusion_pairs = *std::move(pairs);
  }
  return absl::OkStatus();
}

absl::Status ParseWorkHours(const json& value, ReportConfig& config) {
  if (auto s = CheckKeys(value, "work_hours", {"start", "end"}); !s.ok()) {
    return s;
  }
  WorkHours hours;
  for (const char* key : {"start", "end"}) {
    if (!value.contains(key)) continue;
    auto text = GetString(value, key, "work_hours");
    if (!text.ok()) return text.status();
    auto seconds = ParseTimeOfDay(*text);
    if (!seconds.ok()) return ConfigError("work_hours", seconds.status().message());
    (absl::string_view(key) == "start" ? hours.start_seconds
                                      : hours.end_seconds) = *seconds;
  }
  if (auto s = ValidateWorkHours(hours); !s.ok()) {
    return ConfigError("work_hours", s.message());
  }
  config.extraction.work_hours = hours;
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ReportConfig> ParseConfig(absl::string_view json_text,
                                         const std::string& base_dir) {
  const json root = json::parse(json_text.begin(), json_text.end(), nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("config is not valid JSON");
  }
  if (auto s = CheckKeys(root, "root",
                         {"attributes", "dependencies", "policy", "budget",
                          "scenarios", "work_hours", "day_start", "input",
                          "seed"});
      !s.ok()) {
    return s;
  }
  ReportConfig config;
  if (root.contains("attributes")) {
    if (auto s = ParseAttributes(root["attributes"], config); !s.ok()) return s;
  }
  if (root.contains("dependencies")) {
    if (auto s = ParseDependencies(root["dependencies"], config); !s.ok()) {
      return s;
    }
  }
  if (root.contains("policy")) {
    if (auto s = ParsePolicy(root["policy"], config); !s.ok()) return s;
  }
  if (root.contains("budget")) {
    if (auto s = ParseBudget(root["budget"], config); !s.ok()) return s;
  }
  if (root.contains("scenarios")) {
    if (auto s = ParseScenarios(root["scenarios"], config); !s.ok()) return s;
  }
  if (root.contains("work_hours")) {
    if (auto s = ParseWorkHours(root["work_hours"], config); !s.ok()) return s;
  }
  if (root.contains("day_start")) {
    auto text = GetString(root, "day_start", "root");
    if (!text.ok()) return text.status();
    auto seconds = ParseTimeOfDay(*text);
    if (!seconds.ok() || *seconds >= 24 * 3600) {
      return ConfigError("day_start", "expected HH:MM before 24:00");
    }
    config.extraction.day_start_seconds = *seconds;
  }
  if (root.contains("input")) {
    auto input = GetString(root, "input", "root");
    if (!input.ok()) return input.status();
    std::filesystem::path path(*input);
    if (path.is_relative() && !base_dir.empty()) {
      path = std::filesystem::path(base_dir) / path;
    }
    config.input = path.string();
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      return ConfigError("seed", "must be a nonnegative integer");
    }
    config.seed = root["seed"].get<uint64_t>();
  }
  return config;
}

absl::StatusOr<ReportConfig> LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string dir =
      std::filesystem::path(path).parent_path().string();
  auto config = ParseConfig(buffer.str(), dir);
  if (!config.ok()) {
    return absl::Status(config.status().code(),
                        absl::StrCat(path, ": ", config.status().message()));
  }
  return config;
}

}  // namespace osdp::pipeline
