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

#include "osdp/policy.h"

#include <cmath>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"

namespace osdp::pipeline {

std::optional<AttributeKind> FindAttributeKind(absl::string_view name) {
  for (const AttributeInfo& info : kExtractedAttributes) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

std::optional<double> AttributeValue(const ExtractedAttributes& attrs,
                                     absl::string_view name) {
  auto as_double = [](const auto& opt) -> std::optional<double> {
    if (!opt.has_value()) return std::nullopt;
    return static_cast<double>(*opt);
  };
  if (name == "start_time") return as_double(attrs.start_time);
  if (name == "end_time") return as_double(attrs.end_time);
  if (name == "exit_count") return static_cast<double>(attrs.exit_count);
  if (name == "mean_away_minutes") return attrs.mean_away_minutes;
  if (name == "occupancy_fraction") return attrs.occupancy_fraction;
  return std::nullopt;
}

absl::StatusOr<Comparator> ParseComparator(absl::string_view text) {
  if (text == "<") return Comparator::kLess;
  if (text == ">") return Comparator::kGreater;
  if (text == "<=" || text == "≤") return Comparator::kLessEqual;
  if (text == ">=" || text == "≥") return Comparator::kGreaterEqual;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown comparator '", text, "', expected <, >, <= or >="));
}

const char* ComparatorSymbol(Comparator c) {
  switch (c) {
    case Comparator::kLess:
      return "<";
    case Comparator::kGreater:
      return ">";
    case Comparator::kLessEqual:
      return "<=";
    case Comparator::kGreaterEqual:
      return ">=";
  }
  return "?";
}

absl::Status ValidateRule(const PolicyRule& rule) {
  if (!FindAttributeKind(rule.attribute).has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy rule references unknown attribute '", rule.attribute, "'"));
  }
  if (!std::isfinite(rule.threshold)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy rule on '", rule.attribute, "' has a non-finite threshold"));
  }
  return absl::OkStatus();
}

absl::StatusOr<PolicyRule> MakeRule(absl::string_view attribute,
                                    absl::string_view comparator,
                                    absl::string_view threshold) {
  auto kind = FindAttributeKind(attribute);
  if (!kind.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy rule references unknown attribute '", attribute, "'"));
  }
  if (*kind == AttributeKind::kTimeOfDay) {
    auto cmp = ParseComparator(comparator);
    if (!cmp.ok()) return cmp.status();
    auto seconds = ParseTimeOfDay(threshold);
    if (!seconds.ok()) return seconds.status();
    return PolicyRule{std::string(attribute), *cmp,
                      static_cast<double>(*seconds)};
  }
  double value;
  if (!absl::SimpleAtod(threshold, &value)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute '", attribute, "' needs a numeric threshold, got '",
        threshold, "'"));
  }
  return MakeRule(attribute, comparator, value);
}

absl::StatusOr<PolicyRule> MakeRule(absl::string_view attribute,
                                    absl::string_view comparator,
                                    double threshold) {
  auto kind = FindAttributeKind(attribute);
  if (!kind.has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "policy rule references unknown attribute '", attribute, "'"));
  }
  if (*kind == AttributeKind::kTimeOfDay) {
    return absl::InvalidArgumentError(absl::StrCat(
        "attribute '", attribute, "' needs an HH:MM threshold"));
  }
  auto cmp = ParseComparator(comparator);
  if (!cmp.ok()) return cmp.status();
  PolicyRule rule{std::string(attribute), *cmp, threshold};
  if (auto s = ValidateRule(rule); !s.ok()) return s;
  return rule;
}

absl::StatusOr<std::vector<LabeledRecord>> LabelSensitivity(
    std::span<const ExtractedAttributes> records,
    std::span<const PolicyRule> rules) {
  for (const PolicyRule& rule : rules) {
    if (auto s = ValidateRule(rule); !s.ok()) return s;
  }
  auto matches = [](const PolicyRule& rule, double value) {
    switch (rule.comparator) {
      case Comparator::kLess:
        return value < rule.threshold;
      case Comparator::kGreater:
        return value > rule.threshold;
      case Comparator::kLessEqual:
        return value <= rule.threshold;
      case Comparator::kGreaterEqual:
        return value >= rule.threshold;
    }
    return false;
  };

  std::vector<LabeledRecord> out;
  out.reserve(records.size());
  for (const ExtractedAttributes& r : records) {
    LabeledRecord labeled{r.space_id, r.day, {}};
    for (const AttributeInfo& info : kExtractedAttributes) {
      labeled.labels[std::string(info.name)] =
          SensitivityIndicator::kNonSensitive;
    }
    for (const PolicyRule& rule : rules) {
      const std::optional<double> value = AttributeValue(r, rule.attribute);
      if (value.has_value() && matches(rule, *value)) {
        labeled.labels[rule.attribute] = SensitivityIndicator::kSensitive;
      }
    }
    out.push_back(std::move(labeled));
  }
  return out;
}

}  // namespace osdp::pipeline
