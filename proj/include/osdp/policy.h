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

// Threshold policies that classify extracted attributes as sensitive.

#ifndef OSDP_POLICY_H_
#define OSDP_POLICY_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/strings/string_view.h"
#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "osdp/core_model.h"
#include "osdp/occupancy.h"

namespace osdp::pipeline {

enum class AttributeKind { kTimeOfDay, kNumber };

struct AttributeInfo {
  absl::string_view name;
  AttributeKind kind;
};

inline constexpr std::array<AttributeInfo, 5> kExtractedAttributes = {{
    {"start_time", AttributeKind::kTimeOfDay},
    {"end_time", AttributeKind::kTimeOfDay},
    {"exit_count", AttributeKind::kNumber},
    {"mean_away_minutes", AttributeKind::kNumber},
    {"occupancy_fraction", AttributeKind::kNumber},
}};

std::optional<AttributeKind> FindAttributeKind(absl::string_view name);

// Value of a named attribute in its native unit (seconds since midnight for
// times of day), or nullopt when the day has no value for it.
std::optional<double> AttributeValue(const ExtractedAttributes& attrs,
                                     absl::string_view name);

enum class Comparator { kLess, kGreater, kLessEqual, kGreaterEqual };

absl::StatusOr<Comparator> ParseComparator(absl::string_view text);
const char* ComparatorSymbol(Comparator c);

// A record whose attribute satisfies `value <comparator> threshold` is
// sensitive. Thresholds are stored in the attribute's native unit.
struct PolicyRule {
  std::string attribute;
  Comparator comparator = Comparator::kGreater;
  double threshold = 0.0;
};

absl::Status ValidateRule(const PolicyRule& rule);

// Builds a rule from text, e.g. ("start_time", ">", "09:00").
absl::StatusOr<PolicyRule> MakeRule(absl::string_view attribute,
                                    absl::string_view comparator,
                                    absl::string_view threshold);
absl::StatusOr<PolicyRule> MakeRule(absl::string_view attribute,
                                    absl::string_view comparator,
                                    double threshold);

struct LabeledRecord {
  std::string space_id;
  absl::CivilDay day;
  // One indicator per extracted attribute name.
  std::map<std::string, SensitivityIndicator> labels;
};

// X = sensitive iff some rule on that attribute matches; attributes without
// rules, or without a value on that day, are non-sensitive.
absl::StatusOr<std::vector<LabeledRecord>> LabelSensitivity(
    std::span<const ExtractedAttributes> records,
    std::span<const PolicyRule> rules);

}  // namespace osdp::pipeline

#endif  // OSDP_POLICY_H_
