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

// End-to-end report assembly and rendering.
//
// Every output is a Document: ordered metadata plus named tables. JSON and CSV
// renderings carry the same cells; numbers are printed with 12 significant
// digits in both.

#ifndef OSDP_REPORT_H_
#define OSDP_REPORT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "osdp/config.h"
#include "osdp/estimation.h"
#include "osdp/infoleak.h"
#include "osdp/leakage.h"
#include "osdp/occupancy.h"
#include "osdp/optimizer.h"
#include "osdp/oracle.h"
#include "osdp/policy.h"

namespace osdp::pipeline {

// Monostate renders as JSON null and an empty CSV field.
using Cell = std::variant<std::monostate, std::string, int64_t, double>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Document {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<Table> tables;
};

enum class OutputFormat { kJson, kCsv };

absl::StatusOr<OutputFormat> ParseOutputFormat(absl::string_view text);

// "%.12g"; non-finite values become "inf", "-inf" or "nan".
std::string FormatNumber(double value);

std::string RenderJson(const Document& doc);
std::string RenderCsv(const Document& doc);
std::string Render(const Document& doc, OutputFormat format);

// Where a reported parameter came from.
inline constexpr char kFromConfig[] = "config";
inline constexpr char kFromData[] = "estimated";
inline constexpr char kFromAllocation[] = "allocated";

struct AttributeReport {
  std::string id;
  double theta = 0.5;
  std::string theta_source;
  double epsilon = 0.0;
  std::string epsilon_source;
  LeakageProfile profile;
};

struct DependencyReport {
  DependencyPair dep;
  std::string origin;
  bool consistent = true;
};

// One evidence scenario. `subject` is the attribute whose sensitivity is
// inferred; `observed` the attribute(s) whose releases are seen.
struct PosteriorRow {
  std::string subject;
  std::string observed;
  std::string scenario;
  PosteriorRatio ratio = PosteriorRatio::Zero();
  double posterior = 0.0;
};

struct LeakageReport {
  RngSeed seed = 0;
  int64_t n_queries = 1;
  std::optional<uint64_t> input_records;
  std::vector<AttributeReport> attributes;
  std::vector<DependencyReport> dependencies;
  std::vector<PosteriorRow> posteriors;
  std::optional<BudgetConfig> budget;
  std::optional<Allocation> allocation;
  std::vector<std::string> warnings;
};

// Extracted, labeled per-day records from the configured input.
struct LabeledData {
  std::vector<ExtractedAttributes> records;
  std::vector<LabeledRecord> labels;
};

absl::StatusOr<LabeledData> LoadLabeledData(const ReportConfig& config);

// Resolves priors, dependencies and epsilons (estimating from the input and
// running the optimizer as configured) and evaluates every scenario.
// Deterministic given the config.
absl::StatusOr<LeakageReport> RunReport(const ReportConfig& config);

Document ReportDocument(const LeakageReport& report);
// Only the leakage profiles.
Document MutualInformationDocument(const LeakageReport& report);
// Only the allocation; requires a budget.
absl::StatusOr<Document> AllocationDocument(const LeakageReport& report);

Document ExtractionDocument(const LabeledData& data, bool with_labels);

// Pairwise estimates for the configured pairs (or every ordered pair of the
// configured attributes, or of all extracted attributes when none are
// configured).
absl::StatusOr<Document> EstimationDocument(const ReportConfig& config,
                                            const LabeledData& data);

// Runs the mechanism over each attribute's per-day indicators. Attribute k
// draws from ChunkSeed(seed, k). Suppressed values are withheld.
absl::StatusOr<Document> ReleaseDocument(const LeakageReport& report,
                                         const LabeledData& data);

// Monte-Carlo check of every configured dependency against the closed forms.
absl::StatusOr<Document> SimulationDocument(const LeakageReport& report,
                                            uint64_t samples, RngSeed seed);

}  // namespace osdp::pipeline

#endif  // OSDP_REPORT_H_
