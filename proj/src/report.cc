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

#include "osdp/report.h"

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/time/civil_time.h"
#include "json.hpp"
#include "osdp/mechanism.h"

namespace osdp::pipeline {
namespace {

using OrderedJson = nlohmann::ordered_json;

absl::Status WithContext(const absl::Status& status, absl::string_view where) {
  return absl::Status(status.code(),
                      absl::StrCat(where, ": ", status.message()));
}

OrderedJson CellJson(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return FormatNumber(*d);
    // Parse the 12-digit rendering back so JSON and CSV agree exactly.
    return std::stod(FormatNumber(*d));
  }
  return nullptr;
}

std::string CellText(const Cell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return *s;
  if (const auto* i = std::get_if<int64_t>(&cell)) return absl::StrCat(*i);
  if (const auto* d = std::get_if<double>(&cell)) return FormatNumber(*d);
  return "";
}

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string DayText(absl::CivilDay day) { return absl::FormatCivilTime(day); }

Cell OptionalTime(const std::optional<int>& seconds) {
  if (!seconds.has_value()) return std::monostate{};
  return FormatTimeOfDay(*seconds);
}

Cell OptionalNumber(const std::optional<double>& value) {
  if (!value.has_value()) return std::monostate{};
  return *value;
}

// Attribute value as reported when released.
Cell AttributeCell(const ExtractedAttributes& r, absl::string_view name) {
  if (name == "start_time") return OptionalTime(r.start_time);
  if (name == "end_time") return OptionalTime(r.end_time);
  if (name == "exit_count") return static_cast<int64_t>(r.exit_count);
  if (name == "mean_away_minutes") return OptionalNumber(r.mean_away_minutes);
  if (name == "occupancy_fraction") return OptionalNumber(r.occupancy_fraction);
  return std::monostate{};
}

Table WarningsTable(const std::vector<std::string>& warnings) {
  Table t{"warnings", {"message"}, {}};
  for (const std::string& w : warnings) t.rows.push_back({w});
  return t;
}

Cell RatioCell(const PosteriorRatio& r) { return r.value(); }

const AttributeReport* FindAttribute(const LeakageReport& report,
                                     absl::string_view id) {
  for (const AttributeReport& a : report.attributes) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

absl::StatusOr<double> EstimateAttributeTheta(const LabeledData& data,
                                              const std::string& id) {
  if (!FindAttributeKind(id).has_value()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "'", id, "' is not an extracted attribute; give its theta"));
  }
  if (data.labels.empty()) {
    return absl::FailedPreconditionError("insufficient data: no records");
  }
  uint64_t sensitive = 0;
  for (const LabeledRecord& r : data.labels) {
    if (r.labels.at(id) == SensitivityIndicator::kSensitive) ++sensitive;
  }
  return EstimateTheta(sensitive, data.labels.size());
}

std::vector<std::pair<std::string, std::string>> AllOrderedPairs(
    const std::vector<std::string>& ids) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const std::string& a : ids) {
    for (const std::string& b : ids) {
      if (a != b) pairs.emplace_back(a, b);
    }
  }
  return pairs;
}

std::vector<std::string> ConfiguredIds(const ReportConfig& config) {
  std::vector<std::string> ids;
  for (const AttributeConfig& a : config.attributes) ids.push_back(a.id);
  return ids;
}

}  // namespace

absl::StatusOr<OutputFormat> ParseOutputFormat(absl::string_view text) {
  if (text == "json") return OutputFormat::kJson;
  if (text == "csv") return OutputFormat::kCsv;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown format '", text, "', expected json or csv"));
}

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";  // Folds -0.
  return absl::StrFormat("%.12g", value);
}

std::string RenderJson(const Document& doc) {
  OrderedJson root = OrderedJson::object();
  OrderedJson meta = OrderedJson::object();
  for (const auto& [key, value] : doc.meta) meta[key] = CellJson(value);
  root["meta"] = std::move(meta);
  for (const Table& table : doc.tables) {
    OrderedJson rows = OrderedJson::array();
    for (const auto& row : table.rows) {
      OrderedJson obj = OrderedJson::object();
      for (size_t c = 0; c < table.columns.size(); ++c) {
        obj[table.columns[c]] = c < row.size() ? CellJson(row[c]) : nullptr;
      }
      rows.push_back(std::move(obj));
    }
    root[table.name] = std::move(rows);
  }
  return root.dump(2) + "\n";
}

std::string RenderCsv(const Document& doc) {
  std::string out = "# meta\nkey,value\n";
  for (const auto& [key, value] : doc.meta) {
    absl::StrAppend(&out, CsvField(key), ",", CsvField(CellText(value)), "\n");
  }
  for (const Table& table : doc.tables) {
    absl::StrAppend(&out, "\n# ", table.name, "\n");
    for (size_t c = 0; c < table.columns.size(); ++c) {
      absl::StrAppend(&out, c ? "," : "", CsvField(table.columns[c]));
    }
    out += "\n";
    for (const auto& row : table.rows) {
      for (size_t c = 0; c < table.columns.size(); ++c) {
        absl::StrAppend(&out, c ? "," : "",
                        c < row.size() ? CsvField(CellText(row[c])) : "");
      }
      out += "\n";
    }
  }
  return out;
}

std::string Render(const Document& doc, OutputFormat format) {
  return format == OutputFormat::kJson ? RenderJson(doc) : RenderCsv(doc);
}

absl::StatusOr<LabeledData> LoadLabeledData(const ReportConfig& config) {
  if (!config.input.has_value()) {
    return absl::InvalidArgumentError(
        "no input: set \"input\" in the config or pass --input");
  }
  if (auto s = ValidateWorkHours(config.extraction.work_hours); !s.ok()) {
    return s;
  }
  auto traces = IngestCsv(*config.input);
  if (!traces.ok()) return traces.status();
  LabeledData data;
  for (const OccupancyTrace& trace : *traces) {
    std::vector<ExtractedAttributes> days =
        ExtractAttributes(trace, config.extraction);
    data.records.insert(data.records.end(), days.begin(), days.end());
  }
  auto labels = LabelSensitivity(data.records, config.policy);
  if (!labels.ok()) return labels.status();
  data.labels = *std::move(labels);
  return data;
}

absl::StatusOr<LeakageReport> RunReport(const ReportConfig& config) {
  if (config.attributes.empty()) {
    return absl::InvalidArgumentError("config declares no attributes");
  }
  LeakageReport report;
  report.seed = config.seed;
  report.n_queries = config.scenarios.n_queries;
  report.budget = config.budget;
  auto n = QueryCount::Create(config.scenarios.n_queries);
  if (!n.ok()) return n.status();

  bool needs_data = config.estimate_dependencies;
  for (const AttributeConfig& a : config.attributes) {
    needs_data |= !a.theta.has_value();
  }
  LabeledData data;
  if (needs_data) {
    auto loaded = LoadLabeledData(config);
    if (!loaded.ok()) return WithContext(loaded.status(), "input");
    data = *std::move(loaded);
    report.input_records = data.labels.size();
  }

  // Priors.
  std::map<std::string, double> theta;
  for (const AttributeConfig& a : config.attributes) {
    AttributeReport attr;
    attr.id = a.id;
    if (a.theta.has_value()) {
      attr.theta = *a.theta;
      attr.theta_source = kFromConfig;
    } else {
      auto estimated = EstimateAttributeTheta(data, a.id);
      if (!estimated.ok()) {
        return WithContext(estimated.status(),
                           absl::StrCat("attribute ", a.id));
      }
      attr.theta = *estimated;
      attr.theta_source = kFromData;
    }
    theta[a.id] = attr.theta;
    report.attributes.push_back(std::move(attr));
  }

  // Dependencies.
  std::set<std::pair<std::string, std::string>> seen;
  auto add_dependency = [&](DependencyReport d) -> absl::Status {
    const std::string where =
        absl::StrCat("dependency ", d.dep.source, " -> ", d.dep.target);
    if (!theta.contains(d.dep.source) || !theta.contains(d.dep.target)) {
      return absl::InvalidArgumentError(
          absl::StrCat(where, ": both ends must be declared attributes"));
    }
    if (!seen.insert({d.dep.source, d.dep.target}).second) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": duplicate"));
    }
    report.dependencies.push_back(std::move(d));
    return absl::OkStatus();
  };
  if (config.estimate_dependencies) {
    auto pairs = config.estimate_pairs.empty()
                     ? AllOrderedPairs(ConfiguredIds(config))
                     : config.estimate_pairs;
    for (const auto& [source, target] : pairs) {
      if (!theta.contains(source) || !theta.contains(target)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "dependency ", source, " -> ", target,
            ": both ends must be declared attributes"));
      }
      auto e = EstimateParameters(data.labels, source, target);
      if (!e.ok()) {
        return WithContext(e.status(),
                           absl::StrCat("dependency ", source, " -> ", target));
      }
      report.warnings.insert(report.warnings.end(), e->warnings.begin(),
                             e->warnings.end());
      if (auto s = add_dependency({e->dep, std::string(kFromData), true});
          !s.ok()) {
        return s;
      }
    }
  }
  for (const DependencyPair& dep : config.dependencies) {
    if (auto s = add_dependency({dep, std::string(kFromConfig), true});
        !s.ok()) {
      return s;
    }
  }
  for (DependencyReport& d : report.dependencies) {
    const double tol = d.origin == std::string(kFromData) ? kEstimateConsistencyTol
                                             : kUserConsistencyTol;
    d.consistent = ValidateConsistency(theta[d.dep.source],
                                       theta[d.dep.target], d.dep, tol);
    if (!d.consistent && d.origin == std::string(kFromConfig)) {
      report.warnings.push_back(absl::StrCat(
          "dependency ", d.dep.source, " -> ", d.dep.target,
          " is inconsistent with the priors of its endpoints"));
    }
  }
  for (const DependencyReport& fwd : report.dependencies) {
    for (const DependencyReport& bwd : report.dependencies) {
      if (fwd.dep.source != bwd.dep.target ||
          fwd.dep.target != bwd.dep.source || fwd.dep.source > bwd.dep.source) {
        continue;
      }
      const double tol =
          fwd.origin == std::string(kFromData) || bwd.origin == kFromData
              ? kEstimateConsistencyTol
              : kUserConsistencyTol;
      if (!MutuallyConsistent(theta[fwd.dep.source], theta[fwd.dep.target],
                              fwd.dep, bwd.dep, tol)) {
        report.warnings.push_back(absl::StrCat(
            "dependencies ", fwd.dep.source, " <-> ", fwd.dep.target,
            " do not describe one joint distribution"));
      }
    }
  }

  // Epsilons.
  if (config.budget.has_value()) {
    BudgetProblem problem;
    for (const AttributeReport& a : report.attributes) {
      problem.attributes.push_back({a.id, a.theta, 0.0});
    }
    for (const DependencyReport& d : report.dependencies) {
      problem.dependencies.push_back(d.dep);
    }
    problem.budget_bits = config.budget->budget_bits;
    problem.epsilon_max = config.budget->epsilon_max;
    problem.tol = config.budget->tol;
    problem.seed = config.seed;
    auto allocation = AllocateBudget(problem);
    if (!allocation.ok()) return WithContext(allocation.status(), "budget");
    report.allocation = *std::move(allocation);
  }
  std::map<std::string, double> epsilon;
  for (size_t k = 0; k < report.attributes.size(); ++k) {
    AttributeReport& a = report.attributes[k];
    if (config.attributes[k].epsilon.has_value()) {
      a.epsilon = *config.attributes[k].epsilon;
      a.epsilon_source = kFromConfig;
    } else if (report.allocation.has_value()) {
      a.epsilon = report.allocation->epsilons.at(a.id);
      a.epsilon_source = kFromAllocation;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute ", a.id, ": no epsilon and no budget to allocate one"));
    }
    epsilon[a.id] = a.epsilon;
  }

  // Leakage profiles.
  for (AttributeReport& a : report.attributes) {
    std::vector<CrossDependency> cross;
    for (const DependencyReport& d : report.dependencies) {
      if (d.dep.source == a.id) cross.push_back({theta[d.dep.target], d.dep});
    }
    auto profile = TotalLeakage({a.id, a.theta, a.epsilon}, cross);
    if (!profile.ok()) {
      return WithContext(profile.status(), absl::StrCat("attribute ", a.id));
    }
    a.profile = *std::move(profile);
  }

  // Posterior scenarios.
  auto add_row = [&](const std::string& subject, const std::string& observed,
                     const std::string& scenario,
                     const absl::StatusOr<PosteriorRatio>& ratio)
      -> absl::Status {
    if (!ratio.ok()) {
      return WithContext(ratio.status(),
                         absl::StrCat("attribute ", subject, ", observed ",
                                      observed, ", scenario ", scenario));
    }
    report.posteriors.push_back(
        {subject, observed, scenario, *ratio, PosteriorFromRatio(*ratio)});
    return absl::OkStatus();
  };
  const std::string n_label = absl::StrCat("M^", n->value(), "=0");
  for (const AttributeReport& a : report.attributes) {
    absl::Status s = add_row(a.id, a.id, "prior",
                             PosteriorRatio::FromLog(LogPriorOdds(a.theta)));
    if (s.ok()) {
      s = add_row(a.id, a.id, "M=0",
                  PosteriorRatioSelf(a.theta, a.epsilon, QueryCount::One()));
    }
    if (s.ok() && n->value() > 1) {
      s = add_row(a.id, a.id, n_label,
                  PosteriorRatioSelf(a.theta, a.epsilon, *n));
    }
    if (s.ok()) s = add_row(a.id, a.id, "M=1", PosteriorRatio::Zero());
    if (!s.ok()) return s;
  }
  for (const DependencyReport& d : report.dependencies) {
    const std::string& i = d.dep.source;
    const std::string& j = d.dep.target;
    absl::Status s = add_row(
        j, i, "M=0",
        PosteriorRatioCross(theta[j], d.dep, epsilon[i],
                            ReleaseOutcome::kSuppressed, QueryCount::One()));
    if (s.ok()) {
      s = add_row(j, i, "M=1",
                  PosteriorRatioCross(theta[j], d.dep, epsilon[i],
                                      ReleaseOutcome::kReleased,
                                      QueryCount::One()));
    }
    if (s.ok() && n->value() > 1) {
      s = add_row(j, i, n_label,
                  PosteriorRatioCross(theta[j], d.dep, epsilon[i],
                                      ReleaseOutcome::kSuppressed, *n));
    }
    if (!s.ok()) return s;
  }
  for (const auto& [i, j] : config.scenarios.collusion_pairs) {
    const DependencyReport* found = nullptr;
    for (const DependencyReport& d : report.dependencies) {
      if (d.dep.source == i && d.dep.target == j) found = &d;
    }
    if (found == nullptr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "collusion pair ", i, ", ", j, ": no dependency ", i, " -> ", j));
    }
    for (int a : {0, 1}) {
      for (int b : {0, 1}) {
        const auto m_i = static_cast<ReleaseOutcome>(a);
        const auto m_j = static_cast<ReleaseOutcome>(b);
        absl::Status s = add_row(
            j, absl::StrCat(i, "+", j),
            absl::StrCat("M_i=", a, ",M_j=", b),
            PosteriorRatioCollusion(theta[j], found->dep, epsilon[i],
                                    epsilon[j], m_i, m_j));
        if (!s.ok()) return s;
      }
    }
  }
  return report;
}

namespace {

void AddReportMeta(const LeakageReport& report, Document& doc) {
  doc.meta.emplace_back("seed", static_cast<int64_t>(report.seed));
  doc.meta.emplace_back("n_queries", report.n_queries);
  doc.meta.emplace_back(
      "input_records",
      report.input_records.has_value()
          ? Cell(static_cast<int64_t>(*report.input_records))
          : Cell(std::monostate{}));
}

Table AttributesTable(const LeakageReport& report) {
  Table t{"attributes",
          {"id", "theta", "theta_source", "epsilon", "epsilon_source",
           "self_bits", "cross_bits", "total_bits"},
          {}};
  for (const AttributeReport& a : report.attributes) {
    double cross = 0.0;
    for (const LeakageTerm& term : a.profile.cross_terms) cross += term.bits;
    t.rows.push_back({a.id, a.theta, a.theta_source, a.epsilon,
                      a.epsilon_source, a.profile.self_term.bits, cross,
                      a.profile.total});
  }
  return t;
}

Table LeakageTermsTable(const LeakageReport& report) {
  Table t{"leakage_terms", {"attribute", "kind", "target", "bits"}, {}};
  for (const AttributeReport& a : report.attributes) {
    t.rows.push_back({a.id, std::string("self"), a.id,
                      a.profile.self_term.bits});
    for (const LeakageTerm& term : a.profile.cross_terms) {
      t.rows.push_back({a.id, std::string("cross"), term.target, term.bits});
    }
  }
  return t;
}

void AddAllocation(const LeakageReport& report, Document& doc) {
  const Allocation& alloc = *report.allocation;
  doc.meta.emplace_back("budget_bits", report.budget->budget_bits);
  doc.meta.emplace_back("epsilon_max", report.budget->epsilon_max);
  doc.meta.emplace_back("tol", report.budget->tol);
  doc.meta.emplace_back("allocation_status",
                        std::string(AllocationStatusName(alloc.status)));
  doc.meta.emplace_back("allocation_method",
                        std::string(AllocationMethodName(alloc.method)));
  doc.meta.emplace_back("achieved_leakage", alloc.achieved_leakage);
  doc.meta.emplace_back("objective", alloc.objective);
  doc.meta.emplace_back("gap_bound", alloc.gap_bound);
  Table t{"allocation", {"attribute", "epsilon"}, {}};
  for (const AttributeReport& a : report.attributes) {
    t.rows.push_back({a.id, alloc.epsilons.at(a.id)});
  }
  doc.tables.push_back(std::move(t));
}

}  // namespace

Document ReportDocument(const LeakageReport& report) {
  Document doc;
  AddReportMeta(report, doc);
  doc.tables.push_back(AttributesTable(report));

  Table deps{"dependencies",
             {"source", "target", "delta1", "delta2", "origin", "consistent"},
             {}};
  for (const DependencyReport& d : report.dependencies) {
    deps.rows.push_back({d.dep.source, d.dep.target, d.dep.delta1,
                         d.dep.delta2, d.origin,
                         static_cast<int64_t>(d.consistent)});
  }
  doc.tables.push_back(std::move(deps));
  doc.tables.push_back(LeakageTermsTable(report));

  Table posteriors{"posteriors",
                   {"subject", "observed", "scenario", "ratio", "posterior"},
                   {}};
  for (const PosteriorRow& row : report.posteriors) {
    posteriors.rows.push_back({row.subject, row.observed, row.scenario,
                               RatioCell(row.ratio), row.posterior});
  }
  doc.tables.push_back(std::move(posteriors));
  if (report.allocation.has_value()) AddAllocation(report, doc);
  doc.tables.push_back(WarningsTable(report.warnings));
  return doc;
}

Document MutualInformationDocument(const LeakageReport& report) {
  Document doc;
  AddReportMeta(report, doc);
  doc.tables.push_back(AttributesTable(report));
  doc.tables.push_back(LeakageTermsTable(report));
  doc.tables.push_back(WarningsTable(report.warnings));
  return doc;
}

absl::StatusOr<Document> AllocationDocument(const LeakageReport& report) {
  if (!report.allocation.has_value()) {
    return absl::InvalidArgumentError(
        "config has no \"budget\"; nothing to optimize");
  }
  Document doc;
  AddReportMeta(report, doc);
  AddAllocation(report, doc);
  doc.tables.push_back(AttributesTable(report));
  doc.tables.push_back(WarningsTable(report.warnings));
  return doc;
}

Document ExtractionDocument(const LabeledData& data, bool with_labels) {
  Document doc;
  doc.meta.emplace_back("records", static_cast<int64_t>(data.records.size()));
  Table t{"records", {"space_id", "day"}, {}};
  for (const AttributeInfo& info : kExtractedAttributes) {
    t.columns.emplace_back(info.name);
  }
  if (with_labels) {
    for (const AttributeInfo& info : kExtractedAttributes) {
      t.columns.push_back(absl::StrCat("x_", info.name));
    }
  }
  for (size_t k = 0; k < data.records.size(); ++k) {
    const ExtractedAttributes& r = data.records[k];
    std::vector<Cell> row = {r.space_id, DayText(r.day)};
    for (const AttributeInfo& info : kExtractedAttributes) {
      row.push_back(AttributeCell(r, info.name));
    }
    if (with_labels) {
      for (const AttributeInfo& info : kExtractedAttributes) {
        row.push_back(static_cast<int64_t>(
            ToBit(data.labels[k].labels.at(std::string(info.name)))));
      }
    }
    t.rows.push_back(std::move(row));
  }
  doc.tables.push_back(std::move(t));
  return doc;
}

absl::StatusOr<Document> EstimationDocument(const ReportConfig& config,
                                            const LabeledData& data) {
  std::vector<std::string> ids = ConfiguredIds(config);
  if (ids.empty()) {
    for (const AttributeInfo& info : kExtractedAttributes) {
      ids.emplace_back(info.name);
    }
  }
  auto pairs = config.estimate_pairs.empty() ? AllOrderedPairs(ids)
                                             : config.estimate_pairs;
  Document doc;
  doc.meta.emplace_back("records", static_cast<int64_t>(data.labels.size()));
  doc.meta.emplace_back("smoothing", kSmoothing);

  Table attrs{"attributes", {"id", "theta", "sensitive"}, {}};
  for (const std::string& id : ids) {
    auto theta = EstimateAttributeTheta(data, id);
    if (!theta.ok()) {
      return WithContext(theta.status(), absl::StrCat("attribute ", id));
    }
    int64_t sensitive = 0;
    for (const LabeledRecord& r : data.labels) {
      sensitive += r.labels.at(id) == SensitivityIndicator::kSensitive;
    }
    attrs.rows.push_back({id, *theta, sensitive});
  }
  doc.tables.push_back(std::move(attrs));

  Table deps{"dependencies",
             {"source", "target", "delta1", "delta2", "target_sensitive",
              "target_nonsensitive", "consistent"},
             {}};
  std::vector<std::string> warnings;
  for (const auto& [source, target] : pairs) {
    auto e = EstimateParameters(data.labels, source, target);
    if (!e.ok()) {
      return WithContext(e.status(),
                         absl::StrCat("dependency ", source, " -> ", target));
    }
    deps.rows.push_back({source, target, e->dep.delta1, e->dep.delta2,
                         static_cast<int64_t>(e->target_sensitive),
                         static_cast<int64_t>(e->target_nonsensitive),
                         static_cast<int64_t>(e->consistent)});
    warnings.insert(warnings.end(), e->warnings.begin(), e->warnings.end());
  }
  doc.tables.push_back(std::move(deps));
  doc.tables.push_back(WarningsTable(warnings));
  return doc;
}

absl::StatusOr<Document> ReleaseDocument(const LeakageReport& report,
                                         const LabeledData& data) {
  Document doc;
  doc.meta.emplace_back("seed", static_cast<int64_t>(report.seed));
  doc.meta.emplace_back("records", static_cast<int64_t>(data.records.size()));
  Table t{"releases",
          {"space_id", "day", "attribute", "epsilon", "released", "value"},
          {}};
  std::vector<std::vector<ReleaseOutcome>> outcomes;
  for (size_t k = 0; k < report.attributes.size(); ++k) {
    const AttributeReport& a = report.attributes[k];
    if (!FindAttributeKind(a.id).has_value()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute ", a.id, ": not an extracted attribute, cannot release"));
    }
    std::vector<SensitivityIndicator> x;
    x.reserve(data.labels.size());
    for (const LabeledRecord& r : data.labels) x.push_back(r.labels.at(a.id));
    auto released = ReleaseStream(x, a.epsilon, ChunkSeed(report.seed, k));
    if (!released.ok()) {
      return WithContext(released.status(), absl::StrCat("attribute ", a.id));
    }
    outcomes.push_back(*std::move(released));
  }
  int64_t released_count = 0;
  for (size_t r = 0; r < data.records.size(); ++r) {
    for (size_t k = 0; k < report.attributes.size(); ++k) {
      const AttributeReport& a = report.attributes[k];
      const bool released = outcomes[k][r] == ReleaseOutcome::kReleased;
      released_count += released;
      t.rows.push_back({data.records[r].space_id, DayText(data.records[r].day),
                        a.id, a.epsilon, static_cast<int64_t>(released),
                        released ? AttributeCell(data.records[r], a.id)
                                 : Cell(std::monostate{})});
    }
  }
  doc.meta.emplace_back("released", released_count);
  doc.tables.push_back(std::move(t));
  return doc;
}

absl::StatusOr<Document> SimulationDocument(const LeakageReport& report,
                                            uint64_t samples, RngSeed seed) {
  if (report.dependencies.empty()) {
    return absl::InvalidArgumentError(
        "no dependencies configured; nothing to simulate");
  }
  auto n = QueryCount::Create(report.n_queries);
  if (!n.ok()) return n.status();
  Document doc;
  doc.meta.emplace_back("seed", static_cast<int64_t>(seed));
  doc.meta.emplace_back("samples", static_cast<int64_t>(samples));
  doc.meta.emplace_back("n_queries", report.n_queries);
  Table t{"simulation",
          {"source", "target", "quantity", "empirical", "std_error",
           "closed_form", "z"},
          {}};
  std::vector<std::string> warnings;

  for (size_t k = 0; k < report.dependencies.size(); ++k) {
    const DependencyPair& dep = report.dependencies[k].dep;
    const AttributeReport* src = FindAttribute(report, dep.source);
    const AttributeReport* dst = FindAttribute(report, dep.target);
    ScenarioSpec s{dst->theta, dep, src->epsilon, dst->epsilon, *n};
    auto sim = Simulate(s, samples, ChunkSeed(seed, k));
    if (!sim.ok()) {
      return WithContext(sim.status(), absl::StrCat("dependency ", dep.source,
                                                    " -> ", dep.target));
    }
    const double theta_i = ImpliedSourceTheta(dst->theta, dep);
    auto add = [&](const std::string& quantity,
                   const std::optional<EmpiricalEstimate>& est,
                   absl::StatusOr<double> closed) {
      if (!est.has_value()) return;
      Cell closed_cell = std::monostate{};
      Cell z = std::monostate{};
      if (closed.ok()) {
        closed_cell = *closed;
        if (est->std_error > 0) z = (est->value - *closed) / est->std_error;
      }
      t.rows.push_back({dep.source, dep.target, quantity, est->value,
                        est->std_error, closed_cell, z});
    };
    auto posterior = [](absl::StatusOr<PosteriorRatio> r)
        -> absl::StatusOr<double> {
      if (!r.ok()) return r.status();
      return PosteriorFromRatio(*r);
    };
    add("posterior_self_" + absl::StrCat("M^", n->value(), "=0"),
        sim->posterior_self_suppressed,
        posterior(PosteriorRatioSelf(theta_i, src->epsilon, *n)));
    add("posterior_cross_M=0", sim->posterior_cross[0],
        posterior(PosteriorRatioCross(dst->theta, dep, src->epsilon,
                                      ReleaseOutcome::kSuppressed,
                                      QueryCount::One())));
    add("posterior_cross_M=1", sim->posterior_cross[1],
        posterior(PosteriorRatioCross(dst->theta, dep, src->epsilon,
                                      ReleaseOutcome::kReleased,
                                      QueryCount::One())));
    if (n->value() > 1) {
      add(absl::StrCat("posterior_cross_M^", n->value(), "=0"),
          sim->posterior_cross_suppressed_n,
          posterior(PosteriorRatioCross(dst->theta, dep, src->epsilon,
                                        ReleaseOutcome::kSuppressed, *n)));
    }
    for (int a : {0, 1}) {
      for (int b : {0, 1}) {
        add(absl::StrCat("posterior_collusion_M_i=", a, ",M_j=", b),
            sim->posterior_collusion[a][b],
            posterior(PosteriorRatioCollusion(
                dst->theta, dep, src->epsilon, dst->epsilon,
                static_cast<ReleaseOutcome>(a),
                static_cast<ReleaseOutcome>(b))));
      }
    }
    add("release_rate_source", sim->release_rate_source,
        -std::expm1(-src->epsilon));
    add("mi_self_bits", sim->mi_self,
        MutualInformationSelf(theta_i, src->epsilon));
    add("mi_cross_bits", sim->mi_cross,
        MutualInformationCross(dst->theta, dep, src->epsilon));
    t.rows.push_back({dep.source, dep.target, std::string("sensitive_releases"),
                      static_cast<int64_t>(sim->sensitive_releases),
                      std::monostate{}, int64_t{0}, std::monostate{}});
    for (const std::string& name : sim->zero_evidence) {
      warnings.push_back(absl::StrCat(dep.source, " -> ", dep.target,
                                      ": no samples for ", name));
    }
  }
  doc.tables.push_back(std::move(t));
  doc.tables.push_back(WarningsTable(warnings));
  return doc;
}

}  // namespace osdp::pipeline
