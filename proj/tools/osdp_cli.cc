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

// osdp: occupancy pipeline and leakage analysis.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "osdp/config.h"
#include "osdp/report.h"

namespace {

using osdp::pipeline::Document;
using osdp::pipeline::ReportConfig;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<uint64_t> seed;
  uint64_t samples = 1'000'000;
  std::string output;
  std::string format = "json";
  std::string input;
  std::optional<double> budget;
};

void AddCommonOptions(CLI::App* cmd, CommonOptions& opts, bool needs_config) {
  auto* config = cmd->add_option("--config", opts.config_path,
                                 "JSON run configuration");
  if (needs_config) config->required();
  config->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "RNG seed (overrides the config)");
  cmd->add_option("--samples", opts.samples, "Monte-Carlo sample count")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--output", opts.output, "Write here instead of stdout");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--input", opts.input,
                  "Occupancy CSV (overrides the config)");
}

absl::StatusOr<ReportConfig> ResolveConfig(const CommonOptions& opts) {
  ReportConfig config;
  if (!opts.config_path.empty()) {
    auto loaded = osdp::pipeline::LoadConfig(opts.config_path);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  }
  if (opts.seed.has_value()) config.seed = *opts.seed;
  if (!opts.input.empty()) config.input = opts.input;
  if (opts.budget.has_value()) {
    if (!config.budget.has_value()) config.budget.emplace();
    config.budget->budget_bits = *opts.budget;
  }
  return config;
}

absl::Status Emit(const Document& doc, const CommonOptions& opts) {
  auto format = osdp::pipeline::ParseOutputFormat(opts.format);
  if (!format.ok()) return format.status();
  const std::string text = osdp::pipeline::Render(doc, *format);
  if (opts.output.empty()) {
    std::cout << text;
    return absl::OkStatus();
  }
  std::ofstream out(opts.output, std::ios::binary);
  out << text;
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot write ", opts.output));
  }
  return absl::OkStatus();
}

using Command = std::function<absl::StatusOr<Document>(const ReportConfig&,
                                                       const CommonOptions&)>;

absl::StatusOr<Document> Extract(const ReportConfig& config,
                                 const CommonOptions&) {
  auto data = osdp::pipeline::LoadLabeledData(config);
  if (!data.ok()) return data.status();
  return osdp::pipeline::ExtractionDocument(*data, !config.policy.empty());
}

absl::StatusOr<Document> EstimateDeps(const ReportConfig& config,
                                      const CommonOptions&) {
  auto data = osdp::pipeline::LoadLabeledData(config);
  if (!data.ok()) return data.status();
  return osdp::pipeline::EstimationDocument(config, *data);
}

absl::StatusOr<Document> Leakage(const ReportConfig& config,
                                 const CommonOptions&) {
  auto report = osdp::pipeline::RunReport(config);
  if (!report.ok()) return report.status();
  return osdp::pipeline::ReportDocument(*report);
}

absl::StatusOr<Document> MutualInformation(const ReportConfig& config,
                                           const CommonOptions&) {
  auto report = osdp::pipeline::RunReport(config);
  if (!report.ok()) return report.status();
  return osdp::pipeline::MutualInformationDocument(*report);
}

absl::StatusOr<Document> Optimize(const ReportConfig& config,
                                  const CommonOptions&) {
  auto report = osdp::pipeline::RunReport(config);
  if (!report.ok()) return report.status();
  return osdp::pipeline::AllocationDocument(*report);
}

absl::StatusOr<Document> Release(const ReportConfig& config,
                                 const CommonOptions&) {
  auto report = osdp::pipeline::RunReport(config);
  if (!report.ok()) return report.status();
  auto data = osdp::pipeline::LoadLabeledData(config);
  if (!data.ok()) return data.status();
  return osdp::pipeline::ReleaseDocument(*report, *data);
}

absl::StatusOr<Document> SimulateCommand(const ReportConfig& config,
                                         const CommonOptions& opts) {
  auto report = osdp::pipeline::RunReport(config);
  if (!report.ok()) return report.status();
  return osdp::pipeline::SimulationDocument(*report, opts.samples,
                                            config.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-sided differential privacy leakage analysis"};
  app.require_subcommand(1);

  CommonOptions opts;
  struct Entry {
    const char* name;
    const char* help;
    bool needs_config;
    Command run;
  };
  const Entry entries[] = {
      {"extract", "Extract per-day attributes from an occupancy CSV", false,
       Extract},
      {"estimate-deps", "Estimate priors and pairwise dependencies", false,
       EstimateDeps},
      {"leakage", "Full leakage report", true, Leakage},
      {"mi", "Mutual-information leakage profiles", true, MutualInformation},
      {"optimize", "Allocate epsilons under a leakage budget", true, Optimize},
      {"release", "Run the mechanism over the extracted records", true,
       Release},
      {"simulate", "Monte-Carlo check of the closed forms", true,
       SimulateCommand},
  };
  const Entry* chosen = nullptr;
  for (const Entry& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    AddCommonOptions(cmd, opts, e.needs_config);
    if (std::string(e.name) == "optimize") {
      cmd->add_option("--budget", opts.budget,
                      "Leakage budget T in bits (overrides the config)")
          ->check(CLI::NonNegativeNumber);
    }
    cmd->callback([&chosen, &e] { chosen = &e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto config = ResolveConfig(opts);
  if (!config.ok()) {
    std::cerr << "osdp " << chosen->name << ": " << config.status().message()
              << "\n";
    return kExitData;
  }
  auto doc = chosen->run(*config, opts);
  if (!doc.ok()) {
    std::cerr << "osdp " << chosen->name << ": " << doc.status().message()
              << "\n";
    return kExitData;
  }
  if (auto s = Emit(*doc, opts); !s.ok()) {
    std::cerr << "osdp " << chosen->name << ": " << s.message() << "\n";
    return kExitData;
  }
  return kExitOk;
}
