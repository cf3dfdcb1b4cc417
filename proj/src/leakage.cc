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

#include "osdp/leakage.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace osdp {
namespace {

absl::Status ValidateOpenPrior(double theta, const char* name) {
  if (auto s = ValidateProbability(theta, name); !s.ok()) return s;
  if (theta == 0 || theta == 1) {
    return absl::FailedPreconditionError(absl::StrCat(
        "degenerate prior: ", name, " = ", theta,
        " leaves no uncertainty to update"));
  }
  return absl::OkStatus();
}

absl::Status DegenerateDependencyError(const DependencyPair& dep) {
  return absl::FailedPreconditionError(absl::StrCat(
      "degenerate dependency ", dep.source, " -> ", dep.target,
      ": delta2 = 1, so a release of '", dep.source, "' implies '",
      dep.target, "' is sensitive with certainty"));
}

double LogFactorForOutcome(const DependencyPair& dep, double epsilon_i,
                           ReleaseOutcome m_i) {
  if (m_i == ReleaseOutcome::kSuppressed) {
    return LogSuppressionFactor(dep, epsilon_i);
  }
  return std::log1p(-dep.delta1) - std::log1p(-dep.delta2);
}

}  // namespace

absl::Status ValidateEvidence(const Evidence& evidence) {
  if (evidence.n_i.value() > 1 &&
      evidence.m_i != ReleaseOutcome::kSuppressed) {
    return absl::InvalidArgumentError(
        "repeated evidence (n > 1) is only defined for suppression of record "
        "i");
  }
  return absl::OkStatus();
}

absl::StatusOr<Evidence> CollapseQueryHistory(
    std::span<const ReleaseOutcome> history) {
  if (history.empty()) {
    return absl::InvalidArgumentError("query history is empty");
  }
  Evidence evidence;
  for (ReleaseOutcome m : history) {
    if (m == ReleaseOutcome::kReleased) {
      evidence.m_i = ReleaseOutcome::kReleased;
      return evidence;
    }
  }
  evidence.m_i = ReleaseOutcome::kSuppressed;
  auto n = QueryCount::Create(static_cast<int64_t>(history.size()));
  if (!n.ok()) return n.status();
  evidence.n_i = *n;
  return evidence;
}

double LogAffineExp(double delta, double epsilon) {
  if (delta == 0 || epsilon == 0) return 0.0;
  if (epsilon <= 1) return std::log1p(delta * std::expm1(epsilon));
  return epsilon + std::log(delta + (1 - delta) * std::exp(-epsilon));
}

double LogSuppressionFactor(const DependencyPair& dep, double epsilon_i) {
  return LogAffineExp(dep.delta1, epsilon_i) -
         LogAffineExp(dep.delta2, epsilon_i);
}

double SuppressionFactor(const DependencyPair& dep, double epsilon_i) {
  return std::exp(LogSuppressionFactor(dep, epsilon_i));
}

absl::StatusOr<double> ReleaseFactor(const DependencyPair& dep) {
  if (auto s = ValidateDependency(dep); !s.ok()) return s;
  if (dep.delta2 == 1) return DegenerateDependencyError(dep);
  return (1 - dep.delta1) / (1 - dep.delta2);
}

double LogPriorOdds(double theta) {
  return std::log(theta) - std::log1p(-theta);
}

absl::StatusOr<PosteriorRatio> PosteriorRatioSelf(double theta_i,
                                                  double epsilon_i,
                                                  QueryCount n) {
  if (auto s = ValidateOpenPrior(theta_i, "theta_i"); !s.ok()) return s;
  if (auto s = ValidateEpsilon(epsilon_i); !s.ok()) return s;
  return PosteriorRatio::FromLog(static_cast<double>(n.value()) * epsilon_i +
                                 LogPriorOdds(theta_i));
}

absl::StatusOr<PosteriorRatio> PosteriorRatioCross(double theta_j,
                                                   const DependencyPair& dep,
                                                   double epsilon_i,
                                                   ReleaseOutcome m_i,
                                                   QueryCount n) {
  if (auto s = ValidateOpenPrior(theta_j, "theta_j"); !s.ok()) return s;
  if (auto s = ValidateDependency(dep); !s.ok()) return s;
  if (auto s = ValidateEpsilon(epsilon_i); !s.ok()) return s;
  if (m_i == ReleaseOutcome::kReleased) {
    if (n.value() != 1) {
      return absl::InvalidArgumentError(
          "release evidence cannot be repeated; collapse the history first");
    }
    if (dep.delta2 == 1) return DegenerateDependencyError(dep);
  }
  const double effective_epsilon =
      static_cast<double>(n.value()) * epsilon_i;
  return PosteriorRatio::FromLog(
      LogFactorForOutcome(dep, effective_epsilon, m_i) +
      LogPriorOdds(theta_j));
}

absl::StatusOr<PosteriorRatio> PosteriorRatioCollusion(
    double theta_j, const DependencyPair& dep, double epsilon_i,
    double epsilon_j, ReleaseOutcome m_i, ReleaseOutcome m_j) {
  if (auto s = ValidateOpenPrior(theta_j, "theta_j"); !s.ok()) return s;
  if (auto s = ValidateDependency(dep); !s.ok()) return s;
  if (auto s = ValidateEpsilon(epsilon_i); !s.ok()) return s;
  if (auto s = ValidateEpsilon(epsilon_j); !s.ok()) return s;
  if (m_i == ReleaseOutcome::kReleased && dep.delta2 == 1) {
    return DegenerateDependencyError(dep);
  }
  if (m_j == ReleaseOutcome::kReleased) return PosteriorRatio::Zero();
  return PosteriorRatio::FromLog(LogFactorForOutcome(dep, epsilon_i, m_i) +
                                 epsilon_j + LogPriorOdds(theta_j));
}

double Logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double PosteriorFromRatio(const PosteriorRatio& r) {
  if (r.is_zero()) return 0.0;
  return Logistic(r.log_value());
}

}  // namespace osdp
