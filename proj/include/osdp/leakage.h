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

// Closed-form posterior odds of sensitivity after observing one-sided
// randomized-response outcomes.
//
// Every function returns posterior odds P(X = 0 | evidence) / P(X = 1 |
// evidence) as a multiplicative update of the prior odds:
//
//   own record suppressed n times      e^(n eps_i)             * prior(X_i)
//   dependent record suppressed n times SuppressionFactor(n eps_i) * prior(X_j)
//   dependent record released           ReleaseFactor           * prior(X_j)
//   both records observed (collusion)   factor_i * e^(eps_j)    * prior(X_j)
//
// where, for delta1 = P(X_i=0 | X_j=0) and delta2 = P(X_i=0 | X_j=1),
//
//   SuppressionFactor(eps) = (delta1 (e^eps - 1) + 1) / (delta2 (e^eps - 1) + 1)
//   ReleaseFactor          = (1 - delta1) / (1 - delta2).
//
// A released record is never sensitive, so observing M_j = released drives the
// odds of X_j = 0 to exactly zero. That case is a regular value (log = -inf),
// not an error. The collusion result for M_j = released follows from the same
// chain-rule factorization as the M_j = suppressed case.
//
// Error codes: kInvalidArgument for out-of-domain parameters,
// kFailedPrecondition for a degenerate prior (theta in {0, 1}) or a degenerate
// dependency (delta2 = 1 together with release evidence).

#ifndef OSDP_LEAKAGE_H_
#define OSDP_LEAKAGE_H_

#include <cmath>
#include <limits>
#include <optional>
#include <span>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "osdp/core_model.h"

namespace osdp {

class PosteriorRatio {
 public:
  // Odds stored as a natural log. -inf is ratio 0 (certainly non-sensitive),
  // +inf is an infinite ratio (certainly sensitive).
  static PosteriorRatio FromLog(double log_value) {
    return PosteriorRatio(log_value);
  }
  static PosteriorRatio FromValue(double value) {
    return PosteriorRatio(std::log(value));
  }
  static PosteriorRatio Zero() {
    return PosteriorRatio(-std::numeric_limits<double>::infinity());
  }

  double log_value() const { return log_value_; }
  double value() const { return std::exp(log_value_); }
  bool is_zero() const { return std::isinf(log_value_) && log_value_ < 0; }

 private:
  explicit PosteriorRatio(double log_value) : log_value_(log_value) {}
  double log_value_;
};

// What an observer has seen. `n_i` counts repetitions of `m_i`; repetition is
// only meaningful for suppression since a single release already reveals
// X_i = 1.
struct Evidence {
  std::optional<ReleaseOutcome> m_i;
  QueryCount n_i = QueryCount::One();
  std::optional<ReleaseOutcome> m_j;
};

absl::Status ValidateEvidence(const Evidence& evidence);

// Reduces a history of outcomes for record i to an Evidence value: any
// release is absorbing and collapses to a single release; otherwise the
// history is a suppression streak of its full length.
absl::StatusOr<Evidence> CollapseQueryHistory(
    std::span<const ReleaseOutcome> history);

// log of (delta (e^eps - 1) + 1), stable for large eps.
double LogAffineExp(double delta, double epsilon);

double LogSuppressionFactor(const DependencyPair& dep, double epsilon_i);
double SuppressionFactor(const DependencyPair& dep, double epsilon_i);
absl::StatusOr<double> ReleaseFactor(const DependencyPair& dep);

// log(theta / (1 - theta)).
double LogPriorOdds(double theta);

absl::StatusOr<PosteriorRatio> PosteriorRatioSelf(double theta_i,
                                                  double epsilon_i,
                                                  QueryCount n);

absl::StatusOr<PosteriorRatio> PosteriorRatioCross(double theta_j,
                                                   const DependencyPair& dep,
                                                   double epsilon_i,
                                                   ReleaseOutcome m_i,
                                                   QueryCount n);

absl::StatusOr<PosteriorRatio> PosteriorRatioCollusion(
    double theta_j, const DependencyPair& dep, double epsilon_i,
    double epsilon_j, ReleaseOutcome m_i, ReleaseOutcome m_j);

// r / (1 + r), evaluated as a logistic of the log-odds.
double PosteriorFromRatio(const PosteriorRatio& r);

// Logistic function 1 / (1 + e^-x), saturating cleanly at +-inf.
double Logistic(double x);

}  // namespace osdp

#endif  // OSDP_LEAKAGE_H_
