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

// Domain types shared by every module: sensitivity indicators, mechanism
// outcomes, per-attribute parameters and the pairwise dependency model.
//
// Convention used throughout the library: X = 0 means the record holds a
// value the policy deems sensitive, X = 1 means it does not. Probabilities
// named "theta" are always P(X = 0).

#ifndef OSDP_CORE_MODEL_H_
#define OSDP_CORE_MODEL_H_

#include <cstdint>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace osdp {

// Tolerance for checking user-supplied (empirical) parameter sets.
inline constexpr double kUserConsistencyTol = 1e-9;
// Tolerance for internal cross-checks of exact arithmetic.
inline constexpr double kExactTol = 1e-12;

enum class SensitivityIndicator : uint8_t {
  kSensitive = 0,
  kNonSensitive = 1,
};

enum class ReleaseOutcome : uint8_t {
  kSuppressed = 0,
  kReleased = 1,
};

inline int ToBit(SensitivityIndicator x) { return static_cast<int>(x); }
inline int ToBit(ReleaseOutcome m) { return static_cast<int>(m); }

struct AttributeSpec {
  std::string id;
  // P(X = 0): prior probability that the attribute's record is sensitive.
  double theta = 0.5;
  // OSDP randomized-response parameter.
  double epsilon = 0.0;
};

// Pairwise dependency between the sensitivity of attribute `source` (i) and
// attribute `target` (j):
//   delta1 = P(X_i = 0 | X_j = 0),  delta2 = P(X_i = 0 | X_j = 1).
struct DependencyPair {
  std::string source;
  std::string target;
  double delta1 = 0.0;
  double delta2 = 0.0;
};

// Joint law of (X_i, X_j). Entry pab = P(X_i = a, X_j = b).
struct JointDistribution2 {
  double p00 = 0.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 0.0;

  double Total() const { return p00 + p01 + p10 + p11; }
  // P(X_i = 0).
  double ThetaSource() const { return p00 + p01; }
  // P(X_j = 0).
  double ThetaTarget() const { return p00 + p10; }
};

// Number of independent consecutive queries against the same record.
class QueryCount {
 public:
  static absl::StatusOr<QueryCount> Create(int64_t n);
  static QueryCount One() { return QueryCount(1); }

  int64_t value() const { return n_; }

 private:
  explicit QueryCount(int64_t n) : n_(n) {}
  int64_t n_;
};

bool IsProbability(double p);
absl::Status ValidateProbability(double p, const char* name);
absl::Status ValidateEpsilon(double epsilon);
absl::Status ValidateAttribute(const AttributeSpec& attr);
absl::Status ValidateDependency(const DependencyPair& dep);

// The joint of (X_i, X_j) implied by the target marginal theta_j and the
// conditionals in `dep`.
absl::StatusOr<JointDistribution2> JointFromMarginalAndDeps(
    double theta_j, const DependencyPair& dep);

// The source marginal P(X_i = 0) = delta1 * theta_j + delta2 * (1 - theta_j).
double ImpliedSourceTheta(double theta_j, const DependencyPair& dep);

// True iff theta_i agrees with the marginal implied by (theta_j, dep).
bool ValidateConsistency(double theta_i, double theta_j,
                         const DependencyPair& dep,
                         double tol = kUserConsistencyTol);

// Checks that declarations (i -> j) and (j -> i) describe one joint law. Both
// are valid on their own; a mismatch is reported, not rejected.
bool MutuallyConsistent(double theta_i, double theta_j,
                        const DependencyPair& forward,
                        const DependencyPair& backward,
                        double tol = kUserConsistencyTol);

}  // namespace osdp

#endif  // OSDP_CORE_MODEL_H_
