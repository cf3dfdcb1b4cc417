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

// Ground truth for the closed forms in leakage.h and infoleak.h.
//
// Two independent routes:
//  * EnumerateJoint builds the exact law of (X_i, X_j, M_i^1..M_i^n, M_j)
//    from the generative model, so posteriors and mutual informations become
//    finite sums over atoms.
//  * Simulate draws records and pushes them through OsdpRandomizedResponse,
//    so it also exercises the mechanism implementation.
// Neither route calls into the leakage or infoleak formulas.

#ifndef OSDP_ORACLE_H_
#define OSDP_ORACLE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "osdp/core_model.h"
#include "osdp/leakage.h"
#include "osdp/mechanism.h"

namespace osdp {

inline constexpr int64_t kMaxEnumeratedQueries = 20;

struct ScenarioSpec {
  double theta_j = 0.5;
  DependencyPair dep;
  double epsilon_i = 0.0;
  // Absent means record j is never observed; M_j is then constant.
  std::optional<double> epsilon_j;
  QueryCount n_queries = QueryCount::One();
};

absl::Status ValidateScenario(const ScenarioSpec& s);

// Exact probabilities of every outcome atom. Atom index bits:
//   bit 0: X_i, bit 1: X_j, bit 2: M_j, bit 3 + k: M_i on query k.
class JointOutcomeTable {
 public:
  JointOutcomeTable(int64_t n_queries, std::vector<double> probabilities)
      : n_queries_(n_queries), probabilities_(std::move(probabilities)) {}

  static int XSource(uint64_t atom) { return atom & 1; }
  static int XTarget(uint64_t atom) { return (atom >> 1) & 1; }
  static int MTarget(uint64_t atom) { return (atom >> 2) & 1; }
  static int MSource(uint64_t atom, int64_t query) {
    return (atom >> (3 + query)) & 1;
  }

  int64_t n_queries() const { return n_queries_; }
  size_t size() const { return probabilities_.size(); }
  double probability(uint64_t atom) const { return probabilities_[atom]; }
  double Total() const;

 private:
  int64_t n_queries_;
  std::vector<double> probabilities_;
};

absl::StatusOr<JointOutcomeTable> EnumerateJoint(const ScenarioSpec& s);

// Which sensitivity indicator a posterior or mutual information refers to.
enum class TargetVariable { kSource, kTarget };

// Posterior odds of X_source (kSource) or X_target (kTarget) = 0 given the
// evidence. Fails with kFailedPrecondition when the evidence has probability
// zero.
absl::StatusOr<PosteriorRatio> ExactPosteriorRatio(const ScenarioSpec& s,
                                                   const Evidence& evidence,
                                                   TargetVariable target);
absl::StatusOr<PosteriorRatio> ExactPosteriorRatio(
    const JointOutcomeTable& table, const Evidence& evidence,
    TargetVariable target);

// I(X; M_i) for the first query, in bits.
absl::StatusOr<double> ExactMutualInformation(const ScenarioSpec& s,
                                              TargetVariable target);
// I(X_i; X_j) in bits.
absl::StatusOr<double> ExactDependencyInformation(const ScenarioSpec& s);

struct EmpiricalEstimate {
  double value = 0.0;
  double std_error = 0.0;
  uint64_t samples = 0;
};

// Odds p / (1 - p) of a posterior estimate, with a delta-method error.
EmpiricalEstimate OddsOf(const EmpiricalEstimate& posterior);

struct SimulationResult {
  uint64_t samples = 0;
  // P(X_i = 0 | M_i^1..n all suppressed).
  std::optional<EmpiricalEstimate> posterior_self_suppressed;
  // P(X_j = 0 | M_i^1 = m), indexed by m.
  std::optional<EmpiricalEstimate> posterior_cross[2];
  // P(X_j = 0 | M_i^1..n all suppressed).
  std::optional<EmpiricalEstimate> posterior_cross_suppressed_n;
  // P(X_j = 0 | M_i^1 = a, M_j = b), indexed [a][b].
  std::optional<EmpiricalEstimate> posterior_collusion[2][2];
  // Release rate among non-sensitive records, first query of i and of j.
  std::optional<EmpiricalEstimate> release_rate_source;
  std::optional<EmpiricalEstimate> release_rate_target;
  // Releases among sensitive records. Always zero for a correct mechanism.
  uint64_t sensitive_releases = 0;
  // Plug-in mutual information estimates, in bits.
  EmpiricalEstimate mi_self;
  EmpiricalEstimate mi_cross;
  // Names of conditioning events that never occurred.
  std::vector<std::string> zero_evidence;
};

inline constexpr uint64_t kMinSimulationSamples = 10000;
inline constexpr uint64_t kSimulationChunk = uint64_t{1} << 20;

// Seeded Monte-Carlo over the generative process. Samples are processed in
// chunks of kSimulationChunk, chunk c drawing from ChunkSeed(seed, c), so the
// result does not depend on `threads`.
absl::StatusOr<SimulationResult> Simulate(const ScenarioSpec& s,
                                          uint64_t samples, RngSeed seed,
                                          unsigned threads = 0);

// Largest posterior-to-prior odds amplification of X = 0 over the singleton
// outcomes of one mechanism application with positive probability.
absl::StatusOr<double> CheckExclusionFreedom(double theta, double epsilon);

}  // namespace osdp

#endif  // OSDP_ORACLE_H_
