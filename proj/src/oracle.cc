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

#include "osdp/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "absl/strings/str_cat.h"

namespace osdp {
namespace {

// P(M = m | X = x) under one-sided randomized response.
double OutcomeProbability(int x, int m, double epsilon) {
  if (x == 0) return m == 0 ? 1.0 : 0.0;
  return m == 0 ? std::exp(-epsilon) : -std::expm1(-epsilon);
}

bool Matches(uint64_t atom, const Evidence& evidence) {
  if (evidence.m_i.has_value()) {
    const int m = ToBit(*evidence.m_i);
    for (int64_t k = 0; k < evidence.n_i.value(); ++k) {
      if (JointOutcomeTable::MSource(atom, k) != m) return false;
    }
  }
  if (evidence.m_j.has_value() &&
      JointOutcomeTable::MTarget(atom) != ToBit(*evidence.m_j)) {
    return false;
  }
  return true;
}

// Neumaier-compensated sum, so enumeration error stays near one ulp.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    compensation_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x
                                                   : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double MutualInformationBits(const double joint[2][2]) {
  double rows[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
  double cols[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double nats = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double p = joint[a][b];
      if (p > 0) nats += p * std::log(p / (rows[a] * cols[b]));
    }
  }
  return nats / std::log(2.0);
}

struct SimulationCounts {
  uint64_t self_n_evidence = 0;
  uint64_t self_n_sensitive = 0;
  uint64_t cross_evidence[2] = {0, 0};
  uint64_t cross_sensitive[2] = {0, 0};
  uint64_t cross_n_evidence = 0;
  uint64_t cross_n_sensitive = 0;
  uint64_t collusion_evidence[2][2] = {{0, 0}, {0, 0}};
  uint64_t collusion_sensitive[2][2] = {{0, 0}, {0, 0}};
  uint64_t nonsensitive_source = 0;
  uint64_t released_source = 0;
  uint64_t nonsensitive_target = 0;
  uint64_t released_target = 0;
  uint64_t sensitive_releases = 0;
  // [x][m] tables against the first query of record i.
  uint64_t self_table[2][2] = {{0, 0}, {0, 0}};
  uint64_t cross_table[2][2] = {{0, 0}, {0, 0}};

  void Merge(const SimulationCounts& o) {
    self_n_evidence += o.self_n_evidence;
    self_n_sensitive += o.self_n_sensitive;
    cross_n_evidence += o.cross_n_evidence;
    cross_n_sensitive += o.cross_n_sensitive;
    nonsensitive_source += o.nonsensitive_source;
    released_source += o.released_source;
    nonsensitive_target += o.nonsensitive_target;
    released_target += o.released_target;
    sensitive_releases += o.sensitive_releases;
    for (int a = 0; a < 2; ++a) {
      cross_evidence[a] += o.cross_evidence[a];
      cross_sensitive[a] += o.cross_sensitive[a];
      for (int b = 0; b < 2; ++b) {
        collusion_evidence[a][b] += o.collusion_evidence[a][b];
        collusion_sensitive[a][b] += o.collusion_sensitive[a][b];
        self_table[a][b] += o.self_table[a][b];
        cross_table[a][b] += o.cross_table[a][b];
      }
    }
  }
};

void SimulateChunk(const ScenarioSpec& s, const OsdpRandomizedResponse& mech_i,
                   const OsdpRandomizedResponse& mech_j, uint64_t count,
                   RngSeed seed, SimulationCounts& counts) {
  ReleaseRng rng(seed);
  const int64_t n = s.n_queries.value();
  for (uint64_t r = 0; r < count; ++r) {
    const int x_j = rng.Uniform() < s.theta_j ? 0 : 1;
    const double p_source_sensitive = x_j == 0 ? s.dep.delta1 : s.dep.delta2;
    const int x_i = rng.Uniform() < p_source_sensitive ? 0 : 1;
    const auto sx_i = static_cast<SensitivityIndicator>(x_i);
    const auto sx_j = static_cast<SensitivityIndicator>(x_j);

    int first_m_i = 0;
    bool all_suppressed = true;
    for (int64_t k = 0; k < n; ++k) {
      const int m = ToBit(mech_i.Release(sx_i, rng));
      if (k == 0) first_m_i = m;
      if (m == 1) all_suppressed = false;
      if (m == 1 && x_i == 0) ++counts.sensitive_releases;
    }
    const int m_j = ToBit(mech_j.Release(sx_j, rng));
    if (m_j == 1 && x_j == 0) ++counts.sensitive_releases;

    if (all_suppressed) {
      ++counts.self_n_evidence;
      counts.self_n_sensitive += x_i == 0;
      ++counts.cross_n_evidence;
      counts.cross_n_sensitive += x_j == 0;
    }
    ++counts.cross_evidence[first_m_i];
    counts.cross_sensitive[first_m_i] += x_j == 0;
    ++counts.collusion_evidence[first_m_i][m_j];
    counts.collusion_sensitive[first_m_i][m_j] += x_j == 0;
    if (x_i == 1) {
      ++counts.nonsensitive_source;
      counts.released_source += first_m_i;
    }
    if (x_j == 1) {
      ++counts.nonsensitive_target;
      counts.released_target += m_j;
    }
    ++counts.self_table[x_i][first_m_i];
    ++counts.cross_table[x_j][first_m_i];
  }
}

std::optional<EmpiricalEstimate> Proportion(uint64_t hits, uint64_t trials) {
  if (trials == 0) return std::nullopt;
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  return EmpiricalEstimate{p, std::sqrt(p * (1 - p) / trials), trials};
}

// Plug-in estimate with the first-order asymptotic standard error.
EmpiricalEstimate PlugInMutualInformation(const uint64_t table[2][2],
                                          uint64_t total) {
  const double n = static_cast<double>(total);
  double rows[2] = {0, 0};
  double cols[2] = {0, 0};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      rows[a] += table[a][b] / n;
      cols[b] += table[a][b] / n;
    }
  }
  double mean = 0.0;
  double second = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double p = table[a][b] / n;
      if (p == 0) continue;
      const double l = std::log(p / (rows[a] * cols[b]));
      mean += p * l;
      second += p * l * l;
    }
  }
  const double ln2 = std::log(2.0);
  const double variance = std::max(0.0, second - mean * mean) / n;
  return EmpiricalEstimate{mean / ln2, std::sqrt(variance) / ln2, total};
}

}  // namespace

absl::Status ValidateScenario(const ScenarioSpec& s) {
  if (auto st = ValidateProbability(s.theta_j, "theta_j"); !st.ok()) return st;
  if (auto st = ValidateDependency(s.dep); !st.ok()) return st;
  if (auto st = ValidateEpsilon(s.epsilon_i); !st.ok()) return st;
  if (s.epsilon_j.has_value()) {
    if (auto st = ValidateEpsilon(*s.epsilon_j); !st.ok()) return st;
  }
  return absl::OkStatus();
}

double JointOutcomeTable::Total() const {
  CompensatedSum total;
  for (double p : probabilities_) total.Add(p);
  return total.value();
}

absl::StatusOr<JointOutcomeTable> EnumerateJoint(const ScenarioSpec& s) {
  if (auto st = ValidateScenario(s); !st.ok()) return st;
  const int64_t n = s.n_queries.value();
  if (n > kMaxEnumeratedQueries) {
    return absl::OutOfRangeError(absl::StrCat(
        "enumeration supports at most ", kMaxEnumeratedQueries,
        " queries, got ", n));
  }
  auto joint = JointFromMarginalAndDeps(s.theta_j, s.dep);
  if (!joint.ok()) return joint.status();
  const double pair[2][2] = {{joint->p00, joint->p01},
                             {joint->p10, joint->p11}};
  const double epsilon_j = s.epsilon_j.value_or(0.0);

  const uint64_t atoms = uint64_t{1} << (n + 3);
  std::vector<double> probabilities(atoms);
  for (uint64_t atom = 0; atom < atoms; ++atom) {
    const int x_i = JointOutcomeTable::XSource(atom);
    const int x_j = JointOutcomeTable::XTarget(atom);
    double p = pair[x_i][x_j] *
               OutcomeProbability(x_j, JointOutcomeTable::MTarget(atom),
                                  epsilon_j);
    for (int64_t k = 0; k < n && p > 0; ++k) {
      p *= OutcomeProbability(x_i, JointOutcomeTable::MSource(atom, k),
                              s.epsilon_i);
    }
    probabilities[atom] = p;
  }
  return JointOutcomeTable(n, std::move(probabilities));
}

absl::StatusOr<PosteriorRatio> ExactPosteriorRatio(
    const JointOutcomeTable& table, const Evidence& evidence,
    TargetVariable target) {
  if (auto st = ValidateEvidence(evidence); !st.ok()) return st;
  if (evidence.m_i.has_value() && evidence.n_i.value() > table.n_queries()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "evidence spans ", evidence.n_i.value(),
        " queries but the scenario has ", table.n_queries()));
  }
  CompensatedSum sums[2];
  for (uint64_t atom = 0; atom < table.size(); ++atom) {
    if (!Matches(atom, evidence)) continue;
    const int x = target == TargetVariable::kSource
                      ? JointOutcomeTable::XSource(atom)
                      : JointOutcomeTable::XTarget(atom);
    sums[x].Add(table.probability(atom));
  }
  const double sensitive = sums[0].value();
  const double nonsensitive = sums[1].value();
  if (sensitive + nonsensitive == 0) {
    return absl::FailedPreconditionError(
        "zero-probability evidence: the conditioning event cannot occur");
  }
  if (sensitive == 0) return PosteriorRatio::Zero();
  if (nonsensitive == 0) {
    return PosteriorRatio::FromLog(std::numeric_limits<double>::infinity());
  }
  return PosteriorRatio::FromLog(std::log(sensitive) - std::log(nonsensitive));
}

absl::StatusOr<PosteriorRatio> ExactPosteriorRatio(const ScenarioSpec& s,
                                                   const Evidence& evidence,
                                                   TargetVariable target) {
  if (evidence.m_j.has_value() && !s.epsilon_j.has_value()) {
    return absl::InvalidArgumentError(
        "evidence on M_j requires the scenario to define epsilon_j");
  }
  auto table = EnumerateJoint(s);
  if (!table.ok()) return table.status();
  return ExactPosteriorRatio(*table, evidence, target);
}

absl::StatusOr<double> ExactMutualInformation(const ScenarioSpec& s,
                                              TargetVariable target) {
  auto table = EnumerateJoint(s);
  if (!table.ok()) return table.status();
  CompensatedSum sums[2][2];
  for (uint64_t atom = 0; atom < table->size(); ++atom) {
    const int x = target == TargetVariable::kSource
                      ? JointOutcomeTable::XSource(atom)
                      : JointOutcomeTable::XTarget(atom);
    sums[x][JointOutcomeTable::MSource(atom, 0)].Add(table->probability(atom));
  }
  double joint[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) joint[a][b] = sums[a][b].value();
  }
  return MutualInformationBits(joint);
}

absl::StatusOr<double> ExactDependencyInformation(const ScenarioSpec& s) {
  auto joint = JointFromMarginalAndDeps(s.theta_j, s.dep);
  if (!joint.ok()) return joint.status();
  const double table[2][2] = {{joint->p00, joint->p01},
                              {joint->p10, joint->p11}};
  return MutualInformationBits(table);
}

EmpiricalEstimate OddsOf(const EmpiricalEstimate& posterior) {
  const double q = 1 - posterior.value;
  if (q <= 0) {
    return EmpiricalEstimate{std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity(),
                             posterior.samples};
  }
  return EmpiricalEstimate{posterior.value / q, posterior.std_error / (q * q),
                           posterior.samples};
}

absl::StatusOr<SimulationResult> Simulate(const ScenarioSpec& s,
                                          uint64_t samples, RngSeed seed,
                                          unsigned threads) {
  if (auto st = ValidateScenario(s); !st.ok()) return st;
  if (samples < kMinSimulationSamples) {
    return absl::InvalidArgumentError(absl::StrCat(
        "simulation needs at least ", kMinSimulationSamples, " samples, got ",
        samples));
  }
  auto mech_i = OsdpRandomizedResponse::Create(s.epsilon_i);
  if (!mech_i.ok()) return mech_i.status();
  auto mech_j = OsdpRandomizedResponse::Create(s.epsilon_j.value_or(0.0));
  if (!mech_j.ok()) return mech_j.status();

  const uint64_t chunks = (samples + kSimulationChunk - 1) / kSimulationChunk;
  unsigned workers = threads != 0 ? threads : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(
      std::clamp<uint64_t>(workers == 0 ? 1 : workers, 1, chunks));

  std::vector<SimulationCounts> partial(workers);
  auto work = [&](unsigned w) {
    for (uint64_t c = w; c < chunks; c += workers) {
      const uint64_t begin = c * kSimulationChunk;
      const uint64_t count = std::min(kSimulationChunk, samples - begin);
      SimulateChunk(s, *mech_i, *mech_j, count, ChunkSeed(seed, c),
                    partial[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  SimulationCounts counts;
  for (const SimulationCounts& p : partial) counts.Merge(p);

  SimulationResult result;
  result.samples = samples;
  result.sensitive_releases = counts.sensitive_releases;
  auto record = [&](std::optional<EmpiricalEstimate>& slot, uint64_t hits,
                    uint64_t trials, const std::string& name) {
    slot = Proportion(hits, trials);
    if (!slot.has_value()) result.zero_evidence.push_back(name);
  };
  record(result.posterior_self_suppressed, counts.self_n_sensitive,
         counts.self_n_evidence, "self_suppressed_n");
  record(result.posterior_cross_suppressed_n, counts.cross_n_sensitive,
         counts.cross_n_evidence, "cross_suppressed_n");
  for (int m = 0; m < 2; ++m) {
    record(result.posterior_cross[m], counts.cross_sensitive[m],
           counts.cross_evidence[m], absl::StrCat("cross_m", m));
  }
  if (s.epsilon_j.has_value()) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        record(result.posterior_collusion[a][b],
               counts.collusion_sensitive[a][b],
               counts.collusion_evidence[a][b],
               absl::StrCat("collusion_mi", a, "_mj", b));
      }
    }
    record(result.release_rate_target, counts.released_target,
           counts.nonsensitive_target, "nonsensitive_target");
  }
  record(result.release_rate_source, counts.released_source,
         counts.nonsensitive_source, "nonsensitive_source");
  result.mi_self = PlugInMutualInformation(counts.self_table, samples);
  result.mi_cross = PlugInMutualInformation(counts.cross_table, samples);
  return result;
}

absl::StatusOr<double> CheckExclusionFreedom(double theta, double epsilon) {
  if (auto st = ValidateProbability(theta, "theta"); !st.ok()) return st;
  if (theta == 0 || theta == 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("theta must lie strictly inside (0, 1), got ", theta));
  }
  // A lone record: the companion attribute is independent and unobserved.
  ScenarioSpec s;
  s.theta_j = 0.5;
  s.dep = DependencyPair{"record", "companion", theta, theta};
  s.epsilon_i = epsilon;
  auto table = EnumerateJoint(s);
  if (!table.ok()) return table.status();

  double prior[2] = {0, 0};
  double joint[2][2] = {{0, 0}, {0, 0}};
  for (uint64_t atom = 0; atom < table->size(); ++atom) {
    const int x = JointOutcomeTable::XSource(atom);
    prior[x] += table->probability(atom);
    joint[JointOutcomeTable::MSource(atom, 0)][x] += table->probability(atom);
  }
  const double log_prior_odds = std::log(prior[0]) - std::log(prior[1]);
  double best = 0.0;
  for (int m = 0; m < 2; ++m) {
    if (joint[m][0] + joint[m][1] == 0) continue;
    if (joint[m][0] == 0) continue;  // odds 0, amplification 0
    best = std::max(best, std::exp(std::log(joint[m][0]) -
                                   std::log(joint[m][1]) - log_prior_odds));
  }
  return best;
}

}  // namespace osdp
