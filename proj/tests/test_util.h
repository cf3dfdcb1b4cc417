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

// Shared fixtures: the verification grid, synthetic occupancy traces with
// known attributes, and samplers for dependent sensitivity pairs.

#ifndef OSDP_TESTS_TEST_UTIL_H_
#define OSDP_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_format.h"
#include "absl/time/civil_time.h"
#include "osdp/core_model.h"
#include "osdp/optimizer.h"

namespace osdp::testing {

inline const double kLn2 = std::log(2.0);

inline std::vector<double> ThetaGrid() {
  std::vector<double> out;
  for (int k = 1; k <= 9; ++k) out.push_back(k / 10.0);
  return out;
}

// 0.05, 0.20, ..., 0.95.
inline std::vector<double> DeltaGrid() {
  std::vector<double> out;
  for (int k = 0; k <= 6; ++k) out.push_back(0.05 + 0.15 * k);
  return out;
}

inline std::vector<double> EpsilonGrid() { return {0.0, 0.25, kLn2, 1.0, 3.0}; }

inline std::vector<int64_t> QueryGrid() { return {1, 2, 4, 8}; }

inline bool RelativelyClose(double a, double b, double rel) {
  if (a == b) return true;  // Covers matching infinities and zeros.
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// One synthetic day: occupied intervals [begin, end) in minutes since local
// midnight, sampled every `step_minutes` from 00:00 to 23:59.
struct SyntheticDay {
  absl::CivilDay day;
  std::vector<std::pair<int, int>> intervals;
};

struct ExpectedAttributes {
  std::optional<int> start_seconds;
  std::optional<int> end_seconds;
  int exit_count = 0;
  std::optional<double> mean_away_minutes;
  double occupancy_fraction = 0.0;
};

inline constexpr int kSyntheticStepMinutes = 15;

// Ground truth from the intervals alone. Intervals lie strictly inside the
// sampled day, so every boundary is an observed transition.
inline ExpectedAttributes ExpectedFor(const SyntheticDay& d,
                                      int work_start_minutes = 8 * 60,
                                      int work_end_minutes = 17 * 60) {
  ExpectedAttributes e;
  if (!d.intervals.empty()) {
    e.start_seconds = d.intervals.front().first * 60;
    e.end_seconds = d.intervals.back().second * 60;
    e.exit_count = static_cast<int>(d.intervals.size());
  }
  if (d.intervals.size() >= 2) {
    double gaps = 0.0;
    for (size_t k = 1; k < d.intervals.size(); ++k) {
      gaps += d.intervals[k].first - d.intervals[k - 1].second;
    }
    e.mean_away_minutes = gaps / static_cast<double>(d.intervals.size() - 1);
  }
  int inside = 0;
  int total = 0;
  for (int t = work_start_minutes; t < work_end_minutes;
       t += kSyntheticStepMinutes) {
    ++total;
    for (const auto& [b, en] : d.intervals) inside += (b <= t && t < en);
  }
  e.occupancy_fraction = static_cast<double>(inside) / total;
  return e;
}

// Random schedule: up to four visits between 06:00 and 21:00 on the step grid.
inline SyntheticDay RandomDay(absl::CivilDay day, std::mt19937_64& rng) {
  SyntheticDay d{day, {}};
  std::uniform_int_distribution<int> visits(0, 4);
  const int count = visits(rng);
  const int lo = 6 * 60 / kSyntheticStepMinutes;
  const int hi = 21 * 60 / kSyntheticStepMinutes;
  // Distinct sorted boundaries on the step grid.
  std::vector<int> slots;
  for (int s = lo; s <= hi; ++s) slots.push_back(s);
  std::shuffle(slots.begin(), slots.end(), rng);
  slots.resize(2 * count);
  std::sort(slots.begin(), slots.end());
  for (int k = 0; k < count; ++k) {
    d.intervals.emplace_back(slots[2 * k] * kSyntheticStepMinutes,
                             slots[2 * k + 1] * kSyntheticStepMinutes);
  }
  return d;
}

// CSV rows (without header) for one space, timestamps carrying `offset`.
inline std::string SyntheticCsvRows(const std::string& space_id,
                                    const std::vector<SyntheticDay>& days,
                                    const std::string& offset) {
  std::string out;
  for (const SyntheticDay& d : days) {
    for (int t = 0; t < 24 * 60; t += kSyntheticStepMinutes) {
      bool occupied = false;
      for (const auto& [b, e] : d.intervals) occupied |= (b <= t && t < e);
      out += absl::StrFormat("%04d-%02d-%02dT%02d:%02d:00%s,%s,%d\n",
                             d.day.year(), d.day.month(), d.day.day(), t / 60,
                             t % 60, offset, space_id, occupied ? 1 : 0);
    }
  }
  return out;
}

// Draws (X_i, X_j) from theta_j and the conditionals in dep.
inline std::vector<std::pair<SensitivityIndicator, SensitivityIndicator>>
SampleDependentPairs(double theta_j, const DependencyPair& dep, size_t n,
                     uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<SensitivityIndicator, SensitivityIndicator>> out;
  out.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    const bool xj_sensitive = u(rng) < theta_j;
    const double p_i = xj_sensitive ? dep.delta1 : dep.delta2;
    const bool xi_sensitive = u(rng) < p_i;
    auto bit = [](bool sensitive) {
      return sensitive ? SensitivityIndicator::kSensitive
                       : SensitivityIndicator::kNonSensitive;
    };
    out.emplace_back(bit(xi_sensitive), bit(xj_sensitive));
  }
  return out;
}

// Random allocation instance with k attributes, random dependencies and a
// budget strictly between zero and slack.
inline BudgetProblem RandomBudgetProblem(int k, double epsilon_max,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> theta(0.1, 0.9);
  std::uniform_real_distribution<double> delta(0.05, 0.95);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BudgetProblem p;
  p.epsilon_max = epsilon_max;
  for (int a = 0; a < k; ++a) {
    p.attributes.push_back({absl::StrFormat("a%d", a), theta(rng), 0.0});
  }
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a != b && unit(rng) < 0.5) {
        p.dependencies.push_back({p.attributes[a].id, p.attributes[b].id,
                                  delta(rng), delta(rng)});
      }
    }
  }
  double slack = 0.0;
  const auto functions = BuildLeakageFunctions(p);
  for (const AttributeLeakage& f : *functions) {
    slack += *f(epsilon_max);
  }
  p.budget_bits = (0.05 + 0.9 * unit(rng)) * slack;
  return p;
}

inline double TotalLeakageOf(const BudgetProblem& p, const Allocation& a) {
  double total = 0.0;
  const auto functions = BuildLeakageFunctions(p);
  for (const AttributeLeakage& f : *functions) {
    total += *f(a.epsilons.at(f.attribute().id));
  }
  return total;
}

}  // namespace osdp::testing

#endif  // OSDP_TESTS_TEST_UTIL_H_
