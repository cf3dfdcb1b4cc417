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

// Privacy-budget allocation:
//
//   maximize    sum_i eps_i
//   subject to  sum_i I_i(eps_i) <= T,   0 <= eps_i <= eps_max
//
// I_i is the leakage functional from infoleak.h. It need not be convex, so
// each coordinate of the Lagrangian relaxation is solved by scanning a grid
// rather than through derivative conditions.

#ifndef OSDP_OPTIMIZER_H_
#define OSDP_OPTIMIZER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "osdp/core_model.h"
#include "osdp/infoleak.h"
#include "osdp/mechanism.h"

namespace osdp {

inline constexpr double kDefaultEpsilonMax = 10.0;
inline constexpr double kDefaultOptimizerTol = 1e-3;
inline constexpr int kMaxGridOracleAttributes = 3;

struct BudgetProblem {
  // Attribute epsilons are ignored; thetas are the priors.
  std::vector<AttributeSpec> attributes;
  // Target priors are looked up in `attributes`.
  std::vector<DependencyPair> dependencies;
  // T, in bits.
  double budget_bits = 0.0;
  double epsilon_max = kDefaultEpsilonMax;
  double tol = kDefaultOptimizerTol;
  // Drives the randomized restarts of the coordinate-ascent fallback.
  RngSeed seed = 0;
};

absl::Status ValidateBudgetProblem(const BudgetProblem& p);

enum class AllocationStatus {
  kOptimalOnGrid,
  kBudgetSlack,
  kBudgetZero,
};

enum class AllocationMethod {
  kBoundary,
  kLagrangian,
  kGridOracle,
  kCoordinateAscent,
};

const char* AllocationStatusName(AllocationStatus status);
const char* AllocationMethodName(AllocationMethod method);

struct Allocation {
  std::map<std::string, double> epsilons;
  double achieved_leakage = 0.0;
  double objective = 0.0;
  AllocationStatus status = AllocationStatus::kOptimalOnGrid;
  AllocationMethod method = AllocationMethod::kBoundary;
  // Upper bound on (grid optimum - objective) certified by weak duality, or
  // zero when no bound was computed.
  double gap_bound = 0.0;
};

// I_i as a function of eps_i for one attribute of a problem.
class AttributeLeakage {
 public:
  AttributeLeakage(AttributeSpec attr, std::vector<CrossDependency> deps)
      : attr_(std::move(attr)), deps_(std::move(deps)) {}

  absl::StatusOr<double> operator()(double epsilon) const;
  absl::StatusOr<LeakageProfile> Profile(double epsilon) const;

  const AttributeSpec& attribute() const { return attr_; }
  const std::vector<CrossDependency>& dependencies() const { return deps_; }

 private:
  AttributeSpec attr_;
  std::vector<CrossDependency> deps_;
};

// One AttributeLeakage per attribute, in problem order.
absl::StatusOr<std::vector<AttributeLeakage>> BuildLeakageFunctions(
    const BudgetProblem& p);

// I_i sampled at eps = k * step, k = 0..intervals, with the last point at
// exactly eps_max.
class LeakageTable {
 public:
  static absl::StatusOr<LeakageTable> Build(const AttributeLeakage& leakage,
                                            double epsilon_max,
                                            double max_step);

  size_t points() const { return values_.size(); }
  double step() const { return step_; }
  double epsilon(size_t k) const {
    return k + 1 == values_.size() ? epsilon_max_ : k * step_;
  }
  double leakage(size_t k) const { return values_[k]; }
  // Largest k with leakage(k) <= budget, or -1 if there is none.
  int64_t MaxIndexWithin(double budget) const;

 private:
  LeakageTable(double epsilon_max, double step, std::vector<double> values);

  double epsilon_max_;
  double step_;
  std::vector<double> values_;
  // suffix_min_[k] = min over m >= k of values_[m]; nondecreasing in k.
  std::vector<double> suffix_min_;
};

absl::StatusOr<Allocation> AllocateBudget(const BudgetProblem& p);

// Exhaustive search over the eps grid with spacing at most `step`. Supports
// up to kMaxGridOracleAttributes attributes; fails with kOutOfRange beyond.
absl::StatusOr<Allocation> GridSearchOracle(const BudgetProblem& p,
                                            double step);

}  // namespace osdp

#endif  // OSDP_OPTIMIZER_H_
