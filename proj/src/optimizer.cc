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

#include "osdp/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "absl/strings/str_cat.h"

namespace osdp {
namespace {

constexpr int kBisectionIterations = 200;
constexpr int kRefineIterations = 60;
constexpr int kCoordinateAscentRestarts = 8;
constexpr int kMaxLocalSearchPasses = 200;

// A point of the search, with per-coordinate leakage cached.
struct Point {
  std::vector<double> eps;
  std::vector<double> leak;

  double Objective() const {
    double s = 0.0;
    for (double e : eps) s += e;
    return s;
  }
  double Leakage() const {
    double s = 0.0;
    for (double l : leak) s += l;
    return s;
  }
};

Point FromIndices(const std::vector<LeakageTable>& tables,
                  const std::vector<int64_t>& idx) {
  Point p;
  for (size_t i = 0; i < tables.size(); ++i) {
    p.eps.push_back(tables[i].epsilon(idx[i]));
    p.leak.push_back(tables[i].leakage(idx[i]));
  }
  return p;
}

Allocation MakeAllocation(const std::vector<AttributeLeakage>& fns,
                          const Point& point, AllocationStatus status,
                          AllocationMethod method) {
  Allocation a;
  for (size_t i = 0; i < fns.size(); ++i) {
    a.epsilons[fns[i].attribute().id] = point.eps[i];
  }
  a.achieved_leakage = point.Leakage();
  a.objective = point.Objective();
  a.status = status;
  a.method = method;
  return a;
}

Point Uniform(const std::vector<AttributeLeakage>& fns, double epsilon,
              const std::vector<double>& leak) {
  Point p;
  p.eps.assign(fns.size(), epsilon);
  p.leak = leak;
  return p;
}

// Sum of per-coordinate maxima of eps - lambda * I(eps); ties go to the
// smallest eps. Returns the Lagrangian dual value sum + lambda * T.
double SolveLagrangian(const std::vector<LeakageTable>& tables, double lambda,
                       double budget, std::vector<int64_t>& idx) {
  double dual = lambda * budget;
  for (size_t i = 0; i < tables.size(); ++i) {
    const LeakageTable& t = tables[i];
    double best = -std::numeric_limits<double>::infinity();
    int64_t best_k = 0;
    for (size_t k = 0; k < t.points(); ++k) {
      const double v = t.epsilon(k) - lambda * t.leakage(k);
      if (v > best) {
        best = v;
        best_k = static_cast<int64_t>(k);
      }
    }
    idx[i] = best_k;
    dual += best;
  }
  return dual;
}

double LeakageAt(const std::vector<LeakageTable>& tables,
                 const std::vector<int64_t>& idx) {
  double s = 0.0;
  for (size_t i = 0; i < tables.size(); ++i) s += tables[i].leakage(idx[i]);
  return s;
}

// Raises coordinates without leaving the feasible set: first a common shift
// of up to one grid step, then exact coordinate maxima on the grid, then a
// per-coordinate continuous nudge.
absl::Status Refine(const std::vector<AttributeLeakage>& fns,
                    const std::vector<LeakageTable>& tables, double budget,
                    double epsilon_max, Point& point) {
  const size_t n = fns.size();
  const double step = tables.front().step();

  // Common shift.
  std::vector<double> trial(n);
  auto shifted_leakage = [&](double t) -> absl::StatusOr<double> {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      auto l = fns[i](std::min(point.eps[i] + t, epsilon_max));
      if (!l.ok()) return l.status();
      trial[i] = *l;
      total += *l;
    }
    return total;
  };
  double lo = 0.0;
  double hi = step;
  for (int it = 0; it < kRefineIterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto l = shifted_leakage(mid);
    if (!l.ok()) return l.status();
    (*l <= budget ? lo : hi) = mid;
  }
  if (lo > 0) {
    auto l = shifted_leakage(lo);
    if (!l.ok()) return l.status();
    if (*l <= budget) {
      for (size_t i = 0; i < n; ++i) {
        point.eps[i] = std::min(point.eps[i] + lo, epsilon_max);
        point.leak[i] = trial[i];
      }
    }
  }

  // Coordinate maxima on the grid.
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < n; ++i) {
      const double room = budget - (point.Leakage() - point.leak[i]);
      const int64_t k = tables[i].MaxIndexWithin(room);
      if (k >= 0 && tables[i].epsilon(k) > point.eps[i]) {
        point.eps[i] = tables[i].epsilon(k);
        point.leak[i] = tables[i].leakage(k);
        changed = true;
      }
    }
  }

  // Continuous nudge, one coordinate at a time.
  for (size_t i = 0; i < n; ++i) {
    const double room = budget - (point.Leakage() - point.leak[i]);
    double nudge_lo = 0.0;
    double nudge_hi = std::min(step, epsilon_max - point.eps[i]);
    double nudge_leak = point.leak[i];
    if (nudge_hi <= 0) continue;
    for (int it = 0; it < kRefineIterations; ++it) {
      const double mid = 0.5 * (nudge_lo + nudge_hi);
      auto l = fns[i](point.eps[i] + mid);
      if (!l.ok()) return l.status();
      if (*l <= room) {
        nudge_lo = mid;
        nudge_leak = *l;
      } else {
        nudge_hi = mid;
      }
    }
    if (nudge_lo > 0) {
      point.eps[i] += nudge_lo;
      point.leak[i] = nudge_leak;
    }
  }
  return absl::OkStatus();
}

// Exact coordinate maxima on the grid until no coordinate moves.
void FillCoordinates(const std::vector<LeakageTable>& tables, double budget,
                     const std::vector<size_t>& order,
                     std::vector<int64_t>& idx) {
  for (bool changed = true; changed;) {
    changed = false;
    double total = LeakageAt(tables, idx);
    for (size_t i : order) {
      const double room = budget - (total - tables[i].leakage(idx[i]));
      const int64_t k = tables[i].MaxIndexWithin(room);
      if (k > idx[i]) {
        total += tables[i].leakage(k) - tables[i].leakage(idx[i]);
        idx[i] = k;
        changed = true;
      }
    }
  }
}

double GridObjective(const std::vector<LeakageTable>& tables,
                     const std::vector<int64_t>& idx) {
  double s = 0.0;
  for (size_t i = 0; i < tables.size(); ++i) s += tables[i].epsilon(idx[i]);
  return s;
}

// Coordinate fills plus pairwise budget transfers.
void LocalSearch(const std::vector<LeakageTable>& tables, double budget,
                 const std::vector<size_t>& order, std::vector<int64_t>& idx) {
  const size_t n = tables.size();
  for (int pass = 0; pass < kMaxLocalSearchPasses; ++pass) {
    FillCoordinates(tables, budget, order, idx);
    bool improved = false;
    const double total = LeakageAt(tables, idx);
    for (size_t a = 0; a < n && !improved; ++a) {
      const size_t i = order[a];
      for (size_t j = 0; j < n && !improved; ++j) {
        if (j == i) continue;
        for (int64_t d = 1; d <= idx[i] && !improved; d *= 2) {
          const int64_t new_i = idx[i] - d;
          const double without =
              total - tables[i].leakage(idx[i]) + tables[i].leakage(new_i) -
              tables[j].leakage(idx[j]);
          const int64_t new_j = tables[j].MaxIndexWithin(budget - without);
          if (new_j < 0) continue;
          const double gain =
              tables[i].epsilon(new_i) + tables[j].epsilon(new_j) -
              tables[i].epsilon(idx[i]) - tables[j].epsilon(idx[j]);
          if (gain > 1e-12) {
            idx[i] = new_i;
            idx[j] = new_j;
            improved = true;
          }
        }
      }
    }
    if (!improved) return;
  }
}

std::vector<int64_t> CoordinateAscent(const std::vector<LeakageTable>& tables,
                                      double budget,
                                      const std::vector<int64_t>& start,
                                      RngSeed seed) {
  const size_t n = tables.size();
  ReleaseRng rng(seed);
  std::vector<int64_t> best = start;
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  LocalSearch(tables, budget, order, best);
  double best_objective = GridObjective(tables, best);

  for (int r = 0; r < kCoordinateAscentRestarts; ++r) {
    // Fisher-Yates with the library generator keeps restarts reproducible
    // across standard libraries.
    for (size_t i = n; i > 1; --i) {
      const size_t j = static_cast<size_t>(rng.Uniform() * i);
      std::swap(order[i - 1], order[j]);
    }
    std::vector<int64_t> idx(n);
    for (size_t i = 0; i < n; ++i) {
      idx[i] = static_cast<int64_t>(rng.Uniform() * tables[i].points());
    }
    while (LeakageAt(tables, idx) > budget) {
      for (int64_t& k : idx) k /= 2;
    }
    LocalSearch(tables, budget, order, idx);
    const double objective = GridObjective(tables, idx);
    if (objective > best_objective) {
      best_objective = objective;
      best = idx;
    }
  }
  return best;
}

}  // namespace

const char* AllocationStatusName(AllocationStatus status) {
  switch (status) {
    case AllocationStatus::kOptimalOnGrid:
      return "optimal-on-grid";
    case AllocationStatus::kBudgetSlack:
      return "budget-slack";
    case AllocationStatus::kBudgetZero:
      return "budget-zero";
  }
  return "unknown";
}

const char* AllocationMethodName(AllocationMethod method) {
  switch (method) {
    case AllocationMethod::kBoundary:
      return "boundary";
    case AllocationMethod::kLagrangian:
      return "lagrangian";
    case AllocationMethod::kGridOracle:
      return "grid-oracle";
    case AllocationMethod::kCoordinateAscent:
      return "coordinate-ascent";
  }
  return "unknown";
}

absl::Status ValidateBudgetProblem(const BudgetProblem& p) {
  if (!std::isfinite(p.budget_bits) || p.budget_bits < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("budget T must be finite and >= 0, got ", p.budget_bits));
  }
  if (!std::isfinite(p.epsilon_max) || p.epsilon_max <= 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "epsilon_max must be finite and > 0, got ", p.epsilon_max));
  }
  if (!std::isfinite(p.tol) || p.tol <= 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("tol must be finite and > 0, got ", p.tol));
  }
  if (p.attributes.empty()) {
    return absl::InvalidArgumentError("budget problem has no attributes");
  }
  std::set<std::string> ids;
  for (const AttributeSpec& a : p.attributes) {
    if (auto s = ValidateProbability(a.theta, "theta"); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", a.id, "': ", s.message()));
    }
    if (!ids.insert(a.id).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate attribute id '", a.id, "'"));
    }
  }
  for (const DependencyPair& d : p.dependencies) {
    if (auto s = ValidateDependency(d); !s.ok()) return s;
    if (!ids.contains(d.source) || !ids.contains(d.target)) {
      return absl::InvalidArgumentError(
          absl::StrCat("dependency ", d.source, " -> ", d.target,
                       " references an undeclared attribute"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> AttributeLeakage::operator()(double epsilon) const {
  auto profile = Profile(epsilon);
  if (!profile.ok()) return profile.status();
  return profile->total;
}

absl::StatusOr<LeakageProfile> AttributeLeakage::Profile(
    double epsilon) const {
  AttributeSpec a = attr_;
  a.epsilon = epsilon;
  return TotalLeakage(a, deps_);
}

absl::StatusOr<std::vector<AttributeLeakage>> BuildLeakageFunctions(
    const BudgetProblem& p) {
  if (auto s = ValidateBudgetProblem(p); !s.ok()) return s;
  std::map<std::string, double> theta;
  for (const AttributeSpec& a : p.attributes) theta[a.id] = a.theta;
  std::vector<AttributeLeakage> fns;
  for (const AttributeSpec& a : p.attributes) {
    std::vector<CrossDependency> deps;
    for (const DependencyPair& d : p.dependencies) {
      if (d.source == a.id) deps.push_back(CrossDependency{theta[d.target], d});
    }
    AttributeSpec spec = a;
    spec.epsilon = 0.0;
    fns.emplace_back(std::move(spec), std::move(deps));
  }
  return fns;
}

LeakageTable::LeakageTable(double epsilon_max, double step,
                           std::vector<double> values)
    : epsilon_max_(epsilon_max),
      step_(step),
      values_(std::move(values)),
      suffix_min_(values_.size()) {
  double running = std::numeric_limits<double>::infinity();
  for (size_t k = values_.size(); k-- > 0;) {
    running = std::min(running, values_[k]);
    suffix_min_[k] = running;
  }
}

absl::StatusOr<LeakageTable> LeakageTable::Build(
    const AttributeLeakage& leakage, double epsilon_max, double max_step) {
  if (!(max_step > 0) || !(epsilon_max > 0)) {
    return absl::InvalidArgumentError("grid step and epsilon_max must be > 0");
  }
  const auto intervals =
      static_cast<int64_t>(std::ceil(epsilon_max / max_step - 1e-9));
  const int64_t n = std::max<int64_t>(intervals, 1);
  const double step = epsilon_max / static_cast<double>(n);
  std::vector<double> values(n + 1);
  for (int64_t k = 0; k <= n; ++k) {
    auto v = leakage(k == n ? epsilon_max : k * step);
    if (!v.ok()) return v.status();
    values[k] = *v;
  }
  return LeakageTable(epsilon_max, step, std::move(values));
}

int64_t LeakageTable::MaxIndexWithin(double budget) const {
  auto it = std::upper_bound(suffix_min_.begin(), suffix_min_.end(), budget);
  return static_cast<int64_t>(it - suffix_min_.begin()) - 1;
}

absl::StatusOr<Allocation> AllocateBudget(const BudgetProblem& p) {
  auto fns_or = BuildLeakageFunctions(p);
  if (!fns_or.ok()) return fns_or.status();
  const std::vector<AttributeLeakage>& fns = *fns_or;
  const size_t n = fns.size();
  const double budget = p.budget_bits;

  if (budget == 0) {
    return MakeAllocation(fns, Uniform(fns, 0.0, std::vector<double>(n, 0.0)),
                          AllocationStatus::kBudgetZero,
                          AllocationMethod::kBoundary);
  }
  std::vector<double> at_max(n);
  double total_at_max = 0.0;
  for (size_t i = 0; i < n; ++i) {
    auto l = fns[i](p.epsilon_max);
    if (!l.ok()) return l.status();
    at_max[i] = *l;
    total_at_max += *l;
  }
  if (total_at_max <= budget) {
    return MakeAllocation(fns, Uniform(fns, p.epsilon_max, at_max),
                          AllocationStatus::kBudgetSlack,
                          AllocationMethod::kBoundary);
  }

  std::vector<LeakageTable> tables;
  for (const AttributeLeakage& f : fns) {
    auto t = LeakageTable::Build(f, p.epsilon_max, p.tol);
    if (!t.ok()) return t.status();
    tables.push_back(*std::move(t));
  }

  // Bisection on the multiplier. Leakage of the Lagrangian maximizer is
  // nonincreasing in lambda; every lambda yields an upper bound on the grid
  // optimum by weak duality.
  std::vector<int64_t> idx(n);
  std::vector<int64_t> feasible(n);
  double upper_bound = SolveLagrangian(tables, 0.0, budget, idx);
  double lambda_lo = 0.0;
  double lambda_hi = 1.0;
  for (int it = 0;; ++it) {
    upper_bound =
        std::min(upper_bound, SolveLagrangian(tables, lambda_hi, budget, idx));
    if (LeakageAt(tables, idx) <= budget) break;
    if (it >= kBisectionIterations) {
      return absl::InternalError("could not bracket the Lagrange multiplier");
    }
    lambda_lo = lambda_hi;
    lambda_hi *= 2;
  }
  feasible = idx;
  for (int it = 0; it < kBisectionIterations; ++it) {
    const double mid = 0.5 * (lambda_lo + lambda_hi);
    if (mid <= lambda_lo || mid >= lambda_hi) break;
    upper_bound =
        std::min(upper_bound, SolveLagrangian(tables, mid, budget, idx));
    if (LeakageAt(tables, idx) <= budget) {
      lambda_hi = mid;
      feasible = idx;
    } else {
      lambda_lo = mid;
    }
  }

  Point point = FromIndices(tables, feasible);
  if (auto s = Refine(fns, tables, budget, p.epsilon_max, point); !s.ok()) {
    return s;
  }
  Allocation result = MakeAllocation(fns, point,
                                     AllocationStatus::kOptimalOnGrid,
                                     AllocationMethod::kLagrangian);
  result.gap_bound = std::max(0.0, upper_bound - result.objective);

  // Nonconvex leakage can leave a duality gap; fall back when it is larger
  // than the tolerance we promise.
  if (result.gap_bound > p.tol * static_cast<double>(n)) {
    if (n <= static_cast<size_t>(kMaxGridOracleAttributes)) {
      auto oracle = GridSearchOracle(p, tables.front().step());
      if (!oracle.ok()) return oracle.status();
      if (oracle->objective > result.objective) {
        result = *oracle;
        result.method = AllocationMethod::kGridOracle;
      }
      // Exhaustive on the grid: nothing on it beats the result.
      result.gap_bound = 0.0;
    } else {
      std::vector<int64_t> best =
          CoordinateAscent(tables, budget, feasible, p.seed);
      Point candidate = FromIndices(tables, best);
      if (auto s = Refine(fns, tables, budget, p.epsilon_max, candidate);
          !s.ok()) {
        return s;
      }
      if (candidate.Objective() > result.objective) {
        const double bound = result.gap_bound + result.objective;
        result = MakeAllocation(fns, candidate,
                                AllocationStatus::kOptimalOnGrid,
                                AllocationMethod::kCoordinateAscent);
        result.gap_bound = std::max(0.0, bound - result.objective);
      }
    }
  }
  return result;
}

absl::StatusOr<Allocation> GridSearchOracle(const BudgetProblem& p,
                                            double step) {
  auto fns_or = BuildLeakageFunctions(p);
  if (!fns_or.ok()) return fns_or.status();
  const std::vector<AttributeLeakage>& fns = *fns_or;
  const size_t n = fns.size();
  if (n > static_cast<size_t>(kMaxGridOracleAttributes)) {
    return absl::OutOfRangeError(absl::StrCat(
        "grid search supports at most ", kMaxGridOracleAttributes,
        " attributes, got ", n));
  }
  if (!(step > 0)) {
    return absl::InvalidArgumentError("grid step must be > 0");
  }
  const double budget = p.budget_bits;
  if (budget == 0) {
    return MakeAllocation(fns, Uniform(fns, 0.0, std::vector<double>(n, 0.0)),
                          AllocationStatus::kBudgetZero,
                          AllocationMethod::kGridOracle);
  }

  std::vector<LeakageTable> tables;
  for (const AttributeLeakage& f : fns) {
    auto t = LeakageTable::Build(f, p.epsilon_max, step);
    if (!t.ok()) return t.status();
    tables.push_back(*std::move(t));
  }

  // The last coordinate is resolved exactly by MaxIndexWithin, so only the
  // first n - 1 coordinates are enumerated.
  std::vector<int64_t> best(n, 0);
  double best_objective = -1.0;
  const LeakageTable& last = tables.back();
  auto consider = [&](std::vector<int64_t>& idx, double used) {
    const int64_t k = last.MaxIndexWithin(budget - used);
    if (k < 0) return;
    idx.back() = k;
    const double objective = GridObjective(tables, idx);
    if (objective > best_objective) {
      best_objective = objective;
      best = idx;
    }
  };
  std::vector<int64_t> idx(n, 0);
  if (n == 1) {
    consider(idx, 0.0);
  } else if (n == 2) {
    for (size_t a = 0; a < tables[0].points(); ++a) {
      const double used = tables[0].leakage(a);
      if (used > budget) continue;
      idx[0] = static_cast<int64_t>(a);
      consider(idx, used);
    }
  } else {
    for (size_t a = 0; a < tables[0].points(); ++a) {
      const double used_a = tables[0].leakage(a);
      if (used_a > budget) continue;
      idx[0] = static_cast<int64_t>(a);
      for (size_t b = 0; b < tables[1].points(); ++b) {
        const double used = used_a + tables[1].leakage(b);
        if (used > budget) continue;
        idx[1] = static_cast<int64_t>(b);
        consider(idx, used);
      }
    }
  }

  Point point = FromIndices(tables, best);
  bool all_max = true;
  for (double e : point.eps) all_max = all_max && e == p.epsilon_max;
  return MakeAllocation(fns, point,
                        all_max ? AllocationStatus::kBudgetSlack
                                : AllocationStatus::kOptimalOnGrid,
                        AllocationMethod::kGridOracle);
}

}  // namespace osdp
