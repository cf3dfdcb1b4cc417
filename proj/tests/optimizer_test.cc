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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "osdp/infoleak.h"
#include "test_util.h"

namespace osdp {
namespace {

using ::osdp::testing::kLn2;
using ::osdp::testing::RandomBudgetProblem;
using ::osdp::testing::TotalLeakageOf;

// mi_self(0.5, eps) = 0.2 bits, solved independently at high precision.
constexpr double kEpsilonForFifthBit = 0.42624924760556;

BudgetProblem TwoSymmetric(double budget) {
  BudgetProblem p;
  p.attributes = {{"a", 0.5, 0.0}, {"b", 0.5, 0.0}};
  p.budget_bits = budget;
  p.epsilon_max = 5.0;
  return p;
}

void ExpectFeasible(const BudgetProblem& p, const Allocation& a) {
  for (const auto& [id, eps] : a.epsilons) {
    EXPECT_GE(eps, 0.0) << id;
    EXPECT_LE(eps, p.epsilon_max) << id;
  }
  EXPECT_LE(TotalLeakageOf(p, a), p.budget_bits + p.tol);
  EXPECT_NEAR(a.achieved_leakage, TotalLeakageOf(p, a), 1e-12);
}

TEST(BudgetProblemTest, Validation) {
  BudgetProblem p = TwoSymmetric(0.4);
  p.budget_bits = -1;
  EXPECT_FALSE(AllocateBudget(p).ok());
  p = TwoSymmetric(0.4);
  p.epsilon_max = 0;
  EXPECT_FALSE(AllocateBudget(p).ok());
  p = TwoSymmetric(0.4);
  p.tol = 0;
  EXPECT_FALSE(AllocateBudget(p).ok());
  p = TwoSymmetric(0.4);
  p.dependencies = {{"a", "zz", 0.5, 0.5}};
  EXPECT_EQ(AllocateBudget(p).status().code(),
            absl::StatusCode::kInvalidArgument);
  p = TwoSymmetric(0.4);
  p.attributes.push_back({"a", 0.3, 0.0});
  EXPECT_FALSE(AllocateBudget(p).ok());
}

TEST(AllocateBudgetTest, ZeroBudget) {
  auto a = AllocateBudget(TwoSymmetric(0.0));
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->status, AllocationStatus::kBudgetZero);
  EXPECT_EQ(a->objective, 0.0);
  for (const auto& [id, eps] : a->epsilons) EXPECT_EQ(eps, 0.0);
}

TEST(AllocateBudgetTest, SlackBudget) {
  auto a = AllocateBudget(TwoSymmetric(2.0));
  ASSERT_TRUE(a.ok());
  EXPECT_EQ(a->status, AllocationStatus::kBudgetSlack);
  for (const auto& [id, eps] : a->epsilons) EXPECT_EQ(eps, 5.0);
  EXPECT_EQ(std::string(AllocationStatusName(a->status)), "budget-slack");
}

TEST(AllocateBudgetTest, SingleAttributeInvertsLeakage) {
  BudgetProblem p;
  p.attributes = {{"a", 0.5, 0.0}};
  p.budget_bits = 0.311278124459;
  p.epsilon_max = 5.0;
  auto a = AllocateBudget(p);
  ASSERT_TRUE(a.ok());
  EXPECT_NEAR(a->epsilons.at("a"), kLn2, p.tol);
  ExpectFeasible(p, *a);

  auto oracle = GridSearchOracle(p, 1e-3);
  ASSERT_TRUE(oracle.ok());
  EXPECT_NEAR(oracle->epsilons.at("a"), kLn2, 2e-3);
}

// I is strictly concave in eps here, so splitting the budget evenly
// (eps = kEpsilonForFifthBit each) is not optimal: spending it on one
// attribute buys more total epsilon. The allocator must find that.
TEST(AllocateBudgetTest, SymmetricInstanceBeatsEvenSplit) {
  const BudgetProblem p = TwoSymmetric(0.4);
  EXPECT_NEAR(*MutualInformationSelf(0.5, kEpsilonForFifthBit), 0.2, 1e-12);
  auto a = AllocateBudget(p);
  auto oracle = GridSearchOracle(p, 1e-3);
  ASSERT_TRUE(a.ok() && oracle.ok());
  ExpectFeasible(p, *a);
  EXPECT_GT(a->objective, 2 * kEpsilonForFifthBit + 0.05);
  EXPECT_NEAR(a->objective, oracle->objective, p.tol * 2 + 2 * 1e-3 * 2);
  // Identical attributes: the mirrored allocation is just as good.
  EXPECT_NEAR(oracle->epsilons.at("a") + oracle->epsilons.at("b"),
              oracle->objective, 1e-12);
}

TEST(AllocateBudgetTest, MonotoneInBudget) {
  std::mt19937_64 rng(17);
  BudgetProblem p = RandomBudgetProblem(3, 5.0, rng);
  double previous = -1.0;
  for (double t = 0.0; t <= 2.0; t += 0.1) {
    p.budget_bits = t;
    auto a = AllocateBudget(p);
    ASSERT_TRUE(a.ok());
    ExpectFeasible(p, *a);
    EXPECT_GE(a->objective, previous - p.tol * 3);
    previous = a->objective;
  }
}

TEST(AllocateBudgetTest, DeterministicGivenSeed) {
  std::mt19937_64 rng(5);
  BudgetProblem p = RandomBudgetProblem(4, 5.0, rng);
  p.seed = 11;
  auto a = AllocateBudget(p);
  auto b = AllocateBudget(p);
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->epsilons, b->epsilons);
  ExpectFeasible(p, *a);
}

TEST(AllocateBudgetTest, AgreesWithOracleOnRandomPairs) {
  std::mt19937_64 rng(2024);
  constexpr double kStep = 1e-2;
  for (int trial = 0; trial < 10; ++trial) {
    BudgetProblem p = RandomBudgetProblem(2, 5.0, rng);
    auto a = AllocateBudget(p);
    auto oracle = GridSearchOracle(p, kStep);
    ASSERT_TRUE(a.ok() && oracle.ok());
    ExpectFeasible(p, *a);
    ExpectFeasible(p, *oracle);
    EXPECT_GE(a->objective, oracle->objective - (p.tol + 2 * kStep) * 2)
        << "trial " << trial;
  }
}

TEST(GridSearchOracleTest, Limits) {
  BudgetProblem p = TwoSymmetric(0.4);
  for (int k = 0; k < 2; ++k) p.attributes.push_back({"x" + std::to_string(k), 0.5, 0.0});
  EXPECT_EQ(GridSearchOracle(p, 0.1).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(GridSearchOracle(TwoSymmetric(0.4), 0.0).ok());
  auto zero = GridSearchOracle(TwoSymmetric(0.0), 0.01);
  ASSERT_TRUE(zero.ok());
  for (const auto& [id, eps] : zero->epsilons) EXPECT_EQ(eps, 0.0);
}

TEST(LeakageTableTest, GridEndsAtCap) {
  AttributeLeakage f({"a", 0.5, 0.0}, {});
  auto table = LeakageTable::Build(f, 1.0, 0.3);
  ASSERT_TRUE(table.ok());
  EXPECT_LE(table->step(), 0.3);
  EXPECT_EQ(table->epsilon(table->points() - 1), 1.0);
  EXPECT_EQ(table->MaxIndexWithin(-1.0), -1);
  EXPECT_EQ(table->MaxIndexWithin(0.0), 0);
  EXPECT_EQ(table->MaxIndexWithin(10.0),
            static_cast<int64_t>(table->points()) - 1);
}

}  // namespace
}  // namespace osdp
