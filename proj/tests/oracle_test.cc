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

#include <cmath>

#include "gtest/gtest.h"
#include "osdp/infoleak.h"
#include "osdp/leakage.h"
#include "test_util.h"

namespace osdp {
namespace {

using ::osdp::testing::DeltaGrid;
using ::osdp::testing::kLn2;
using ::osdp::testing::RelativelyClose;

const DependencyPair kWorked{"i", "j", 0.8, 0.2};

ScenarioSpec Worked(int64_t n = 1) {
  return {0.5, kWorked, kLn2, kLn2, *QueryCount::Create(n)};
}

Evidence Of(std::optional<ReleaseOutcome> m_i, int64_t n,
            std::optional<ReleaseOutcome> m_j) {
  return {m_i, *QueryCount::Create(n), m_j};
}

constexpr auto kS = ReleaseOutcome::kSuppressed;
constexpr auto kR = ReleaseOutcome::kReleased;

TEST(EnumerateTest, ProbabilitiesSumToOne) {
  for (int64_t n : {1, 3, 8}) {
    auto table = EnumerateJoint(Worked(n));
    ASSERT_TRUE(table.ok());
    EXPECT_EQ(table->size(), size_t{1} << (n + 3));
    EXPECT_NEAR(table->Total(), 1.0, 1e-14);
    for (uint64_t a = 0; a < table->size(); ++a) {
      // Sensitive records are never released.
      if (JointOutcomeTable::XSource(a) == 0) {
        for (int64_t k = 0; k < n; ++k) {
          if (JointOutcomeTable::MSource(a, k) == 1) {
            EXPECT_EQ(table->probability(a), 0.0);
          }
        }
      }
    }
  }
}

TEST(EnumerateTest, Limits) {
  ScenarioSpec s = Worked();
  s.n_queries = *QueryCount::Create(kMaxEnumeratedQueries + 1);
  EXPECT_EQ(EnumerateJoint(s).status().code(), absl::StatusCode::kOutOfRange);
  s = Worked();
  s.theta_j = 1.5;
  EXPECT_FALSE(EnumerateJoint(s).ok());
}

TEST(ExactPosteriorTest, WorkedValues) {
  auto cross0 =
      ExactPosteriorRatio(Worked(), Of(kS, 1, std::nullopt),
                          TargetVariable::kTarget);
  auto cross1 =
      ExactPosteriorRatio(Worked(), Of(kR, 1, std::nullopt),
                          TargetVariable::kTarget);
  auto coll00 = ExactPosteriorRatio(Worked(), Of(kS, 1, kS),
                                    TargetVariable::kTarget);
  auto coll10 = ExactPosteriorRatio(Worked(), Of(kR, 1, kS),
                                    TargetVariable::kTarget);
  auto coll01 = ExactPosteriorRatio(Worked(), Of(kS, 1, kR),
                                    TargetVariable::kTarget);
  ASSERT_TRUE(cross0.ok() && cross1.ok() && coll00.ok() && coll10.ok() &&
              coll01.ok());
  EXPECT_NEAR(PosteriorFromRatio(*cross0), 0.6, 1e-14);
  EXPECT_NEAR(PosteriorFromRatio(*cross1), 0.2, 1e-14);
  EXPECT_NEAR(PosteriorFromRatio(*coll00), 0.75, 1e-14);
  EXPECT_NEAR(PosteriorFromRatio(*coll10), 1.0 / 3.0, 1e-14);
  EXPECT_TRUE(coll01->is_zero());
}

TEST(ExactPosteriorTest, Errors) {
  // A release of i with epsilon 0 never happens.
  ScenarioSpec s = Worked();
  s.epsilon_i = 0.0;
  EXPECT_EQ(ExactPosteriorRatio(s, Of(kR, 1, std::nullopt),
                                TargetVariable::kTarget)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  s = Worked();
  s.epsilon_j.reset();
  EXPECT_EQ(ExactPosteriorRatio(s, Of(kS, 1, kS), TargetVariable::kTarget)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
}

// Closed forms agree with enumeration over a coarse grid; the acceptance
// binary runs the full grid.
TEST(ExactPosteriorTest, ClosedFormsAgreeOnGrid) {
  for (double theta_j : {0.2, 0.5, 0.8}) {
    for (double d1 : DeltaGrid()) {
      for (double d2 : DeltaGrid()) {
        const DependencyPair dep{"i", "j", d1, d2};
        const double theta_i = ImpliedSourceTheta(theta_j, dep);
        for (double eps : {0.25, 1.0}) {
          for (int64_t n : {1, 4}) {
            ScenarioSpec s{theta_j, dep, eps, eps, *QueryCount::Create(n)};
            auto table = EnumerateJoint(s);
            ASSERT_TRUE(table.ok());
            auto self = ExactPosteriorRatio(*table, Of(kS, n, std::nullopt),
                                            TargetVariable::kSource);
            EXPECT_TRUE(RelativelyClose(
                self->value(),
                PosteriorRatioSelf(theta_i, eps, s.n_queries)->value(),
                1e-12));
            auto cross = ExactPosteriorRatio(*table, Of(kS, n, std::nullopt),
                                             TargetVariable::kTarget);
            EXPECT_TRUE(RelativelyClose(
                cross->value(),
                PosteriorRatioCross(theta_j, dep, eps, kS, s.n_queries)
                    ->value(),
                1e-12));
          }
        }
      }
    }
  }
}

TEST(ExactMutualInformationTest, MatchesClosedForms) {
  EXPECT_NEAR(*ExactMutualInformation(Worked(), TargetVariable::kSource),
              0.311278124459, 1e-12);
  EXPECT_NEAR(*ExactMutualInformation(Worked(), TargetVariable::kTarget),
              0.0913050304371579, 1e-12);
}

TEST(ExactDependencyInformationTest, IndependentIsZero) {
  ScenarioSpec s{0.3, {"i", "j", 0.6, 0.6}, 1.0, std::nullopt,
                 QueryCount::One()};
  EXPECT_NEAR(*ExactDependencyInformation(s), 0.0, 1e-15);
  s.dep = {"i", "j", 1.0, 0.0};
  EXPECT_NEAR(*ExactDependencyInformation(s), BinaryEntropy(0.3), 1e-12);
}

TEST(ExclusionFreedomTest, EqualsExpEpsilon) {
  for (double eps : {0.0, 0.5, 1.0, 2.0}) {
    for (double theta : {0.1, 0.5, 0.9}) {
      auto bound = CheckExclusionFreedom(theta, eps);
      ASSERT_TRUE(bound.ok());
      EXPECT_NEAR(*bound, std::exp(eps), 1e-12);
    }
  }
}

TEST(SimulateTest, RejectsTinySamples) {
  EXPECT_EQ(Simulate(Worked(), 10, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(SimulateTest, IndependentOfThreadCount) {
  auto one = Simulate(Worked(2), 3 * kSimulationChunk / 2, 5, 1);
  auto many = Simulate(Worked(2), 3 * kSimulationChunk / 2, 5, 4);
  ASSERT_TRUE(one.ok() && many.ok());
  EXPECT_EQ(one->posterior_cross[0]->value, many->posterior_cross[0]->value);
  EXPECT_EQ(one->posterior_self_suppressed->value,
            many->posterior_self_suppressed->value);
  EXPECT_EQ(one->mi_cross.value, many->mi_cross.value);
}

TEST(SimulateTest, WorkedPosteriorsWithinFourSigma) {
  auto sim = Simulate(Worked(), 2'000'000, 99);
  ASSERT_TRUE(sim.ok());
  EXPECT_EQ(sim->sensitive_releases, 0u);
  auto within = [](const std::optional<EmpiricalEstimate>& e, double truth) {
    ASSERT_TRUE(e.has_value());
    EXPECT_NEAR(e->value, truth, 4 * e->std_error);
  };
  within(sim->posterior_cross[0], 0.6);
  within(sim->posterior_cross[1], 0.2);
  within(sim->posterior_collusion[0][0], 0.75);
  within(sim->posterior_collusion[1][0], 1.0 / 3.0);
  within(sim->release_rate_source, 0.5);
  EXPECT_NEAR(sim->mi_self.value, 0.311278124459, 4 * sim->mi_self.std_error);
}

TEST(SimulateTest, ReportsEmptyEvidence) {
  ScenarioSpec s = Worked();
  s.epsilon_i = 0.0;
  auto sim = Simulate(s, kMinSimulationSamples, 2);
  ASSERT_TRUE(sim.ok());
  EXPECT_FALSE(sim->posterior_cross[1].has_value());
  EXPECT_FALSE(sim->zero_evidence.empty());
}

TEST(OddsTest, DeltaMethod) {
  EmpiricalEstimate p{0.6, 0.01, 1000};
  EmpiricalEstimate odds = OddsOf(p);
  EXPECT_NEAR(odds.value, 1.5, 1e-15);
  EXPECT_NEAR(odds.std_error, 0.01 / (0.4 * 0.4), 1e-15);
}

}  // namespace
}  // namespace osdp
