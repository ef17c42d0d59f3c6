// Copyright 2026 The PSRO Lab Authors
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

#include "psro/learners.h"

#include <gtest/gtest.h>

#include <cmath>

namespace psro {
namespace {

AnnealSchedule Constant(double r) { return {AnnealKind::kConstant, r, 0.0}; }

TEST(TrainStepTest, HalfStepTowardsPaper) {
  const PayoffMatrix rps = CanonicalGame("rps");
  LearnerState s(MixedStrategy::Pure(3, 0), 1, Constant(0.5));
  s = TrainStep(s, MixedStrategy::Pure(3, 0), rps);
  EXPECT_EQ(s.policy, MixedStrategy({0.5, 0.5, 0.0}));
  EXPECT_EQ(s.step_count, 1u);
  EXPECT_EQ(s.learning_rate, 0.5);
}

TEST(TrainStepTest, FullRateIsPureBestResponse) {
  const PayoffMatrix g = GenerateRandomGame(9, 13);
  const MixedStrategy target({0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1});
  LearnerState s(MixedStrategy::Uniform(9), 1, Constant(1.0));
  s = TrainStep(s, target, g);
  EXPECT_EQ(s.policy, MixedStrategy::Pure(9, BestResponse(g, target)));
}

TEST(TrainStepTest, TieBreakOnUniformRps) {
  const PayoffMatrix rps = CanonicalGame("rps");
  LearnerState s(MixedStrategy::Uniform(3), 1, Constant(0.2));
  s = TrainStep(s, MixedStrategy::Uniform(3), rps);
  EXPECT_NEAR(s.policy[0], 7.0 / 15.0, 1e-15);
  EXPECT_NEAR(s.policy[1], 4.0 / 15.0, 1e-15);
  EXPECT_NEAR(s.policy[2], 4.0 / 15.0, 1e-15);
}

TEST(TrainStepTest, ShapeMismatch) {
  LearnerState s(MixedStrategy::Uniform(4), 1, Constant(0.5));
  EXPECT_THROW(TrainStep(s, MixedStrategy::Uniform(3), CanonicalGame("rps")),
               Error);
}

TEST(TrainStepTest, GeometricConvergence) {
  const PayoffMatrix g = GenerateRandomGame(20, 4);
  const MixedStrategy target = MixedStrategy::Uniform(20);
  const MixedStrategy br = MixedStrategy::Pure(20, BestResponse(g, target));
  for (double r : {0.05, 0.3, 0.7}) {
    LearnerState s(MixedStrategy::Pure(20, (br[0] == 1.0) ? 1 : 0), 1,
                   Constant(r));
    for (int t = 1; t <= 60; ++t) {
      s = TrainStep(s, target, g);
      double l1 = 0.0;
      for (int i = 0; i < 20; ++i) l1 += std::abs(s.policy[i] - br[i]);
      EXPECT_LE(l1, 2.0 * std::pow(1.0 - r, t) + 1e-12);
    }
  }
}

TEST(PerformanceTest, Examples) {
  const PayoffMatrix rps = CanonicalGame("rps");
  const PayoffMatrix cx = CanonicalGame("rectified_counterexample");
  const LearnerState paper(MixedStrategy::Pure(3, 1), 1, Constant(1.0));
  EXPECT_EQ(Performance(paper, MixedStrategy::Pure(3, 0), rps), 1.0);
  const MixedStrategy mix({0.2, 0.5, 0.3});
  const LearnerState m(mix, 1, Constant(1.0));
  EXPECT_NEAR(Performance(m, mix, rps), 0.0, 1e-15);
  const LearnerState four(MixedStrategy::Pure(4, 3), 1, Constant(1.0));
  EXPECT_NEAR(
      Performance(four, MixedStrategy({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0}), cx),
      0.4, 1e-15);
}

TEST(PerformanceTest, FullStepReachesBestResponseValue) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PayoffMatrix g = GenerateRandomGame(11, seed);
    const MixedStrategy target = MixedStrategy::Uniform(11);
    LearnerState s(MixedStrategy::Pure(11, 0), 1, Constant(1.0));
    s = TrainStep(s, target, g);
    EXPECT_NEAR(Performance(s, target, g), BestResponseValue(g, target),
                1e-15);
  }
}

PerformanceHistory History(std::initializer_list<double> values) {
  PerformanceHistory h;
  std::size_t step = 0;
  for (double v : values) h.Push({step += 10, v});
  return h;
}

TEST(IsPlateauedTest, Examples) {
  const PlateauConfig cfg{3, 0.01, 10};
  EXPECT_TRUE(IsPlateaued(History({0.5, 0.5, 0.5}), cfg));
  EXPECT_FALSE(IsPlateaued(History({0.1, 0.4, 0.9}), cfg));
  EXPECT_FALSE(IsPlateaued(History({0.5, 0.5}), cfg));
  // Only the last window counts.
  EXPECT_TRUE(IsPlateaued(History({0.0, 0.9, 0.9, 0.9}), cfg));
  // A drop after the first sample is not an improvement.
  EXPECT_TRUE(IsPlateaued(History({0.5, 0.2, 0.1}), cfg));
}

TEST(IsPlateauedTest, OracleLearnerPlateausAfterOneWindow) {
  const PayoffMatrix g = GenerateRandomGame(15, 2);
  const PlateauConfig cfg;
  const MixedStrategy target = MixedStrategy::Uniform(15);
  LearnerState s(MixedStrategy::Uniform(15), 1, Constant(1.0));
  int steps = 0;
  while (!IsPlateaued(s, cfg)) {
    s = TrainStep(s, target, g);
    ++steps;
    if (s.step_count % cfg.eval_period == 0) RecordPerformance(s, target, g);
    ASSERT_LT(steps, 1000);
  }
  EXPECT_EQ(steps, cfg.window * cfg.eval_period);
}

TEST(PerformanceHistoryTest, BoundedAndOrdered) {
  PerformanceHistory h(4);
  for (std::size_t i = 0; i < 10; ++i) h.Push({i, static_cast<double>(i)});
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h[0].step, 6u);
  EXPECT_EQ(h.back().step, 9u);
  h.Clear();
  EXPECT_TRUE(h.empty());
}

TEST(LearningRateAtTest, Examples) {
  EXPECT_EQ(LearningRateAt(Constant(0.5), 999), 0.5);
  const AnnealSchedule inv{AnnealKind::kInverseTime, 1.0, 0.01};
  EXPECT_EQ(LearningRateAt(inv, 0), 1.0);
  EXPECT_DOUBLE_EQ(LearningRateAt(inv, 100), 0.5);
}

TEST(LearningRateAtTest, InverseTimeIsMonotoneAndDivergent) {
  const AnnealSchedule inv{AnnealKind::kInverseTime, 1.0, 0.01};
  double sum = 0.0, prev = 2.0;
  std::size_t t = 0;
  for (; sum <= 5.0; ++t) {
    const double r = LearningRateAt(inv, t);
    EXPECT_GT(r, 0.0);
    EXPECT_LE(r, prev);
    prev = r;
    sum += r;
    ASSERT_LT(t, 100000u);
  }
  EXPECT_GT(sum, 5.0);
}

TEST(ScheduleTest, Validation) {
  EXPECT_THROW(Constant(0.0).Validate(), Error);
  EXPECT_THROW(Constant(1.5).Validate(), Error);
  EXPECT_THROW((AnnealSchedule{AnnealKind::kInverseTime, 1.0, -1.0}).Validate(),
               Error);
  EXPECT_THROW((PlateauConfig{1, 0.01, 10}).Validate(), Error);
  EXPECT_THROW((PlateauConfig{3, 0.01, 0}).Validate(), Error);
  EXPECT_THROW(LearnerState(MixedStrategy::Uniform(3), 0, Constant(2.0)),
               Error);
}

}  // namespace
}  // namespace psro
