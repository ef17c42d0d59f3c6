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

#include "psro/game.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace psro {
namespace {

MixedStrategy Mixed(std::vector<double> p) { return MixedStrategy(std::move(p)); }

TEST(PayoffMatrixTest, RejectsBrokenAntisymmetry) {
  EXPECT_THROW(PayoffMatrix(2, {0, 1, 1, 0}), Error);
  EXPECT_THROW(PayoffMatrix(2, {0.5, 1, -1, 0}), Error);
  EXPECT_THROW(PayoffMatrix(2, {0, 1, -1}), Error);
  EXPECT_NO_THROW(PayoffMatrix(2, {0, 1, -1, 0}));
}

TEST(PayoffMatrixTest, ZeroDimensionIsInvalid) {
  try {
    GenerateRandomGame(0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidDimension);
  }
}

TEST(MixedStrategyTest, SimplexChecks) {
  EXPECT_THROW(Mixed({0.5, 0.6}), Error);
  EXPECT_THROW(Mixed({1.5, -0.5}), Error);
  EXPECT_THROW(Mixed({}), Error);
  EXPECT_NO_THROW(Mixed({0.25, 0.75}));
  EXPECT_NO_THROW(Mixed({0.1, 0.2, 0.7}));
}

TEST(GenerateRandomGameTest, DimOneIsZero) {
  for (std::uint64_t seed : {0ull, 5ull, 123456789ull}) {
    const PayoffMatrix g = GenerateRandomGame(1, seed);
    EXPECT_EQ(g.dim(), 1);
    EXPECT_EQ(g(0, 0), 0.0);
  }
}

TEST(GenerateRandomGameTest, AntisymmetricOpenInterval) {
  const PayoffMatrix g = GenerateRandomGame(5, 7);
  EXPECT_EQ(g(2, 4), -g(4, 2));
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(g(i, i), 0.0);
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(g(i, j), -g(j, i));
      if (i != j) {
        EXPECT_GT(g(i, j), -1.0);
        EXPECT_LT(g(i, j), 1.0);
      }
    }
  }
}

TEST(GenerateRandomGameTest, Deterministic) {
  EXPECT_EQ(GenerateRandomGame(60, 42), GenerateRandomGame(60, 42));
  EXPECT_FALSE(GenerateRandomGame(60, 42) == GenerateRandomGame(60, 43));
}

TEST(GenerateRandomGameTest, MatchesReferenceStream) {
  // Same construction spelled out independently: row-major upper triangle,
  // 53 high bits mapped to the open unit interval.
  std::mt19937_64 rng(99);
  const PayoffMatrix g = GenerateRandomGame(4, 99);
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double u = (static_cast<double>(rng() >> 11) + 0.5) *
                       (1.0 / 9007199254740992.0);
      EXPECT_EQ(g(i, j), 2.0 * u - 1.0);
    }
  }
}

TEST(GenerateRandomGameTest, RoughlyUniform) {
  const PayoffMatrix g = GenerateRandomGame(200, 3);
  double sum = 0.0, sq = 0.0;
  int n = 0;
  for (int i = 0; i < 200; ++i) {
    for (int j = i + 1; j < 200; ++j) {
      sum += g(i, j);
      sq += g(i, j) * g(i, j);
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(sq / n, 1.0 / 3.0, 0.02);
}

TEST(BestResponseTest, Examples) {
  const PayoffMatrix rps = CanonicalGame(CanonicalGameName::kRps);
  const PayoffMatrix cx =
      CanonicalGame(CanonicalGameName::kRectifiedCounterexample);
  EXPECT_EQ(BestResponse(rps, MixedStrategy::Pure(3, 0)), 1);
  EXPECT_EQ(BestResponse(cx, Mixed({1.0 / 3, 1.0 / 3, 1.0 / 3, 0})), 3);
  EXPECT_EQ(BestResponse(rps, MixedStrategy::Uniform(3)), 0);
}

TEST(BestResponseTest, ShapeMismatch) {
  const PayoffMatrix rps = CanonicalGame(CanonicalGameName::kRps);
  try {
    BestResponse(rps, MixedStrategy::Uniform(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
  EXPECT_THROW(ExpectedUtility(rps, MixedStrategy::Uniform(3),
                               MixedStrategy::Uniform(2)),
               Error);
}

TEST(BestResponseValueTest, Examples) {
  const PayoffMatrix rps = CanonicalGame(CanonicalGameName::kRps);
  const PayoffMatrix cx =
      CanonicalGame(CanonicalGameName::kRectifiedCounterexample);
  EXPECT_NEAR(BestResponseValue(rps, MixedStrategy::Uniform(3)), 0.0, 1e-15);
  EXPECT_NEAR(BestResponseValue(cx, Mixed({1.0 / 3, 1.0 / 3, 1.0 / 3, 0})),
              0.4, 1e-15);
  EXPECT_EQ(BestResponseValue(rps, MixedStrategy::Pure(3, 0)), 1.0);
}

TEST(ExpectedUtilityTest, Examples) {
  const PayoffMatrix rps = CanonicalGame(CanonicalGameName::kRps);
  const PayoffMatrix cx =
      CanonicalGame(CanonicalGameName::kRectifiedCounterexample);
  EXPECT_EQ(ExpectedUtility(rps, MixedStrategy::Pure(3, 0),
                            MixedStrategy::Pure(3, 2)),
            1.0);
  EXPECT_EQ(ExpectedUtility(cx, MixedStrategy::Pure(4, 3),
                            MixedStrategy::Pure(4, 0)),
            0.4);
  const PayoffMatrix g = GenerateRandomGame(7, 1);
  const MixedStrategy s = Mixed({0.1, 0.2, 0.05, 0.3, 0.15, 0.1, 0.1});
  EXPECT_NEAR(ExpectedUtility(g, s, s), 0.0, 1e-15);
}

TEST(ExploitabilityTest, Examples) {
  const PayoffMatrix rps = CanonicalGame(CanonicalGameName::kRps);
  const PayoffMatrix cx =
      CanonicalGame(CanonicalGameName::kRectifiedCounterexample);
  EXPECT_NEAR(Exploitability(rps, MixedStrategy::Uniform(3)), 0.0, 1e-15);
  EXPECT_EQ(Exploitability(rps, MixedStrategy::Pure(3, 0)), 1.0);
  EXPECT_NEAR(Exploitability(cx, Mixed({1.0 / 3, 1.0 / 3, 1.0 / 3, 0})), 0.4,
              1e-15);
  EXPECT_EQ(Exploitability(cx, MixedStrategy::Pure(4, 3)), 0.0);
}

TEST(CanonicalGameTest, Fixtures) {
  const PayoffMatrix rps = CanonicalGame("rps");
  const PayoffMatrix cx = CanonicalGame("rectified_counterexample");
  EXPECT_EQ(rps(0, 1), -1.0);
  EXPECT_EQ(rps(0, 2), 1.0);
  EXPECT_EQ(rps(1, 2), -1.0);
  for (int j = 0; j < 3; ++j) EXPECT_EQ(cx(3, j), 0.4);
  EXPECT_EQ(cx(3, 3), 0.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_EQ(cx(i, j), rps(i, j));
  }
  try {
    CanonicalGame("chess");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLookup);
  }
}

TEST(LInfDistanceTest, Basic) {
  EXPECT_EQ(LInfDistance(MixedStrategy::Pure(3, 0), MixedStrategy::Pure(3, 2)),
            1.0);
  EXPECT_EQ(LInfDistance(MixedStrategy::Uniform(3), MixedStrategy::Uniform(3)),
            0.0);
}

}  // namespace
}  // namespace psro
