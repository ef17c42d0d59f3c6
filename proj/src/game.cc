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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace psro {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid_dimension";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kIndex: return "index";
    case ErrorKind::kState: return "state";
    case ErrorKind::kLookup: return "lookup";
    case ErrorKind::kSize: return "size";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kAlignment: return "alignment";
    case ErrorKind::kVerification: return "verification";
  }
  return "unknown";
}

namespace {

void CheckSameDim(int game_dim, int strategy_dim) {
  if (game_dim != strategy_dim) {
    throw Error(ErrorKind::kShape,
                "strategy has dimension " + std::to_string(strategy_dim) +
                    " but the game has " + std::to_string(game_dim));
  }
}

// 53 random mantissa bits mapped to the open interval (0, 1).
double OpenUnitInterval(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

PayoffMatrix::PayoffMatrix(int dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ < 1) {
    throw Error(ErrorKind::kInvalidDimension,
                "payoff matrix dimension must be positive");
  }
  if (entries_.size() != static_cast<std::size_t>(dim_) * dim_) {
    throw Error(ErrorKind::kShape, "payoff matrix needs dim*dim entries");
  }
  for (int i = 0; i < dim_; ++i) {
    if ((*this)(i, i) != 0.0) {
      throw Error(ErrorKind::kShape, "payoff matrix diagonal must be zero");
    }
    for (int j = i + 1; j < dim_; ++j) {
      if ((*this)(i, j) != -(*this)(j, i)) {
        throw Error(ErrorKind::kShape,
                    "payoff matrix is not antisymmetric at (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
}

PayoffMatrix PayoffMatrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  const int dim = static_cast<int>(rows.size());
  std::vector<double> entries;
  entries.reserve(rows.size() * rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim) {
      throw Error(ErrorKind::kShape, "payoff matrix rows must be square");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return PayoffMatrix(dim, std::move(entries));
}

MixedStrategy::MixedStrategy(std::vector<double> probs)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw Error(ErrorKind::kInvalidDimension, "empty mixed strategy");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) {
      throw Error(ErrorKind::kShape,
                  "mixed strategy has a negative or NaN entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw Error(ErrorKind::kShape, "mixed strategy mass is " +
                                       std::to_string(total) + ", not 1");
  }
}

MixedStrategy MixedStrategy::Uniform(int dim) {
  if (dim < 1) {
    throw Error(ErrorKind::kInvalidDimension, "uniform over zero strategies");
  }
  return MixedStrategy(std::vector<double>(dim, 1.0 / dim));
}

MixedStrategy MixedStrategy::Pure(int dim, int index) {
  if (dim < 1) {
    throw Error(ErrorKind::kInvalidDimension, "pure strategy over nothing");
  }
  if (index < 0 || index >= dim) {
    throw Error(ErrorKind::kIndex, "pure strategy index out of range");
  }
  std::vector<double> probs(dim, 0.0);
  probs[index] = 1.0;
  return MixedStrategy(std::move(probs));
}

double LInfDistance(const MixedStrategy& a, const MixedStrategy& b) {
  CheckSameDim(a.dim(), b.dim());
  double worst = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

PayoffMatrix GenerateRandomGame(int dim, std::uint64_t seed) {
  if (dim < 1) {
    throw Error(ErrorKind::kInvalidDimension,
                "random game dimension must be positive");
  }
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> entries(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = 2.0 * OpenUnitInterval(rng()) - 1.0;
      entries[i * n + j] = a;
      entries[j * n + i] = -a;
    }
  }
  return PayoffMatrix(dim, std::move(entries));
}

PayoffMatrix CanonicalGame(CanonicalGameName name) {
  switch (name) {
    case CanonicalGameName::kRps:
      return PayoffMatrix::FromRows({
          {0, -1, 1},
          {1, 0, -1},
          {-1, 1, 0},
      });
    case CanonicalGameName::kRectifiedCounterexample: {
      constexpr double k = 2.0 / 5.0;
      return PayoffMatrix::FromRows({
          {0, -1, 1, -k},
          {1, 0, -1, -k},
          {-1, 1, 0, -k},
          {k, k, k, 0},
      });
    }
  }
  throw Error(ErrorKind::kLookup, "unknown canonical game");
}

PayoffMatrix CanonicalGame(std::string_view name) {
  if (name == "rps") return CanonicalGame(CanonicalGameName::kRps);
  if (name == "rectified_counterexample") {
    return CanonicalGame(CanonicalGameName::kRectifiedCounterexample);
  }
  throw Error(ErrorKind::kLookup,
              "unknown canonical game '" + std::string(name) + "'");
}

std::vector<double> PayoffVector(const PayoffMatrix& game,
                                 const MixedStrategy& opponent) {
  CheckSameDim(game.dim(), opponent.dim());
  std::vector<double> out(game.dim(), 0.0);
  const auto probs = opponent.probs();
  for (int i = 0; i < game.dim(); ++i) {
    const auto row = game.row(i);
    double acc = 0.0;
    for (int j = 0; j < game.dim(); ++j) acc += row[j] * probs[j];
    out[i] = acc;
  }
  return out;
}

int BestResponse(const PayoffMatrix& game, const MixedStrategy& opponent) {
  const std::vector<double> values = PayoffVector(game, opponent);
  return static_cast<int>(std::max_element(values.begin(), values.end()) -
                          values.begin());
}

double BestResponseValue(const PayoffMatrix& game,
                         const MixedStrategy& opponent) {
  const std::vector<double> values = PayoffVector(game, opponent);
  return *std::max_element(values.begin(), values.end());
}

double ExpectedUtility(const PayoffMatrix& game, const MixedStrategy& row,
                       const MixedStrategy& col) {
  CheckSameDim(game.dim(), row.dim());
  const std::vector<double> values = PayoffVector(game, col);
  double acc = 0.0;
  for (int i = 0; i < game.dim(); ++i) acc += row[i] * values[i];
  return acc;
}

double Exploitability(const PayoffMatrix& game, const MixedStrategy& strategy) {
  return std::max(0.0, BestResponseValue(game, strategy));
}

}  // namespace psro
