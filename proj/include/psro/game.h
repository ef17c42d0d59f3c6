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

#ifndef PSRO_GAME_H_
#define PSRO_GAME_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "psro/errors.h"

namespace psro {

// Probability vectors are accepted when their mass is within this distance
// of one.
inline constexpr double kSimplexTolerance = 1e-12;

// Row-player utilities of a symmetric two-player zero-sum game. The matrix is
// antisymmetric with a zero diagonal; construction rejects anything else.
class PayoffMatrix {
 public:
  // `entries` is row-major, dim * dim values.
  PayoffMatrix(int dim, std::vector<double> entries);

  static PayoffMatrix FromRows(const std::vector<std::vector<double>>& rows);

  int dim() const { return dim_; }
  double operator()(int row, int col) const {
    return entries_[static_cast<std::size_t>(row) * dim_ + col];
  }
  std::span<const double> row(int i) const {
    return {entries_.data() + static_cast<std::size_t>(i) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& entries() const { return entries_; }

  friend bool operator==(const PayoffMatrix&, const PayoffMatrix&) = default;

 private:
  int dim_;
  std::vector<double> entries_;
};

// A point of the probability simplex over pure strategies.
class MixedStrategy {
 public:
  explicit MixedStrategy(std::vector<double> probs);

  static MixedStrategy Uniform(int dim);
  static MixedStrategy Pure(int dim, int index);

  int dim() const { return static_cast<int>(probs_.size()); }
  double operator[](int i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const MixedStrategy&, const MixedStrategy&) = default;

 private:
  std::vector<double> probs_;
};

// Largest absolute coordinate difference.
double LInfDistance(const MixedStrategy& a, const MixedStrategy& b);

// Draws the strict upper triangle i.i.d. from Uniform(-1, 1) (open interval)
// with a mt19937_64 stream, mirrors it negated below the diagonal. The
// conversion from raw bits to doubles is explicit so the same (dim, seed)
// produces bit-identical matrices on every platform.
PayoffMatrix GenerateRandomGame(int dim, std::uint64_t seed);

enum class CanonicalGameName { kRps, kRectifiedCounterexample };

PayoffMatrix CanonicalGame(CanonicalGameName name);
// Accepts "rps" and "rectified_counterexample".
PayoffMatrix CanonicalGame(std::string_view name);

// (G * strategy)[i] for every row i.
std::vector<double> PayoffVector(const PayoffMatrix& game,
                                 const MixedStrategy& opponent);

// Index of the best pure response; ties go to the lowest index.
int BestResponse(const PayoffMatrix& game, const MixedStrategy& opponent);
double BestResponseValue(const PayoffMatrix& game,
                         const MixedStrategy& opponent);

// row^T * G * col.
double ExpectedUtility(const PayoffMatrix& game, const MixedStrategy& row,
                       const MixedStrategy& col);

// For a symmetric game both players' best-response gains coincide, so this is
// the best-response value against `strategy`, clamped at zero against
// rounding.
double Exploitability(const PayoffMatrix& game, const MixedStrategy& strategy);

}  // namespace psro

#endif  // PSRO_GAME_H_
