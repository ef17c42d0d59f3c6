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

#ifndef PSRO_META_SOLVER_H_
#define PSRO_META_SOLVER_H_

#include <optional>
#include <span>
#include <vector>

#include "psro/game.h"

namespace psro {

inline constexpr int kDefaultMetaIterations = 2000;
inline constexpr double kDefaultMetaResidual = 1e-3;
inline constexpr double kDefaultSupportThreshold = 0.02;
// With refined (exact) equilibria there is no spurious mass to filter, and any
// larger cutoff would drop genuine low-probability support strategies.
inline constexpr double kTheoremSupportThreshold = 1e-9;
inline constexpr int kTheoremMaxDim = 12;

// Approximate symmetric equilibrium of a (restricted) game.
struct MetaNash {
  MixedStrategy weights;
  // Exploitability of `weights` inside the game it was solved on.
  double residual = 0.0;
  int iterations_used = 0;
};

// Which pure strategy seeds the running average.
enum class FictitiousPlayStart {
  kFirst,
  // The most recently added strategy. In population games this is the newest
  // best response, so a population that has just found a pure equilibrium is
  // solved exactly on the first iteration.
  kLast,
};

struct FictitiousPlayOptions {
  int max_iters = kDefaultMetaIterations;
  double target_residual = kDefaultMetaResidual;
  FictitiousPlayStart start = FictitiousPlayStart::kLast;
  // Overrides `start` when set; used for randomized restarts.
  std::optional<int> start_index;
  // After the fictitious-play run, guess the equilibrium support from the
  // average and solve the indifference conditions on it exactly; the exact
  // candidate replaces the average only when it is less exploitable.
  bool refine_support = false;
};

// Fictitious play: repeatedly adds a best response (lowest-index ties) to the
// running average, stopping once the average's exploitability drops to
// `target_residual` or `max_iters` responses have been added.
MetaNash FictitiousPlay(const PayoffMatrix& game,
                        const FictitiousPlayOptions& options = {});
MetaNash FictitiousPlay(const PayoffMatrix& game, int max_iters,
                        double target_residual);

// The support-refinement step on its own: returns `approx` unchanged when no
// candidate support yields a less exploitable strategy.
MetaNash RefineSupport(const PayoffMatrix& game, MetaNash approx);

// Sub-game over `indices`, in the given order.
PayoffMatrix RestrictedGame(const PayoffMatrix& game,
                            std::span<const int> indices);

struct SupportSet {
  std::vector<int> indices;
  double threshold = 0.0;
};

// Indices whose probability is strictly above `threshold`.
SupportSet ExtractSupport(const MixedStrategy& strategy, double threshold);

struct TheoremWitnessFailure {
  std::vector<int> subpopulation;
  MixedStrategy restricted_nash;
  // max over the uncovered support strategies of 1_pi^T G sigma'.
  double best_uncovered_value = 0.0;
};

struct TheoremReport {
  bool holds = false;
  // The full-game solve did not reach the required accuracy; nothing was
  // checked.
  bool unresolved = false;
  MetaNash full_nash;
  SupportSet support;
  int subpopulations_checked = 0;
  std::vector<TheoremWitnessFailure> witness_failures;
};

struct TheoremCheckOptions {
  double support_threshold = kTheoremSupportThreshold;
  double tol = 1e-6;
  FictitiousPlayOptions full_solver{200000, 1e-12, FictitiousPlayStart::kLast,
                                    std::nullopt, true};
  // Full solves with a larger residual are reported as unresolved.
  double max_full_residual = 1e-3;
  FictitiousPlayOptions restricted_solver{20000, 1e-12,
                                          FictitiousPlayStart::kLast,
                                          std::nullopt, true};
};

// Exhaustively checks, for every proper subpopulation that misses part of the
// equilibrium support, that some missing support strategy does not lose to
// the subpopulation's own equilibrium. Refuses games above kTheoremMaxDim.
TheoremReport CheckTheorem1(const PayoffMatrix& game,
                            const TheoremCheckOptions& options = {});
TheoremReport CheckTheorem1(const PayoffMatrix& game, double support_threshold,
                            double tol);

}  // namespace psro

#endif  // PSRO_META_SOLVER_H_
