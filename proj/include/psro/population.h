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

#ifndef PSRO_POPULATION_H_
#define PSRO_POPULATION_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "psro/game.h"
#include "psro/meta_solver.h"

namespace psro {

enum class PolicyStatus { kFixed, kActive };

struct PolicyEntry {
  MixedStrategy policy;
  PolicyStatus status;
  int level;
};

// Meta-distribution together with the population indices it weights.
struct PopulationMetaNash {
  MetaNash meta;
  std::vector<int> indices;
};

// Ordered policy list: fixed policies first, then the active hierarchy. A
// policy's level equals its position, so fixed levels are always below active
// ones and active levels are consecutive.
//
// Only fixed-vs-fixed payoffs are stored; anything involving an active policy
// is computed from its latest published snapshot on demand.
//
// Single writer: structural mutation (add, promote, publish) must come from one
// coordinator. Concurrent const access is safe between mutations.
class Population {
 public:
  // One fixed policy at level 0.
  Population(std::shared_ptr<const PayoffMatrix> base_game,
             MixedStrategy initial_policy);

  // Uniform initial policy.
  static Population Init(const PayoffMatrix& base_game);

  const PayoffMatrix& base_game() const { return *base_game_; }
  std::shared_ptr<const PayoffMatrix> shared_base_game() const {
    return base_game_;
  }

  int size() const { return static_cast<int>(entries_.size()); }
  int num_fixed() const { return num_fixed_; }
  int num_active() const { return size() - num_fixed_; }
  const PolicyEntry& entry(int index) const { return entries_.at(index); }
  const MixedStrategy& policy(int index) const { return entry(index).policy; }

  // Appends an active policy above every existing one; returns its level.
  int AddActivePolicy(MixedStrategy policy);

  // Appends a fixed policy. Only valid while no policy is active, since fixed
  // levels must stay below the hierarchy.
  int AddFixedPolicy(MixedStrategy policy);

  // Replaces the snapshot of an active policy.
  void PublishActivePolicy(int index, MixedStrategy policy);

  // Freezes the lowest active policy and fills its row of the payoff table.
  void PromoteLowestActive();

  // Index of the lowest active policy, if any.
  std::optional<int> LowestActive() const;

  // Stored u(a, b) for fixed a, b.
  double TableEntry(int a, int b) const;

  // u(a, b) for any pair, from stored entries or live snapshots.
  double Payoff(int a, int b) const;

  // Empirical game over `indices` (in order).
  PayoffMatrix EmpiricalGame(std::span<const int> indices) const;

  // Indices of every policy whose level is strictly below `level`.
  std::vector<int> IndicesBelow(int level) const;

  // Meta-Nash over every policy strictly below `level`.
  PopulationMetaNash MetaNashBelow(
      int level, const FictitiousPlayOptions& options = {}) const;

  // Meta-Nash over the given indices.
  PopulationMetaNash MetaNashOver(
      std::vector<int> indices, const FictitiousPlayOptions& options = {}) const;

  // Collapses a meta-distribution into a single base-game strategy.
  MixedStrategy Mixture(const PopulationMetaNash& meta) const;

 private:
  void CheckPolicy(const MixedStrategy& policy) const;

  std::shared_ptr<const PayoffMatrix> base_game_;
  std::vector<PolicyEntry> entries_;
  // G * policy for each entry.
  std::vector<std::vector<double>> payoff_vectors_;
  int num_fixed_ = 0;
  // Row-major num_fixed_ x num_fixed_ block, grown on promotion.
  std::vector<std::vector<double>> table_;
};

// Convex combination sum_k weights[k] * policies[k].
MixedStrategy MixPolicies(std::span<const MixedStrategy> policies,
                          const MixedStrategy& weights);

// Identifies the base game of a checkpoint so it can be rebuilt on load.
struct GameDescriptor {
  enum class Kind { kRandom, kFixture, kInline };
  Kind kind = Kind::kInline;
  int dim = 0;
  std::uint64_t seed = 0;
  std::string fixture;
};

PayoffMatrix BuildGame(const GameDescriptor& descriptor,
                       const PayoffMatrix* inline_game = nullptr);

struct PopulationCheckpoint {
  GameDescriptor game;
  Population population;
};

// Versioned text format: a "psro-population 1" header, the game line, then one
// line per policy with its status, level and probabilities (17 significant
// digits, so values round-trip exactly).
void SaveCheckpoint(std::ostream& out, const GameDescriptor& game,
                    const Population& population);
PopulationCheckpoint LoadCheckpoint(std::istream& in);

}  // namespace psro

#endif  // PSRO_POPULATION_H_
