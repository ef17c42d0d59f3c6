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

#ifndef PSRO_ORCHESTRATORS_H_
#define PSRO_ORCHESTRATORS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psro/game.h"
#include "psro/learners.h"
#include "psro/meta_solver.h"
#include "psro/population.h"

namespace psro {

enum class AlgorithmKind {
  kSequentialPsro,
  kNaivePsro,
  kP2sro,
  kDch,
  kRectifiedPsro,
  kSelfPlay,
};

inline constexpr AlgorithmKind kAllAlgorithms[] = {
    AlgorithmKind::kSequentialPsro, AlgorithmKind::kNaivePsro,
    AlgorithmKind::kP2sro,          AlgorithmKind::kDch,
    AlgorithmKind::kRectifiedPsro,  AlgorithmKind::kSelfPlay,
};

std::string_view AlgorithmName(AlgorithmKind kind);
AlgorithmKind ParseAlgorithm(std::string_view name);

enum class SchedulerMode { kLockstep, kThreaded };

std::string_view SchedulerModeName(SchedulerMode mode);
SchedulerMode ParseSchedulerMode(std::string_view name);

struct SchedulerConfig {
  int workers = 1;
  SchedulerMode mode = SchedulerMode::kLockstep;
  // Rounds between meta-Nash recomputations for the learners' targets.
  int meta_refresh_period = 10;
  // Budget in train steps summed over all workers.
  std::size_t max_steps = 100000;
  // Optional budget in rounds; 0 disables it.
  std::size_t max_rounds = 0;
  // Rounds between exploitability measurements.
  int eval_every = 10;

  void Validate() const;
};

enum class InitialPolicyKind { kUniform, kRandomPure, kPure };

struct InitialPolicy {
  InitialPolicyKind kind = InitialPolicyKind::kUniform;
  // Pure strategy index for kPure.
  int index = 0;
};

struct RunConfig {
  AlgorithmKind algorithm = AlgorithmKind::kP2sro;
  SchedulerConfig scheduler;
  AnnealSchedule schedule;
  PlateauConfig plateau;
  // Solver for the learners' targets.
  FictitiousPlayOptions meta_solver;
  // Seed each target solve from a random strategy instead of a fixed one.
  bool randomize_meta_init = false;
  // Solver for the whole-population equilibrium that is measured.
  FictitiousPlayOptions eval_solver;
  InitialPolicy initial_policy;
  // Rectified PSRO only trains responses for members above this meta mass.
  double rectified_support_threshold = kDefaultSupportThreshold;
  // Rectified PSRO treats new policies this close (L-inf) to an existing one
  // as duplicates.
  double duplicate_tolerance = 1e-9;
  // Measure only fixed policies instead of fixed plus live learners.
  bool eval_fixed_only = false;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct TraceRecord {
  std::size_t round = 0;
  std::size_t global_step = 0;
  double exploitability = 0.0;
  int population_size = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// Receives trace records as they are produced.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void OnRecord(const TraceRecord& record) = 0;
};

enum class RunEventKind {
  kPromotion,
  kGenerationStart,
  kGenerationAdded,
  kGenerationEmpty,
};

struct RunEvent {
  std::size_t round = 0;
  RunEventKind kind = RunEventKind::kPromotion;
  // Rectified PSRO generation, counted from 1; 0 elsewhere.
  int generation = 0;
  // Population indices the event concerns (promoted or added policies).
  std::vector<int> policies;
  std::string message;
};

// Read-only view of one worker after a round, for observers and tests.
struct SlotView {
  bool busy = false;
  MixedStrategy policy;
  int level = 0;
  // Population indices the current target mixes over, and the weights.
  std::vector<int> target_members;
  std::optional<MixedStrategy> target_weights;
};

struct RoundView {
  std::size_t round = 0;
  const Population& population;
  std::span<const SlotView> slots;
};

using RoundObserver = std::function<void(const RoundView&)>;

struct RunOptions {
  TraceSink* sink = nullptr;
  // Called after every round in lockstep mode; ignored in threaded mode.
  RoundObserver observer;
  // Start from a saved population instead of a single initial policy.
  std::optional<Population> resume_from;
};

struct RunResult {
  std::vector<TraceRecord> records;
  std::vector<RunEvent> events;
  Population population;
  // Policies of the live learners when the run stopped.
  std::vector<MixedStrategy> learner_policies;
  std::size_t rounds = 0;
  std::size_t global_steps = 0;
  // Round at which the algorithm stopped producing policies on its own
  // (Rectified PSRO with no new response).
  std::optional<std::size_t> terminated_round;
};

// Executes `config.algorithm` on `game` until the step or round budget runs
// out, measuring the exploitability of the whole-population meta-Nash every
// `eval_every` rounds (and at round 0). Lockstep runs are bit-deterministic
// for a given config; threaded runs step workers concurrently against cached
// targets while a coordinator promotes and refreshes.
RunResult Run(const PayoffMatrix& game, const RunConfig& config,
              RunOptions options = {});

class Orchestrator;

// Lockstep, round-at-a-time access to a run.
class RunState {
 public:
  RunState(const PayoffMatrix& game, const RunConfig& config,
           RunOptions options = {});
  ~RunState();
  RunState(RunState&&) noexcept;
  RunState& operator=(RunState&&) noexcept;

  // Advances every busy worker by one step and coordinates. Returns false,
  // without doing anything, once the budget is exhausted.
  bool Round();

  const Population& population() const;
  std::vector<SlotView> Slots() const;
  std::size_t round() const;
  std::size_t global_step() const;
  const std::vector<TraceRecord>& records() const;
  const std::vector<RunEvent>& events() const;
  bool terminated() const;

  RunResult Finish() &&;

 private:
  std::unique_ptr<Orchestrator> impl_;
};

}  // namespace psro

#endif  // PSRO_ORCHESTRATORS_H_
