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

#ifndef PSRO_LEARNERS_H_
#define PSRO_LEARNERS_H_

#include <cstddef>
#include <deque>

#include "psro/game.h"

namespace psro {

enum class AnnealKind { kConstant, kInverseTime };

// r_t = r0 (constant) or r0 / (1 + gamma * t) (inverse time).
struct AnnealSchedule {
  AnnealKind kind = AnnealKind::kConstant;
  double r0 = 1.0;
  double gamma = 0.0;

  void Validate() const;
};

double LearningRateAt(const AnnealSchedule& schedule, std::size_t step);

// A learner has plateaued once the best of its last `window` evaluations is
// less than `min_improvement` above the first of them. Evaluations happen every
// `eval_period` training steps.
struct PlateauConfig {
  int window = 5;
  double min_improvement = 0.01;
  int eval_period = 10;

  void Validate() const;
};

struct PerformanceSample {
  std::size_t step;
  double performance;
};

// Bounded history of evaluations, oldest first.
class PerformanceHistory {
 public:
  explicit PerformanceHistory(std::size_t capacity = 64)
      : capacity_(capacity) {}

  void Push(PerformanceSample sample);
  void Clear() { samples_.clear(); }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const PerformanceSample& operator[](std::size_t i) const {
    return samples_[i];
  }
  const PerformanceSample& back() const { return samples_.back(); }

 private:
  std::size_t capacity_;
  std::deque<PerformanceSample> samples_;
};

struct LearnerState {
  MixedStrategy policy;
  int level = 0;
  AnnealSchedule schedule;
  // Rate used by the most recent step.
  double learning_rate = 1.0;
  std::size_t step_count = 0;
  PerformanceHistory history;

  LearnerState(MixedStrategy initial, int level, AnnealSchedule schedule);
};

// policy <- r_t * onehot(BR(target)) + (1 - r_t) * policy, with r_t taken from
// the learner's schedule at its current step count.
LearnerState TrainStep(LearnerState learner, const MixedStrategy& target,
                       const PayoffMatrix& game);

// Expected utility of the learner's policy against `target`.
double Performance(const LearnerState& learner, const MixedStrategy& target,
                   const PayoffMatrix& game);

// Appends an evaluation against `target` at the learner's current step.
void RecordPerformance(LearnerState& learner, const MixedStrategy& target,
                       const PayoffMatrix& game);

bool IsPlateaued(const PerformanceHistory& history, const PlateauConfig& cfg);
bool IsPlateaued(const LearnerState& learner, const PlateauConfig& cfg);

}  // namespace psro

#endif  // PSRO_LEARNERS_H_
