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

#include <algorithm>
#include <string>

namespace psro {

void AnnealSchedule::Validate() const {
  if (!(r0 > 0.0 && r0 <= 1.0)) {
    throw Error(ErrorKind::kConfig, "learning rate must lie in (0, 1], got " +
                                        std::to_string(r0));
  }
  if (kind == AnnealKind::kInverseTime && !(gamma >= 0.0)) {
    throw Error(ErrorKind::kConfig, "anneal gamma must be non-negative");
  }
}

double LearningRateAt(const AnnealSchedule& schedule, std::size_t step) {
  switch (schedule.kind) {
    case AnnealKind::kConstant:
      return schedule.r0;
    case AnnealKind::kInverseTime:
      return schedule.r0 / (1.0 + schedule.gamma * static_cast<double>(step));
  }
  return schedule.r0;
}

void PlateauConfig::Validate() const {
  if (window < 2) throw Error(ErrorKind::kConfig, "plateau window must be >= 2");
  if (eval_period < 1) {
    throw Error(ErrorKind::kConfig, "plateau eval_period must be >= 1");
  }
}

void PerformanceHistory::Push(PerformanceSample sample) {
  samples_.push_back(sample);
  while (samples_.size() > capacity_) samples_.pop_front();
}

LearnerState::LearnerState(MixedStrategy initial, int level,
                           AnnealSchedule schedule)
    : policy(std::move(initial)),
      level(level),
      schedule(schedule),
      learning_rate(LearningRateAt(schedule, 0)) {
  schedule.Validate();
}

LearnerState TrainStep(LearnerState learner, const MixedStrategy& target,
                       const PayoffMatrix& game) {
  if (learner.policy.dim() != game.dim()) {
    throw Error(ErrorKind::kShape, "learner policy does not match the game");
  }
  const int br = BestResponse(game, target);
  const double r = LearningRateAt(learner.schedule, learner.step_count);
  const double keep = 1.0 - r;
  std::vector<double> next(game.dim());
  for (int i = 0; i < game.dim(); ++i) {
    next[i] = keep * learner.policy[i] + (i == br ? r : 0.0);
  }
  learner.policy = MixedStrategy(std::move(next));
  learner.learning_rate = r;
  ++learner.step_count;
  return learner;
}

double Performance(const LearnerState& learner, const MixedStrategy& target,
                   const PayoffMatrix& game) {
  return ExpectedUtility(game, learner.policy, target);
}

void RecordPerformance(LearnerState& learner, const MixedStrategy& target,
                       const PayoffMatrix& game) {
  learner.history.Push(
      {learner.step_count, Performance(learner, target, game)});
}

bool IsPlateaued(const PerformanceHistory& history, const PlateauConfig& cfg) {
  const auto window = static_cast<std::size_t>(cfg.window);
  if (history.size() < window) return false;
  const std::size_t first = history.size() - window;
  double best = history[first].performance;
  for (std::size_t i = first + 1; i < history.size(); ++i) {
    best = std::max(best, history[i].performance);
  }
  return best - history[first].performance < cfg.min_improvement;
}

bool IsPlateaued(const LearnerState& learner, const PlateauConfig& cfg) {
  return IsPlateaued(learner.history, cfg);
}

}  // namespace psro
