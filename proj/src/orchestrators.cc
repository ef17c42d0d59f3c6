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

#include "psro/orchestrators.h"

#include <algorithm>
#include <atomic>
#include <deque>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace psro {

std::string_view AlgorithmName(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kSequentialPsro: return "sequential_psro";
    case AlgorithmKind::kNaivePsro: return "naive_psro";
    case AlgorithmKind::kP2sro: return "p2sro";
    case AlgorithmKind::kDch: return "dch";
    case AlgorithmKind::kRectifiedPsro: return "rectified_psro";
    case AlgorithmKind::kSelfPlay: return "self_play";
  }
  return "unknown";
}

AlgorithmKind ParseAlgorithm(std::string_view name) {
  for (AlgorithmKind kind : kAllAlgorithms) {
    if (AlgorithmName(kind) == name) return kind;
  }
  throw Error(ErrorKind::kConfig,
              "unknown algorithm '" + std::string(name) + "'");
}

std::string_view SchedulerModeName(SchedulerMode mode) {
  return mode == SchedulerMode::kLockstep ? "lockstep" : "threaded";
}

SchedulerMode ParseSchedulerMode(std::string_view name) {
  if (name == "lockstep") return SchedulerMode::kLockstep;
  if (name == "threaded") return SchedulerMode::kThreaded;
  throw Error(ErrorKind::kConfig,
              "unknown scheduler mode '" + std::string(name) + "'");
}

void SchedulerConfig::Validate() const {
  if (workers < 1) throw Error(ErrorKind::kConfig, "workers must be >= 1");
  if (meta_refresh_period < 1) {
    throw Error(ErrorKind::kConfig, "meta_refresh_period must be >= 1");
  }
  if (eval_every < 1) throw Error(ErrorKind::kConfig, "eval_every must be >= 1");
  if (max_steps < 1) throw Error(ErrorKind::kConfig, "max_steps must be >= 1");
}

void RunConfig::Validate() const {
  scheduler.Validate();
  schedule.Validate();
  plateau.Validate();
  if (meta_solver.max_iters < 1 || eval_solver.max_iters < 1) {
    throw Error(ErrorKind::kConfig, "meta solver max_iters must be >= 1");
  }
  if (!(rectified_support_threshold >= 0.0 &&
        rectified_support_threshold < 1.0)) {
    throw Error(ErrorKind::kConfig,
                "rectified support threshold must lie in [0, 1)");
  }
}

namespace {

// Remembers the last solve so that unchanged empirical games (targets built
// only from fixed or converged policies) are not re-solved every refresh.
class MetaSolveCache {
 public:
  const MetaNash& Solve(const PayoffMatrix& game,
                        const FictitiousPlayOptions& options) {
    const bool cacheable = !options.start_index.has_value();
    if (cacheable && value_ && key_ == game.entries()) return *value_;
    value_ = FictitiousPlay(game, options);
    if (cacheable) {
      key_ = game.entries();
    } else {
      key_.clear();
    }
    return *value_;
  }

 private:
  std::vector<double> key_;
  std::optional<MetaNash> value_;
};

struct WorkerSlot {
  std::optional<LearnerState> learner;
  std::shared_ptr<const MixedStrategy> target;
  std::optional<MixedStrategy> target_weights;
  std::vector<int> target_members;
  // Population entry mirrored by this learner (hierarchical algorithms).
  int population_index = -1;
  MetaSolveCache cache;
  mutable std::mutex mu;
  std::atomic<std::size_t> steps{0};
};

std::string Describe(const MixedStrategy& p) {
  for (int i = 0; i < p.dim(); ++i) {
    if (p[i] == 1.0) return "pure strategy " + std::to_string(i);
  }
  std::ostringstream out;
  out.precision(3);
  out << '(';
  for (int i = 0; i < p.dim(); ++i) out << (i ? ", " : "") << p[i];
  out << ')';
  return out.str();
}

}  // namespace

class Orchestrator {
 public:
  Orchestrator(const PayoffMatrix& game, const RunConfig& config,
               RunOptions options)
      : game_(std::make_shared<const PayoffMatrix>(game)),
        config_(config),
        rng_(config.seed),
        sink_(options.sink),
        observer_(std::move(options.observer)) {
    config_.Validate();
    if (options.resume_from) {
      if (options.resume_from->base_game() != game) {
        throw Error(ErrorKind::kState,
                    "resumed population belongs to a different game");
      }
      population_.emplace(std::move(*options.resume_from));
    } else {
      population_.emplace(game_, InitialPolicy());
    }
  }
  virtual ~Orchestrator() = default;

  // Creates slots and first targets, then records round 0.
  void Start() {
    Setup();
    Record();
  }

  bool Round() {
    if (done_) return false;
    if (BudgetExhausted()) {
      Stop();
      return false;
    }
    ++round_;
    if (!finished_) {
      for (auto& slot : slots_) {
        if (!slot->learner) continue;
        StepSlot(*slot);
        slot->steps.fetch_add(1, std::memory_order_relaxed);
        ++global_step_;
      }
      Coordinate();
    }
    if (round_ % config_.scheduler.eval_every == 0) Record();
    if (observer_) {
      const std::vector<SlotView> views = Slots();
      observer_(RoundView{round_, *population_, views});
    }
    return true;
  }

  void RunThreaded() {
    std::atomic<bool> stop{false};
    std::vector<std::jthread> workers;
    workers.reserve(slots_.size());
    for (auto& slot : slots_) {
      WorkerSlot* s = slot.get();
      workers.emplace_back([this, s, &stop] {
        while (!stop.load(std::memory_order_acquire)) {
          bool stepped = false;
          {
            std::lock_guard lock(s->mu);
            if (s->learner && !finished_flag_.load()) {
              StepSlot(*s);
              stepped = true;
            }
          }
          if (stepped) {
            s->steps.fetch_add(1, std::memory_order_release);
          } else {
            std::this_thread::yield();
          }
        }
      });
    }
    std::vector<std::size_t> base(slots_.size());
    while (!BudgetExhausted()) {
      for (std::size_t i = 0; i < slots_.size(); ++i) {
        base[i] = slots_[i]->steps.load(std::memory_order_acquire);
      }
      // Soft barrier: every busy worker has advanced at least once. Workers
      // themselves never wait for the coordinator.
      for (std::size_t i = 0; i < slots_.size() && !finished_; ++i) {
        while (Busy(*slots_[i]) &&
               slots_[i]->steps.load(std::memory_order_acquire) <= base[i]) {
          std::this_thread::yield();
        }
      }
      ++round_;
      global_step_ = 0;
      for (const auto& slot : slots_) global_step_ += slot->steps.load();
      if (!finished_) Coordinate();
      finished_flag_.store(finished_);
      if (round_ % config_.scheduler.eval_every == 0) Record();
    }
    stop.store(true, std::memory_order_release);
    workers.clear();
    global_step_ = 0;
    for (const auto& slot : slots_) global_step_ += slot->steps.load();
    Stop();
  }

  std::vector<SlotView> Slots() const {
    std::vector<SlotView> out;
    out.reserve(slots_.size());
    for (const auto& slot : slots_) {
      std::lock_guard lock(slot->mu);
      if (slot->learner) {
        out.push_back({true, slot->learner->policy, slot->learner->level,
                       slot->target_members, slot->target_weights});
      } else {
        out.push_back({false, MixedStrategy::Uniform(game_->dim()), -1,
                       slot->target_members, slot->target_weights});
      }
    }
    return out;
  }

  const Population& population() const { return *population_; }
  std::size_t round() const { return round_; }
  std::size_t global_step() const { return global_step_; }
  const std::vector<TraceRecord>& records() const { return records_; }
  const std::vector<RunEvent>& events() const { return events_; }
  bool terminated() const { return terminated_round_.has_value(); }

  RunResult Finish() {
    if (!done_) Stop();
    std::vector<MixedStrategy> learners;
    for (const auto& slot : slots_) {
      std::lock_guard lock(slot->mu);
      if (slot->learner) learners.push_back(slot->learner->policy);
    }
    return RunResult{std::move(records_),       std::move(events_),
                     std::move(*population_),   std::move(learners),
                     round_,                    global_step_,
                     terminated_round_};
  }

 protected:
  virtual void Setup() = 0;
  virtual void Coordinate() = 0;
  // Learner policies measured alongside the population's own entries.
  virtual bool LearnersOutsidePopulation() const { return true; }

  MixedStrategy InitialPolicy() {
    const int n = game_->dim();
    switch (config_.initial_policy.kind) {
      case InitialPolicyKind::kUniform:
        return MixedStrategy::Uniform(n);
      case InitialPolicyKind::kRandomPure: {
        std::uniform_int_distribution<int> pick(0, n - 1);
        return MixedStrategy::Pure(n, pick(rng_));
      }
      case InitialPolicyKind::kPure:
        return MixedStrategy::Pure(n, config_.initial_policy.index);
    }
    return MixedStrategy::Uniform(n);
  }

  LearnerState FreshLearner(int level) const {
    return LearnerState(MixedStrategy::Uniform(game_->dim()), level,
                        config_.schedule);
  }

  WorkerSlot& AddSlot() {
    slots_.push_back(std::make_unique<WorkerSlot>());
    return *slots_.back();
  }

  static bool Busy(const WorkerSlot& slot) {
    std::lock_guard lock(slot.mu);
    return slot.learner.has_value();
  }

  FictitiousPlayOptions TargetSolverOptions(int size) {
    FictitiousPlayOptions options = config_.meta_solver;
    if (config_.randomize_meta_init) {
      std::uniform_int_distribution<int> pick(0, size - 1);
      options.start_index = pick(rng_);
    }
    return options;
  }

  // Solves the meta-game over `members` and returns the weights.
  MixedStrategy SolveMembers(const std::vector<int>& members,
                             MetaSolveCache& cache) {
    const PayoffMatrix empirical = population_->EmpiricalGame(members);
    return cache
        .Solve(empirical,
               TargetSolverOptions(static_cast<int>(members.size())))
        .weights;
  }

  // Installs a new target. A learner's performance history only stays valid
  // while it trains against the same set of policies.
  void AssignTarget(WorkerSlot& slot, std::vector<int> members,
                    MixedStrategy weights) {
    auto target = std::make_shared<const MixedStrategy>(
        population_->Mixture({MetaNash{weights, 0.0, 0}, members}));
    std::lock_guard lock(slot.mu);
    if (slot.learner && members != slot.target_members) {
      slot.learner->history.Clear();
    }
    slot.target = std::move(target);
    slot.target_weights = std::move(weights);
    slot.target_members = std::move(members);
  }

  void AssignTarget(WorkerSlot& slot, std::vector<int> members,
                    MixedStrategy weights, MixedStrategy mixture) {
    auto target = std::make_shared<const MixedStrategy>(std::move(mixture));
    std::lock_guard lock(slot.mu);
    if (slot.learner && members != slot.target_members) {
      slot.learner->history.Clear();
    }
    slot.target = std::move(target);
    slot.target_weights = std::move(weights);
    slot.target_members = std::move(members);
  }

  void StepSlot(WorkerSlot& slot) {
    LearnerState& learner = *slot.learner;
    learner = TrainStep(std::move(learner), *slot.target, *game_);
    if (learner.step_count % config_.plateau.eval_period == 0) {
      RecordPerformance(learner, *slot.target, *game_);
    }
  }

  bool Plateaued(const WorkerSlot& slot) const {
    std::lock_guard lock(slot.mu);
    return slot.learner && IsPlateaued(*slot.learner, config_.plateau);
  }

  MixedStrategy SnapshotPolicy(const WorkerSlot& slot) const {
    std::lock_guard lock(slot.mu);
    return slot.learner->policy;
  }

  // Copies every learner's latest policy into its population entry.
  void PublishSnapshots() {
    for (auto& slot : slots_) {
      if (slot->population_index < 0) continue;
      population_->PublishActivePolicy(slot->population_index,
                                       SnapshotPolicy(*slot));
    }
  }

  std::vector<int> FixedIndices() const {
    std::vector<int> out(population_->num_fixed());
    for (int i = 0; i < population_->num_fixed(); ++i) out[i] = i;
    return out;
  }

  void Event(RunEventKind kind, int generation, std::vector<int> policies,
             std::string message) {
    events_.push_back(
        {round_, kind, generation, std::move(policies), std::move(message)});
  }

  void Terminate() {
    finished_ = true;
    terminated_round_ = round_;
  }

  std::shared_ptr<const PayoffMatrix> game_;
  RunConfig config_;
  std::optional<Population> population_;
  std::vector<std::unique_ptr<WorkerSlot>> slots_;
  std::mt19937_64 rng_;
  std::size_t round_ = 0;
  std::size_t global_step_ = 0;
  bool finished_ = false;

 private:
  bool BudgetExhausted() const {
    if (global_step_ >= config_.scheduler.max_steps) return true;
    if (config_.scheduler.max_rounds > 0) {
      return round_ >= config_.scheduler.max_rounds;
    }
    return finished_;
  }

  void Stop() {
    if (records_.empty() || records_.back().round != round_) Record();
    done_ = true;
  }

  void Record() {
    std::vector<int> indices;
    if (config_.eval_fixed_only) {
      indices = FixedIndices();
    } else {
      indices.resize(population_->size());
      for (int i = 0; i < population_->size(); ++i) indices[i] = i;
    }
    std::vector<MixedStrategy> extras;
    if (!config_.eval_fixed_only && LearnersOutsidePopulation()) {
      for (const auto& slot : slots_) {
        std::lock_guard lock(slot->mu);
        if (slot->learner) extras.push_back(slot->learner->policy);
      }
    }

    const int k = static_cast<int>(indices.size() + extras.size());
    std::vector<const MixedStrategy*> policies;
    policies.reserve(k);
    for (int idx : indices) policies.push_back(&population_->policy(idx));
    for (const auto& p : extras) policies.push_back(&p);

    std::vector<std::vector<double>> extra_payoffs;
    for (const auto& p : extras) extra_payoffs.push_back(PayoffVector(*game_, p));
    const int base = static_cast<int>(indices.size());
    std::vector<double> entries(static_cast<std::size_t>(k) * k, 0.0);
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        double u;
        if (b < base) {
          u = population_->Payoff(indices[a], indices[b]);
        } else {
          const auto& gb = extra_payoffs[b - base];
          u = 0.0;
          for (int i = 0; i < game_->dim(); ++i) u += (*policies[a])[i] * gb[i];
        }
        entries[static_cast<std::size_t>(a) * k + b] = u;
        entries[static_cast<std::size_t>(b) * k + a] = -u;
      }
    }
    const MetaNash& meta =
        eval_cache_.Solve(PayoffMatrix(k, std::move(entries)),
                          config_.eval_solver);
    std::vector<double> mixture(game_->dim(), 0.0);
    for (int a = 0; a < k; ++a) {
      const double w = meta.weights[a];
      if (w == 0.0) continue;
      for (int i = 0; i < game_->dim(); ++i) mixture[i] += w * (*policies[a])[i];
    }
    const TraceRecord record{round_, global_step_,
                             Exploitability(*game_, MixedStrategy(mixture)), k};
    records_.push_back(record);
    if (sink_ != nullptr) sink_->OnRecord(record);
  }

  TraceSink* sink_;
  RoundObserver observer_;
  MetaSolveCache eval_cache_;
  std::vector<TraceRecord> records_;
  std::vector<RunEvent> events_;
  std::optional<std::size_t> terminated_round_;
  std::atomic<bool> finished_flag_{false};
  bool done_ = false;
};

namespace {

// Active learners are population entries; each trains against the meta-Nash
// of everything below its level and only the lowest may be frozen.
class HierarchyOrchestrator : public Orchestrator {
 public:
  using Orchestrator::Orchestrator;

 protected:
  bool LearnersOutsidePopulation() const override { return false; }

  void AddLearnerSlot(MixedStrategy initial) {
    const int level = population_->AddActivePolicy(initial);
    WorkerSlot& slot = AddSlot();
    slot.learner.emplace(std::move(initial), level, config_.schedule);
    slot.population_index = population_->size() - 1;
  }

  void SetupHierarchy() {
    for (int i = population_->num_fixed(); i < population_->size(); ++i) {
      WorkerSlot& slot = AddSlot();
      slot.learner.emplace(population_->policy(i), population_->entry(i).level,
                           config_.schedule);
      slot.population_index = i;
    }
    while (static_cast<int>(slots_.size()) < config_.scheduler.workers) {
      AddLearnerSlot(MixedStrategy::Uniform(game_->dim()));
    }
    RefreshTargets();
  }

  void RefreshTargets() {
    for (auto& slot : slots_) {
      const int level = population_->entry(slot->population_index).level;
      std::vector<int> members = population_->IndicesBelow(level);
      MixedStrategy weights = SolveMembers(members, slot->cache);
      AssignTarget(*slot, std::move(members), std::move(weights));
    }
  }
};

class P2sroOrchestrator : public HierarchyOrchestrator {
 public:
  using HierarchyOrchestrator::HierarchyOrchestrator;

 protected:
  void Setup() override { SetupHierarchy(); }

  void Coordinate() override {
    PublishSnapshots();
    const int lowest = *population_->LowestActive();
    auto it = std::find_if(slots_.begin(), slots_.end(), [&](const auto& s) {
      return s->population_index == lowest;
    });
    WorkerSlot& slot = **it;
    if (Plateaued(slot)) {
      population_->PromoteLowestActive();
      Event(RunEventKind::kPromotion, 0, {lowest},
            "fixed policy " + std::to_string(lowest) + ": " +
                Describe(population_->policy(lowest)));
      const MixedStrategy fresh = MixedStrategy::Uniform(game_->dim());
      const int level = population_->AddActivePolicy(fresh);
      {
        std::lock_guard lock(slot.mu);
        slot.learner.emplace(fresh, level, config_.schedule);
        slot.population_index = population_->size() - 1;
        slot.target_members.clear();
        slot.cache = MetaSolveCache();
      }
      RefreshTargets();
    } else if (round_ % config_.scheduler.meta_refresh_period == 0) {
      RefreshTargets();
    }
  }
};

// Fixed number of levels trained forever against the levels below them.
class DchOrchestrator : public HierarchyOrchestrator {
 public:
  using HierarchyOrchestrator::HierarchyOrchestrator;

 protected:
  void Setup() override { SetupHierarchy(); }

  void Coordinate() override {
    PublishSnapshots();
    if (round_ % config_.scheduler.meta_refresh_period == 0) RefreshTargets();
  }
};

// Every worker trains against the meta-Nash of the fixed policies; whichever
// plateaus first (lowest slot on ties) is fixed and restarts from uniform.
// With one worker this is sequential PSRO.
class NaiveOrchestrator : public Orchestrator {
 public:
  NaiveOrchestrator(const PayoffMatrix& game, const RunConfig& config,
                    RunOptions options, int workers)
      : Orchestrator(game, config, std::move(options)), workers_(workers) {}

 protected:
  void Setup() override {
    for (int i = 0; i < workers_; ++i) {
      AddSlot().learner = FreshLearner(population_->size());
    }
    RefreshTargets();
  }

  void Coordinate() override {
    for (auto& slot : slots_) {
      if (!Plateaued(*slot)) continue;
      const int index = population_->AddFixedPolicy(SnapshotPolicy(*slot));
      Event(RunEventKind::kPromotion, 0, {index},
            "fixed policy " + std::to_string(index) + ": " +
                Describe(population_->policy(index)));
      {
        std::lock_guard lock(slot->mu);
        slot->learner = FreshLearner(population_->size());
      }
      RefreshTargets();
      return;
    }
    if (round_ % config_.scheduler.meta_refresh_period == 0) RefreshTargets();
  }

 private:
  void RefreshTargets() {
    std::vector<int> members = FixedIndices();
    MixedStrategy weights = SolveMembers(members, cache_);
    MixedStrategy mixture =
        population_->Mixture({MetaNash{weights, 0.0, 0}, members});
    for (auto& slot : slots_) {
      AssignTarget(*slot, members, weights, mixture);
    }
  }

  int workers_;
  MetaSolveCache cache_;
};

// One learner chasing the most recently fixed policy; each plateau freezes a
// snapshot and the learner continues from where it is.
class SelfPlayOrchestrator : public Orchestrator {
 public:
  using Orchestrator::Orchestrator;

 protected:
  void Setup() override {
    AddSlot().learner = FreshLearner(population_->size());
    Retarget();
  }

  void Coordinate() override {
    WorkerSlot& slot = *slots_.front();
    if (!Plateaued(slot)) return;
    const int index = population_->AddFixedPolicy(SnapshotPolicy(slot));
    Event(RunEventKind::kPromotion, 0, {index},
          "fixed policy " + std::to_string(index) + ": " +
              Describe(population_->policy(index)));
    Retarget();
  }

 private:
  void Retarget() {
    const int latest = population_->num_fixed() - 1;
    AssignTarget(*slots_.front(), {latest}, MixedStrategy::Pure(1, 0),
                 population_->policy(latest));
  }
};

// Generational: each member in the meta-Nash support trains a response to the
// meta-weighted mixture of the members it beats or ties. Responses that
// duplicate existing policies are discarded; a generation that adds nothing
// ends the run.
class RectifiedOrchestrator : public Orchestrator {
 public:
  using Orchestrator::Orchestrator;

 protected:
  void Setup() override {
    for (int i = 0; i < config_.scheduler.workers; ++i) AddSlot();
    StartGeneration();
    AssignPending();
  }

  void Coordinate() override {
    for (auto& slot : slots_) {
      if (!Plateaued(*slot)) continue;
      std::lock_guard lock(slot->mu);
      results_.push_back(slot->learner->policy);
      slot->learner.reset();
    }
    AssignPending();
    const bool idle = std::none_of(slots_.begin(), slots_.end(),
                                   [](const auto& s) { return Busy(*s); });
    if (!idle || !pending_.empty()) return;

    std::vector<int> added;
    for (MixedStrategy& candidate : results_) {
      bool duplicate = false;
      for (int i = 0; i < population_->size() && !duplicate; ++i) {
        duplicate = LInfDistance(candidate, population_->policy(i)) <
                    config_.duplicate_tolerance;
      }
      if (duplicate) continue;
      added.push_back(population_->AddFixedPolicy(std::move(candidate)));
    }
    results_.clear();
    if (added.empty()) {
      Event(RunEventKind::kGenerationEmpty, generation_, {},
            "generation " + std::to_string(generation_) +
                ": no new policy, terminating");
      Terminate();
      return;
    }
    std::string message =
        "generation " + std::to_string(generation_) + ": added";
    for (int idx : added) {
      message += " policy " + std::to_string(idx) + " (" +
                 Describe(population_->policy(idx)) + ")";
    }
    Event(RunEventKind::kGenerationAdded, generation_, added, message);
    StartGeneration();
    AssignPending();
  }

 private:
  struct PendingTarget {
    int member;
    std::vector<int> opponents;
    MixedStrategy weights;
  };

  void StartGeneration() {
    ++generation_;
    std::vector<int> fixed = FixedIndices();
    const MixedStrategy meta = SolveMembers(fixed, cache_);
    std::string message = "generation " + std::to_string(generation_) +
                          ": meta-Nash " + Describe(meta);
    for (int i : fixed) {
      if (!(meta[i] > config_.rectified_support_threshold)) continue;
      std::vector<int> opponents;
      std::vector<double> weights;
      double mass = 0.0;
      for (int k : fixed) {
        if (population_->TableEntry(i, k) >= 0.0) {
          opponents.push_back(k);
          weights.push_back(meta[k]);
          mass += meta[k];
        }
      }
      for (double& w : weights) w /= mass;
      pending_.push_back({i, std::move(opponents),
                          MixedStrategy(std::move(weights))});
    }
    Event(RunEventKind::kGenerationStart, generation_, fixed, message);
  }

  void AssignPending() {
    for (auto& slot : slots_) {
      if (pending_.empty()) return;
      if (Busy(*slot)) continue;
      PendingTarget next = std::move(pending_.front());
      pending_.pop_front();
      {
        std::lock_guard lock(slot->mu);
        slot->learner = FreshLearner(population_->size());
        slot->target_members.clear();
      }
      MixedStrategy mixture = population_->Mixture(
          {MetaNash{next.weights, 0.0, 0}, next.opponents});
      AssignTarget(*slot, std::move(next.opponents), std::move(next.weights),
                   std::move(mixture));
    }
  }

  int generation_ = 0;
  std::deque<PendingTarget> pending_;
  std::vector<MixedStrategy> results_;
  MetaSolveCache cache_;
};

std::unique_ptr<Orchestrator> MakeOrchestrator(const PayoffMatrix& game,
                                               const RunConfig& config,
                                               RunOptions options) {
  std::unique_ptr<Orchestrator> out;
  switch (config.algorithm) {
    case AlgorithmKind::kSequentialPsro:
      out = std::make_unique<NaiveOrchestrator>(game, config,
                                                std::move(options), 1);
      break;
    case AlgorithmKind::kNaivePsro:
      out = std::make_unique<NaiveOrchestrator>(
          game, config, std::move(options), config.scheduler.workers);
      break;
    case AlgorithmKind::kP2sro:
      out = std::make_unique<P2sroOrchestrator>(game, config,
                                                std::move(options));
      break;
    case AlgorithmKind::kDch:
      out = std::make_unique<DchOrchestrator>(game, config, std::move(options));
      break;
    case AlgorithmKind::kRectifiedPsro:
      out = std::make_unique<RectifiedOrchestrator>(game, config,
                                                    std::move(options));
      break;
    case AlgorithmKind::kSelfPlay:
      out = std::make_unique<SelfPlayOrchestrator>(game, config,
                                                   std::move(options));
      break;
  }
  out->Start();
  return out;
}

}  // namespace

RunResult Run(const PayoffMatrix& game, const RunConfig& config,
              RunOptions options) {
  const SchedulerMode mode = config.scheduler.mode;
  if (mode == SchedulerMode::kThreaded) options.observer = nullptr;
  std::unique_ptr<Orchestrator> run =
      MakeOrchestrator(game, config, std::move(options));
  if (mode == SchedulerMode::kThreaded) {
    run->RunThreaded();
  } else {
    while (run->Round()) {
    }
  }
  return run->Finish();
}

RunState::RunState(const PayoffMatrix& game, const RunConfig& config,
                   RunOptions options)
    : impl_(MakeOrchestrator(game, config, std::move(options))) {}
RunState::~RunState() = default;
RunState::RunState(RunState&&) noexcept = default;
RunState& RunState::operator=(RunState&&) noexcept = default;

bool RunState::Round() { return impl_->Round(); }
const Population& RunState::population() const { return impl_->population(); }
std::vector<SlotView> RunState::Slots() const { return impl_->Slots(); }
std::size_t RunState::round() const { return impl_->round(); }
std::size_t RunState::global_step() const { return impl_->global_step(); }
const std::vector<TraceRecord>& RunState::records() const {
  return impl_->records();
}
const std::vector<RunEvent>& RunState::events() const {
  return impl_->events();
}
bool RunState::terminated() const { return impl_->terminated(); }
RunResult RunState::Finish() && { return impl_->Finish(); }

}  // namespace psro
