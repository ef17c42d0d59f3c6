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

#include "psro/population.h"

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace psro {

namespace {

std::vector<double> Dot(const PayoffMatrix& game, const MixedStrategy& p) {
  return PayoffVector(game, p);
}

double Inner(const MixedStrategy& a, const std::vector<double>& gb) {
  double acc = 0.0;
  for (int i = 0; i < a.dim(); ++i) acc += a[i] * gb[i];
  return acc;
}

constexpr const char* kCheckpointMagic = "psro-population";
constexpr int kCheckpointVersion = 1;

}  // namespace

Population::Population(std::shared_ptr<const PayoffMatrix> base_game,
                       MixedStrategy initial_policy)
    : base_game_(std::move(base_game)) {
  if (!base_game_) throw Error(ErrorKind::kState, "population without a game");
  CheckPolicy(initial_policy);
  payoff_vectors_.push_back(Dot(*base_game_, initial_policy));
  entries_.push_back({std::move(initial_policy), PolicyStatus::kFixed, 0});
  num_fixed_ = 1;
  table_.push_back({0.0});
}

Population Population::Init(const PayoffMatrix& base_game) {
  return Population(std::make_shared<const PayoffMatrix>(base_game),
                    MixedStrategy::Uniform(base_game.dim()));
}

void Population::CheckPolicy(const MixedStrategy& policy) const {
  if (policy.dim() != base_game_->dim()) {
    throw Error(ErrorKind::kShape, "policy dimension " +
                                       std::to_string(policy.dim()) +
                                       " does not match the base game");
  }
}

int Population::AddActivePolicy(MixedStrategy policy) {
  CheckPolicy(policy);
  const int level = entries_.back().level + 1;
  payoff_vectors_.push_back(Dot(*base_game_, policy));
  entries_.push_back({std::move(policy), PolicyStatus::kActive, level});
  return level;
}

int Population::AddFixedPolicy(MixedStrategy policy) {
  if (num_active() > 0) {
    throw Error(ErrorKind::kState,
                "cannot append a fixed policy above active policies");
  }
  AddActivePolicy(std::move(policy));
  PromoteLowestActive();
  return num_fixed_ - 1;
}

void Population::PublishActivePolicy(int index, MixedStrategy policy) {
  if (index < num_fixed_ || index >= size()) {
    throw Error(ErrorKind::kState,
                "policy " + std::to_string(index) + " is not active");
  }
  CheckPolicy(policy);
  payoff_vectors_[index] = Dot(*base_game_, policy);
  entries_[index].policy = std::move(policy);
}

std::optional<int> Population::LowestActive() const {
  if (num_active() == 0) return std::nullopt;
  return num_fixed_;
}

void Population::PromoteLowestActive() {
  if (num_active() == 0) {
    throw Error(ErrorKind::kState, "no active policy to promote");
  }
  const int idx = num_fixed_;
  std::vector<double> row(idx + 1, 0.0);
  for (int b = 0; b < idx; ++b) {
    row[b] = Inner(entries_[idx].policy, payoff_vectors_[b]);
    table_[b].push_back(-row[b]);
  }
  table_.push_back(std::move(row));
  entries_[idx].status = PolicyStatus::kFixed;
  ++num_fixed_;
}

double Population::TableEntry(int a, int b) const {
  if (a < 0 || b < 0 || a >= num_fixed_ || b >= num_fixed_) {
    throw Error(ErrorKind::kIndex, "table entry outside the fixed block");
  }
  return table_[a][b];
}

double Population::Payoff(int a, int b) const {
  if (a < 0 || b < 0 || a >= size() || b >= size()) {
    throw Error(ErrorKind::kIndex, "payoff index out of range");
  }
  if (a < num_fixed_ && b < num_fixed_) return table_[a][b];
  if (a == b) return 0.0;
  // Evaluate with the lower index as the row so (a, b) and (b, a) come out as
  // exact negations of one another.
  if (a < b) return Inner(entries_[a].policy, payoff_vectors_[b]);
  return -Inner(entries_[b].policy, payoff_vectors_[a]);
}

PayoffMatrix Population::EmpiricalGame(std::span<const int> indices) const {
  if (indices.empty()) {
    throw Error(ErrorKind::kState, "empirical game over no policies");
  }
  const auto k = indices.size();
  std::vector<double> values(k * k, 0.0);
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = x + 1; y < k; ++y) {
      const double u = Payoff(indices[x], indices[y]);
      values[x * k + y] = u;
      values[y * k + x] = -u;
    }
  }
  return PayoffMatrix(static_cast<int>(k), std::move(values));
}

std::vector<int> Population::IndicesBelow(int level) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (entries_[i].level < level) out.push_back(i);
  }
  return out;
}

PopulationMetaNash Population::MetaNashBelow(
    int level, const FictitiousPlayOptions& options) const {
  std::vector<int> indices = IndicesBelow(level);
  if (indices.empty()) {
    throw Error(ErrorKind::kState,
                "no policy below level " + std::to_string(level));
  }
  return MetaNashOver(std::move(indices), options);
}

PopulationMetaNash Population::MetaNashOver(
    std::vector<int> indices, const FictitiousPlayOptions& options) const {
  MetaNash meta = FictitiousPlay(EmpiricalGame(indices), options);
  return {std::move(meta), std::move(indices)};
}

MixedStrategy Population::Mixture(const PopulationMetaNash& meta) const {
  if (static_cast<int>(meta.indices.size()) != meta.meta.weights.dim()) {
    throw Error(ErrorKind::kShape, "meta-Nash weights and indices disagree");
  }
  std::vector<double> out(base_game_->dim(), 0.0);
  for (std::size_t k = 0; k < meta.indices.size(); ++k) {
    const double w = meta.meta.weights[static_cast<int>(k)];
    if (w == 0.0) continue;
    const MixedStrategy& p = policy(meta.indices[k]);
    for (int i = 0; i < p.dim(); ++i) out[i] += w * p[i];
  }
  return MixedStrategy(std::move(out));
}

MixedStrategy MixPolicies(std::span<const MixedStrategy> policies,
                          const MixedStrategy& weights) {
  if (policies.empty() ||
      static_cast<int>(policies.size()) != weights.dim()) {
    throw Error(ErrorKind::kShape, "mixture weights and policies disagree");
  }
  std::vector<double> out(policies.front().dim(), 0.0);
  for (std::size_t k = 0; k < policies.size(); ++k) {
    const MixedStrategy& p = policies[k];
    if (p.dim() != policies.front().dim()) {
      throw Error(ErrorKind::kShape, "mixed policies of different dimension");
    }
    const double w = weights[static_cast<int>(k)];
    for (int i = 0; i < p.dim(); ++i) out[i] += w * p[i];
  }
  return MixedStrategy(std::move(out));
}

PayoffMatrix BuildGame(const GameDescriptor& descriptor,
                       const PayoffMatrix* inline_game) {
  switch (descriptor.kind) {
    case GameDescriptor::Kind::kRandom:
      return GenerateRandomGame(descriptor.dim, descriptor.seed);
    case GameDescriptor::Kind::kFixture:
      return CanonicalGame(descriptor.fixture);
    case GameDescriptor::Kind::kInline:
      if (inline_game == nullptr) {
        throw Error(ErrorKind::kState, "inline game descriptor without a game");
      }
      return *inline_game;
  }
  throw Error(ErrorKind::kLookup, "unknown game descriptor");
}

void SaveCheckpoint(std::ostream& out, const GameDescriptor& game,
                    const Population& population) {
  const PayoffMatrix& base = population.base_game();
  out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
  out << std::setprecision(17);
  switch (game.kind) {
    case GameDescriptor::Kind::kRandom:
      out << "game random " << base.dim() << ' ' << game.seed << '\n';
      break;
    case GameDescriptor::Kind::kFixture:
      out << "game fixture " << game.fixture << '\n';
      break;
    case GameDescriptor::Kind::kInline:
      out << "game inline " << base.dim() << '\n';
      for (int i = 0; i < base.dim(); ++i) {
        for (int j = 0; j < base.dim(); ++j) {
          out << (j ? " " : "") << base(i, j);
        }
        out << '\n';
      }
      break;
  }
  out << "policies " << population.size() << '\n';
  for (int i = 0; i < population.size(); ++i) {
    const PolicyEntry& e = population.entry(i);
    out << (e.status == PolicyStatus::kFixed ? "fixed" : "active") << ' '
        << e.level;
    for (double p : e.policy.probs()) out << ' ' << p;
    out << '\n';
  }
}

namespace {

[[noreturn]] void BadCheckpoint(int line, const std::string& what) {
  throw Error(ErrorKind::kIo,
              "checkpoint line " + std::to_string(line) + ": " + what);
}

}  // namespace

PopulationCheckpoint LoadCheckpoint(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next = [&]() -> std::istringstream {
    if (!std::getline(in, line)) BadCheckpoint(line_no + 1, "unexpected end");
    ++line_no;
    return std::istringstream(line);
  };

  {
    auto header = next();
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != kCheckpointMagic) BadCheckpoint(line_no, "not a checkpoint");
    if (version != kCheckpointVersion) {
      BadCheckpoint(line_no, "unsupported version " + std::to_string(version));
    }
  }

  GameDescriptor game;
  std::optional<PayoffMatrix> inline_game;
  {
    auto game_line = next();
    std::string tag, kind;
    game_line >> tag >> kind;
    if (tag != "game") BadCheckpoint(line_no, "expected a game line");
    if (kind == "random") {
      game.kind = GameDescriptor::Kind::kRandom;
      if (!(game_line >> game.dim >> game.seed)) {
        BadCheckpoint(line_no, "random game needs dim and seed");
      }
    } else if (kind == "fixture") {
      game.kind = GameDescriptor::Kind::kFixture;
      game_line >> game.fixture;
    } else if (kind == "inline") {
      game.kind = GameDescriptor::Kind::kInline;
      if (!(game_line >> game.dim) || game.dim < 1) {
        BadCheckpoint(line_no, "inline game needs a dimension");
      }
      std::vector<double> entries;
      for (int i = 0; i < game.dim; ++i) {
        auto row = next();
        double v;
        int count = 0;
        while (row >> v) {
          entries.push_back(v);
          ++count;
        }
        if (count != game.dim) BadCheckpoint(line_no, "short matrix row");
      }
      inline_game.emplace(game.dim, std::move(entries));
    } else {
      BadCheckpoint(line_no, "unknown game kind '" + kind + "'");
    }
  }
  auto base = std::make_shared<const PayoffMatrix>(
      BuildGame(game, inline_game ? &*inline_game : nullptr));
  game.dim = base->dim();

  int count = 0;
  {
    auto count_line = next();
    std::string tag;
    count_line >> tag >> count;
    if (tag != "policies" || count < 1) {
      BadCheckpoint(line_no, "expected a positive policy count");
    }
  }

  std::optional<Population> population;
  bool seen_active = false;
  for (int i = 0; i < count; ++i) {
    auto policy_line = next();
    std::string status;
    int level = -1;
    policy_line >> status >> level;
    if (level != i) BadCheckpoint(line_no, "levels must be 0, 1, 2, ...");
    std::vector<double> probs;
    double p;
    while (policy_line >> p) probs.push_back(p);
    if (static_cast<int>(probs.size()) != base->dim()) {
      BadCheckpoint(line_no, "policy has the wrong dimension");
    }
    MixedStrategy policy(std::move(probs));
    if (status == "fixed") {
      if (seen_active) BadCheckpoint(line_no, "fixed policy above an active");
      if (!population) {
        population.emplace(base, std::move(policy));
      } else {
        population->AddFixedPolicy(std::move(policy));
      }
    } else if (status == "active") {
      if (!population) BadCheckpoint(line_no, "first policy must be fixed");
      seen_active = true;
      population->AddActivePolicy(std::move(policy));
    } else {
      BadCheckpoint(line_no, "unknown status '" + status + "'");
    }
  }
  return {std::move(game), std::move(*population)};
}

}  // namespace psro
