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

#ifndef PSRO_HARNESS_H_
#define PSRO_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "psro/orchestrators.h"

namespace psro {

// Environment variable naming the directory traces go to when the config
// does not say.
inline constexpr char kOutputDirEnv[] = "PSRO_OUTPUT_DIR";
inline constexpr char kDefaultOutputDir[] = "psro_output";

struct GameSweep {
  enum class Kind { kRandom, kFixture };
  Kind kind = Kind::kRandom;
  int dim = 0;
  std::vector<std::uint64_t> seeds;
  std::string fixture;
};

struct ExperimentConfig {
  GameSweep game;
  std::vector<AlgorithmKind> algorithms;
  std::vector<int> workers;
  std::vector<double> learning_rates;
  std::vector<std::uint64_t> run_seeds;
  // Everything except the swept fields (algorithm, workers, r0, seed).
  RunConfig base;
  // Empty means $PSRO_OUTPUT_DIR, then kDefaultOutputDir.
  std::string output;
  // Maximum number of cells run at the same time.
  int parallelism = 1;
  // Also save each run's final population next to its trace.
  bool checkpoint = false;
};

// Parses a YAML experiment document. Each override is `dotted.key=value`,
// with the value read as YAML; overrides win over the document. Errors name
// `source` and the offending line, or the override.
ExperimentConfig ParseExperimentConfig(
    std::string_view text, std::span<const std::string> overrides = {},
    std::string_view source = "<config>");
ExperimentConfig LoadExperimentConfig(
    const std::filesystem::path& path,
    std::span<const std::string> overrides = {});

struct SweepCell {
  AlgorithmKind algorithm = AlgorithmKind::kP2sro;
  // For fixture games the seed is 0.
  std::uint64_t game_seed = 0;
  std::uint64_t run_seed = 0;
  double learning_rate = 1.0;
  int workers = 1;
};

// Cross-product of the sweep axes, in a fixed order.
std::vector<SweepCell> EnumerateCells(const ExperimentConfig& config);
RunConfig CellRunConfig(const ExperimentConfig& config, const SweepCell& cell);
PayoffMatrix CellGame(const ExperimentConfig& config, const SweepCell& cell);
std::string TraceFileName(const ExperimentConfig& config,
                          const SweepCell& cell);
std::filesystem::path ResolveOutputDir(const ExperimentConfig& config);
GameDescriptor CellGameDescriptor(const ExperimentConfig& config,
                                  const SweepCell& cell);

using TraceMetadata = std::vector<std::pair<std::string, std::string>>;

struct ExploitabilityTrace {
  TraceMetadata metadata;
  std::vector<TraceRecord> records;

  // Value of a metadata key, if present.
  std::optional<std::string> Get(std::string_view key) const;
};

TraceMetadata CellMetadata(const ExperimentConfig& config,
                           const SweepCell& cell);
void WriteTrace(std::ostream& out, const ExploitabilityTrace& trace);
// `name` only appears in error messages.
ExploitabilityTrace ReadTrace(std::istream& in, std::string_view name);
ExploitabilityTrace ReadTraceFile(const std::filesystem::path& path);

// Runs every cell, writing one trace per cell into the output directory
// (created if missing). Returns the written paths in cell order.
std::vector<std::filesystem::path> RunSweep(const ExperimentConfig& config);

struct SummaryRow {
  std::vector<std::string> group;
  std::size_t round = 0;
  int n = 0;
  double mean_global_step = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
};

struct Summary {
  std::vector<std::string> group_by;
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

// Mean and standard error of exploitability per group and round. Traces in
// a group must share their round grid.
Summary Aggregate(std::span<const std::filesystem::path> files,
                  std::span<const std::string> group_by);
Summary Aggregate(std::span<const ExploitabilityTrace> traces,
                  std::span<const std::string> names,
                  std::span<const std::string> group_by);
void WriteSummary(std::ostream& out, const Summary& summary);
// Sorted paths matching a shell glob.
std::vector<std::filesystem::path> ExpandGlob(const std::string& pattern);

struct CounterexampleReport {
  // Human-readable trace, one line per generation or promotion.
  std::vector<std::string> lines;
  // Pure strategies added by each rectified generation; the last generation
  // of a terminating run adds nothing.
  std::vector<std::vector<int>> rectified_additions;
  bool rectified_terminated = false;
  std::vector<int> rectified_population;
  double rectified_exploitability = 0.0;
  std::vector<int> double_oracle_population;
  double double_oracle_exploitability = 0.0;
  // Divergent quantities; empty when everything matched.
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

CounterexampleReport VerifyCounterexample();

struct TheoremSuiteReport {
  int dim = 0;
  int games = 0;
  std::uint64_t seed = 0;
  int passed = 0;
  int unresolved = 0;
  // Seeds of games where the theorem check failed, with a description.
  std::vector<std::pair<std::uint64_t, std::string>> failures;
};

// Checks games seeded seed, seed + 1, ..., seed + games - 1.
TheoremSuiteReport CheckTheoremSuite(int dim, int games, std::uint64_t seed);

}  // namespace psro

#endif  // PSRO_HARNESS_H_
