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

// Command-line front end: runs sweeps, aggregates traces and replays the
// counterexample and theorem checks.
//
//   psro run sweep.yaml --override scheduler.max_rounds=500
//   psro aggregate 'out/*.csv' --group-by algorithm,workers -o summary.csv
//   psro verify-counterexample
//   psro check-theorem --dim 8 --games 100 --seed 1

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psro/errors.h"
#include "psro/harness.h"

namespace {

// Escapes a message so the error line stays a single parseable record.
std::string Quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

int ReportError(std::string_view kind, std::string_view message) {
  std::cerr << "error: kind=" << kind << " message=" << Quote(message)
            << std::endl;
  return 1;
}

std::vector<std::string> SplitKeys(const std::vector<std::string>& raw) {
  std::vector<std::string> keys;
  for (const std::string& item : raw) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t comma = std::min(item.find(',', start), item.size());
      if (comma > start) keys.push_back(item.substr(start, comma - start));
      start = comma + 1;
    }
  }
  return keys;
}

int RunCommand(const std::string& config_path,
               const std::vector<std::string>& overrides) {
  const psro::ExperimentConfig config =
      psro::LoadExperimentConfig(config_path, overrides);
  const auto paths = psro::RunSweep(config);
  for (const auto& path : paths) std::cout << path.string() << '\n';
  std::cout << "wrote " << paths.size() << " traces to "
            << psro::ResolveOutputDir(config).string() << std::endl;
  return 0;
}

int AggregateCommand(const std::string& pattern,
                     const std::vector<std::string>& group_by,
                     const std::string& output) {
  const auto files = psro::ExpandGlob(pattern);
  const psro::Summary summary = psro::Aggregate(files, SplitKeys(group_by));
  for (const std::string& warning : summary.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  std::ofstream out(output);
  if (!out) {
    throw psro::Error(psro::ErrorKind::kIo, "cannot write '" + output + "'");
  }
  psro::WriteSummary(out, summary);
  std::cout << "aggregated " << files.size() << " traces into "
            << summary.rows.size() << " rows" << std::endl;
  return 0;
}

int VerifyCommand() {
  const psro::CounterexampleReport report = psro::VerifyCounterexample();
  for (const std::string& line : report.lines) std::cout << line << '\n';
  if (!report.passed()) {
    std::string message;
    for (const std::string& f : report.failures) {
      message += (message.empty() ? "" : "; ") + f;
    }
    return ReportError("verification", message);
  }
  std::cout << "counterexample verified" << std::endl;
  return 0;
}

int TheoremCommand(int dim, int games, std::uint64_t seed) {
  const psro::TheoremSuiteReport report =
      psro::CheckTheoremSuite(dim, games, seed);
  for (const auto& [game_seed, what] : report.failures) {
    std::cout << "game seed " << game_seed << ": failure, " << what << '\n';
  }
  std::cout << "dim=" << report.dim << " games=" << report.games
            << " passed=" << report.passed
            << " unresolved=" << report.unresolved
            << " failures=" << report.failures.size() << std::endl;
  if (!report.failures.empty()) {
    return ReportError("verification",
                       std::to_string(report.failures.size()) +
                           " games violate the theorem");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population training experiments on symmetric matrix games"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand("run", "Run every cell of a sweep");
  run->add_option("config", config_path, "YAML experiment file")->required();
  run->add_option("--override", overrides, "key.path=value, repeatable");

  std::string pattern, output;
  std::vector<std::string> group_by;
  CLI::App* aggregate =
      app.add_subcommand("aggregate", "Mean and standard error of traces");
  aggregate->add_option("glob", pattern, "Trace files")->required();
  aggregate->add_option("--group-by", group_by, "Metadata keys")
      ->required()
      ->delimiter(',');
  aggregate->add_option("-o,--output", output, "Summary CSV")->required();

  CLI::App* verify = app.add_subcommand(
      "verify-counterexample", "Replay rectified PSRO and double oracle");

  int dim = 8, games = 100;
  std::uint64_t seed = 1;
  CLI::App* theorem = app.add_subcommand(
      "check-theorem", "Check the support-coverage theorem on random games");
  theorem->add_option("--dim", dim, "Game dimension");
  theorem->add_option("--games", games, "Number of games");
  theorem->add_option("--seed", seed, "First game seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage", e.what());
  }

  try {
    if (*run) return RunCommand(config_path, overrides);
    if (*aggregate) return AggregateCommand(pattern, group_by, output);
    if (*verify) return VerifyCommand();
    if (*theorem) return TheoremCommand(dim, games, seed);
  } catch (const psro::Error& e) {
    return ReportError(psro::ErrorKindName(e.kind()), e.what());
  } catch (const std::exception& e) {
    return ReportError("internal", e.what());
  }
  return 0;
}
