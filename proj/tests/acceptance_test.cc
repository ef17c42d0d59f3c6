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

// Acceptance gate: runs every acceptance criterion and prints one PASS/FAIL
// line each. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "property_suites.h"
#include "psro/harness.h"

namespace psro {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Stats {
  double mean = 0.0;
  double sd = 0.0;
  int n = 0;
};

Stats Summarize(const std::vector<double>& xs) {
  Stats s;
  s.n = static_cast<int>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= s.n;
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.sd = s.n > 1 ? std::sqrt(sq / (s.n - 1)) : 0.0;
  return s;
}

// Standard error of the difference of two means.
double PooledSe(const Stats& a, const Stats& b) {
  return std::sqrt(a.sd * a.sd / a.n + b.sd * b.sd / b.n);
}

std::string Format(const char* fmt, double a, double b = 0, double c = 0,
                   double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

std::vector<MixedStrategy> FixedPolicies(const Population& pop) {
  std::vector<MixedStrategy> out;
  for (int i = 0; i < pop.num_fixed(); ++i) out.push_back(pop.policy(i));
  return out;
}

// 1. Counterexample exactness.
constexpr double kRectifiedValue = 0.4;
constexpr double kRectifiedTol = 1e-9;
constexpr double kDoubleOracleTol = 1e-9;

Outcome Counterexample() {
  const CounterexampleReport r = VerifyCounterexample();
  const bool additions =
      r.rectified_additions == std::vector<std::vector<int>>{{1}, {2}, {}};
  Outcome o;
  o.pass = additions && r.rectified_terminated &&
           std::abs(r.rectified_exploitability - kRectifiedValue) <=
               kRectifiedTol &&
           r.double_oracle_exploitability <= kDoubleOracleTol;
  o.detail = std::string(additions ? "adds Paper, adds Scissors, terminates"
                                   : "unexpected generations") +
             Format("; rectified %.12f, double oracle %.3g",
                    r.rectified_exploitability,
                    r.double_oracle_exploitability);
  return o;
}

// 2. Oracle equivalence on 20 dim-15 games.
Outcome OracleEquivalence() {
  const double bound = 2.0 * kDefaultMetaResidual;
  double worst = 0.0;
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const PayoffMatrix g = GenerateRandomGame(15, seed);
    RunConfig config;
    config.schedule.r0 = 1.0;
    config.scheduler.max_rounds = 1000;
    config.meta_solver.refine_support = true;
    config.eval_solver.refine_support = true;
    config.algorithm = AlgorithmKind::kSequentialPsro;
    const RunResult sequential = Run(g, config);
    config.algorithm = AlgorithmKind::kP2sro;
    for (int workers : {1, 3}) {
      config.scheduler.workers = workers;
      const RunResult p2 = Run(g, config);
      worst = std::max(worst, p2.records.back().exploitability);
      if (workers == 1 &&
          FixedPolicies(p2.population) != FixedPolicies(sequential.population)) {
        ++mismatches;
      }
    }
  }
  Outcome o;
  o.pass = worst <= bound && mismatches == 0;
  o.detail = Format("worst final exploitability %.3g (bound %.3g), ", worst,
                    bound) +
             std::to_string(mismatches) + " fixed-sequence mismatches";
  return o;
}

// 3. Support-coverage theorem over 100 dim-8 games.
Outcome Theorem() {
  const TheoremSuiteReport r = CheckTheoremSuite(8, 100, 1);
  Outcome o;
  o.pass = r.failures.empty();
  o.detail = std::to_string(r.passed) + " passed, " +
             std::to_string(r.unresolved) + " unresolved, " +
             std::to_string(r.failures.size()) + " failures";
  return o;
}

// Final exploitability over game seeds x run seeds.
std::vector<double> FinalExploitabilities(const RunConfig& base, int dim,
                                          int game_seeds, int run_seeds) {
  std::vector<double> out;
  for (int gs = 0; gs < game_seeds; ++gs) {
    const PayoffMatrix g = GenerateRandomGame(dim, gs);
    for (int rs = 0; rs < run_seeds; ++rs) {
      RunConfig config = base;
      config.seed = rs;
      out.push_back(Run(g, config).records.back().exploitability);
    }
  }
  return out;
}

// 4. Algorithm ordering at dim 60.
Outcome Ordering() {
  RunConfig base;
  base.schedule.r0 = 0.5;
  base.scheduler.workers = 3;
  base.scheduler.max_rounds = 1000;
  base.initial_policy.kind = InitialPolicyKind::kRandomPure;
  auto stats = [&](AlgorithmKind kind) {
    RunConfig config = base;
    config.algorithm = kind;
    return Summarize(FinalExploitabilities(config, 60, 5, 3));
  };
  const Stats p2 = stats(AlgorithmKind::kP2sro);
  const Stats naive = stats(AlgorithmKind::kNaivePsro);
  const Stats dch = stats(AlgorithmKind::kDch);
  const Stats rect = stats(AlgorithmKind::kRectifiedPsro);
  const bool ok_naive = naive.mean - p2.mean > PooledSe(p2, naive);
  const bool ok_dch = dch.mean - p2.mean > PooledSe(p2, dch);
  const bool ok_rect = rect.mean - p2.mean > PooledSe(p2, rect);
  Outcome o;
  o.pass = ok_naive && ok_dch && ok_rect;
  o.detail = Format("round 1000 means: p2sro %.4f, naive %.4f, dch %.4f, ",
                    p2.mean, naive.mean, dch.mean) +
             Format("rectified %.4f; margins over pooled SE: %.1f, %.1f, %.1f",
                    rect.mean,
                    (naive.mean - p2.mean) / PooledSe(p2, naive),
                    (dch.mean - p2.mean) / PooledSe(p2, dch),
                    (rect.mean - p2.mean) / PooledSe(p2, rect));
  return o;
}

// 5. DCH with a constant rate fails, with an annealed rate converges.
constexpr double kDchThreshold = 0.05;

Outcome DchPair() {
  constexpr int kDim = 30, kLevels = 30;
  constexpr std::size_t kSteps = 30000;
  int constant_high = 0, annealed_low = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PayoffMatrix g = GenerateRandomGame(kDim, seed);
    RunConfig config;
    config.algorithm = AlgorithmKind::kDch;
    config.scheduler.workers = kLevels;
    config.scheduler.max_steps = kSteps;
    config.randomize_meta_init = true;
    config.seed = seed;
    config.schedule = {AnnealKind::kConstant, 1.0, 0.0};
    if (Run(g, config).records.back().exploitability > kDchThreshold) {
      ++constant_high;
    }
    config.schedule = {AnnealKind::kInverseTime, 1.0, 0.01};
    config.scheduler.max_steps = 10 * kSteps;
    if (Run(g, config).records.back().exploitability < kDchThreshold) {
      ++annealed_low;
    }
  }
  Outcome o;
  o.pass = constant_high >= 7 && annealed_low >= 7;
  o.detail = "constant rate above 0.05 in " + std::to_string(constant_high) +
             "/10, inverse-time below 0.05 in " +
             std::to_string(annealed_low) + "/10";
  return o;
}

// 6. More workers never hurt at a fixed round budget.
Outcome WorkerScaling() {
  std::vector<Stats> stats;
  const std::vector<int> workers = {1, 4, 8};
  for (int w : workers) {
    RunConfig config;
    config.algorithm = AlgorithmKind::kP2sro;
    config.schedule.r0 = 0.5;
    config.scheduler.workers = w;
    config.scheduler.max_rounds = 500;
    stats.push_back(Summarize(FinalExploitabilities(config, 60, 5, 1)));
  }
  bool ok = true;
  for (std::size_t i = 1; i < stats.size(); ++i) {
    ok &= stats[i].mean <= stats[i - 1].mean + PooledSe(stats[i], stats[i - 1]);
  }
  Outcome o;
  o.pass = ok;
  o.detail = Format("round 500 means: w1 %.4f, w4 %.4f, w8 %.4f", stats[0].mean,
                    stats[1].mean, stats[2].mean);
  return o;
}

// 7. Determinism and invariants.
std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism() {
  const auto root =
      std::filesystem::temp_directory_path() / "psro_acceptance_lockstep";
  std::filesystem::remove_all(root);
  const std::string config_text = R"(game:
  random: {dim: 20, seeds: [0, 1]}
algorithms: [sequential_psro, naive_psro, p2sro, dch, rectified_psro, self_play]
workers: [3]
learning_rates: [0.5]
run_seeds: [7]
initial_policy: random_pure
meta_solver: {randomize_init: true}
scheduler: {max_rounds: 300}
parallelism: 2
)";
  std::vector<std::vector<std::filesystem::path>> runs;
  for (const char* name : {"a", "b"}) {
    const std::vector<std::string> overrides = {"output=" +
                                                (root / name).string()};
    runs.push_back(
        RunSweep(ParseExperimentConfig(config_text, overrides, "lockstep")));
  }
  int differing = 0;
  for (std::size_t i = 0; i < runs[0].size(); ++i) {
    differing += Slurp(runs[0][i]) != Slurp(runs[1][i]);
  }
  std::filesystem::remove_all(root);

  using testing::kPropertyCases;
  const std::vector<testing::PropertyResult> suites = {
      testing::AntisymmetrySuite(11, kPropertyCases),
      testing::SimplexSuite(12, kPropertyCases, testing::kSimplexSteps),
      testing::BestResponseSuite(13, kPropertyCases),
      testing::FictitiousPlaySuite(14, kPropertyCases),
      testing::PopulationSuite(15, kPropertyCases),
  };
  Outcome o;
  o.pass = differing == 0;
  o.detail = std::to_string(runs[0].size() - differing) + "/" +
             std::to_string(runs[0].size()) + " reruns byte-identical";
  for (const auto& s : suites) {
    o.pass &= s.ok() && s.cases >= kPropertyCases;
    o.detail += "; " + s.name + " " + std::to_string(s.cases - s.failures) +
                "/" + std::to_string(s.cases);
    if (!s.ok()) o.detail += " (" + s.first_failure + ")";
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace psro

int main() {
  using psro::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "counterexample exactness", 1.0, psro::Counterexample},
      {2, "oracle equivalence", 60.0, psro::OracleEquivalence},
      {3, "support theorem suite", 300.0, psro::Theorem},
      {4, "algorithm ordering at dim 60", 600.0, psro::Ordering},
      {5, "DCH failure and repair", 600.0, psro::DchPair},
      {6, "worker scaling", 900.0, psro::WorkerScaling},
      {7, "determinism and invariants", 120.0, psro::Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    psro::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    const bool pass = outcome.pass && seconds < c.limit_seconds;
    failed += !pass;
    std::printf("%s criterion %d (%s): %s [%.2fs, limit %.0fs]\n",
                pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(),
                seconds, c.limit_seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
