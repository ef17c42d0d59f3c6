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

#include "psro/harness.h"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <initializer_list>
#include <mutex>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

namespace psro {
namespace {

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string ShortDouble(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

class ConfigReader {
 public:
  explicit ConfigReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Fail(const YAML::Node& node, std::string_view key,
                         const std::string& message) const {
    std::string where = source_;
    if (node && !node.Mark().is_null()) {
      where += ":" + std::to_string(node.Mark().line + 1);
    } else {
      where += " (override)";
    }
    throw Error(ErrorKind::kConfig,
                where + ": " + std::string(key) + ": " + message);
  }

  void CheckKeys(const YAML::Node& map, std::string_view where,
                 std::initializer_list<std::string_view> allowed) const {
    if (!map.IsMap()) Fail(map, where, "expected a mapping");
    for (const auto& item : map) {
      const auto key = item.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        Fail(item.first, where, "unknown key '" + key + "'");
      }
    }
  }

  template <typename T>
  T Scalar(const YAML::Node& node, std::string_view key) const {
    if (!node.IsScalar()) Fail(node, key, "expected a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      Fail(node, key, "cannot read value '" + node.Scalar() + "'");
    }
  }

  template <typename T>
  void Maybe(const YAML::Node& map, std::string_view key, T& out) const {
    const YAML::Node node = map[std::string(key)];
    if (node) out = Scalar<T>(node, key);
  }

  // A single scalar is accepted as a one-element list.
  template <typename T>
  std::vector<T> List(const YAML::Node& node, std::string_view key) const {
    std::vector<T> out;
    if (node.IsSequence()) {
      for (const auto& item : node) out.push_back(Scalar<T>(item, key));
    } else {
      out.push_back(Scalar<T>(node, key));
    }
    if (out.empty()) Fail(node, key, "list must not be empty");
    return out;
  }

  template <typename T, typename Parse>
  T Enum(const YAML::Node& node, std::string_view key, Parse parse) const {
    const auto name = Scalar<std::string>(node, key);
    try {
      return parse(name);
    } catch (const Error& e) {
      Fail(node, key, e.what());
    }
  }

 private:
  std::string source_;
};

AnnealKind ParseAnneal(std::string_view name) {
  if (name == "constant") return AnnealKind::kConstant;
  if (name == "inverse_time") return AnnealKind::kInverseTime;
  throw Error(ErrorKind::kConfig, "unknown anneal kind '" + std::string(name) +
                                      "' (constant, inverse_time)");
}

std::string_view AnnealName(AnnealKind kind) {
  return kind == AnnealKind::kConstant ? "constant" : "inverse_time";
}

InitialPolicyKind ParseInitialPolicy(std::string_view name) {
  if (name == "uniform") return InitialPolicyKind::kUniform;
  if (name == "random_pure") return InitialPolicyKind::kRandomPure;
  if (name == "pure") return InitialPolicyKind::kPure;
  throw Error(ErrorKind::kConfig, "unknown initial policy '" +
                                      std::string(name) +
                                      "' (uniform, random_pure, pure)");
}

FictitiousPlayStart ParseStart(std::string_view name) {
  if (name == "first") return FictitiousPlayStart::kFirst;
  if (name == "last") return FictitiousPlayStart::kLast;
  throw Error(ErrorKind::kConfig,
              "unknown start '" + std::string(name) + "' (first, last)");
}

void ReadSolver(const ConfigReader& reader, const YAML::Node& node,
                std::string_view where, FictitiousPlayOptions& options,
                bool* randomize) {
  if (randomize != nullptr) {
    reader.CheckKeys(node, where,
                     {"max_iters", "target_residual", "refine_support",
                      "start", "randomize_init"});
    reader.Maybe(node, "randomize_init", *randomize);
  } else {
    reader.CheckKeys(node, where,
                     {"max_iters", "target_residual", "refine_support",
                      "start"});
  }
  reader.Maybe(node, "max_iters", options.max_iters);
  reader.Maybe(node, "target_residual", options.target_residual);
  reader.Maybe(node, "refine_support", options.refine_support);
  if (node["start"]) {
    options.start = reader.Enum<FictitiousPlayStart>(node["start"], "start",
                                                     ParseStart);
  }
  if (options.max_iters < 1) {
    reader.Fail(node["max_iters"], "max_iters", "must be >= 1");
  }
  if (!(options.target_residual >= 0.0)) {
    reader.Fail(node["target_residual"], "target_residual", "must be >= 0");
  }
}

// Rebuilt nodes carry no source mark, so errors in them are attributed to the
// override rather than to a line of the config file.
YAML::Node WithoutMarks(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Scalar:
      return YAML::Node(node.Scalar());
    case YAML::NodeType::Sequence: {
      YAML::Node out(YAML::NodeType::Sequence);
      for (const auto& item : node) out.push_back(WithoutMarks(item));
      return out;
    }
    case YAML::NodeType::Map: {
      YAML::Node out(YAML::NodeType::Map);
      for (const auto& item : node) {
        out[item.first.Scalar()] = WithoutMarks(item.second);
      }
      return out;
    }
    default:
      return YAML::Node();
  }
}

void ApplyOverride(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorKind::kConfig, "override '" + assignment +
                                        "' is not of the form key=value");
  }
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = WithoutMarks(YAML::Load(assignment.substr(eq + 1)));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::kConfig,
                "override '" + assignment + "': " + e.msg);
  }
  std::vector<std::string> keys;
  std::stringstream parts(path);
  for (std::string key; std::getline(parts, key, '.');) {
    if (key.empty()) {
      throw Error(ErrorKind::kConfig,
                  "override '" + assignment + "' has an empty key");
    }
    keys.push_back(key);
  }
  YAML::Node cur;
  cur.reset(root);
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    if (cur[keys[i]] && !cur[keys[i]].IsMap()) {
      throw Error(ErrorKind::kConfig, "override '" + assignment + "': '" +
                                          keys[i] + "' is not a mapping");
    }
    YAML::Node next = cur[keys[i]];
    cur.reset(next);
  }
  cur[keys.back()] = value;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       std::span<const std::string> overrides,
                                       std::string_view source) {
  const ConfigReader reader{std::string(source)};
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorKind::kConfig, std::string(source) + ":" +
                                        std::to_string(e.mark.line + 1) +
                                        ": " + e.msg);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const std::string& assignment : overrides) {
    ApplyOverride(root, assignment);
  }
  reader.CheckKeys(root, "config",
                   {"game", "algorithms", "workers", "learning_rates",
                    "run_seeds", "anneal", "plateau", "scheduler",
                    "meta_solver", "eval_solver", "initial_policy",
                    "eval_fixed_only", "rectified", "output", "parallelism",
                    "checkpoint"});

  ExperimentConfig config;
  const YAML::Node game = root["game"];
  if (!game) reader.Fail(root, "game", "missing");
  reader.CheckKeys(game, "game", {"random", "fixture"});
  if (game["random"] && game["fixture"]) {
    reader.Fail(game, "game", "give either random or fixture, not both");
  }
  if (const YAML::Node random = game["random"]) {
    reader.CheckKeys(random, "game.random", {"dim", "seeds"});
    config.game.kind = GameSweep::Kind::kRandom;
    if (!random["dim"]) reader.Fail(random, "game.random.dim", "missing");
    config.game.dim = reader.Scalar<int>(random["dim"], "game.random.dim");
    if (config.game.dim < 1) {
      reader.Fail(random["dim"], "game.random.dim", "must be >= 1");
    }
    if (!random["seeds"]) reader.Fail(random, "game.random.seeds", "missing");
    config.game.seeds =
        reader.List<std::uint64_t>(random["seeds"], "game.random.seeds");
  } else if (const YAML::Node fixture = game["fixture"]) {
    config.game.kind = GameSweep::Kind::kFixture;
    config.game.fixture = reader.Scalar<std::string>(fixture, "game.fixture");
    try {
      config.game.dim = CanonicalGame(config.game.fixture).dim();
    } catch (const Error& e) {
      reader.Fail(fixture, "game.fixture", e.what());
    }
    config.game.seeds = {0};
  } else {
    reader.Fail(game, "game", "needs random or fixture");
  }

  if (!root["algorithms"]) reader.Fail(root, "algorithms", "missing");
  const YAML::Node algorithms = root["algorithms"];
  for (const std::string& name :
       reader.List<std::string>(algorithms, "algorithms")) {
    try {
      config.algorithms.push_back(ParseAlgorithm(name));
    } catch (const Error& e) {
      reader.Fail(algorithms, "algorithms", e.what());
    }
  }
  config.workers = root["workers"]
                       ? reader.List<int>(root["workers"], "workers")
                       : std::vector<int>{1};
  for (int w : config.workers) {
    if (w < 1) reader.Fail(root["workers"], "workers", "must be >= 1");
  }
  config.learning_rates =
      root["learning_rates"]
          ? reader.List<double>(root["learning_rates"], "learning_rates")
          : std::vector<double>{1.0};
  for (double lr : config.learning_rates) {
    if (!(lr > 0.0 && lr <= 1.0)) {
      reader.Fail(root["learning_rates"], "learning_rates",
                  "must lie in (0, 1]");
    }
  }
  config.run_seeds =
      root["run_seeds"]
          ? reader.List<std::uint64_t>(root["run_seeds"], "run_seeds")
          : std::vector<std::uint64_t>{0};

  RunConfig& base = config.base;
  if (const YAML::Node anneal = root["anneal"]) {
    reader.CheckKeys(anneal, "anneal", {"kind", "gamma"});
    if (anneal["kind"]) {
      base.schedule.kind =
          reader.Enum<AnnealKind>(anneal["kind"], "anneal.kind", ParseAnneal);
    }
    reader.Maybe(anneal, "gamma", base.schedule.gamma);
    if (!(base.schedule.gamma >= 0.0)) {
      reader.Fail(anneal["gamma"], "anneal.gamma", "must be >= 0");
    }
  }
  if (const YAML::Node plateau = root["plateau"]) {
    reader.CheckKeys(plateau, "plateau",
                     {"window", "min_improvement", "eval_period"});
    reader.Maybe(plateau, "window", base.plateau.window);
    reader.Maybe(plateau, "min_improvement", base.plateau.min_improvement);
    reader.Maybe(plateau, "eval_period", base.plateau.eval_period);
    try {
      base.plateau.Validate();
    } catch (const Error& e) {
      reader.Fail(plateau, "plateau", e.what());
    }
  }
  if (const YAML::Node scheduler = root["scheduler"]) {
    reader.CheckKeys(scheduler, "scheduler",
                     {"mode", "meta_refresh_period", "max_steps", "max_rounds",
                      "eval_every"});
    SchedulerConfig& s = base.scheduler;
    if (scheduler["mode"]) {
      s.mode = reader.Enum<SchedulerMode>(scheduler["mode"], "scheduler.mode",
                                          ParseSchedulerMode);
    }
    reader.Maybe(scheduler, "meta_refresh_period", s.meta_refresh_period);
    reader.Maybe(scheduler, "max_steps", s.max_steps);
    reader.Maybe(scheduler, "max_rounds", s.max_rounds);
    reader.Maybe(scheduler, "eval_every", s.eval_every);
    try {
      s.Validate();
    } catch (const Error& e) {
      reader.Fail(scheduler, "scheduler", e.what());
    }
  }
  if (const YAML::Node solver = root["meta_solver"]) {
    ReadSolver(reader, solver, "meta_solver", base.meta_solver,
               &base.randomize_meta_init);
  }
  if (const YAML::Node solver = root["eval_solver"]) {
    ReadSolver(reader, solver, "eval_solver", base.eval_solver, nullptr);
  }
  if (const YAML::Node initial = root["initial_policy"]) {
    if (initial.IsScalar()) {
      base.initial_policy.kind = reader.Enum<InitialPolicyKind>(
          initial, "initial_policy", ParseInitialPolicy);
    } else {
      reader.CheckKeys(initial, "initial_policy", {"kind", "index"});
      if (initial["kind"]) {
        base.initial_policy.kind = reader.Enum<InitialPolicyKind>(
            initial["kind"], "initial_policy.kind", ParseInitialPolicy);
      }
      reader.Maybe(initial, "index", base.initial_policy.index);
    }
    if (base.initial_policy.index < 0 ||
        base.initial_policy.index >= config.game.dim) {
      reader.Fail(initial, "initial_policy.index", "out of range");
    }
  }
  reader.Maybe(root, "eval_fixed_only", base.eval_fixed_only);
  if (const YAML::Node rectified = root["rectified"]) {
    reader.CheckKeys(rectified, "rectified",
                     {"support_threshold", "duplicate_tolerance"});
    reader.Maybe(rectified, "support_threshold",
                 base.rectified_support_threshold);
    reader.Maybe(rectified, "duplicate_tolerance", base.duplicate_tolerance);
  }
  reader.Maybe(root, "output", config.output);
  reader.Maybe(root, "parallelism", config.parallelism);
  if (config.parallelism < 1) {
    reader.Fail(root["parallelism"], "parallelism", "must be >= 1");
  }
  reader.Maybe(root, "checkpoint", config.checkpoint);

  for (const SweepCell& cell : EnumerateCells(config)) {
    try {
      CellRunConfig(config, cell).Validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, std::string(source) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path,
                                      std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open config '" + path.string() + "'");
  }
  std::stringstream text;
  text << in.rdbuf();
  return ParseExperimentConfig(text.str(), overrides, path.string());
}

std::vector<SweepCell> EnumerateCells(const ExperimentConfig& config) {
  std::vector<SweepCell> cells;
  for (AlgorithmKind algorithm : config.algorithms) {
    for (std::uint64_t game_seed : config.game.seeds) {
      for (std::uint64_t run_seed : config.run_seeds) {
        for (double lr : config.learning_rates) {
          for (int workers : config.workers) {
            cells.push_back({algorithm, game_seed, run_seed, lr, workers});
          }
        }
      }
    }
  }
  return cells;
}

RunConfig CellRunConfig(const ExperimentConfig& config, const SweepCell& cell) {
  RunConfig run = config.base;
  run.algorithm = cell.algorithm;
  run.scheduler.workers = cell.workers;
  run.schedule.r0 = cell.learning_rate;
  run.seed = cell.run_seed;
  return run;
}

GameDescriptor CellGameDescriptor(const ExperimentConfig& config,
                                  const SweepCell& cell) {
  GameDescriptor descriptor;
  descriptor.dim = config.game.dim;
  if (config.game.kind == GameSweep::Kind::kRandom) {
    descriptor.kind = GameDescriptor::Kind::kRandom;
    descriptor.seed = cell.game_seed;
  } else {
    descriptor.kind = GameDescriptor::Kind::kFixture;
    descriptor.fixture = config.game.fixture;
  }
  return descriptor;
}

PayoffMatrix CellGame(const ExperimentConfig& config, const SweepCell& cell) {
  return BuildGame(CellGameDescriptor(config, cell));
}

std::string TraceFileName(const ExperimentConfig& config,
                          const SweepCell& cell) {
  std::string game =
      config.game.kind == GameSweep::Kind::kRandom
          ? "dim" + std::to_string(config.game.dim) + "_g" +
                std::to_string(cell.game_seed)
          : config.game.fixture;
  return std::string(AlgorithmName(cell.algorithm)) + "_" + game + "_r" +
         std::to_string(cell.run_seed) + "_lr" +
         ShortDouble(cell.learning_rate) + "_w" +
         std::to_string(cell.workers) + ".csv";
}

std::filesystem::path ResolveOutputDir(const ExperimentConfig& config) {
  if (!config.output.empty()) return config.output;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return kDefaultOutputDir;
}

std::optional<std::string> ExploitabilityTrace::Get(
    std::string_view key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

TraceMetadata CellMetadata(const ExperimentConfig& config,
                           const SweepCell& cell) {
  const RunConfig run = CellRunConfig(config, cell);
  const bool random = config.game.kind == GameSweep::Kind::kRandom;
  return {
      {"algorithm", std::string(AlgorithmName(cell.algorithm))},
      {"game", random ? "random" : config.game.fixture},
      {"dim", std::to_string(config.game.dim)},
      {"game_seed", std::to_string(cell.game_seed)},
      {"run_seed", std::to_string(cell.run_seed)},
      {"lr", ShortDouble(cell.learning_rate)},
      {"workers", std::to_string(cell.workers)},
      {"anneal", std::string(AnnealName(run.schedule.kind))},
      {"gamma", ShortDouble(run.schedule.gamma)},
      {"mode", std::string(SchedulerModeName(run.scheduler.mode))},
      {"max_steps", std::to_string(run.scheduler.max_steps)},
      {"max_rounds", std::to_string(run.scheduler.max_rounds)},
      {"eval_every", std::to_string(run.scheduler.eval_every)},
      {"meta_refresh_period", std::to_string(run.scheduler.meta_refresh_period)},
  };
}

void WriteTrace(std::ostream& out, const ExploitabilityTrace& trace) {
  for (const auto& [key, value] : trace.metadata) {
    out << "# " << key << '=' << value << '\n';
  }
  out << "round,global_step,exploitability,population_size\n";
  for (const TraceRecord& r : trace.records) {
    out << r.round << ',' << r.global_step << ','
        << FormatDouble(r.exploitability) << ',' << r.population_size << '\n';
  }
}

namespace {

template <typename T>
bool ParseNumber(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

ExploitabilityTrace ReadTrace(std::istream& in, std::string_view name) {
  ExploitabilityTrace trace;
  int line_no = 0;
  bool header = false;
  auto fail = [&](const std::string& message) -> Error {
    return Error(ErrorKind::kIo, std::string(name) + ":" +
                                     std::to_string(line_no) + ": " + message);
  };
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    if (!header && line[0] == '#') {
      const auto eq = line.find('=');
      if (line.rfind("# ", 0) != 0 || eq == std::string::npos) {
        throw fail("metadata lines look like '# key=value'");
      }
      trace.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
      continue;
    }
    if (!header) {
      if (line != "round,global_step,exploitability,population_size") {
        throw fail("unexpected header '" + line + "'");
      }
      header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    fields.push_back(rest);
    TraceRecord r;
    if (fields.size() != 4 || !ParseNumber(fields[0], r.round) ||
        !ParseNumber(fields[1], r.global_step) ||
        !ParseNumber(fields[2], r.exploitability) ||
        !ParseNumber(fields[3], r.population_size)) {
      throw fail("malformed record '" + line + "'");
    }
    if (!(r.exploitability >= 0.0)) throw fail("negative exploitability");
    if (!trace.records.empty() && r.round <= trace.records.back().round) {
      throw fail("rounds must be strictly increasing");
    }
    trace.records.push_back(r);
  }
  if (!header) throw fail("missing header row");
  return trace;
}

ExploitabilityTrace ReadTraceFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return ReadTrace(in, path.string());
}

std::vector<std::filesystem::path> RunSweep(const ExperimentConfig& config) {
  const std::vector<SweepCell> cells = EnumerateCells(config);
  const std::filesystem::path dir = ResolveOutputDir(config);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, "cannot create output directory '" +
                                    dir.string() + "': " + ec.message());
  }
  std::vector<std::filesystem::path> paths(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) {
      try {
        const SweepCell& cell = cells[i];
        RunResult result =
            Run(CellGame(config, cell), CellRunConfig(config, cell));
        paths[i] = dir / TraceFileName(config, cell);
        std::ofstream out(paths[i]);
        if (!out) {
          throw Error(ErrorKind::kIo,
                      "cannot write '" + paths[i].string() + "'");
        }
        WriteTrace(out, {CellMetadata(config, cell), result.records});
        if (config.checkpoint) {
          std::filesystem::path checkpoint = paths[i];
          checkpoint.replace_extension(".population");
          std::ofstream pop(checkpoint);
          if (!pop) {
            throw Error(ErrorKind::kIo,
                        "cannot write '" + checkpoint.string() + "'");
          }
          SaveCheckpoint(pop, CellGameDescriptor(config, cell),
                         result.population);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    const int threads = std::min<int>(config.parallelism,
                                      static_cast<int>(cells.size()));
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return paths;
}

Summary Aggregate(std::span<const ExploitabilityTrace> traces,
                  std::span<const std::string> names,
                  std::span<const std::string> group_by) {
  Summary summary;
  summary.group_by.assign(group_by.begin(), group_by.end());
  std::map<std::vector<std::string>, std::vector<std::size_t>> groups;
  for (std::size_t t = 0; t < traces.size(); ++t) {
    std::vector<std::string> key;
    for (const std::string& k : group_by) {
      auto value = traces[t].Get(k);
      if (!value) {
        throw Error(ErrorKind::kConfig, "trace '" + names[t] +
                                            "' has no metadata key '" + k +
                                            "'");
      }
      key.push_back(*value);
    }
    groups[key].push_back(t);
  }
  for (const auto& [key, members] : groups) {
    const auto& first = traces[members.front()].records;
    for (std::size_t m : members) {
      const auto& records = traces[m].records;
      bool aligned = records.size() == first.size();
      for (std::size_t r = 0; aligned && r < records.size(); ++r) {
        aligned = records[r].round == first[r].round;
      }
      if (!aligned) {
        throw Error(ErrorKind::kAlignment,
                    "round grids differ between '" + names[members.front()] +
                        "' and '" + names[m] + "'");
      }
    }
    const int n = static_cast<int>(members.size());
    if (n == 1) {
      std::string label;
      for (std::size_t k = 0; k < key.size(); ++k) {
        label += (k ? "," : "") + group_by[k] + "=" + key[k];
      }
      summary.warnings.push_back("group {" + label +
                                 "} has one trace; standard error set to 0");
    }
    for (std::size_t r = 0; r < first.size(); ++r) {
      double sum = 0.0, steps = 0.0;
      for (std::size_t m : members) {
        sum += traces[m].records[r].exploitability;
        steps += static_cast<double>(traces[m].records[r].global_step);
      }
      const double mean = sum / n;
      double sq = 0.0;
      for (std::size_t m : members) {
        const double d = traces[m].records[r].exploitability - mean;
        sq += d * d;
      }
      const double se = n > 1 ? std::sqrt(sq / (n - 1)) / std::sqrt(n) : 0.0;
      summary.rows.push_back({key, first[r].round, n, steps / n, mean, se});
    }
  }
  return summary;
}

Summary Aggregate(std::span<const std::filesystem::path> files,
                  std::span<const std::string> group_by) {
  std::vector<ExploitabilityTrace> traces;
  std::vector<std::string> names;
  for (const auto& file : files) {
    traces.push_back(ReadTraceFile(file));
    names.push_back(file.string());
  }
  return Aggregate(traces, names, group_by);
}

void WriteSummary(std::ostream& out, const Summary& summary) {
  for (const std::string& key : summary.group_by) out << key << ',';
  out << "round,n,mean_global_step,mean_exploitability,stderr\n";
  for (const SummaryRow& row : summary.rows) {
    for (const std::string& value : row.group) out << value << ',';
    out << row.round << ',' << row.n << ','
        << FormatDouble(row.mean_global_step) << ','
        << FormatDouble(row.mean) << ',' << FormatDouble(row.stderr_mean)
        << '\n';
  }
}

std::vector<std::filesystem::path> ExpandGlob(const std::string& pattern) {
  glob_t result{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &result);
  std::vector<std::filesystem::path> paths;
  if (rc == 0) {
    for (std::size_t i = 0; i < result.gl_pathc; ++i) {
      paths.emplace_back(result.gl_pathv[i]);
    }
  }
  globfree(&result);
  if (rc == GLOB_NOMATCH || paths.empty()) {
    throw Error(ErrorKind::kIo, "no files match '" + pattern + "'");
  }
  if (rc != 0) throw Error(ErrorKind::kIo, "cannot expand '" + pattern + "'");
  std::sort(paths.begin(), paths.end());
  return paths;
}

namespace {

constexpr const char* kCounterexampleNames[] = {"Rock", "Paper", "Scissors",
                                                "strategy 4"};

// Index of the pure strategy a policy plays, or -1 for a mixed policy.
int PureIndex(const MixedStrategy& p) {
  for (int i = 0; i < p.dim(); ++i) {
    if (p[i] == 1.0) return i;
  }
  return -1;
}

std::string StrategyName(const MixedStrategy& p) {
  const int i = PureIndex(p);
  return i >= 0 ? kCounterexampleNames[i] : "a mixed policy";
}

std::vector<int> PureIndices(const Population& population, int count) {
  std::vector<int> out;
  for (int i = 0; i < count; ++i) out.push_back(PureIndex(population.policy(i)));
  return out;
}

RunConfig OracleConfig(AlgorithmKind algorithm) {
  RunConfig config;
  config.algorithm = algorithm;
  config.schedule = {AnnealKind::kConstant, 1.0, 0.0};
  config.initial_policy = {InitialPolicyKind::kPure, 0};
  config.meta_solver.refine_support = true;
  config.eval_solver.refine_support = true;
  return config;
}

}  // namespace

CounterexampleReport VerifyCounterexample() {
  const PayoffMatrix game =
      CanonicalGame(CanonicalGameName::kRectifiedCounterexample);
  CounterexampleReport report;

  RunConfig rectified = OracleConfig(AlgorithmKind::kRectifiedPsro);
  rectified.scheduler.max_steps = 10000;
  const RunResult r = Run(game, rectified);
  for (const RunEvent& event : r.events) {
    const std::string g = "rectified generation " +
                          std::to_string(event.generation) + ": ";
    switch (event.kind) {
      case RunEventKind::kGenerationStart:
        break;
      case RunEventKind::kGenerationAdded: {
        std::vector<int> added;
        std::string names;
        for (int idx : event.policies) {
          added.push_back(PureIndex(r.population.policy(idx)));
          names += (names.empty() ? "" : ", ") +
                   StrategyName(r.population.policy(idx));
        }
        report.rectified_additions.push_back(added);
        report.lines.push_back(g + "adds " + names);
        break;
      }
      case RunEventKind::kGenerationEmpty:
        report.rectified_additions.push_back({});
        report.lines.push_back(g + "adds nothing, terminates");
        break;
      case RunEventKind::kPromotion:
        break;
    }
  }
  report.rectified_terminated = r.terminated_round.has_value();
  report.rectified_population =
      PureIndices(r.population, r.population.num_fixed());
  report.rectified_exploitability = r.records.back().exploitability;
  report.lines.push_back("rectified final exploitability " +
                         FormatDouble(report.rectified_exploitability));

  RunConfig oracle = OracleConfig(AlgorithmKind::kSequentialPsro);
  oracle.scheduler.max_rounds = 400;
  const RunResult d = Run(game, oracle);
  // Once the equilibrium is in the population the oracle keeps returning it;
  // those repeats are summarized rather than listed.
  std::vector<MixedStrategy> seen = {d.population.policy(0)};
  int repeats = 0;
  for (const RunEvent& event : d.events) {
    const MixedStrategy& added = d.population.policy(event.policies.front());
    if (std::find(seen.begin(), seen.end(), added) != seen.end()) {
      ++repeats;
      continue;
    }
    seen.push_back(added);
    report.lines.push_back("double oracle adds " + StrategyName(added));
  }
  if (repeats > 0) {
    report.lines.push_back("double oracle re-adds an existing strategy " +
                           std::to_string(repeats) + " times");
  }
  report.double_oracle_population =
      PureIndices(d.population, d.population.num_fixed());
  report.double_oracle_exploitability = d.records.back().exploitability;
  report.lines.push_back("double oracle final exploitability " +
                         FormatDouble(report.double_oracle_exploitability));

  const std::vector<std::vector<int>> expected = {{1}, {2}, {}};
  if (report.rectified_additions != expected) {
    report.failures.push_back(
        "rectified generations differ from [adds Paper, adds Scissors, "
        "terminates]");
  }
  if (!report.rectified_terminated) {
    report.failures.push_back("rectified run did not terminate");
  }
  if (report.rectified_population != std::vector<int>{0, 1, 2}) {
    report.failures.push_back("rectified population is not {Rock, Paper, "
                              "Scissors}");
  }
  if (std::abs(report.rectified_exploitability - 0.4) > 1e-9) {
    report.failures.push_back("rectified exploitability " +
                              FormatDouble(report.rectified_exploitability) +
                              " != 0.4");
  }
  if (!(report.double_oracle_exploitability <= 1e-9)) {
    report.failures.push_back(
        "double oracle exploitability " +
        FormatDouble(report.double_oracle_exploitability) + " > 1e-9");
  }
  return report;
}

TheoremSuiteReport CheckTheoremSuite(int dim, int games, std::uint64_t seed) {
  if (dim < 1 || dim > kTheoremMaxDim) {
    throw Error(ErrorKind::kSize, "check-theorem needs 1 <= dim <= " +
                                      std::to_string(kTheoremMaxDim) +
                                      ", got " + std::to_string(dim));
  }
  if (games < 1) throw Error(ErrorKind::kConfig, "games must be >= 1");
  TheoremSuiteReport report;
  report.dim = dim;
  report.games = games;
  report.seed = seed;
  for (int g = 0; g < games; ++g) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(g);
    const TheoremReport result = CheckTheorem1(GenerateRandomGame(dim, s));
    if (result.unresolved) {
      ++report.unresolved;
    } else if (result.holds) {
      ++report.passed;
    } else {
      const TheoremWitnessFailure& w = result.witness_failures.front();
      std::string subset;
      for (int i : w.subpopulation) {
        subset += (subset.empty() ? "" : " ") + std::to_string(i);
      }
      report.failures.emplace_back(
          s, std::to_string(result.witness_failures.size()) +
                 " failing subpopulations, first {" + subset +
                 "} best uncovered value " +
                 FormatDouble(w.best_uncovered_value));
    }
  }
  return report;
}

}  // namespace psro
