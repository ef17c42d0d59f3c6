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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "psro/errors.h"
#include "psro/game.h"
#include "psro/harness.h"
#include "psro/meta_solver.h"
#include "psro/orchestrators.h"

namespace py = pybind11;

namespace {

using Matrix = std::vector<std::vector<double>>;

py::array_t<double> ToArray(const psro::PayoffMatrix& game) {
  const auto n = static_cast<py::ssize_t>(game.dim());
  py::array_t<double> out({n, n});
  auto view = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (py::ssize_t j = 0; j < n; ++j) view(i, j) = game(i, j);
  }
  return out;
}

psro::PayoffMatrix FromRows(const Matrix& rows) {
  return psro::PayoffMatrix::FromRows(rows);
}

std::vector<double> Probs(const psro::MixedStrategy& s) {
  return {s.probs().begin(), s.probs().end()};
}

py::dict MetaNashDict(const psro::MetaNash& m) {
  py::dict d;
  d["weights"] = Probs(m.weights);
  d["residual"] = m.residual;
  d["iterations_used"] = m.iterations_used;
  return d;
}

py::list Records(const std::vector<psro::TraceRecord>& records) {
  py::list out;
  for (const auto& r : records) {
    out.append(py::make_tuple(r.round, r.global_step, r.exploitability,
                              r.population_size));
  }
  return out;
}

py::dict RunGame(const Matrix& rows, const std::string& algorithm, int workers,
                 double learning_rate, const std::string& anneal, double gamma,
                 std::size_t max_steps, std::size_t max_rounds, int eval_every,
                 int meta_refresh_period, const std::string& mode,
                 bool refine_support, const std::string& initial_policy,
                 std::uint64_t seed) {
  psro::RunConfig config;
  config.algorithm = psro::ParseAlgorithm(algorithm);
  config.scheduler.workers = workers;
  config.scheduler.mode = psro::ParseSchedulerMode(mode);
  config.scheduler.max_steps = max_steps;
  config.scheduler.max_rounds = max_rounds;
  config.scheduler.eval_every = eval_every;
  config.scheduler.meta_refresh_period = meta_refresh_period;
  config.schedule.r0 = learning_rate;
  config.schedule.gamma = gamma;
  if (anneal == "inverse_time") {
    config.schedule.kind = psro::AnnealKind::kInverseTime;
  } else if (anneal != "constant") {
    throw psro::Error(psro::ErrorKind::kConfig,
                      "unknown anneal kind '" + anneal + "'");
  }
  config.meta_solver.refine_support = refine_support;
  config.eval_solver.refine_support = refine_support;
  if (initial_policy == "random_pure") {
    config.initial_policy.kind = psro::InitialPolicyKind::kRandomPure;
  } else if (initial_policy != "uniform") {
    throw psro::Error(psro::ErrorKind::kConfig,
                      "unknown initial policy '" + initial_policy + "'");
  }
  config.seed = seed;

  const psro::PayoffMatrix game = FromRows(rows);
  const psro::RunResult result = [&] {
    py::gil_scoped_release release;
    return psro::Run(game, config);
  }();
  py::dict d;
  d["records"] = Records(result.records);
  d["rounds"] = result.rounds;
  d["global_steps"] = result.global_steps;
  d["terminated_round"] = result.terminated_round;
  std::vector<std::vector<double>> fixed;
  for (int i = 0; i < result.population.num_fixed(); ++i) {
    fixed.push_back(Probs(result.population.policy(i)));
  }
  d["fixed_policies"] = fixed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_psro, m) {
  m.doc() = "Population-based Nash solvers on symmetric zero-sum games";

  // Leaked on purpose: the type must outlive interpreter teardown.
  static auto* error =
      new py::exception<psro::Error>(m, "PsroError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const psro::Error& e) {
      const auto type = py::reinterpret_borrow<py::object>(error->ptr());
      py::object instance = type(e.what());
      instance.attr("kind") = std::string(psro::ErrorKindName(e.kind()));
      PyErr_SetObject(error->ptr(), instance.ptr());
    }
  });

  m.def("random_game",
        [](int dim, std::uint64_t seed) {
          return ToArray(psro::GenerateRandomGame(dim, seed));
        },
        py::arg("dim"), py::arg("seed"));
  m.def("canonical_game",
        [](const std::string& name) {
          return ToArray(psro::CanonicalGame(name));
        },
        py::arg("name"));
  m.def("best_response",
        [](const Matrix& game, const std::vector<double>& opponent) {
          return psro::BestResponse(FromRows(game),
                                    psro::MixedStrategy(opponent));
        },
        py::arg("game"), py::arg("opponent"));
  m.def("exploitability",
        [](const Matrix& game, const std::vector<double>& strategy) {
          return psro::Exploitability(FromRows(game),
                                      psro::MixedStrategy(strategy));
        },
        py::arg("game"), py::arg("strategy"));
  m.def("fictitious_play",
        [](const Matrix& game, int max_iters, double target_residual,
           bool refine_support) {
          psro::FictitiousPlayOptions options;
          options.max_iters = max_iters;
          options.target_residual = target_residual;
          options.refine_support = refine_support;
          return MetaNashDict(psro::FictitiousPlay(FromRows(game), options));
        },
        py::arg("game"), py::arg("max_iters") = psro::kDefaultMetaIterations,
        py::arg("target_residual") = psro::kDefaultMetaResidual,
        py::arg("refine_support") = false);
  m.def("check_theorem",
        [](const Matrix& game) {
          const psro::TheoremReport r = psro::CheckTheorem1(FromRows(game));
          py::dict d;
          d["holds"] = r.holds;
          d["unresolved"] = r.unresolved;
          d["support"] = r.support.indices;
          d["subpopulations_checked"] = r.subpopulations_checked;
          d["witness_failures"] = r.witness_failures.size();
          return d;
        },
        py::arg("game"));

  m.def("run", &RunGame, py::arg("game"), py::arg("algorithm") = "p2sro",
        py::arg("workers") = 1, py::arg("learning_rate") = 1.0,
        py::arg("anneal") = "constant", py::arg("gamma") = 0.0,
        py::arg("max_steps") = 100000, py::arg("max_rounds") = 0,
        py::arg("eval_every") = 10, py::arg("meta_refresh_period") = 10,
        py::arg("mode") = "lockstep", py::arg("refine_support") = false,
        py::arg("initial_policy") = "uniform", py::arg("seed") = 0);

  m.def("run_config",
        [](const std::string& path, const std::vector<std::string>& overrides) {
          const auto config = psro::LoadExperimentConfig(path, overrides);
          std::vector<std::string> out;
          py::gil_scoped_release release;
          for (const auto& p : psro::RunSweep(config)) out.push_back(p.string());
          return out;
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
  m.def("aggregate",
        [](const std::vector<std::string>& files,
           const std::vector<std::string>& group_by) {
          const std::vector<std::filesystem::path> paths(files.begin(),
                                                         files.end());
          const psro::Summary s = psro::Aggregate(paths, group_by);
          py::list rows;
          for (const auto& r : s.rows) {
            py::dict d;
            for (std::size_t i = 0; i < group_by.size(); ++i) {
              d[py::str(group_by[i])] = r.group[i];
            }
            d["round"] = r.round;
            d["n"] = r.n;
            d["mean_global_step"] = r.mean_global_step;
            d["mean_exploitability"] = r.mean;
            d["stderr"] = r.stderr_mean;
            rows.append(d);
          }
          return rows;
        },
        py::arg("files"), py::arg("group_by"));

  m.def("verify_counterexample", [] {
    const psro::CounterexampleReport r = psro::VerifyCounterexample();
    py::dict d;
    d["lines"] = r.lines;
    d["rectified_additions"] = r.rectified_additions;
    d["rectified_exploitability"] = r.rectified_exploitability;
    d["double_oracle_exploitability"] = r.double_oracle_exploitability;
    d["failures"] = r.failures;
    d["passed"] = r.passed();
    return d;
  });
  m.def("check_theorem_suite",
        [](int dim, int games, std::uint64_t seed) {
          const psro::TheoremSuiteReport r =
              psro::CheckTheoremSuite(dim, games, seed);
          py::dict d;
          d["passed"] = r.passed;
          d["unresolved"] = r.unresolved;
          d["failures"] = r.failures;
          return d;
        },
        py::arg("dim") = 8, py::arg("games") = 100, py::arg("seed") = 1);
}
