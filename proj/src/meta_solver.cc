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

#include "psro/meta_solver.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include <Eigen/Dense>

namespace psro {

MetaNash FictitiousPlay(const PayoffMatrix& game,
                        const FictitiousPlayOptions& options) {
  if (options.max_iters < 1) {
    throw Error(ErrorKind::kConfig, "fictitious play needs max_iters >= 1");
  }
  const int n = game.dim();
  int start = options.start == FictitiousPlayStart::kFirst ? 0 : n - 1;
  if (options.start_index) {
    start = *options.start_index;
    if (start < 0 || start >= n) {
      throw Error(ErrorKind::kIndex, "fictitious play start out of range");
    }
  }

  std::vector<std::uint64_t> counts(n, 0);
  // Accumulated payoff of each row against the summed play so far; column
  // `b` of an antisymmetric matrix is the negated row `b`.
  std::vector<double> payoffs(n, 0.0);
  auto add = [&](int b) {
    ++counts[b];
    const auto row = game.row(b);
    for (int i = 0; i < n; ++i) payoffs[i] -= row[i];
  };
  add(start);
  std::uint64_t total = 1;

  int iters = 0;
  while (true) {
    const int br = static_cast<int>(
        std::max_element(payoffs.begin(), payoffs.end()) - payoffs.begin());
    if (payoffs[br] / static_cast<double>(total) <= options.target_residual ||
        iters >= options.max_iters) {
      break;
    }
    add(br);
    ++total;
    ++iters;
  }

  std::vector<double> weights(n);
  for (int i = 0; i < n; ++i) {
    weights[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  MixedStrategy average(std::move(weights));
  const double residual = Exploitability(game, average);
  MetaNash result{std::move(average), residual, iters};
  if (options.refine_support) return RefineSupport(game, std::move(result));
  return result;
}

namespace {

constexpr int kRefineBudget = 512;
constexpr double kExactResidual = 1e-13;
constexpr int kExhaustiveRefineDim = 12;

// Solves G_SS x = 0, sum(x) = 1 on the candidate support. Returns nothing
// when the system is inconsistent (for example an even-sized support of a
// generic antisymmetric matrix).
std::optional<Eigen::VectorXd> SolveIndifference(
    const PayoffMatrix& game, const std::vector<int>& support) {
  const int s = static_cast<int>(support.size());
  Eigen::MatrixXd a(s + 1, s);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s + 1);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) a(r, c) = game(support[r], support[c]);
  }
  a.row(s).setOnes();
  b(s) = 1.0;
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  if (!x.allFinite() || (a * x - b).lpNorm<Eigen::Infinity>() > 1e-9) {
    return std::nullopt;
  }
  return x;
}

std::optional<MixedStrategy> Lift(int dim, const std::vector<int>& support,
                                  const Eigen::VectorXd& x) {
  std::vector<double> probs(dim, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    probs[support[k]] = std::max(0.0, x(static_cast<Eigen::Index>(k)));
    total += probs[support[k]];
  }
  if (!(total > 0.0)) return std::nullopt;
  for (double& p : probs) p /= total;
  if (std::abs(std::accumulate(probs.begin(), probs.end(), 0.0) - 1.0) >
      kSimplexTolerance) {
    return std::nullopt;
  }
  return MixedStrategy(std::move(probs));
}

}  // namespace

MetaNash RefineSupport(const PayoffMatrix& game, MetaNash approx) {
  const std::vector<double> values = PayoffVector(game, approx.weights);
  const double top = *std::max_element(values.begin(), values.end());
  const double scale = std::max(approx.residual, 1e-12);
  const int n = game.dim();

  std::set<std::vector<int>> seeds;
  for (double factor : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
      if (values[i] >= top - factor * scale) support.push_back(i);
    }
    seeds.insert(std::move(support));
  }
  for (double mass : {1e-2, 1e-3}) {
    seeds.insert(ExtractSupport(approx.weights, mass).indices);
  }

  // Breadth-first search over supports around the seeds. An inconsistent
  // system branches on dropping each member (least indifferent first), a
  // solution outside the simplex on dropping each negative member, and an
  // exploitable solution on admitting one of the most profitable outsiders.
  std::deque<std::vector<int>> queue(seeds.begin(), seeds.end());
  std::set<std::vector<int>> visited;
  int budget = kRefineBudget;
  auto without = [](std::vector<int> support, int member) {
    support.erase(std::find(support.begin(), support.end(), member));
    return support;
  };
  while (!queue.empty() && budget > 0) {
    std::vector<int> support = std::move(queue.front());
    queue.pop_front();
    if (support.empty() || !visited.insert(support).second) continue;
    --budget;
    const std::optional<Eigen::VectorXd> x = SolveIndifference(game, support);
    if (!x) {
      std::vector<int> order = support;
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return values[a] < values[b]; });
      for (int member : order) queue.push_back(without(support, member));
      continue;
    }
    if (x->minCoeff() < -1e-12) {
      std::vector<std::pair<double, int>> negative;
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double xk = (*x)(static_cast<Eigen::Index>(k));
        if (xk < -1e-12) negative.emplace_back(xk, support[k]);
      }
      std::sort(negative.begin(), negative.end());
      for (const auto& [xk, member] : negative) {
        queue.push_back(without(support, member));
      }
      continue;
    }
    std::optional<MixedStrategy> exact = Lift(n, support, *x);
    if (!exact) continue;
    const std::vector<double> payoff = PayoffVector(game, *exact);
    const double residual =
        std::max(0.0, *std::max_element(payoff.begin(), payoff.end()));
    if (residual < approx.residual) {
      approx.weights = std::move(*exact);
      approx.residual = residual;
    }
    if (residual <= kExactResidual) break;
    std::vector<int> outsiders;
    for (int i = 0; i < n; ++i) {
      if (payoff[i] > kExactResidual &&
          !std::binary_search(support.begin(), support.end(), i)) {
        outsiders.push_back(i);
      }
    }
    std::sort(outsiders.begin(), outsiders.end(),
              [&](int a, int b) { return payoff[a] > payoff[b]; });
    if (outsiders.size() > 3) outsiders.resize(3);
    for (int entrant : outsiders) {
      std::vector<int> grown = support;
      grown.insert(std::upper_bound(grown.begin(), grown.end(), entrant),
                   entrant);
      queue.push_back(std::move(grown));
    }
  }

  // Small games: fall back to trying every support.
  if (approx.residual > kExactResidual && n <= kExhaustiveRefineDim) {
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> support;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) support.push_back(i);
      }
      if (visited.count(support)) continue;
      const std::optional<Eigen::VectorXd> x = SolveIndifference(game, support);
      if (!x || x->minCoeff() < -1e-12) continue;
      std::optional<MixedStrategy> exact = Lift(n, support, *x);
      if (!exact) continue;
      const double residual = Exploitability(game, *exact);
      if (residual < approx.residual) {
        approx.weights = std::move(*exact);
        approx.residual = residual;
        if (residual <= kExactResidual) break;
      }
    }
  }
  return approx;
}

MetaNash FictitiousPlay(const PayoffMatrix& game, int max_iters,
                        double target_residual) {
  FictitiousPlayOptions options;
  options.max_iters = max_iters;
  options.target_residual = target_residual;
  return FictitiousPlay(game, options);
}

PayoffMatrix RestrictedGame(const PayoffMatrix& game,
                            std::span<const int> indices) {
  if (indices.empty()) {
    throw Error(ErrorKind::kIndex, "restriction to an empty index list");
  }
  std::vector<bool> seen(game.dim(), false);
  for (int idx : indices) {
    if (idx < 0 || idx >= game.dim()) {
      throw Error(ErrorKind::kIndex,
                  "restriction index " + std::to_string(idx) + " out of range");
    }
    if (seen[idx]) {
      throw Error(ErrorKind::kIndex,
                  "duplicate restriction index " + std::to_string(idx));
    }
    seen[idx] = true;
  }
  const auto k = indices.size();
  std::vector<double> entries(k * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      entries[a * k + b] = game(indices[a], indices[b]);
    }
  }
  return PayoffMatrix(static_cast<int>(k), std::move(entries));
}

SupportSet ExtractSupport(const MixedStrategy& strategy, double threshold) {
  SupportSet support{{}, threshold};
  for (int i = 0; i < strategy.dim(); ++i) {
    if (strategy[i] > threshold) support.indices.push_back(i);
  }
  return support;
}

TheoremReport CheckTheorem1(const PayoffMatrix& game,
                            const TheoremCheckOptions& options) {
  const int n = game.dim();
  if (n > kTheoremMaxDim) {
    throw Error(ErrorKind::kSize,
                "theorem check enumerates 2^dim subpopulations; dim " +
                    std::to_string(n) + " exceeds the limit of " +
                    std::to_string(kTheoremMaxDim));
  }
  TheoremReport report{false, false, FictitiousPlay(game, options.full_solver),
                       {}, 0, {}};
  if (report.full_nash.residual > options.max_full_residual) {
    report.unresolved = true;
    return report;
  }
  report.support =
      ExtractSupport(report.full_nash.weights, options.support_threshold);
  std::uint32_t support_mask = 0;
  for (int idx : report.support.indices) support_mask |= 1u << idx;

  const std::uint32_t full_mask = (1u << n) - 1;
  std::vector<int> members;
  for (std::uint32_t mask = 1; mask < full_mask; ++mask) {
    if ((support_mask & ~mask) == 0) continue;  // covers the support
    members.clear();
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(i);
    }
    const MetaNash restricted =
        FictitiousPlay(RestrictedGame(game, members), options.restricted_solver);
    std::vector<double> lifted(n, 0.0);
    for (std::size_t k = 0; k < members.size(); ++k) {
      lifted[members[k]] = restricted.weights[static_cast<int>(k)];
    }
    const std::vector<double> values =
        PayoffVector(game, MixedStrategy(std::move(lifted)));
    double best = -std::numeric_limits<double>::infinity();
    for (int idx : report.support.indices) {
      if (!(mask & (1u << idx))) best = std::max(best, values[idx]);
    }
    ++report.subpopulations_checked;
    // An approximate restricted equilibrium can understate a witness by up to
    // its own residual.
    if (best < -(options.tol + restricted.residual)) {
      report.witness_failures.push_back(
          {members, restricted.weights, best});
    }
  }
  report.holds = report.witness_failures.empty();
  return report;
}

TheoremReport CheckTheorem1(const PayoffMatrix& game, double support_threshold,
                            double tol) {
  TheoremCheckOptions options;
  options.support_threshold = support_threshold;
  options.tol = tol;
  return CheckTheorem1(game, options);
}

}  // namespace psro
