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

#ifndef PSRO_TESTS_PROPERTY_SUITES_H_
#define PSRO_TESTS_PROPERTY_SUITES_H_

#include <cstdint>
#include <string>

namespace psro::testing {

inline constexpr int kPropertyCases = 1000;
inline constexpr int kSimplexSteps = 100000;

struct PropertyResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
};

// Generated and restricted games are exactly antisymmetric with a zero
// diagonal, and expected utility flips sign when the players swap.
PropertyResult AntisymmetrySuite(std::uint64_t seed, int cases);

// Long runs of learner steps stay on the simplex to 1e-12.
PropertyResult SimplexSuite(std::uint64_t seed, int cases, int steps);

// The best response attains the best-response value, nothing beats it, and
// no lower index ties it.
PropertyResult BestResponseSuite(std::uint64_t seed, int cases);

// A fictitious-play result reports the exploitability its weights actually
// have inside the solved game.
PropertyResult FictitiousPlaySuite(std::uint64_t seed, int cases);

// Random add / promote / publish sequences keep fixed levels below active
// ones, keep the table exact, and never let actives leak into the lowest
// active policy's meta-Nash.
PropertyResult PopulationSuite(std::uint64_t seed, int cases);

}  // namespace psro::testing

#endif  // PSRO_TESTS_PROPERTY_SUITES_H_
