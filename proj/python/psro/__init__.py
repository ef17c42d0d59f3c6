# Copyright 2026 The PSRO Lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for the psro core library."""

from psro._psro import (
    PsroError,
    aggregate,
    best_response,
    canonical_game,
    check_theorem,
    check_theorem_suite,
    exploitability,
    fictitious_play,
    random_game,
    run,
    run_config,
    verify_counterexample,
)

__all__ = [
    "PsroError",
    "aggregate",
    "best_response",
    "canonical_game",
    "check_theorem",
    "check_theorem_suite",
    "exploitability",
    "fictitious_play",
    "random_game",
    "run",
    "run_config",
    "verify_counterexample",
]
