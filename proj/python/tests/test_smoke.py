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

import csv
import glob
import os

import numpy as np
import pytest

import psro


def test_random_game_is_antisymmetric_and_seeded():
    g = psro.random_game(7, 3)
    assert g.shape == (7, 7)
    np.testing.assert_array_equal(g, -g.T)
    np.testing.assert_array_equal(g, psro.random_game(7, 3))
    assert np.all(np.abs(g) < 1)


def test_counterexample_best_response_and_value():
    g = psro.canonical_game("rectified_counterexample")
    rps_mix = [1 / 3, 1 / 3, 1 / 3, 0]
    assert psro.best_response(g, rps_mix) == 3
    assert psro.exploitability(g, rps_mix) == pytest.approx(0.4, abs=1e-12)
    assert psro.exploitability(g, [0, 0, 0, 1]) == 0.0


def test_fictitious_play_on_rps():
    m = psro.fictitious_play(psro.canonical_game("rps"), 2000, 1e-3, True)
    np.testing.assert_allclose(m["weights"], [1 / 3] * 3, atol=1e-9)
    assert m["residual"] <= 1e-3


def test_theorem_check():
    report = psro.check_theorem(psro.canonical_game("rectified_counterexample"))
    assert report["holds"]
    assert report["support"] == [3]
    suite = psro.check_theorem_suite(4, 5, 3)
    assert suite["failures"] == []


def test_p2sro_oracle_run_reaches_equilibrium():
    g = psro.canonical_game("rectified_counterexample")
    result = psro.run(g, "p2sro", max_rounds=300, refine_support=True)
    assert result["records"][-1][2] == 0.0
    assert [0.0, 0.0, 0.0, 1.0] in result["fixed_policies"]


def test_verify_counterexample():
    report = psro.verify_counterexample()
    assert report["passed"]
    assert report["rectified_additions"] == [[1], [2], []]
    assert report["rectified_exploitability"] == pytest.approx(0.4, abs=1e-9)


def test_errors_carry_kind():
    with pytest.raises(psro.PsroError) as info:
        psro.random_game(0, 1)
    assert info.value.kind == "invalid_dimension"
    with pytest.raises(psro.PsroError) as info:
        psro.run(psro.random_game(4, 1), "no_such_algorithm")
    assert info.value.kind == "config"


def test_sweep_and_aggregate(tmp_path):
    config = tmp_path / "sweep.yaml"
    config.write_text(
        "game:\n"
        "  random: {dim: 6, seeds: [0, 1]}\n"
        "algorithms: [p2sro]\n"
        "workers: [2]\n"
        "learning_rates: [0.5]\n"
        "scheduler: {max_rounds: 40}\n"
        f"output: {tmp_path / 'out'}\n"
    )
    paths = psro.run_config(str(config))
    assert len(paths) == 2
    with open(paths[0]) as f:
        lines = [line for line in f if not line.startswith("#")]
    rows = list(csv.DictReader(lines))
    assert rows[0]["round"] == "0"
    summary = psro.aggregate(sorted(glob.glob(str(tmp_path / "out" / "*.csv"))),
                             ["algorithm"])
    assert len(summary) == 5
    assert all(r["n"] == 2 for r in summary)
    assert summary[0]["algorithm"] == "p2sro"
