#    RIS Lab - Environment-aware RIS codebook simulator for multi-user MISO downlink
#    Copyright (C) 2026 RIS Lab contributors
#    The MIT License (MIT)
#
#    Permission is hereby granted, free of charge, to any person obtaining
#    a copy of this software and associated documentation files
#    (the "Software"), to deal in the Software without restriction,
#    including without limitation the rights to use, copy, modify, merge,
#    publish, distribute, sublicense, and/or sell copies of the Software,
#    and to permit persons to whom the Software is furnished to do so,
#    subject to the following conditions:
#
#    The above copyright notice and this permission notice shall be
#    included in all copies or substantial portions of the Software.
#
#    THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
#    EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
#    MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT.
#    IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY
#    CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT,
#    TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE
#    SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import csv
import math
import unittest

import numpy as np
import pytest

from ris_lab.codebook import SCHEME_ENV, SCHEME_RANDOM, exhaustive_phase_search, random_codebook, run_alternating
from ris_lab.config import load_config
from ris_lab.exception import ConfigError, DimensionMismatch
from ris_lab.experiments import (
    ALL_SCHEMES,
    CSV_COLUMNS,
    EXPERIMENT_PRESETS,
    SCHEME_OPTIMAL,
    SCHEME_RANDOM_CONFIG,
    THEORY_B,
    THEORY_F_R_DB,
    ExperimentSpec,
    ResultRow,
    TheoryGridPoint,
    check_bound,
    optimal_config_baseline,
    preset_experiment,
    run_experiment,
    run_theory_verification,
    theory_grid,
    write_csv,
)
from ris_lab.numerics import RngStream
from ris_lab.stats import paired_confidence
from ris_lab.theory import BOUND_ESTIMATED, BOUND_PERFECT

from .helpers import TempDirTestCase, desk_config, random_channels, unit_config


def make_spec(**kwargs) -> ExperimentSpec:
    params = dict(
        scenario=desk_config(n=4, q=2),
        sweep_param="P_d",
        sweep_values=(1.0, 10.0),
        schemes=(SCHEME_ENV, SCHEME_RANDOM),
        trials=4,
        noise_on=True,
        seed=5,
    )
    params.update(kwargs)
    return ExperimentSpec(**params)


def result_row(**kwargs) -> ResultRow:
    params = dict(
        sweep_param="Q",
        sweep_value=1,
        scheme=SCHEME_ENV,
        trials=10,
        mean_rate=1.0,
        stderr_rate=0.1,
        seed=1,
        theory_rate=1.0,
        mean_power=1.1,
        theory_power=1.0,
        stderr_power=0.05,
    )
    params.update(kwargs)
    return ResultRow(**params)


class TestExperimentSpec(unittest.TestCase):
    def assert_invalid(self, key: str, **kwargs):
        with self.assertRaises(ConfigError) as ctx:
            make_spec(**kwargs)
        self.assertEqual(ctx.exception.key, key)

    def test_validation(self):
        self.assert_invalid("sweep", sweep_param="M")
        self.assert_invalid("trials", trials=0)
        self.assert_invalid("values", sweep_values=())
        self.assert_invalid("values", sweep_values=(10.0, 1.0))
        self.assert_invalid("schemes", schemes=())
        self.assert_invalid("schemes", schemes=("best",))
        self.assert_invalid("q_values", q_values=(1, 4))
        self.assert_invalid("q_values", sweep_param="T_c", sweep_values=(100.0,), q_values=(0,))
        self.assert_invalid("threads", threads=0)

    def test_canonical_order(self):
        spec = make_spec(schemes=(SCHEME_OPTIMAL, SCHEME_RANDOM, SCHEME_ENV))
        self.assertEqual(spec.ordered_schemes, (SCHEME_ENV, SCHEME_RANDOM, SCHEME_OPTIMAL))

    def test_experiment_presets(self):
        config = desk_config()
        spec = preset_experiment("overhead_sweep", config, trials=10, seed=1)
        self.assertEqual((spec.sweep_param, spec.sweep_values[-1]), ("Q", 64))
        self.assertEqual(spec.schemes, (SCHEME_ENV, SCHEME_RANDOM))
        self.assertEqual(preset_experiment("coherence_sweep", config, 10, 1).q_values, (1, 16, 64))
        self.assertEqual(preset_experiment("power_sweep", config, 10, 1).schemes, ALL_SCHEMES)
        with self.assertRaises(ConfigError):
            preset_experiment("unknown_sweep", config, 10, 1)

    def test_overhead_user_sets(self):
        expected = {
            "overhead_sweep": (5, 6, 7, 8),
            "overhead_sweep_even": (2, 4, 6, 8),
            "overhead_sweep_six": (2, 4, 5, 6, 7, 8),
            "overhead_sweep_pair": (6, 8),
        }
        for name, users in expected.items():
            preset = EXPERIMENT_PRESETS[name]
            config = load_config(preset["config"])
            self.assertEqual(config.active_users, users)
            self.assertEqual((config.Q, config.M, config.N), (64, 8, 100))
            spec = preset_experiment(name, config, trials=10, seed=1)
            self.assertEqual((spec.sweep_param, spec.sweep_values), ("Q", (1, 2, 4, 8, 16, 32, 64)))
            self.assertEqual(spec.schemes, (SCHEME_ENV, SCHEME_RANDOM))

    def test_theory_grid(self):
        grid = theory_grid(64)
        self.assertEqual(len(grid), 27)
        self.assertAlmostEqual(grid[0].F_r, 10 ** -1.5)
        self.assertEqual([x.Q for x in grid[:9]], [1, 2, 4, 8, 16, 32, 64, 128, 256])
        self.assertTrue(all(x.N == 64 and x.sigma_q2 == 0.0 for x in grid))
        self.assertEqual(theory_grid(16, (3.0,), (4,), sigma_q2=0.5)[0].group, (16, 10 ** 0.3, 0.5))


class TestCsv(TempDirTestCase):
    def read(self, path: str):
        with open(path, newline="") as f:
            return list(csv.reader(f))

    def test_header_only(self):
        path = self.tmp_path("out/empty.csv")
        write_csv([], path)
        with open(path, newline="") as f:
            self.assertEqual(f.read(), ",".join(CSV_COLUMNS) + "\n")

    def test_records(self):
        path = self.tmp_path("rows.csv")
        value = 0.1 + 0.2
        write_csv([result_row(mean_rate=value, theory_rate=None)], path)
        header, record = self.read(path)
        self.assertEqual(tuple(header), CSV_COLUMNS)
        fields = dict(zip(header, record))
        self.assertEqual(float(fields["mean_rate_bpshz"]), value)
        self.assertEqual(fields["theory_rate_bpshz"], "")
        self.assertEqual(fields["sweep_value"], "1")
        self.assertEqual(fields["scheme"], SCHEME_ENV)
        self.assertEqual(fields["seed"], "1")


class TestRunExperiment(unittest.TestCase):
    def test_rows_and_order(self):
        spec = make_spec(schemes=(SCHEME_RANDOM_CONFIG, SCHEME_RANDOM, SCHEME_ENV), trials=2)
        rows = run_experiment(spec)
        self.assertEqual(len(rows), 6)
        self.assertEqual([x.scheme for x in rows[:3]], [SCHEME_ENV, SCHEME_RANDOM, SCHEME_RANDOM_CONFIG])
        self.assertEqual([x.sweep_value for x in rows], [1.0, 1.0, 1.0, 10.0, 10.0, 10.0])
        for row in rows:
            self.assertEqual(row.trials, 2)
            self.assertEqual(row.seed, 5)
            self.assertTrue(math.isfinite(row.mean_rate) and row.mean_rate >= 0)
            self.assertIsNone(row.theory_rate)

    def test_deterministic(self):
        spec = make_spec(schemes=(SCHEME_ENV, SCHEME_RANDOM, SCHEME_RANDOM_CONFIG, SCHEME_OPTIMAL), trials=3)
        self.assertEqual(run_experiment(spec), run_experiment(spec))

    def test_thread_count_does_not_matter(self):
        self.assertEqual(
            run_experiment(make_spec(trials=6, threads=1)), run_experiment(make_spec(trials=6, threads=3))
        )

    def test_seed_matters(self):
        first = run_experiment(make_spec(seed=1))[0]
        second = run_experiment(make_spec(seed=2))[0]
        self.assertNotEqual(first.mean_rate, second.mean_rate)

    def test_q_sweep_noiseless_is_monotone(self):
        spec = make_spec(
            scenario=desk_config(n=4, q=4),
            sweep_param="Q",
            sweep_values=(1, 2, 4),
            schemes=(SCHEME_ENV, SCHEME_RANDOM, SCHEME_RANDOM_CONFIG),
            trials=10,
            noise_on=False,
        )
        rows = run_experiment(spec)
        for scheme in (SCHEME_ENV, SCHEME_RANDOM):
            means = [x.mean_rate for x in rows if x.scheme == scheme]
            self.assertEqual(len(means), 3)
            for a, b in zip(means, means[1:]):
                self.assertGreaterEqual(b, a - 1e-6)
        fixed = [x.mean_rate for x in rows if x.scheme == SCHEME_RANDOM_CONFIG]
        self.assertEqual(len(set(fixed)), 1)

    def test_coherence_sweep(self):
        spec = make_spec(
            scenario=desk_config(n=4, q=4),
            sweep_param="T_c",
            sweep_values=(5, 100),
            schemes=(SCHEME_ENV, SCHEME_OPTIMAL),
            q_values=(1, 4),
            trials=3,
            noise_on=False,
        )
        rows = {(x.sweep_value, x.scheme): x for x in run_experiment(spec)}
        self.assertEqual(len(rows), 6)
        q1 = SCHEME_ENV + "/Q=1"
        q4 = SCHEME_ENV + "/Q=4"
        # K=2: tau = 2 for Q=1 and 8 for Q=4
        self.assertEqual(rows[(5, q4)].mean_rate, 0.0)
        self.assertAlmostEqual(rows[(100, q1)].mean_rate / rows[(5, q1)].mean_rate, 0.98 / 0.6)
        self.assertGreater(rows[(100, q4)].mean_rate, 0.0)
        self.assertEqual(rows[(5, SCHEME_OPTIMAL)].mean_rate, rows[(100, SCHEME_OPTIMAL)].mean_rate)

    def test_short_codebook_is_rejected(self):
        config = desk_config(n=4, q=4)
        spec = make_spec(
            scenario=config, sweep_values=(1.0,), codebooks={SCHEME_ENV: random_codebook(config.replace(Q=2), 1)}
        )
        with self.assertRaises(DimensionMismatch):
            run_experiment(spec)

    @pytest.mark.slow
    def test_scheme_ordering(self):
        spec = make_spec(
            scenario=desk_config(n=16, q=8),
            sweep_param="N",
            sweep_values=(16,),
            schemes=(SCHEME_ENV, SCHEME_RANDOM, SCHEME_OPTIMAL),
            trials=200,
            noise_on=False,
        )
        rows = {x.scheme: x for x in run_experiment(spec)}
        self.assertGreater(rows[SCHEME_OPTIMAL].mean_rate, rows[SCHEME_ENV].mean_rate)
        self.assertGreater(rows[SCHEME_ENV].mean_rate, rows[SCHEME_RANDOM].mean_rate)


class TestOptimalConfigBaseline(unittest.TestCase):
    def test_best_restart_is_kept(self):
        config = unit_config(users=(6, 8), m=3, b=1, n=4, ao_restarts=3)
        for seed in range(5):
            ch = random_channels(seed, n=4, m=3, k=2)
            stream = RngStream(seed, 4)
            rate = optimal_config_baseline(ch, config, stream)
            for restart in range(3):
                self.assertGreaterEqual(rate, run_alternating(ch, config, stream.derive(restart)).objective)
            _, best = exhaustive_phase_search(ch, config)
            self.assertLessEqual(rate, best + 1e-9)


class TestTheoryVerification(unittest.TestCase):
    def setUp(self) -> None:
        self.base = load_config("preset:theory_check")

    def test_invalid_arguments(self):
        grid = [TheoryGridPoint(N=4, F_r=1.0, Q=1)]
        with self.assertRaises(ConfigError):
            run_theory_verification("unknown", grid, self.base, trials=2, seed=1)
        with self.assertRaises(ConfigError):
            run_theory_verification(BOUND_PERFECT, grid, self.base, trials=0, seed=1)

    def test_line_of_sight_is_tight(self):
        grid = [TheoryGridPoint(N=4, F_r=1e6, Q=2), TheoryGridPoint(N=4, F_r=1e6, Q=1)]
        rows = run_theory_verification(BOUND_PERFECT, grid, self.base, trials=20, seed=3)
        self.assertEqual([x.sweep_value for x in rows], [1, 2])
        for row in rows:
            self.assertTrue(row.scheme.startswith(SCHEME_ENV + "[N=4,"))
            verdict = check_bound(row, tightness=0.98)
            self.assertTrue(verdict.passed, verdict)
            self.assertLessEqual(verdict.ratio, 1.0 + 1e-3)
            self.assertAlmostEqual(row.theory_rate, math.log2(1 + row.theory_power / self.base.sigma_k2))

    def test_estimated_csi_rows(self):
        grid = [TheoryGridPoint(N=4, F_r=1e6, Q=1, sigma_q2=1e-9)]
        rows = run_theory_verification(BOUND_ESTIMATED, grid, self.base, trials=5, seed=3)
        self.assertEqual(len(rows), 1)
        self.assertIn("sigma_q2=1e-09", rows[0].scheme)
        self.assertGreater(rows[0].theory_power, 0.0)

    @pytest.mark.slow
    def test_rayleigh_single_codeword(self):
        grid = [TheoryGridPoint(N=4, F_r=1e-6, Q=1)]
        row = run_theory_verification(BOUND_PERFECT, grid, self.base, trials=10000, seed=9)[0]
        self.assertAlmostEqual(row.mean_power / row.theory_power, 1.0, delta=0.05)

    @pytest.mark.slow
    def test_reduced_grid_within_bounds(self):
        sigma_q2 = {BOUND_PERFECT: 0.0, BOUND_ESTIMATED: self.base.theory_setting(b=THEORY_B).ls_error_variance}
        for bound in (BOUND_PERFECT, BOUND_ESTIMATED):
            for f_r_db in THEORY_F_R_DB:
                grid = theory_grid(16, f_r_db=(f_r_db,), q_values=(1, 4, 16, 64), sigma_q2=sigma_q2[bound])
                rows = run_theory_verification(bound, grid, self.base, trials=400, seed=21)
                self.assertEqual([x.sweep_value for x in rows], [1, 4, 16, 64])
                tightness = 0.90 if f_r_db == max(THEORY_F_R_DB) else None
                for row in rows:
                    with self.subTest(bound=bound, F_r_db=f_r_db, Q=row.sweep_value):
                        verdict = check_bound(row, tightness)
                        self.assertTrue(verdict.passed, verdict)


class TestDeskScaleTrends(unittest.TestCase):
    @staticmethod
    def rates(rows, scheme=SCHEME_ENV):
        return {x.sweep_value: x.mean_rate for x in rows if x.scheme == scheme}

    @pytest.mark.slow
    def test_rate_grows_with_elements_at_a_falling_pace(self):
        spec = make_spec(
            scenario=desk_config(n=16, q=4),
            sweep_param="N",
            sweep_values=(16, 32, 48),
            schemes=(SCHEME_ENV,),
            trials=200,
            noise_on=False,
        )
        rates = self.rates(run_experiment(spec))
        r16, r32, r48 = rates[16], rates[32], rates[48]
        self.assertGreater(r32, r16)
        self.assertGreater(r48, r32)
        self.assertLess((r48 - r32) - (r32 - r16), 0.0)

    @pytest.mark.slow
    def test_short_coherence_favours_short_training(self):
        spec = make_spec(
            scenario=desk_config(n=16, q=64),
            sweep_param="T_c",
            sweep_values=(50.0, 1e6),
            schemes=(SCHEME_ENV,),
            trials=50,
            noise_on=False,
            q_values=(1, 16, 64),
        )
        rows = run_experiment(spec)
        by_q = {q: self.rates(rows, "{}/Q={}".format(SCHEME_ENV, q)) for q in (1, 16, 64)}
        shortest = {q: x[50.0] for q, x in by_q.items()}
        longest = {q: x[1e6] for q, x in by_q.items()}
        self.assertEqual(max(shortest, key=shortest.get), 1, shortest)
        self.assertEqual(max(longest, key=longest.get), 64, longest)


class TestCheckBound(unittest.TestCase):
    def test_within_standard_errors(self):
        verdict = check_bound(result_row())
        self.assertTrue(verdict.within_bound)
        self.assertIsNone(verdict.tight)
        self.assertTrue(verdict.passed)
        self.assertAlmostEqual(verdict.ratio, 1.1)

    def test_violation(self):
        self.assertFalse(check_bound(result_row(mean_power=1.2)).passed)
        self.assertTrue(check_bound(result_row(mean_power=1.2), se_multiplier=5.0).passed)

    def test_tightness(self):
        verdict = check_bound(result_row(mean_power=0.5), tightness=0.9)
        self.assertTrue(verdict.within_bound)
        self.assertFalse(verdict.tight)
        self.assertFalse(verdict.passed)

    def test_missing_power(self):
        with self.assertRaises(ValueError):
            check_bound(result_row(theory_power=None))


class TestPairedConfidence(unittest.TestCase):
    def test_detects_shift(self):
        a = np.linspace(0, 1, 400)
        self.assertTrue(paired_confidence(a + 0.1, a))
        self.assertFalse(paired_confidence(a, a + 0.1))

    def test_needs_pairs(self):
        with self.assertRaises(ValueError):
            paired_confidence([1.0], [0.0])
