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

import argparse
import contextlib
import csv
import io
import json
import os
import unittest
from unittest import mock

from ris_lab import CLI
from ris_lab.__main__ import main
from ris_lab.codebook import SCHEME_ENV, load_codebook
from ris_lab.commands import SEED_ENV_VAR, parse_grid, resolve_schemes, resolve_seed
from ris_lab.exception import ConfigError, DimensionMismatch
from ris_lab.manifest import manifest_path
from ris_lab.modular import CliExtension, ExecutionManager
from ris_lab.serialize import file_digest64

from .helpers import TempDirTestCase


class CliTestCase(TempDirTestCase):
    def setUp(self) -> None:
        super().setUp()
        self.config_path = self.tmp_path("scenario.json")
        with open(self.config_path, "w") as f:
            json.dump({"extends": "preset:desk_default", "N_x": 2, "N_y": 2, "Q": 4}, f)

    def run_main(self, *argv: str) -> int:
        with contextlib.redirect_stdout(io.StringIO()) as out:
            code = main(list(argv))
        self.stdout = out.getvalue()
        return code

    def gen_codebook(self, name: str, *extra: str) -> str:
        out = self.tmp_path(name)
        code = self.run_main("gen-codebook", "--config", self.config_path, "--out", out, *extra)
        self.assertEqual(code, 0)
        return out


class TestGenCodebook(CliTestCase):
    def test_generates_codebook_and_manifest(self):
        out = self.gen_codebook("env.eacb.json", "--q", "4", "--seed", "7")
        cb = load_codebook(out)
        self.assertEqual((cb.Q, cb.N, cb.scheme, cb.seed), (4, 4, SCHEME_ENV, 7))
        self.assertIn(out, self.stdout)
        with open(manifest_path(out)) as f:
            manifest = json.load(f)
        self.assertEqual(manifest["command"], "gen-codebook")
        self.assertEqual(manifest["seed"], 7)
        self.assertEqual(manifest["outputs"], {"env.eacb.json": file_digest64(out)})
        self.assertEqual(manifest["config"]["N_x"], 2)

    def test_same_seed_same_bytes(self):
        a = self.gen_codebook("a.eacb.json", "--seed", "7", "--threads", "2")
        b = self.gen_codebook("b.eacb.json", "--seed", "7")
        self.assertEqual(file_digest64(a), file_digest64(b))

    def test_random_scheme(self):
        out = self.gen_codebook("random.eacb.json", "--seed", "1", "--scheme", "random", "--q", "3")
        cb = load_codebook(out)
        self.assertEqual((cb.Q, cb.scheme), (3, "random-codebook"))

    def test_invalid_q(self):
        out = self.tmp_path("cb.eacb.json")
        code = self.run_main("gen-codebook", "--config", self.config_path, "--q", "0", "--seed", "1", "--out", out)
        self.assertEqual(code, 2)
        self.assertFalse(os.path.exists(out))

    def test_seed_from_environment(self):
        with mock.patch.dict(os.environ, {SEED_ENV_VAR: "11"}):
            out = self.gen_codebook("env.eacb.json")
        self.assertEqual(load_codebook(out).seed, 11)

    def test_missing_seed(self):
        with mock.patch.dict(os.environ):
            os.environ.pop(SEED_ENV_VAR, None)
            code = self.run_main("gen-codebook", "--config", self.config_path, "--out", self.tmp_path("x.eacb.json"))
        self.assertEqual(code, 2)

    def test_unknown_preset(self):
        out = self.tmp_path("x.eacb.json")
        code = self.run_main("gen-codebook", "--config", "preset:nope", "--seed", "1", "--out", out)
        self.assertEqual(code, 2)


class TestSimulate(CliTestCase):
    def test_q_sweep_with_codebook(self):
        cb = self.gen_codebook("env.eacb.json", "--seed", "7")
        out = self.tmp_path("results/q.csv")
        argv = "--scheme env --scheme random --sweep Q --values 1,2 --trials 2 --noise off --seed 3".split()
        code = self.run_main("simulate", "--config", self.config_path, "--codebook", cb, "--out", out, *argv)
        self.assertEqual(code, 0)
        with open(out, newline="") as f:
            rows = list(csv.DictReader(f))
        expected = [("1", SCHEME_ENV), ("1", "random-codebook"), ("2", SCHEME_ENV), ("2", "random-codebook")]
        self.assertEqual([(r["sweep_value"], r["scheme"]) for r in rows], expected)
        self.assertTrue(os.path.isfile(manifest_path(out)))

    def test_dimension_mismatch(self):
        cb = self.gen_codebook("env.eacb.json", "--seed", "7")
        argv = "--config preset:desk_default --sweep Q --values 1 --trials 1 --seed 1".split()
        code = self.run_main("simulate", "--codebook", cb, "--out", self.tmp_path("q.csv"), *argv)
        self.assertEqual(code, 4)

    def test_power_sweep_rejects_stored_allocation(self):
        cb = self.gen_codebook("env.eacb.json", "--seed", "7")
        out = self.tmp_path("p.csv")
        argv = ["--config", self.config_path, "--codebook", cb, "--out", out, "--sweep", "P_d"]
        argv += ["--trials", "1", "--seed", "1"]
        self.assertEqual(self.run_main("simulate", *argv, "--values", "30dBm,40dBm"), 4)
        self.assertFalse(os.path.exists(out))
        self.assertEqual(self.run_main("simulate", *argv, "--values", "40dBm"), 0)

    def test_values_are_validated(self):
        argv = "--sweep Q --values 1,x --seed 1".split()
        code = self.run_main("simulate", "--config", self.config_path, "--out", self.tmp_path("q.csv"), *argv)
        self.assertEqual(code, 2)

    def test_missing_sweep(self):
        code = self.run_main("simulate", "--config", self.config_path, "--seed", "1", "--out", self.tmp_path("q.csv"))
        self.assertEqual(code, 2)

    def test_argparse_errors(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(["simulate", "--config", self.config_path])
            self.assertEqual(ctx.exception.code, 2)
            with self.assertRaises(SystemExit) as ctx:
                main(["frobnicate"])
            self.assertEqual(ctx.exception.code, 2)
            self.assertEqual(main([]), 2)


class TestVerify(CliTestCase):
    GRID = json.dumps([{"N": 4, "F_r": 1e6, "Q": 1}])

    def verify(self, *extra: str, bound=("--prop", "1"), out: str = "verify.csv") -> int:
        return self.run_main("verify", *bound, "--trials", "10", "--seed", "3", "--out", self.tmp_path(out), *extra)

    def test_pass(self):
        self.assertEqual(self.verify("--grid", self.GRID, "--tightness", "0.98"), 0)
        self.assertIn("PASS: all 1 grid points are within the bound", self.stdout)
        self.assertTrue(os.path.isfile(manifest_path(self.tmp_path("verify.csv"))))

    def test_acceptance_violation(self):
        self.assertEqual(self.verify("--grid", self.GRID, "--tightness", "1.5"), 5)
        self.assertIn("FAIL: 1 of 1 grid points violate the bound", self.stdout)

    def test_grid_from_file(self):
        path = self.tmp_path("grid.json")
        with open(path, "w") as f:
            json.dump({"N": 4, "F_r_db": 60, "Q": 2}, f)
        self.assertEqual(self.verify("--grid", path), 0)

    def test_malformed_grid(self):
        self.assertEqual(self.verify("--grid", '[{"N": 4}]'), 2)
        self.assertEqual(self.verify("--grid", "not json"), 2)

    def test_bound_by_name(self):
        self.assertEqual(self.verify("--grid", self.GRID), 0)
        self.assertEqual(self.verify("--grid", self.GRID, bound=("--bound", "perfect"), out="named.csv"), 0)
        self.assertEqual(file_digest64(self.tmp_path("verify.csv")), file_digest64(self.tmp_path("named.csv")))
        grid = json.dumps([{"N": 4, "F_r": 1e6, "Q": 1, "sigma_q2": 0.5}])
        code = self.verify("--grid", grid, bound=("--prop", "2"), out="p2.csv")
        self.assertEqual(self.verify("--grid", grid, bound=("--bound", "estimated"), out="est.csv"), code)
        self.assertEqual(file_digest64(self.tmp_path("p2.csv")), file_digest64(self.tmp_path("est.csv")))

    def test_bound_flags(self):
        with contextlib.redirect_stderr(io.StringIO()):
            for bound in [("--prop", "3"), ("--prop", "1", "--bound", "perfect"), ()]:
                with self.assertRaises(SystemExit) as ctx:
                    self.verify("--grid", self.GRID, bound=bound)
                self.assertEqual(ctx.exception.code, 2)


class TestArgumentHelpers(unittest.TestCase):
    def test_parse_grid(self):
        grid = parse_grid('{"N": 16, "F_r_db": 10, "Q": 4, "sigma_q2": 0.5}')
        self.assertEqual(len(grid), 1)
        self.assertAlmostEqual(grid[0].F_r, 10.0)
        self.assertEqual((grid[0].N, grid[0].Q, grid[0].sigma_q2), (16, 4, 0.5))
        with self.assertRaises(ConfigError):
            parse_grid('[{"N": 16, "F_r": 1, "F_r_db": 0, "Q": 4}]')
        with self.assertRaises(ConfigError):
            parse_grid("[]")

    def test_resolve_schemes(self):
        self.assertEqual(resolve_schemes(["random", "ENV", "env"]), ("random-codebook", SCHEME_ENV))
        self.assertEqual(resolve_schemes(None), ())
        with self.assertRaises(ConfigError) as ctx:
            resolve_schemes(["best"])
        self.assertEqual(ctx.exception.key, "scheme")

    def test_resolve_seed(self):
        self.assertEqual(resolve_seed("42"), 42)
        with self.assertRaises(ConfigError):
            resolve_seed("-1")


class _Failing(CliExtension):
    error: Exception = RuntimeError("boom")

    def handle(self, args: argparse.Namespace):
        raise self.error


class _Mismatch(_Failing):
    error = DimensionMismatch("N", 4, 9)


class _Invalid(_Failing):
    error = ConfigError("Bad value", key="trials", fix_hint="Use a positive number")


class _Succeeding(CliExtension):
    def handle(self, args: argparse.Namespace):
        pass


class TestExecutionManager(unittest.TestCase):
    def setUp(self) -> None:
        CLI.setup()

    def run_ext(self, ext_cls) -> int:
        with contextlib.redirect_stderr(io.StringIO()):
            return ExecutionManager().run(argparse.Namespace(cmd="test", ext_cls=ext_cls))

    def test_exit_codes(self):
        self.assertEqual(self.run_ext(_Succeeding), 0)
        self.assertEqual(self.run_ext(_Mismatch), 4)
        self.assertEqual(self.run_ext(_Failing), 1)

    def test_failures_are_reported_by_the_manager(self):
        self.assertFalse(hasattr(CLI, "fail"))
        with self.assertLogs(CLI.CLI_LOGGER, level="INFO") as logs:
            self.assertEqual(self.run_ext(_Invalid), 2)
        self.assertIn("Hint: Use a positive number", "\n".join(logs.output))
