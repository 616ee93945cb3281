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

import json
import math
import os
import unittest

from ris_lab.config import (
    DefaultConfigLoaderRegistry,
    PresetConfigLoader,
    ScenarioConfig,
    load_config,
    normalize_units,
    parse_config,
)
from ris_lab.exception import ConfigError
from ris_lab.utils import most_square_grid

from .helpers import TempDirTestCase


class TestPresets(unittest.TestCase):
    def test_paper_default(self):
        config = load_config("preset:paper_default")
        self.assertEqual((config.M, config.N, config.K, config.b, config.Q), (8, 100, 2, 1, 100))
        self.assertEqual(config.active_users, (6, 8))
        self.assertAlmostEqual(config.P_d, 10.0)
        self.assertAlmostEqual(config.C0, 0.01)
        self.assertAlmostEqual(config.sigma_k2, 1e-12, delta=1e-24)
        self.assertAlmostEqual(config.F_r, 10 ** 0.3)
        self.assertFalse(config.direct_link_blocked)

    def test_extends(self):
        config = load_config("preset:desk_default")
        self.assertEqual((config.N_x, config.N_y, config.Q, config.M), (8, 8, 50, 8))

    def test_theory_preset(self):
        config = load_config("preset:theory_check")
        self.assertEqual((config.M, config.K, config.b), (1, 1, 6))
        self.assertTrue(config.direct_link_blocked and config.bs_ris_los_only)

    def test_every_preset_loads(self):
        presets = PresetConfigLoader.available_presets()
        self.assertIn("paper_default", presets)
        for name in presets:
            self.assertIsInstance(load_config("preset:" + name), ScenarioConfig)

    def test_unknown_preset(self):
        with self.assertRaises(ConfigError) as ctx:
            load_config("preset:nope")
        self.assertIn("paper_default", ctx.exception.fix_hint)


class TestOverrides(unittest.TestCase):
    def setUp(self) -> None:
        self.config = load_config("preset:paper_default")

    def test_replace_units(self):
        self.assertAlmostEqual(self.config.replace(P_d_dbm=30).P_d, 1.0)
        self.assertAlmostEqual(self.config.replace(F_r_db=10).F_r, 10.0)
        self.assertAlmostEqual(self.config.replace(P_d="20 dBm").P_d, 0.1)
        self.assertAlmostEqual(self.config.replace(d_BR="0.2 km").d_BR, 200.0)

    def test_replace_keeps_original(self):
        changed = self.config.replace(Q=4)
        self.assertEqual(changed.Q, 4)
        self.assertEqual(self.config.Q, 100)

    def test_both_units(self):
        with self.assertRaises(ConfigError) as ctx:
            normalize_units({"P_d": 1.0, "P_d_dbm": 30})
        self.assertEqual(ctx.exception.key, "P_d_dbm")

    def test_invalid_q(self):
        with self.assertRaises(ConfigError) as ctx:
            self.config.replace(Q=0)
        self.assertEqual(ctx.exception.key, "Q")
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as ctx:
            self.config.replace(antennas=4)
        self.assertEqual(ctx.exception.key, "antennas")

    def test_more_users_than_antennas(self):
        with self.assertRaises(ConfigError) as ctx:
            self.config.replace(M=1)
        self.assertEqual(ctx.exception.key, "active_users")

    def test_user_index_range(self):
        with self.assertRaises(ConfigError):
            self.config.replace(active_users=[0, 9])

    def test_users_are_sorted(self):
        self.assertEqual(self.config.replace(active_users=[8, 6]).active_users, (6, 8))

    def test_with_elements(self):
        self.assertEqual((self.config.with_elements(36).N_x, self.config.with_elements(36).N_y), (6, 6))
        self.assertEqual(self.config.with_elements(12).N, 12)
        self.assertEqual(most_square_grid(12), (4, 3))
        self.assertEqual(most_square_grid(7), (7, 1))

    def test_theory_setting(self):
        config = self.config.theory_setting()
        self.assertEqual((config.M, config.active_users, config.b), (1, (8,), 6))
        self.assertTrue(config.direct_link_blocked)
        self.assertTrue(config.bs_ris_los_only)

    def test_ls_error_variance(self):
        self.assertAlmostEqual(
            self.config.ls_error_variance, self.config.sigma_z2 / (2 * self.config.P_ul), delta=1e-30
        )

    def test_fingerprint(self):
        fp = self.config.fingerprint()
        self.assertEqual(len(fp), 16)
        self.assertEqual(fp, load_config("preset:paper_default").fingerprint())
        self.assertNotEqual(fp, self.config.replace(Q=99).fingerprint())

    def test_round_trip(self):
        self.assertEqual(parse_config(self.config.to_dict()), self.config)


class TestFileLoader(TempDirTestCase):
    def write(self, name: str, doc) -> str:
        path = self.tmp_path(name)
        with open(path, "w") as f:
            json.dump(doc, f)
        return path

    def test_plain_and_prefixed(self):
        path = self.write("scenario.json", {"extends": "preset:desk_default", "P_d_dbm": 30, "Q": 8})
        for locator in (path, "file:" + path):
            config = load_config(locator)
            self.assertAlmostEqual(config.P_d, 1.0)
            self.assertEqual((config.Q, config.N), (8, 64))

    def test_override_wins(self):
        path = self.write("scenario.json", {"extends": "preset:desk_default", "Q": 8})
        self.assertEqual(load_config(path, Q=3).Q, 3)

    def test_child_units_replace_parent(self):
        path = self.write("scenario.json", {"extends": "preset:paper_default", "F_r": 2.0})
        self.assertAlmostEqual(load_config(path).F_r, 2.0)

    def test_cycle(self):
        a = self.tmp_path("a.json")
        b = self.write("b.json", {"extends": a})
        self.write("a.json", {"extends": b})
        with self.assertRaises(ConfigError) as ctx:
            load_config(a)
        self.assertIn("cycle", str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            load_config(self.tmp_path("missing.json"))

    def test_not_json(self):
        path = self.tmp_path("broken.json")
        with open(path, "w") as f:
            f.write("{ nope")
        with self.assertRaises(ConfigError):
            load_config(path)

    def test_missing_field(self):
        path = self.write("partial.json", {"M": 4})
        with self.assertRaises(ConfigError):
            load_config(path)

    def test_bare_preset_file_name(self):
        cwd = os.getcwd()
        os.chdir(self.tmp_dir)
        try:
            bundled = load_config("paper_default.json")
            self.assertEqual(bundled.fingerprint(), load_config("preset:paper_default").fingerprint())
            self.assertEqual(load_config("file:desk_default.json", Q=3).Q, 3)
            with self.assertRaises(ConfigError):
                load_config("missing.json")
            with self.assertRaises(ConfigError):
                load_config(os.path.join("nested", "paper_default.json"))
            self.write("paper_default.json", {"extends": "preset:paper_default", "Q": 7})
            self.assertEqual(load_config("paper_default.json").Q, 7)
        finally:
            os.chdir(cwd)

    def test_registry_fallback(self):
        self.assertIsNotNone(DefaultConfigLoaderRegistry.get_for_locator("whatever.json"))

    def test_sigma_z2_may_be_zero(self):
        path = self.write("noiseless.json", {"extends": "preset:paper_default", "sigma_z2": 0})
        self.assertEqual(load_config(path).sigma_z2, 0.0)
        self.assertTrue(math.isfinite(load_config(path).ls_error_variance))
