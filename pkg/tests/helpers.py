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

import os
import shutil
import tempfile
import unittest

import numpy as np

from ris_lab.channel import ChannelRealization
from ris_lab.config import ScenarioConfig, load_config
from ris_lab.numerics import RngStream


def desk_config(n: int = 4, q: int = 4, **overrides) -> ScenarioConfig:
    """Desk-scale scenario shrunk to n RIS elements."""
    return load_config("preset:desk_default", Q=q, **overrides).with_elements(n)


def unit_config(users=(8,), m: int = 1, b: int = 1, n: int = 4, **overrides) -> ScenarioConfig:
    """Scenario with unit-scale powers, meant for channels drawn by random_channels."""
    params = dict(M=m, active_users=list(users), b=b, P_d=1.0, sigma_k2=0.1, Q=1)
    params.update(overrides)
    return load_config("preset:desk_default", **params).with_elements(n)


def random_channels(seed: int, n: int, m: int, k: int, direct: bool = True) -> ChannelRealization:
    """Unit-variance i.i.d. Rayleigh links."""
    root = RngStream(seed)
    h_d = root.derive(2).cscg((k, m)) if direct else np.zeros((k, m), dtype=complex)
    return ChannelRealization(G=root.derive(0).cscg((n, m)), h_r=root.derive(1).cscg((k, n)), h_d=h_d)


class TempDirTestCase(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp_dir = tempfile.mkdtemp(prefix="ris-lab-test-")

    def tearDown(self) -> None:
        shutil.rmtree(self.tmp_dir, ignore_errors=True)

    def tmp_path(self, name: str) -> str:
        return os.path.join(self.tmp_dir, name)
