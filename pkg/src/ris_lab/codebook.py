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

"""
Offline codebook synthesis.

Every codeword is optimized on its own virtual channel: a fading draw that shares the statistical CSI
(LoS components, path losses, Rician factors) of the real channel. Phases and transmit powers are optimized
alternately, water-filling for fixed phases then a per-element exhaustive search over the discrete phase set
for fixed powers, until the sum rate stops improving.
"""
import dataclasses
import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ris_lab_validation import rlv
from ris_lab_validation.domain import format_invalid

from .channel import (
    ChannelRealization,
    StatisticalCsi,
    cascaded_channels,
    composite_matrix,
    phase_coefficients,
    sample_channel,
)
from .config import ScenarioConfig
from .exception import CodewordGenerationError, DimensionMismatch, FormatError, SingularGram
from .numerics import DEFAULT_CONDITION_LIMIT, RngStream, batched_inverse_gram_diagonal
from .precoding import NoisePower, PowerAllocation, water_fill, zf_diagonal
from .serialize import pretty_dumps
from .stats import ExecutionTimer
from .utils import ensure_parent_dir

_LOGGER = logging.getLogger("ris.codebook")

SCHEME_ENV = "environment-aware"
SCHEME_RANDOM = "random-codebook"
CODEBOOK_SCHEMES = (SCHEME_ENV, SCHEME_RANDOM)

FORMAT_MAGIC = "ris-lab-codebook"
FORMAT_VERSION = 1
CODEBOOK_EXT = ".eacb.json"

EXHAUSTIVE_LIMIT = 1 << 12

# relative gain a phase change must bring to be accepted
_IMPROVEMENT_TOL = 1e-12
# stored allocations must spend the scenario budget P_d to this relative precision
_POWER_BUDGET_RTOL = 1e-9

LINK_VIRTUAL_CHANNEL = 0
LINK_AO_INIT = 1


@dataclasses.dataclass(frozen=True, eq=False)
class Codeword:
    """RIS phase indices and, for optimized codewords, the transmit powers found offline."""

    phase_indices: np.ndarray
    power_allocation: Optional[np.ndarray] = None

    @property
    def has_power_allocation(self) -> bool:
        return self.power_allocation is not None and self.power_allocation.size > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "phases": [int(x) for x in self.phase_indices],
            "power": [float(x) for x in self.power_allocation] if self.has_power_allocation else None,
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Codeword):
            return NotImplemented
        if self.has_power_allocation != other.has_power_allocation:
            return False
        if not np.array_equal(self.phase_indices, other.phase_indices):
            return False
        return not self.has_power_allocation or np.array_equal(self.power_allocation, other.power_allocation)

    def __repr__(self) -> str:
        return "Codeword<phases={}, power={}>".format(self.phase_indices.tolist(), self.power_allocation)


@dataclasses.dataclass(frozen=True)
class Codebook:
    entries: Tuple[Codeword, ...]
    N: int
    K: int
    b: int
    scheme: str
    seed: int
    config_fingerprint: str

    @property
    def Q(self) -> int:
        return len(self.entries)

    def prefix(self, q: int) -> "Codebook":
        """The first q codewords; equal to the codebook built with Q=q and the same seed."""
        if not 1 <= q <= self.Q:
            raise ValueError("Prefix length must be in [1, {}], got {}".format(self.Q, q))
        return dataclasses.replace(self, entries=self.entries[:q])

    def check_compatible(self, config: ScenarioConfig):
        for field, expected, actual in (("N", config.N, self.N), ("K", config.K, self.K), ("b", config.b, self.b)):
            if expected != actual:
                raise DimensionMismatch(field, expected, actual)
        for entry in self.entries:
            if entry.has_power_allocation:
                total = float(np.sum(entry.power_allocation))
                if abs(total - config.P_d) > _POWER_BUDGET_RTOL * config.P_d:
                    raise DimensionMismatch("P_d", config.P_d, total)
        if self.config_fingerprint != config.fingerprint():
            _LOGGER.warning(
                "Codebook was generated for config {}, the current config is {}".format(
                    self.config_fingerprint, config.fingerprint()
                )
            )

    def header(self) -> Dict[str, Any]:
        return {
            "format_version": FORMAT_VERSION,
            "N": self.N,
            "K": self.K,
            "b": self.b,
            "Q": self.Q,
            "scheme": self.scheme,
            "seed": self.seed,
            "config_fingerprint": self.config_fingerprint,
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": FORMAT_MAGIC,
            "header": self.header(),
            "entries": [x.to_dict() for x in self.entries],
        }


# ================== Objective =================


def allocation_objective(transmit: np.ndarray, u: np.ndarray, sigma2: NoisePower) -> np.ndarray:
    """Sum over users of log2(1 + p_bar_k / (u_k sigma_k^2)); broadcasts over leading axes of u."""
    return np.sum(np.log2(1.0 + transmit / (u * sigma2)), axis=-1)


def _water_filled_objective(u: np.ndarray, config: ScenarioConfig) -> float:
    alloc = water_fill(u, config.sigma_k2, config.P_d)
    return float(allocation_objective(alloc.transmit, u, config.sigma_k2))


def codebook_objective(channels: ChannelRealization, codeword: Codeword, config: ScenarioConfig) -> float:
    """Perfect-CSI ZF sum rate of a codeword; water-fills online when it carries no stored powers."""
    h = composite_matrix(channels, codeword.phase_indices, config.b)
    u = zf_diagonal(h, config.gram_condition_limit)
    if codeword.has_power_allocation:
        return float(allocation_objective(codeword.power_allocation, u, config.sigma_k2))
    return _water_filled_objective(u, config)


# ================== Phase refinement =================


@dataclasses.dataclass
class _Refinement:
    phases: np.ndarray
    objective: float
    trace: List[float]
    stable: bool


def _rows(cascaded: np.ndarray, direct_rows: np.ndarray, phi: np.ndarray) -> np.ndarray:
    return np.einsum("n,knm->km", phi, cascaded) + direct_rows


def _refine(
    cascaded: np.ndarray,
    direct_rows: np.ndarray,
    transmit: np.ndarray,
    phases_init: np.ndarray,
    b: int,
    sweeps: int,
    sigma2: NoisePower,
    condition_limit: float,
) -> _Refinement:
    levels = phase_coefficients(np.arange(1 << b), b)
    phases = np.array(phases_init, dtype=np.int64, copy=True)
    phi = levels[phases]
    rows = _rows(cascaded, direct_rows, phi)
    u, valid = batched_inverse_gram_diagonal(rows[None], condition_limit)
    objective = float(allocation_objective(transmit, u[0], sigma2)) if valid[0] else -np.inf
    trace: List[float] = []
    stable = False
    for _ in range(sweeps):
        changed = False
        for n in range(phases.size):
            # rows of every candidate phase of element n, shape (B, K, M)
            candidates = rows[None] + (levels - phi[n])[:, None, None] * cascaded[None, :, n, :]
            u_c, valid_c = batched_inverse_gram_diagonal(candidates, condition_limit)
            valid_c &= np.all(u_c > 0, axis=-1)
            safe_u = np.where(valid_c[:, None], u_c, 1.0)
            values = np.where(valid_c, allocation_objective(transmit, safe_u, sigma2), -np.inf)
            best = int(np.argmax(values))
            threshold = objective + _IMPROVEMENT_TOL * max(1.0, abs(objective)) if np.isfinite(objective) else -np.inf
            if best == phases[n] or not values[best] > threshold:
                continue
            phases[n] = best
            phi[n] = levels[best]
            rows = _rows(cascaded, direct_rows, phi)
            objective = float(values[best])
            trace.append(objective)
            changed = True
        if not changed:
            stable = True
            break
    if not np.isfinite(objective):
        raise SingularGram(np.inf, condition_limit)
    return _Refinement(phases=phases, objective=objective, trace=trace, stable=stable)


def refine_phases(
    channels: ChannelRealization,
    alloc: Union[PowerAllocation, np.ndarray],
    phases_init: np.ndarray,
    b: int,
    sweeps: int,
    sigma2: NoisePower,
    condition_limit: float = DEFAULT_CONDITION_LIMIT,
) -> Tuple[np.ndarray, float]:
    """
    Successive refinement of the RIS phases for fixed transmit powers.

    Elements are visited in order and each one takes the phase maximizing the sum rate while the others stay
    fixed. Ties keep the current phase, otherwise the lowest index wins. Sweeps repeat until one changes nothing
    or ``sweeps`` is exhausted. Phase values making the Gram matrix singular are skipped.

    :return: (phase indices, objective)
    """
    transmit = np.asarray(alloc.transmit if isinstance(alloc, PowerAllocation) else alloc, dtype=float)
    res = _refine(
        cascaded_channels(channels),
        np.conj(channels.h_d),
        transmit,
        np.asarray(phases_init),
        b,
        sweeps,
        sigma2,
        condition_limit,
    )
    return res.phases, res.objective


# ================== Alternating optimization =================


@dataclasses.dataclass(frozen=True, eq=False)
class AlternatingResult:
    codeword: Codeword
    objective: float
    trace: Tuple[float, ...]
    rounds: int
    converged: bool
    refinement_stable: bool
    refinement_power: np.ndarray
    attempts: int


def _alternate(
    channels: ChannelRealization, config: ScenarioConfig, phases: np.ndarray, attempt: int
) -> AlternatingResult:
    cascaded = cascaded_channels(channels)
    direct_rows = np.conj(channels.h_d)
    u = zf_diagonal(composite_matrix(channels, phases, config.b), config.gram_condition_limit)
    trace: List[float] = []
    previous = None
    converged = False
    refinement = None
    alloc = None
    rounds = 0
    for rounds in range(1, config.ao_max_outer + 1):
        alloc = water_fill(u, config.sigma_k2, config.P_d)
        trace.append(float(allocation_objective(alloc.transmit, u, config.sigma_k2)))
        refinement = _refine(
            cascaded,
            direct_rows,
            alloc.transmit,
            phases,
            config.b,
            config.ao_max_sweeps,
            config.sigma_k2,
            config.gram_condition_limit,
        )
        trace.extend(refinement.trace)
        phases = refinement.phases
        u = zf_diagonal(composite_matrix(channels, phases, config.b), config.gram_condition_limit)
        _LOGGER.debug("AO round {}: objective {:.6f} bps/Hz".format(rounds, refinement.objective))
        if previous is not None and refinement.objective - previous <= config.ao_epsilon * abs(previous):
            converged = True
            break
        previous = refinement.objective
    assert refinement is not None and alloc is not None
    final = water_fill(u, config.sigma_k2, config.P_d)
    objective = float(allocation_objective(final.transmit, u, config.sigma_k2))
    trace.append(objective)
    return AlternatingResult(
        codeword=Codeword(phase_indices=phases, power_allocation=final.transmit),
        objective=objective,
        trace=tuple(trace),
        rounds=rounds,
        converged=converged,
        refinement_stable=refinement.stable,
        refinement_power=alloc.transmit,
        attempts=attempt + 1,
    )


def run_alternating(channels: ChannelRealization, config: ScenarioConfig, stream: RngStream) -> AlternatingResult:
    """
    Alternating optimization from a uniformly random phase vector.
    A degenerate start is retried with a fresh random vector at most ``ao_max_retries`` times.
    """
    if channels.K > channels.M:
        raise ValueError("Zero-forcing needs K <= M, got M={} K={}".format(channels.M, channels.K))
    error: Optional[SingularGram] = None
    for attempt in range(config.ao_max_retries + 1):
        phases = stream.derive(attempt).integers(0, config.B, channels.N)
        try:
            return _alternate(channels, config, phases, attempt)
        except SingularGram as e:
            _LOGGER.warning("AO attempt {} hit a singular Gram matrix, retrying: {}".format(attempt + 1, e))
            error = e
    assert error is not None
    raise error


def alternating_optimize(channels: ChannelRealization, config: ScenarioConfig, stream: RngStream) -> Codeword:
    return run_alternating(channels, config, stream).codeword


def best_of_restarts(
    channels: ChannelRealization, config: ScenarioConfig, stream: RngStream, restarts: int
) -> AlternatingResult:
    best: Optional[AlternatingResult] = None
    for restart in range(restarts):
        res = run_alternating(channels, config, stream.derive(restart))
        if best is None or res.objective > best.objective:
            best = res
    assert best is not None
    return best


def exhaustive_phase_search(channels: ChannelRealization, config: ScenarioConfig) -> Tuple[np.ndarray, float]:
    """Global optimum of the water-filled ZF sum rate over all B^N phase vectors (tiny N only)."""
    total = config.B ** channels.N
    if total > EXHAUSTIVE_LIMIT:
        raise ValueError("Exhaustive search over {} configurations is not supported".format(total))
    combos = np.array(list(itertools.product(range(config.B), repeat=channels.N)), dtype=np.int64)
    phi = phase_coefficients(combos, config.b)
    rows = np.einsum("cn,knm->ckm", phi, cascaded_channels(channels)) + np.conj(channels.h_d)[None]
    u, valid = batched_inverse_gram_diagonal(rows, config.gram_condition_limit)
    best_idx = -1
    best_value = -np.inf
    for idx in np.flatnonzero(valid):
        value = _water_filled_objective(u[idx], config)
        if value > best_value:
            best_idx, best_value = int(idx), value
    if best_idx < 0:
        raise SingularGram(np.inf, config.gram_condition_limit)
    return combos[best_idx], best_value


# ================== Codebook construction =================


def gen_virtual_channel(csi: StatisticalCsi, stream: RngStream) -> ChannelRealization:
    """Offline channel draw: LoS parts fixed, NLoS parts redrawn for every link."""
    return sample_channel(csi, stream)


def _map_ordered(fn, items: Sequence[int], threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def build_codebook(csi: StatisticalCsi, config: ScenarioConfig, seed: int, threads: int = 1) -> Codebook:
    """
    Q environment-aware codewords. Codeword q only depends on (seed, q), so results do not depend on the
    number of threads and the first q codewords equal the codebook built with Q=q.
    """
    root = RngStream(seed)
    timer = ExecutionTimer()

    def generate(q: int) -> Codeword:
        stream = root.derive(q)
        channels = gen_virtual_channel(csi, stream.derive(LINK_VIRTUAL_CHANNEL))
        try:
            res = run_alternating(channels, config, stream.derive(LINK_AO_INIT))
        except SingularGram as e:
            raise CodewordGenerationError(q, str(e)) from e
        _LOGGER.debug("Codeword {}: {:.4f} bps/Hz after {} rounds".format(q, res.objective, res.rounds))
        return res.codeword

    _LOGGER.info(
        "Generating {} environment-aware codewords (N={}, K={}, b={})".format(config.Q, config.N, config.K, config.b)
    )
    entries = _map_ordered(generate, range(1, config.Q + 1), threads)
    timer.stop()
    _LOGGER.info("Codebook ready in {}".format(timer.format_elapsed()))
    return Codebook(
        entries=tuple(entries),
        N=config.N,
        K=config.K,
        b=config.b,
        scheme=SCHEME_ENV,
        seed=seed,
        config_fingerprint=config.fingerprint(),
    )


def random_codebook(config: ScenarioConfig, seed: int) -> Codebook:
    """Q codewords with i.i.d. uniform phase indices and no stored powers."""
    root = RngStream(seed)
    entries = tuple(
        Codeword(phase_indices=root.derive(q).integers(0, config.B, config.N)) for q in range(1, config.Q + 1)
    )
    return Codebook(
        entries=entries,
        N=config.N,
        K=config.K,
        b=config.b,
        scheme=SCHEME_RANDOM,
        seed=seed,
        config_fingerprint=config.fingerprint(),
    )


def generate_codebook(
    scheme: str, csi: StatisticalCsi, config: ScenarioConfig, seed: int, threads: int = 1
) -> Codebook:
    if scheme == SCHEME_ENV:
        return build_codebook(csi, config, seed, threads)
    if scheme == SCHEME_RANDOM:
        return random_codebook(config, seed)
    raise ValueError("Unknown codebook scheme {}".format(scheme))


# ================== Codebook file =================

_HEADER_SCHEMA = rlv.Schema(
    {
        rlv.Required("format_version"): rlv.int_,
        rlv.Required("N"): rlv.positive_int,
        rlv.Required("K"): rlv.positive_int,
        rlv.Required("b"): rlv.All(rlv.int_, rlv.Range(min=1, max=8)),
        rlv.Required("Q"): rlv.positive_int,
        rlv.Required("scheme"): rlv.one_of(*CODEBOOK_SCHEMES),
        rlv.Required("seed"): rlv.int_,
        rlv.Required("config_fingerprint"): rlv.string,
    }
)

_ENTRY_SCHEMA = rlv.Schema(
    {
        rlv.Required("phases"): [rlv.int_],
        rlv.Required("power"): rlv.Any(None, [rlv.non_negative_float]),
    }
)


def save_codebook(cb: Codebook, path: str):
    ensure_parent_dir(path)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(pretty_dumps(cb.to_dict()))
    _LOGGER.info("Codebook with {} entries written to {}".format(cb.Q, path))


def _parse_header(doc: Any, path: str) -> Dict[str, Any]:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_MAGIC:
        raise FormatError("{} is not a codebook file".format(path))
    header = doc.get("header")
    if isinstance(header, dict) and header.get("format_version") != FORMAT_VERSION:
        raise FormatError(
            "Unsupported codebook format version {} in {}".format(header.get("format_version"), path),
            fix_hint="Regenerate the codebook with this version of the tool",
        )
    try:
        return _HEADER_SCHEMA(header)
    except rlv.Invalid as e:
        raise FormatError("Invalid codebook header in {}: {}".format(path, format_invalid(e))) from e


def _parse_entry(raw: Any, idx: int, header: Dict[str, Any], path: str) -> Codeword:
    try:
        entry = _ENTRY_SCHEMA(raw)
    except rlv.Invalid as e:
        raise FormatError("Invalid entry {} in {}: {}".format(idx + 1, path, format_invalid(e))) from e
    phases = np.asarray(entry["phases"], dtype=np.int64)
    if phases.size != header["N"]:
        raise FormatError("Entry {} has {} phases, header says N={}".format(idx + 1, phases.size, header["N"]))
    if phases.size and (phases.min() < 0 or phases.max() >= (1 << header["b"])):
        raise FormatError("Entry {} has phase indices outside [0, {})".format(idx + 1, 1 << header["b"]))
    power = entry["power"]
    if power is not None:
        if len(power) != header["K"]:
            raise FormatError("Entry {} has {} powers, header says K={}".format(idx + 1, len(power), header["K"]))
        power = np.asarray(power, dtype=float)
    return Codeword(phase_indices=phases, power_allocation=power)


def load_codebook(path: str, expected: Optional[ScenarioConfig] = None) -> Codebook:
    """
    Reads a codebook file. FormatError for anything that isn't a valid codebook,
    DimensionMismatch when ``expected`` is given and N, K or b differ.
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError as e:
        raise FormatError("Codebook file {} not found".format(path)) from e
    except (OSError, ValueError) as e:
        raise FormatError("Unable to parse codebook file {}: {}".format(path, e)) from e
    header = _parse_header(doc, path)
    raw_entries = doc.get("entries")
    if not isinstance(raw_entries, list) or len(raw_entries) != header["Q"]:
        raise FormatError("Codebook {} must contain exactly Q={} entries".format(path, header["Q"]))
    cb = Codebook(
        entries=tuple(_parse_entry(x, i, header, path) for i, x in enumerate(raw_entries)),
        N=header["N"],
        K=header["K"],
        b=header["b"],
        scheme=header["scheme"],
        seed=header["seed"],
        config_fingerprint=header["config_fingerprint"],
    )
    if expected is not None:
        cb.check_compatible(expected)
    return cb
