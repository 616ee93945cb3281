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
Monte Carlo harness: scheme comparisons over a swept parameter and simulation-vs-closed-form verification.

Randomness is addressed, never shared: the codebook of a scheme, the channel of a trial and the pilot noise of a
trial each read a stream derived from the master seed and their coordinates. All schemes of one trial see the same
channel and noise (paired sampling), and results do not depend on the number of worker threads.
"""
import csv
import dataclasses
import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelRealization, StatisticalCsi, build_statistical_csi, composite_matrix, sample_channel
from .codebook import (
    SCHEME_ENV,
    SCHEME_RANDOM,
    Codebook,
    Codeword,
    best_of_restarts,
    generate_codebook,
)
from .config import ScenarioConfig
from .exception import ConfigError, DimensionMismatch, RisLabError, TrialError
from .numerics import RngStream
from .precoding import water_fill, zf_diagonal
from .stats import ExecutionTimer, RunningMoments
from .theory import (
    BOUND_ESTIMATED,
    BOUND_PERFECT,
    BOUNDS,
    ORDER_EXACT,
    effective_rate,
    estimated_csi_power,
    perfect_csi_power,
    rate_from_power,
)
from .training import run_training_epoch, training_slots
from .utils import ensure_parent_dir

_LOGGER = logging.getLogger("ris.experiments")

SCHEME_RANDOM_CONFIG = "random-config"
SCHEME_OPTIMAL = "optimal-config"
ALL_SCHEMES = (SCHEME_ENV, SCHEME_RANDOM, SCHEME_RANDOM_CONFIG, SCHEME_OPTIMAL)
CODEBOOK_SCHEMES = (SCHEME_ENV, SCHEME_RANDOM)

SWEEP_Q = "Q"
SWEEP_N = "N"
SWEEP_P_D = "P_d"
SWEEP_T_C = "T_c"
SWEEP_F_R = "F_r"
SWEEP_AXES = (SWEEP_Q, SWEEP_N, SWEEP_P_D, SWEEP_T_C, SWEEP_F_R)

STREAM_CODEBOOK = 1
STREAM_CHANNEL = 2
STREAM_NOISE = 3
STREAM_SCHEME = 4

THEORY_B = 6

CSV_COLUMNS = (
    "sweep_param",
    "sweep_value",
    "scheme",
    "trials",
    "mean_rate_bpshz",
    "stderr_rate_bpshz",
    "theory_rate_bpshz",
    "mean_power_w",
    "theory_power_w",
    "seed",
)


@dataclasses.dataclass(frozen=True)
class ExperimentSpec:
    scenario: ScenarioConfig
    sweep_param: str
    sweep_values: Tuple[float, ...]
    schemes: Tuple[str, ...]
    trials: int
    noise_on: bool
    seed: int
    q_values: Tuple[int, ...] = ()
    threads: int = 1
    codebooks: Optional[Mapping[str, Codebook]] = dataclasses.field(default=None, compare=False)

    def __post_init__(self):
        if self.sweep_param not in SWEEP_AXES:
            raise ConfigError(
                "Unknown sweep axis '{}', valid axes are {}".format(self.sweep_param, ", ".join(SWEEP_AXES)),
                key="sweep",
            )
        if self.trials < 1:
            raise ConfigError("Number of trials must be positive, got {}".format(self.trials), key="trials")
        if len(self.sweep_values) == 0:
            raise ConfigError("At least one sweep value is required", key="values")
        if any(not b > a for a, b in zip(self.sweep_values, self.sweep_values[1:])):
            raise ConfigError("Sweep values must be strictly increasing", key="values")
        if len(self.schemes) == 0:
            raise ConfigError("At least one scheme is required", key="schemes")
        unknown = [x for x in self.schemes if x not in ALL_SCHEMES]
        if unknown:
            raise ConfigError("Unknown schemes: {}".format(", ".join(unknown)), key="schemes")
        if any(q < 1 for q in self.q_values):
            raise ConfigError("Overhead Q values must be positive", key="q_values")
        if self.q_values and self.sweep_param != SWEEP_T_C:
            raise ConfigError("Per-Q rows are only produced by coherence time sweeps", key="q_values")
        if self.threads < 1:
            raise ConfigError("Thread count must be positive", key="threads")

    @property
    def ordered_schemes(self) -> Tuple[str, ...]:
        return tuple(x for x in ALL_SCHEMES if x in self.schemes)


@dataclasses.dataclass(frozen=True)
class ResultRow:
    sweep_param: str
    sweep_value: float
    scheme: str
    trials: int
    mean_rate: float
    stderr_rate: float
    seed: int
    theory_rate: Optional[float] = None
    mean_power: Optional[float] = None
    theory_power: Optional[float] = None
    stderr_power: Optional[float] = None

    def csv_record(self) -> List[str]:
        return [
            self.sweep_param,
            _fmt(self.sweep_value),
            self.scheme,
            str(self.trials),
            _fmt(self.mean_rate),
            _fmt(self.stderr_rate),
            _fmt(self.theory_rate),
            _fmt(self.mean_power),
            _fmt(self.theory_power),
            str(self.seed),
        ]


def _fmt(value: Optional[float]) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(rows: Iterable[ResultRow], path: str):
    ensure_parent_dir(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in rows:
                writer.writerow(row.csv_record())
    except OSError as e:
        raise OSError("Unable to write results to {}: {}".format(path, e)) from e


# ================== Trials =================


@dataclasses.dataclass(frozen=True)
class TrialSample:
    rate: float
    power: float


@dataclasses.dataclass
class _Accumulator:
    rate: RunningMoments = dataclasses.field(default_factory=RunningMoments)
    power: RunningMoments = dataclasses.field(default_factory=RunningMoments)

    def add(self, sample: TrialSample):
        self.rate.add(sample.rate)
        self.power.add(sample.power)


def optimal_config_baseline(true_channels: ChannelRealization, config: ScenarioConfig, stream: RngStream) -> float:
    """Perfect-CSI benchmark: alternating optimization run on the true channel, best of ``ao_restarts`` starts."""
    return best_of_restarts(true_channels, config, stream, config.ao_restarts).objective


def _optimal_sample(channels: ChannelRealization, config: ScenarioConfig, stream: RngStream) -> TrialSample:
    res = best_of_restarts(channels, config, stream, config.ao_restarts)
    u = zf_diagonal(composite_matrix(channels, res.codeword.phase_indices, config.b), config.gram_condition_limit)
    alloc = water_fill(u, config.sigma_k2, config.P_d)
    return TrialSample(rate=res.objective, power=float(np.sum(alloc.received)))


def _training_sample(
    channels: ChannelRealization, codebook: Codebook, config: ScenarioConfig, noise_on: bool, stream: RngStream
) -> TrialSample:
    outcome = run_training_epoch(channels, codebook, config, noise_on, stream)
    return TrialSample(rate=float(outcome.realized_rate), power=float(np.sum(outcome.received_powers)))


def _random_config_codebook(config: ScenarioConfig, stream: RngStream) -> Codebook:
    return Codebook(
        entries=(Codeword(phase_indices=stream.integers(0, config.B, config.N)),),
        N=config.N,
        K=config.K,
        b=config.b,
        scheme=SCHEME_RANDOM_CONFIG,
        seed=0,
        config_fingerprint=config.fingerprint(),
    )


def _map_ordered(fn: Callable[[int], Any], count: int, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


class _PointRunner(object):
    """Runs every trial of one sweep point for the requested schemes."""

    def __init__(
        self,
        spec: ExperimentSpec,
        config: ScenarioConfig,
        csi: StatisticalCsi,
        codebooks: Mapping[str, Codebook],
        point_key: int,
        sweep_value: float,
        schemes: Sequence[str],
    ) -> None:
        self.spec = spec
        self.config = config
        self.csi = csi
        self.codebooks = codebooks
        self.point_key = point_key
        self.sweep_value = sweep_value
        self.schemes = schemes
        self.root = RngStream(spec.seed)

    def run_trial(self, trial: int) -> Dict[str, TrialSample]:
        channels = sample_channel(self.csi, self.root.derive(STREAM_CHANNEL, self.point_key, trial))
        noise = self.root.derive(STREAM_NOISE, self.point_key, trial)
        res: Dict[str, TrialSample] = OrderedDict()
        for scheme in self.schemes:
            scheme_stream = self.root.derive(STREAM_SCHEME, self.point_key, ALL_SCHEMES.index(scheme), trial)
            try:
                if scheme in CODEBOOK_SCHEMES:
                    res[scheme] = _training_sample(
                        channels, self.codebooks[scheme], self.config, self.spec.noise_on, noise
                    )
                elif scheme == SCHEME_RANDOM_CONFIG:
                    cb = _random_config_codebook(self.config, scheme_stream)
                    res[scheme] = _training_sample(channels, cb, self.config, self.spec.noise_on, noise)
                else:
                    res[scheme] = _optimal_sample(channels, self.config, scheme_stream)
            except RisLabError as e:
                raise TrialError(self.sweep_value, scheme, trial, str(e)) from e
        return res

    def run(self) -> Dict[str, _Accumulator]:
        samples = _map_ordered(self.run_trial, self.spec.trials, self.spec.threads)
        acc: Dict[str, _Accumulator] = OrderedDict((x, _Accumulator()) for x in self.schemes)
        for trial_samples in samples:
            for scheme, sample in trial_samples.items():
                acc[scheme].add(sample)
        return acc


def _scenario_for(spec: ExperimentSpec, value: float) -> ScenarioConfig:
    if spec.sweep_param == SWEEP_Q:
        return spec.scenario.replace(Q=int(value))
    if spec.sweep_param == SWEEP_N:
        return spec.scenario.with_elements(int(value))
    if spec.sweep_param == SWEEP_P_D:
        return spec.scenario.replace(P_d=value)
    if spec.sweep_param == SWEEP_F_R:
        return spec.scenario.replace(F_r=value)
    return spec.scenario


def _point_key(spec: ExperimentSpec, idx: int) -> int:
    # Q points share codebooks (as prefixes) and channels; T_c points rescale one set of rates
    return 0 if spec.sweep_param in (SWEEP_Q, SWEEP_T_C) else idx


def _codebook_for(
    spec: ExperimentSpec, scheme: str, csi: StatisticalCsi, config: ScenarioConfig, point_key: int
) -> Codebook:
    given = (spec.codebooks or {}).get(scheme)
    if given is not None:
        given.check_compatible(config)
        if given.Q < config.Q:
            raise DimensionMismatch("Q", config.Q, given.Q)
        return given
    seed = RngStream(spec.seed).derive_seed(STREAM_CODEBOOK, point_key, ALL_SCHEMES.index(scheme))
    return generate_codebook(scheme, csi, config, seed, spec.threads)


def _row(spec: ExperimentSpec, value: float, scheme: str, acc: _Accumulator, scale: float = 1.0) -> ResultRow:
    rate = acc.rate.scaled(scale) if scale != 1.0 else acc.rate
    return ResultRow(
        sweep_param=spec.sweep_param,
        sweep_value=value,
        scheme=scheme,
        trials=rate.count,
        mean_rate=rate.mean,
        stderr_rate=rate.stderr,
        seed=spec.seed,
        mean_power=acc.power.mean,
        stderr_power=acc.power.stderr,
    )


def _run_q_sweep(spec: ExperimentSpec) -> List[ResultRow]:
    q_max = int(spec.sweep_values[-1])
    base = spec.scenario.replace(Q=q_max)
    csi = build_statistical_csi(base)
    full = {x: _codebook_for(spec, x, csi, base, 0) for x in spec.ordered_schemes if x in CODEBOOK_SCHEMES}
    rows: List[ResultRow] = []
    fixed: Dict[str, _Accumulator] = {}
    for idx, value in enumerate(spec.sweep_values):
        config = _scenario_for(spec, value)
        codebooks = {k: v.prefix(config.Q) for k, v in full.items()}
        # schemes without a codebook do not depend on Q
        schemes = [x for x in spec.ordered_schemes if x in CODEBOOK_SCHEMES or x not in fixed]
        acc = _PointRunner(spec, config, csi, codebooks, 0, value, schemes).run()
        fixed.update({k: v for k, v in acc.items() if k not in CODEBOOK_SCHEMES})
        for scheme in spec.ordered_schemes:
            rows.append(_row(spec, value, scheme, acc[scheme] if scheme in acc else fixed[scheme]))
        _LOGGER.info("Sweep point Q={} done".format(int(value)))
    return rows


def _overhead(scheme: str, q: int, k: int) -> int:
    if scheme in CODEBOOK_SCHEMES:
        return training_slots(q, k)
    if scheme == SCHEME_RANDOM_CONFIG:
        return training_slots(1, k)
    return 0


def _run_coherence_sweep(spec: ExperimentSpec) -> List[ResultRow]:
    q_values = spec.q_values or (spec.scenario.Q,)
    base = spec.scenario.replace(Q=max(q_values))
    csi = build_statistical_csi(base)
    full = {x: _codebook_for(spec, x, csi, base, 0) for x in spec.ordered_schemes if x in CODEBOOK_SCHEMES}
    per_q: Dict[Tuple[str, int], _Accumulator] = OrderedDict()
    fixed: Dict[str, _Accumulator] = {}
    for q in sorted(q_values):
        config = spec.scenario.replace(Q=q)
        codebooks = {k: v.prefix(q) for k, v in full.items()}
        schemes = [x for x in spec.ordered_schemes if x in CODEBOOK_SCHEMES or x not in fixed]
        acc = _PointRunner(spec, config, csi, codebooks, 0, q, schemes).run()
        fixed.update({k: v for k, v in acc.items() if k not in CODEBOOK_SCHEMES})
        for scheme in CODEBOOK_SCHEMES:
            if scheme in acc:
                per_q[(scheme, q)] = acc[scheme]
    rows: List[ResultRow] = []
    for coherence_time in spec.sweep_values:
        for scheme in spec.ordered_schemes:
            if scheme in CODEBOOK_SCHEMES:
                targets = [(q, per_q[(scheme, q)]) for q in sorted(q_values)]
            else:
                targets = [(1, fixed[scheme])]
            for q, acc in targets:
                tau = _overhead(scheme, q, spec.scenario.K)
                scale = 0.0 if tau >= coherence_time else effective_rate(1.0, coherence_time, tau)
                label = scheme if not spec.q_values or scheme not in CODEBOOK_SCHEMES else "{}/Q={}".format(scheme, q)
                rows.append(_row(spec, coherence_time, label, acc, scale))
    return rows


def run_experiment(spec: ExperimentSpec) -> List[ResultRow]:
    """One row per (sweep value, scheme), schemes in canonical order whatever order spec.schemes lists them in."""
    timer = ExecutionTimer()
    _LOGGER.info(
        "Running {} trials per point over {} = {} for {}".format(
            spec.trials, spec.sweep_param, list(spec.sweep_values), ", ".join(spec.ordered_schemes)
        )
    )
    if spec.sweep_param == SWEEP_Q:
        rows = _run_q_sweep(spec)
    elif spec.sweep_param == SWEEP_T_C:
        rows = _run_coherence_sweep(spec)
    else:
        rows = []
        for idx, value in enumerate(spec.sweep_values):
            config = _scenario_for(spec, value)
            csi = build_statistical_csi(config)
            codebooks = {
                x: _codebook_for(spec, x, csi, config, idx) for x in spec.ordered_schemes if x in CODEBOOK_SCHEMES
            }
            acc = _PointRunner(spec, config, csi, codebooks, _point_key(spec, idx), value, spec.ordered_schemes).run()
            rows.extend(_row(spec, value, x, acc[x]) for x in spec.ordered_schemes)
            _LOGGER.info("Sweep point {}={:g} done".format(spec.sweep_param, value))
    timer.stop()
    _LOGGER.info("Experiment finished in {}".format(timer.format_elapsed()))
    return rows


# ================== Theory verification =================


@dataclasses.dataclass(frozen=True)
class TheoryGridPoint:
    N: int
    F_r: float
    Q: int
    sigma_q2: float = 0.0

    @property
    def group(self) -> Tuple[int, float, float]:
        return self.N, self.F_r, self.sigma_q2


def _group_label(point: TheoryGridPoint) -> str:
    return "{}[N={},F_r={:.6g},sigma_q2={:.6g}]".format(SCHEME_ENV, point.N, point.F_r, point.sigma_q2)


def theory_scenario(base: ScenarioConfig, point: TheoryGridPoint, b: int = THEORY_B) -> ScenarioConfig:
    """Single-user setting of a grid point; sigma_q2 maps to pilot noise sigma_z^2 = sigma_q2 K P_ul with K = 1."""
    config = base.theory_setting(b=b).with_elements(point.N)
    return config.replace(F_r=point.F_r, sigma_z2=point.sigma_q2 * config.K * config.P_ul)


def theory_power(config: ScenarioConfig, csi: StatisticalCsi, bound: str, q: int, order_statistic: str) -> float:
    args = (config.P_d, float(csi.beta_r[0]), csi.beta_g, config.M, config.N, config.F_r, q)
    if bound == BOUND_PERFECT:
        return perfect_csi_power(*args, order_statistic=order_statistic)
    return estimated_csi_power(*args, config.sigma_z2 / (config.K * config.P_ul), order_statistic=order_statistic)


def run_theory_verification(
    bound: str,
    grid: Sequence[TheoryGridPoint],
    base: ScenarioConfig,
    trials: int,
    seed: int,
    threads: int = 1,
    order_statistic: str = ORDER_EXACT,
    b: int = THEORY_B,
) -> List[ResultRow]:
    """
    Simulated mean received power of the single-user setting next to the closed form.
    Points sharing (N, F_r, sigma_q2) share channels and one codebook built at their largest Q.
    """
    if bound not in BOUNDS:
        raise ConfigError(
            "Unknown bound {}".format(bound), key="bound", fix_hint="Available bounds: {}".format(", ".join(BOUNDS))
        )
    if trials < 1:
        raise ConfigError("Number of trials must be positive, got {}".format(trials), key="trials")
    groups: Dict[Tuple[int, float, float], List[TheoryGridPoint]] = OrderedDict()
    for point in grid:
        groups.setdefault(point.group, []).append(point)
    root = RngStream(seed)
    rows: List[ResultRow] = []
    for group_idx, points in enumerate(groups.values()):
        q_max = max(x.Q for x in points)
        config = theory_scenario(base, points[0], b).replace(Q=q_max)
        csi = build_statistical_csi(config)
        cb_seed = root.derive_seed(STREAM_CODEBOOK, group_idx)
        full = generate_codebook(SCHEME_ENV, csi, config, cb_seed, threads)
        spec = ExperimentSpec(
            scenario=config,
            sweep_param=SWEEP_Q,
            sweep_values=(float(q_max),),
            schemes=(SCHEME_ENV,),
            trials=trials,
            noise_on=bound == BOUND_ESTIMATED,
            seed=root.derive_seed(STREAM_CHANNEL, group_idx),
            threads=threads,
        )
        for point in sorted(points, key=lambda x: x.Q):
            cfg = config.replace(Q=point.Q)
            runner = _PointRunner(spec, cfg, csi, {SCHEME_ENV: full.prefix(point.Q)}, 0, point.Q, (SCHEME_ENV,))
            acc = runner.run()[SCHEME_ENV]
            power = theory_power(cfg, csi, bound, point.Q, order_statistic)
            rows.append(
                ResultRow(
                    sweep_param=SWEEP_Q,
                    sweep_value=point.Q,
                    scheme=_group_label(point),
                    trials=acc.rate.count,
                    mean_rate=acc.rate.mean,
                    stderr_rate=acc.rate.stderr,
                    seed=seed,
                    theory_rate=rate_from_power(power, cfg.sigma_k2),
                    mean_power=acc.power.mean,
                    theory_power=power,
                    stderr_power=acc.power.stderr,
                )
            )
            _LOGGER.info(
                "N={} F_r={:.4g} Q={}: simulated {:.4g} W, bound {:.4g} W".format(
                    point.N, point.F_r, point.Q, acc.power.mean, power
                )
            )
    return rows


@dataclasses.dataclass(frozen=True)
class BoundVerdict:
    row: ResultRow
    ratio: float
    within_bound: bool
    tight: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.within_bound and self.tight is not False


def check_bound(row: ResultRow, tightness: Optional[float] = None, se_multiplier: float = 3.0) -> BoundVerdict:
    """Simulated power must not exceed the bound by more than ``se_multiplier`` standard errors."""
    if row.theory_power is None or row.mean_power is None:
        raise ValueError("Row {} carries no power comparison".format(row.scheme))
    ratio = row.mean_power / row.theory_power
    within = row.mean_power <= row.theory_power + se_multiplier * (row.stderr_power or 0.0)
    tight = None if tightness is None else ratio >= tightness
    return BoundVerdict(row=row, ratio=ratio, within_bound=within, tight=tight)


# ================== Experiment presets =================


def _dbm_values(*values: float) -> Tuple[float, ...]:
    return tuple(10 ** ((x - 30) / 10) for x in values)


EXPERIMENT_PRESETS: Dict[str, Dict[str, Any]] = {
    "power_sweep": dict(
        config="preset:power_sweep",
        sweep_param=SWEEP_P_D,
        sweep_values=_dbm_values(20, 25, 30, 35, 40, 45, 50),
        schemes=ALL_SCHEMES,
    ),
    "overhead_sweep": dict(
        config="preset:overhead_sweep",
        sweep_param=SWEEP_Q,
        sweep_values=(1, 2, 4, 8, 16, 32, 64),
        schemes=(SCHEME_ENV, SCHEME_RANDOM),
    ),
    "elements_sweep": dict(
        config="preset:elements_sweep",
        sweep_param=SWEEP_N,
        sweep_values=(16, 36, 64, 100),
        schemes=(SCHEME_ENV, SCHEME_RANDOM, SCHEME_RANDOM_CONFIG),
    ),
    "coherence_sweep": dict(
        config="preset:coherence_sweep",
        sweep_param=SWEEP_T_C,
        sweep_values=(50, 100, 200, 500, 1000, 2000, 5000),
        schemes=(SCHEME_ENV,),
        q_values=(1, 16, 64),
    ),
}

# the same Q sweep for the other served user sets
EXPERIMENT_PRESETS.update(
    {
        x: dict(EXPERIMENT_PRESETS["overhead_sweep"], config="preset:" + x)
        for x in ("overhead_sweep_even", "overhead_sweep_six", "overhead_sweep_pair")
    }
)

THEORY_PRESET = "theory_check"
THEORY_F_R_DB = (-15.0, 3.0, 15.0)
THEORY_Q = (1, 2, 4, 8, 16, 32, 64, 128, 256)


def theory_grid(n: int, f_r_db: Sequence[float] = THEORY_F_R_DB, q_values: Sequence[int] = THEORY_Q, sigma_q2=0.0):
    return [TheoryGridPoint(N=n, F_r=10 ** (f / 10), Q=q, sigma_q2=sigma_q2) for f in f_r_db for q in q_values]


def preset_experiment(
    name: str, scenario: ScenarioConfig, trials: int, seed: int, noise_on: bool = True, threads: int = 1
) -> ExperimentSpec:
    if name not in EXPERIMENT_PRESETS:
        raise ConfigError(
            "Unknown experiment preset '{}'".format(name),
            key="preset",
            fix_hint="Available presets: {}".format(", ".join(EXPERIMENT_PRESETS)),
        )
    preset = dict(EXPERIMENT_PRESETS[name])
    preset.pop("config")
    return ExperimentSpec(scenario=scenario, trials=trials, seed=seed, noise_on=noise_on, threads=threads, **preset)
