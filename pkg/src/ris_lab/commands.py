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
import json
import os
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from ris_lab_validation import rlv
from ris_lab_validation.domain import format_invalid

from ris_lab import CLI
from ris_lab.channel import build_statistical_csi
from ris_lab.codebook import (
    CODEBOOK_EXT,
    SCHEME_ENV,
    SCHEME_RANDOM,
    Codebook,
    generate_codebook,
    load_codebook,
    save_codebook,
)
from ris_lab.config import ScenarioConfig, load_config
from ris_lab.exception import AcceptanceViolation, ConfigError
from ris_lab.experiments import (
    ALL_SCHEMES,
    CODEBOOK_SCHEMES,
    EXPERIMENT_PRESETS,
    SCHEME_OPTIMAL,
    SCHEME_RANDOM_CONFIG,
    SWEEP_AXES,
    SWEEP_F_R,
    SWEEP_N,
    SWEEP_P_D,
    SWEEP_Q,
    SWEEP_T_C,
    THEORY_B,
    THEORY_PRESET,
    ExperimentSpec,
    ResultRow,
    TheoryGridPoint,
    check_bound,
    run_experiment,
    run_theory_verification,
    theory_grid,
    write_csv,
)
from ris_lab.manifest import RunManifest
from ris_lab.modular import CliExtension
from ris_lab.stats import ExecutionTimer
from ris_lab.theory import BOUND_ESTIMATED, BOUND_PERFECT, BOUNDS, ORDER_ASYMPTOTIC, ORDER_EXACT
from ris_lab.utils import parse_bool_val

SEED_ENV_VAR = "RIS_LAB_SEED"

SCHEME_ALIASES = {
    "env": SCHEME_ENV,
    "random": SCHEME_RANDOM,
    "random-cfg": SCHEME_RANDOM_CONFIG,
    "optimal": SCHEME_OPTIMAL,
}
SCHEME_ALIASES.update({x: x for x in ALL_SCHEMES})

PROP_BOUNDS = {"1": BOUND_PERFECT, "2": BOUND_ESTIMATED}

SWEEP_VALUE_VALIDATORS: Dict[str, Callable[[Any], Any]] = {
    SWEEP_Q: rlv.positive_int,
    SWEEP_N: rlv.positive_int,
    SWEEP_P_D: rlv.positive_power,
    SWEEP_T_C: rlv.positive_float,
    SWEEP_F_R: rlv.non_negative_gain,
}


def _validate(value: Any, validator: Callable[[Any], Any], key: str) -> Any:
    try:
        return validator(value)
    except rlv.Invalid as e:
        raise ConfigError("Invalid value for --{}: {}".format(key, format_invalid(e)), key=key) from e


def resolve_seed(value: Optional[str]) -> int:
    """--seed wins over the RIS_LAB_SEED environment variable. Having neither is a validation error."""
    raw = value if value is not None else os.environ.get(SEED_ENV_VAR)
    if raw is None:
        raise ConfigError(
            "Master seed is not set", key="seed", fix_hint="Pass --seed or set {} env variable".format(SEED_ENV_VAR)
        )
    seed = _validate(raw, rlv.non_negative_int, "seed")
    CLI.print_debug("Master seed {} (from {})".format(seed, "--seed" if value is not None else SEED_ENV_VAR))
    return seed


def resolve_schemes(values: Optional[Sequence[str]]) -> Tuple[str, ...]:
    res: List[str] = []
    for x in values or ():
        name = _validate(x, rlv.one_of(*SCHEME_ALIASES, lower=True), "scheme")
        if SCHEME_ALIASES[name] not in res:
            res.append(SCHEME_ALIASES[name])
    return tuple(res)


def _arguments(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k != "ext_cls"}


def _finish(manifest: RunManifest, timer: ExecutionTimer, *outputs: str):
    timer.stop()
    for x in outputs:
        manifest.add_output(x)
    manifest.finish(timer.elapsed)
    manifest.write(outputs[0])


def _add_common_args(parser: argparse.ArgumentParser, default_config: Optional[str] = None):
    parser.add_argument(
        "--config",
        dest="config",
        required=default_config is None,
        default=default_config,
        metavar="LOCATOR",
        help="Scenario config: JSON file path, file:<path> or preset:<name>"
        + (" (default: {})".format(default_config) if default_config else ""),
    )
    parser.add_argument(
        "--seed",
        dest="seed",
        required=False,
        default=None,
        help="Master seed. Falls back to the {} env variable".format(SEED_ENV_VAR),
    )
    parser.add_argument("--out", dest="out", required=True, help="Output file path")
    parser.add_argument(
        "--threads", dest="threads", default="1", help="Worker threads. Output doesn't depend on this value"
    )


class GenCodebookCommand(CliExtension):
    COMMAND_NAME = "gen-codebook"
    COMMAND_DESCRIPTION = "Generate a reflection coefficient codebook for the configured environment"

    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        _add_common_args(parser)
        parser.add_argument("--q", dest="q", default=None, help="Codebook size Q (default: Q from config)")
        parser.add_argument(
            "--scheme",
            dest="scheme",
            choices=("env", "random"),
            default="env",
            help="env: environment-aware codebook, random: uniformly random phases",
        )

    def handle(self, args: argparse.Namespace):
        timer = ExecutionTimer()
        overrides = {}
        if args.q is not None:
            overrides["Q"] = _validate(args.q, rlv.positive_int, "q")
        threads = _validate(args.threads, rlv.positive_int, "threads")
        seed = resolve_seed(args.seed)
        config = load_config(args.config, **overrides)
        out = args.out
        if not out.endswith(CODEBOOK_EXT):
            CLI.print_warn("Codebook files are expected to have {} extension".format(CODEBOOK_EXT))
        manifest = RunManifest.start(self.COMMAND_NAME, _arguments(args), config, seed)
        CLI.print_info(
            "Generating {} codebook with Q={} for N={}, K={}".format(args.scheme, config.Q, config.N, config.K)
        )
        cb = generate_codebook(SCHEME_ALIASES[args.scheme], build_statistical_csi(config), config, seed, threads)
        save_codebook(cb, out)
        _finish(manifest, timer, out)
        CLI.print_success("Done in {}".format(timer.format_elapsed()))
        CLI.print_data(out)


class SimulateCommand(CliExtension):
    COMMAND_NAME = "simulate"
    COMMAND_DESCRIPTION = "Monte Carlo comparison of codebook schemes and baselines over a swept parameter"

    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        parser.add_argument(
            "--preset",
            dest="preset",
            choices=sorted(EXPERIMENT_PRESETS),
            default=None,
            help="Experiment preset providing config, sweep, values and schemes. Explicit flags override it",
        )
        parser.add_argument(
            "--config",
            dest="config",
            default=None,
            metavar="LOCATOR",
            help="Scenario config: JSON file path, file:<path> or preset:<name>",
        )
        parser.add_argument(
            "--codebook",
            dest="codebooks",
            nargs="+",
            default=[],
            metavar="PATH",
            help="Pre-generated codebook files. Missing codebooks are generated on the fly",
        )
        parser.add_argument(
            "--scheme",
            dest="schemes",
            action="append",
            default=None,
            help="Scheme to evaluate, repeatable: {}".format(", ".join(SCHEME_ALIASES)),
        )
        parser.add_argument("--sweep", dest="sweep", choices=SWEEP_AXES, default=None, help="Swept parameter")
        parser.add_argument(
            "--values", dest="values", default=None, help='Comma separated sweep values, units allowed ("30dBm,40dBm")'
        )
        parser.add_argument(
            "--q-values",
            dest="q_values",
            default=None,
            help="Codebook sizes reported separately on coherence time sweeps",
        )
        parser.add_argument("--trials", dest="trials", default="100", help="Independent trials per sweep point")
        parser.add_argument(
            "--noise",
            dest="noise",
            type=parse_bool_val,
            default=True,
            metavar="on|off",
            help="Pilot noise during training (default: on)",
        )
        parser.add_argument(
            "--seed",
            dest="seed",
            default=None,
            help="Master seed. Falls back to the {} env variable".format(SEED_ENV_VAR),
        )
        parser.add_argument("--out", dest="out", required=True, help="Output CSV path")
        parser.add_argument(
            "--threads", dest="threads", default="1", help="Worker threads. Output doesn't depend on this value"
        )

    @staticmethod
    def _load_codebooks(paths: Sequence[str], config: ScenarioConfig) -> Dict[str, Codebook]:
        res: Dict[str, Codebook] = {}
        for path in paths:
            cb = load_codebook(path, expected=config)
            if cb.scheme in res:
                raise ConfigError("More than one {} codebook given".format(cb.scheme), key="codebook")
            res[cb.scheme] = cb
        return res

    def build_spec(self, args: argparse.Namespace) -> ExperimentSpec:
        preset: Dict[str, Any] = dict(EXPERIMENT_PRESETS[args.preset]) if args.preset else {}
        locator = args.config or preset.get("config")
        if locator is None:
            raise ConfigError("Scenario config is required", key="config", fix_hint="Pass --config or --preset")
        sweep = args.sweep or preset.get("sweep_param")
        if sweep is None:
            raise ConfigError("Sweep axis is required", key="sweep", fix_hint="Pass --sweep or --preset")
        if args.values is not None:
            values = tuple(_validate(args.values, rlv.number_list(SWEEP_VALUE_VALIDATORS[sweep]), "values"))
        elif sweep == preset.get("sweep_param"):
            values = tuple(preset["sweep_values"])
        else:
            raise ConfigError("Sweep values are required for --sweep {}".format(sweep), key="values")
        if args.q_values is not None:
            q_values = tuple(_validate(args.q_values, rlv.number_list(rlv.positive_int), "q-values"))
        else:
            q_values = tuple(preset.get("q_values", ())) if sweep == SWEEP_T_C else ()
        config = load_config(locator)
        codebooks = self._load_codebooks(args.codebooks, config)
        schemes = resolve_schemes(args.schemes) or tuple(codebooks) or preset.get("schemes") or CODEBOOK_SCHEMES
        for scheme in codebooks:
            if scheme not in schemes:
                CLI.print_warn("Codebook for {} is given but the scheme is not selected".format(scheme))
        return ExperimentSpec(
            scenario=config,
            sweep_param=sweep,
            sweep_values=values,
            schemes=tuple(schemes),
            trials=_validate(args.trials, rlv.positive_int, "trials"),
            noise_on=args.noise,
            seed=resolve_seed(args.seed),
            q_values=q_values,
            threads=_validate(args.threads, rlv.positive_int, "threads"),
            codebooks=codebooks,
        )

    def handle(self, args: argparse.Namespace):
        timer = ExecutionTimer()
        spec = self.build_spec(args)
        manifest = RunManifest.start(self.COMMAND_NAME, _arguments(args), spec.scenario, spec.seed)
        rows = run_experiment(spec)
        write_csv(rows, args.out)
        _finish(manifest, timer, args.out)
        CLI.print_success("{} rows written in {}".format(len(rows), timer.format_elapsed()))
        CLI.print_data(args.out)


def _require_rician(point: Dict[str, Any]) -> Dict[str, Any]:
    if "F_r" not in point and "F_r_db" not in point:
        raise rlv.Invalid("Grid point needs F_r or F_r_db")
    return point


GRID_POINT_SCHEMA = rlv.All(
    rlv.Schema(
        {
            rlv.Required("N"): rlv.positive_int,
            rlv.Exclusive("F_r", "rician"): rlv.non_negative_gain,
            rlv.Exclusive("F_r_db", "rician"): rlv.float_,
            rlv.Required("Q"): rlv.positive_int,
            rlv.Optional("sigma_q2", default=0.0): rlv.non_negative_float,
        },
        extra=rlv.PREVENT_EXTRA,
    ),
    _require_rician,
)

GRID_SCHEMA = rlv.All(rlv.ensure_list(GRID_POINT_SCHEMA), rlv.Length(min=1))


def parse_grid(value: str) -> List[TheoryGridPoint]:
    """Grid points from a JSON file or an inline JSON document: a list of objects (or a single object)."""
    try:
        if os.path.isfile(value):
            with open(value, "r", encoding="utf-8") as f:
                raw = json.load(f)
        else:
            raw = json.loads(value)
    except (OSError, ValueError) as e:
        raise ConfigError("Grid is neither a readable file nor valid JSON: {}".format(e), key="grid") from e
    result = rlv.validate_and_normalize(raw, GRID_SCHEMA, raise_on_error=False)
    if result.has_errors:
        raise ConfigError("Invalid grid: " + result.format_errors(), key="grid")
    res = []
    for x in result.normalized_data:
        f_r = x["F_r"] if "F_r" in x else rlv.db_to_linear(x["F_r_db"])
        res.append(TheoryGridPoint(N=x["N"], F_r=f_r, Q=x["Q"], sigma_q2=x["sigma_q2"]))
    return res


class VerifyCommand(CliExtension):
    COMMAND_NAME = "verify"
    COMMAND_DESCRIPTION = "Compare simulated single-user received power with the closed-form bounds"

    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        _add_common_args(parser, default_config="preset:" + THEORY_PRESET)
        bound = parser.add_mutually_exclusive_group(required=True)
        bound.add_argument(
            "--prop",
            dest="prop",
            choices=sorted(PROP_BOUNDS),
            help="1: perfect CSI bound, 2: bound under LS estimation error",
        )
        bound.add_argument("--bound", dest="bound", choices=BOUNDS, help="Same as --prop, by name")
        parser.add_argument(
            "--grid",
            dest="grid",
            default=None,
            help='JSON file or inline JSON list of {"N", "F_r" or "F_r_db", "Q", "sigma_q2"} objects',
        )
        parser.add_argument("--trials", dest="trials", default="1000", help="Independent trials per grid point")
        parser.add_argument(
            "--order-statistic",
            dest="order_statistic",
            choices=(ORDER_EXACT, ORDER_ASYMPTOTIC),
            default=ORDER_EXACT,
            help="Mean of the largest of Q exponentials: exact harmonic number or ln Q + C",
        )
        parser.add_argument(
            "--tightness",
            dest="tightness",
            default=None,
            help="Also require simulated / theory >= this ratio at every grid point",
        )
        parser.add_argument("--b", dest="b", default=str(THEORY_B), help="Phase resolution bits of the codebook")

    @staticmethod
    def resolve_bound(args: argparse.Namespace) -> str:
        return args.bound if args.bound is not None else PROP_BOUNDS[args.prop]

    @staticmethod
    def default_grid(bound: str, base: ScenarioConfig, b: int) -> List[TheoryGridPoint]:
        sigma_q2 = 0.0 if bound == BOUND_PERFECT else base.theory_setting(b=b).ls_error_variance
        return theory_grid(base.N, sigma_q2=sigma_q2)

    @staticmethod
    def format_verdict(row: ResultRow, passed: bool, ratio: float) -> str:
        return "{} {} Q={} simulated={:.6g} W theory={:.6g} W ratio={:.4f}".format(
            "PASS" if passed else "FAIL", row.scheme, int(row.sweep_value), row.mean_power, row.theory_power, ratio
        )

    def handle(self, args: argparse.Namespace):
        timer = ExecutionTimer()
        trials = _validate(args.trials, rlv.positive_int, "trials")
        threads = _validate(args.threads, rlv.positive_int, "threads")
        b = _validate(args.b, rlv.All(rlv.int_, rlv.Range(min=1, max=8)), "b")
        tightness = None if args.tightness is None else _validate(args.tightness, rlv.positive_float, "tightness")
        seed = resolve_seed(args.seed)
        bound = self.resolve_bound(args)
        base = load_config(args.config)
        grid = parse_grid(args.grid) if args.grid is not None else self.default_grid(bound, base, b)
        manifest = RunManifest.start(self.COMMAND_NAME, _arguments(args), base, seed)
        rows = run_theory_verification(bound, grid, base, trials, seed, threads, args.order_statistic, b)
        write_csv(rows, args.out)
        _finish(manifest, timer, args.out)
        verdicts = [check_bound(x, tightness) for x in rows]
        for v in verdicts:
            CLI.print_data(self.format_verdict(v.row, v.passed, v.ratio))
        failed = sum(1 for x in verdicts if not x.passed)
        if failed:
            CLI.print_data("FAIL: {} of {} grid points violate the bound".format(failed, len(verdicts)))
            raise AcceptanceViolation(
                "{} of {} grid points fail the bound check".format(failed, len(verdicts)),
                fix_hint="Increase --trials or inspect {}".format(args.out),
            )
        CLI.print_data("PASS: all {} grid points are within the bound".format(len(verdicts)))
