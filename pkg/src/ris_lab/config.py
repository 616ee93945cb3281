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
Scenario configuration: loading, unit conversion and validation.

Config documents are JSON objects whose keys mirror ScenarioConfig field names.
Gains may be given in dB with a ``_db`` suffix (``F_r_db``) and powers in dBm with a ``_dbm`` suffix
(``P_d_dbm``); everything is converted to linear units and watts exactly once, here.
A document may inherit from another one with ``"extends": "<locator>"``.
"""
import dataclasses
import json
import logging
import os
from abc import ABCMeta, abstractmethod
from typing import Any, Dict, List, Optional, Tuple, Type, Union

from ris_lab_validation import rlv

from .exception import ConfigError
from .serialize import canonical_dumps, digest64
from .utils import most_square_grid

_LOGGER = logging.getLogger("ris.config")

PRESETS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "presets")
MAX_USERS = 8
EXTENDS_KEY = "extends"

GAIN_DB_FIELDS = ("F_g", "F_d", "F_r", "C0")
POWER_DBM_FIELDS = ("P_d", "P_ul", "sigma_z2", "sigma_k2")


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    """Geometry, array sizes, fading statistics, powers and algorithm knobs of one experiment."""

    M: int
    N_x: int
    N_y: int
    active_users: Tuple[int, ...]
    d_BS: float
    d_R: float
    F_g: float
    F_d: float
    F_r: float
    alpha_g: float
    alpha_r: float
    alpha_d: float
    C0: float
    d_m: float
    d_BR: float
    d_0: float
    d_1: float
    h_BS: float
    h_R: float
    P_d: float
    P_ul: float
    sigma_z2: float
    sigma_k2: float
    b: int
    Q: int
    h_U: float = 0.0
    direct_link_blocked: bool = False
    bs_ris_los_only: bool = False
    ao_epsilon: float = 1e-3
    ao_max_outer: int = 20
    ao_max_sweeps: int = 5
    ao_max_retries: int = 3
    ao_restarts: int = 1
    gram_condition_limit: float = 1e12

    @property
    def N(self) -> int:
        return self.N_x * self.N_y

    @property
    def K(self) -> int:
        return len(self.active_users)

    @property
    def B(self) -> int:
        return 1 << self.b

    @property
    def ls_error_variance(self) -> float:
        """Per-entry variance of the LS composite-channel estimate, sigma_z^2 / (K P_ul)."""
        return self.sigma_z2 / (self.K * self.P_ul)

    def to_dict(self) -> Dict[str, Any]:
        res = dataclasses.asdict(self)
        res["active_users"] = list(self.active_users)
        return res

    def canonical_json(self) -> str:
        return canonical_dumps(self.to_dict())

    def fingerprint(self) -> str:
        return digest64(self.canonical_json())

    def replace(self, **changes) -> "ScenarioConfig":
        """Validated copy with some fields changed. Unit-suffixed keys are accepted as well."""
        data = self.to_dict()
        data.update(normalize_units(changes))
        return parse_config(data)

    def with_elements(self, n: int) -> "ScenarioConfig":
        n_x, n_y = most_square_grid(n)
        return self.replace(N_x=n_x, N_y=n_y)

    def theory_setting(self, b: int = 6, user: int = MAX_USERS) -> "ScenarioConfig":
        """
        Single-user setting behind the closed-form received power: one BS antenna,
        direct link blocked, line-of-sight-only BS-RIS link.
        """
        return self.replace(M=1, active_users=[user], direct_link_blocked=True, bs_ris_los_only=True, b=b)


def _k_le_m(value: Dict[str, Any]) -> Dict[str, Any]:
    if len(value["active_users"]) > value["M"]:
        raise rlv.Invalid(
            "{} active users need at least as many BS antennas, got M={}".format(
                len(value["active_users"]), value["M"]
            ),
            path=["active_users"],
        )
    return value


_user_index = rlv.All(rlv.int_, rlv.Range(min=1, max=MAX_USERS))

CONFIG_SCHEMA = rlv.All(
    rlv.Schema(
        {
            rlv.Required("M"): rlv.positive_int,
            rlv.Required("N_x"): rlv.positive_int,
            rlv.Required("N_y"): rlv.positive_int,
            rlv.Required("active_users"): rlv.All(
                rlv.ensure_list(_user_index), rlv.Length(min=1, max=MAX_USERS), rlv.unique_sorted
            ),
            rlv.Required("d_BS"): rlv.positive_float,
            rlv.Required("d_R"): rlv.positive_float,
            rlv.Required("F_g"): rlv.non_negative_gain,
            rlv.Required("F_d"): rlv.non_negative_gain,
            rlv.Required("F_r"): rlv.non_negative_gain,
            rlv.Required("alpha_g"): rlv.All(rlv.float_, rlv.Range(min=0)),
            rlv.Required("alpha_r"): rlv.All(rlv.float_, rlv.Range(min=0)),
            rlv.Required("alpha_d"): rlv.All(rlv.float_, rlv.Range(min=0)),
            rlv.Required("C0"): rlv.All(rlv.gain, rlv.Range(min=0, min_included=False)),
            rlv.Required("d_m"): rlv.positive_distance,
            rlv.Required("d_BR"): rlv.positive_distance,
            rlv.Required("d_0"): rlv.positive_distance,
            rlv.Required("d_1"): rlv.positive_distance,
            rlv.Required("h_BS"): rlv.positive_distance,
            rlv.Required("h_R"): rlv.positive_distance,
            rlv.Required("P_d"): rlv.positive_power,
            rlv.Required("P_ul"): rlv.positive_power,
            rlv.Required("sigma_z2"): rlv.All(rlv.power, rlv.Range(min=0)),
            rlv.Required("sigma_k2"): rlv.positive_power,
            rlv.Required("b"): rlv.All(rlv.int_, rlv.Range(min=1, max=8)),
            rlv.Required("Q"): rlv.positive_int,
            rlv.Optional("h_U", default=0.0): rlv.All(rlv.distance, rlv.Range(min=0)),
            rlv.Optional("direct_link_blocked", default=False): rlv.boolean,
            rlv.Optional("bs_ris_los_only", default=False): rlv.boolean,
            rlv.Optional("ao_epsilon", default=1e-3): rlv.positive_float,
            rlv.Optional("ao_max_outer", default=20): rlv.positive_int,
            rlv.Optional("ao_max_sweeps", default=5): rlv.positive_int,
            rlv.Optional("ao_max_retries", default=3): rlv.non_negative_int,
            rlv.Optional("ao_restarts", default=1): rlv.positive_int,
            rlv.Optional("gram_condition_limit", default=1e12): rlv.positive_float,
        },
        extra=rlv.PREVENT_EXTRA,
    ),
    _k_le_m,
)


def normalize_units(raw: Dict[str, Any]) -> Dict[str, Any]:
    """Replaces ``<field>_db`` / ``<field>_dbm`` keys with the plain field in linear units / watts."""
    res: Dict[str, Any] = {}
    suffixed = [(f, f + "_db", rlv.db_to_linear) for f in GAIN_DB_FIELDS] + [
        (f, f + "_dbm", rlv.dbm_to_watts) for f in POWER_DBM_FIELDS
    ]
    consumed = set()
    for field, key, converter in suffixed:
        if key not in raw:
            continue
        if field in raw:
            raise ConfigError(
                "Both '{}' and '{}' are given, use only one of them".format(field, key), key=key
            )
        try:
            res[field] = converter(raw[key])
        except rlv.Invalid as e:
            raise ConfigError("Invalid value for '{}': {}".format(key, e.error_message), key=key) from e
        consumed.add(key)
    for k, v in raw.items():
        if k not in consumed:
            res[k] = v
    return res


def parse_config(raw: Dict[str, Any]) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("Scenario config must be a JSON object")
    data = normalize_units(raw)
    data.pop(EXTENDS_KEY, None)
    result = rlv.validate_and_normalize(data, CONFIG_SCHEMA, raise_on_error=False)
    if result.has_errors:
        first = result.errors[0]
        key = str(first.path[0]) if first.path else None
        raise ConfigError("Invalid scenario config: " + result.format_errors(), key=key)
    normalized = dict(result.normalized_data)
    normalized["active_users"] = tuple(normalized["active_users"])
    return ScenarioConfig(**normalized)


# ================== Config locators =================


class BaseConfigLoader(metaclass=ABCMeta):
    LOCATOR_PREFIX_DELIMITER = ":"
    PREFIX: str

    @classmethod
    def can_handle(cls, locator: str) -> bool:
        return locator.startswith(cls.PREFIX + cls.LOCATOR_PREFIX_DELIMITER)

    @classmethod
    def _remove_locator_prefix(cls, locator: str) -> str:
        return locator.replace(cls.PREFIX + cls.LOCATOR_PREFIX_DELIMITER, "", 1)

    @abstractmethod
    def read(self, locator: str) -> Dict[str, Any]:
        raise NotImplementedError

    @classmethod
    def _read_json(cls, path: str, locator: str) -> Dict[str, Any]:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError("Config {} not found".format(locator)) from e
        except (OSError, ValueError) as e:
            raise ConfigError("Config {} is not a valid JSON document: {}".format(locator, e)) from e
        if not isinstance(data, dict):
            raise ConfigError("Config {} must contain a JSON object".format(locator))
        return data


class ConfigLoaderRegistry(object):
    def __init__(self) -> None:
        super().__init__()
        self.__registry: List[BaseConfigLoader] = []
        self.__fallback: Optional[BaseConfigLoader] = None

    def register(self, loader_cls: Type[BaseConfigLoader]) -> Type[BaseConfigLoader]:
        self.__registry.append(loader_cls())
        return loader_cls

    def set_fallback(self, loader_cls: Type[BaseConfigLoader]) -> Type[BaseConfigLoader]:
        self.__fallback = loader_cls()
        return loader_cls

    def get_for_locator(self, locator: str) -> Optional[BaseConfigLoader]:
        for x in self.__registry:
            if x.can_handle(locator):
                return x
        return self.__fallback

    def read_raw(self, locator: str, _seen: Tuple[str, ...] = ()) -> Dict[str, Any]:
        """Raw document in field units with every ``extends`` chain resolved."""
        if locator in _seen:
            raise ConfigError("Config inheritance cycle: {}".format(" -> ".join(_seen + (locator,))))
        loader = self.get_for_locator(locator)
        if loader is None:
            raise ConfigError("Config locator {} is not supported".format(locator))
        data = normalize_units(loader.read(locator))
        parent = data.pop(EXTENDS_KEY, None)
        if parent is None:
            return data
        _LOGGER.debug("Config {} extends {}".format(locator, parent))
        merged = self.read_raw(str(parent), _seen + (locator,))
        merged.update(data)
        return merged

    def load(self, locator: str, **overrides) -> ScenarioConfig:
        data = self.read_raw(locator)
        data.update(normalize_units(overrides))
        config = parse_config(data)
        _LOGGER.debug("Loaded config {} (fingerprint {})".format(locator, config.fingerprint()))
        return config


DefaultConfigLoaderRegistry = ConfigLoaderRegistry()


@DefaultConfigLoaderRegistry.set_fallback
@DefaultConfigLoaderRegistry.register
class FileConfigLoader(BaseConfigLoader):
    PREFIX = "file"

    def read(self, locator: str) -> Dict[str, Any]:
        path = self._remove_locator_prefix(locator) if self.can_handle(locator) else locator
        name, ext = os.path.splitext(path)
        if (
            not os.path.exists(path)
            and ext == ".json"
            and os.path.basename(path) == path
            and name in PresetConfigLoader.available_presets()
        ):
            _LOGGER.debug("Config file {} not found, using the bundled preset {}".format(path, name))
            path = os.path.join(PRESETS_DIR, path)
        return self._read_json(path, locator)


@DefaultConfigLoaderRegistry.register
class PresetConfigLoader(BaseConfigLoader):
    PREFIX = "preset"

    @classmethod
    def available_presets(cls) -> List[str]:
        return sorted(os.path.splitext(x)[0] for x in os.listdir(PRESETS_DIR) if x.endswith(".json"))

    def read(self, locator: str) -> Dict[str, Any]:
        name = self._remove_locator_prefix(locator)
        if name not in self.available_presets():
            raise ConfigError(
                "Unknown preset '{}'".format(name),
                fix_hint="Available presets: {}".format(", ".join(self.available_presets())),
            )
        return self._read_json(os.path.join(PRESETS_DIR, name + ".json"), locator)


def load_config(locator: Union[str, os.PathLike], **overrides) -> ScenarioConfig:
    return DefaultConfigLoaderRegistry.load(os.fspath(locator), **overrides)
