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

import copy
import math
import re

import voluptuous as vol

from .domain import ValidationResult

# The validator style below follows the ESPHome config validation module
# (https://github.com/esphome/esphome, MIT license), narrowed to physical quantities.

Schema = vol.Schema
All = vol.All
Range = vol.Range
Invalid = vol.Invalid
MultipleInvalid = vol.MultipleInvalid
Any = vol.Any
Length = vol.Length
Exclusive = vol.Exclusive
PREVENT_EXTRA = vol.PREVENT_EXTRA
Optional = vol.Optional
Required = vol.Required

_NUMBER = r"([-+]?(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?)"

METRIC_SUFFIXES = {
    "k": 1e3,
    "": 1,
    "m": 1e-3,
    "µ": 1e-6,
    "u": 1e-6,
    "n": 1e-9,
    "p": 1e-12,
}


def string(value):
    if isinstance(value, (dict, list)):
        raise Invalid("string value cannot be dictionary or list.")
    if isinstance(value, bool):
        raise Invalid("Auto-converted this value to boolean, please wrap the value in quotes.")
    if isinstance(value, str):
        return value
    if value is not None:
        return str(value)
    raise Invalid("string value is None")


def boolean(value):
    """Accepts booleans, 'true'/'false', 'yes'/'no', 'on'/'off' and 0/1."""
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        value = value.lower()
        if value in ("true", "yes", "on", "enable", "1"):
            return True
        if value in ("false", "no", "off", "disable", "0"):
            return False
    if isinstance(value, int):
        if value == 0:
            return False
        if value == 1:
            return True
    raise Invalid("Expected boolean value, but cannot convert {} to a boolean. Please use 'on' or 'off'".format(value))


def int_(value):
    if isinstance(value, bool):
        raise Invalid("Expected integer, but got boolean {}".format(value))
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if value.is_integer():
            return int(value)
        raise Invalid("This option only accepts integers, got {}".format(value))
    value = string(value).strip()
    try:
        return int(value, 0)
    except ValueError:
        raise Invalid("Expected integer, but cannot parse {} as an integer".format(value))


def float_(value):
    if isinstance(value, bool):
        raise Invalid("Expected number, but got boolean {}".format(value))
    try:
        res = float(value)
    except (TypeError, ValueError):
        raise Invalid("Expected number, got {}".format(value))
    if not math.isfinite(res):
        raise Invalid("Expected finite number, got {}".format(value))
    return res


positive_int = All(int_, Range(min=1))
non_negative_int = All(int_, Range(min=0))
positive_float = All(float_, Range(min=0, min_included=False))
non_negative_float = All(float_, Range(min=0))


def _quantity(value, quantity: str, pattern: re.Pattern, converter):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float_(value)
    str_value = string(value).strip()
    match = pattern.match(str_value)
    if match is None:
        raise Invalid("Expected {} as a number or a number with unit, got {}".format(quantity, value))
    return converter(float(match.group(1)), match.group(2))


_POWER_RE = re.compile(r"^" + _NUMBER + r"\s*(dBm|dBW|[kmµunp]?W)?$", re.UNICODE)
_GAIN_RE = re.compile(r"^" + _NUMBER + r"\s*(dB)?$", re.UNICODE)
_DISTANCE_RE = re.compile(r"^" + _NUMBER + r"\s*(k?m)?$", re.UNICODE)


def _power_to_watts(mantissa: float, unit):
    if unit == "dBm":
        return 10 ** ((mantissa - 30) / 10)
    if unit == "dBW":
        return 10 ** (mantissa / 10)
    if unit is None:
        return mantissa
    return mantissa * METRIC_SUFFIXES[unit[:-1]]


def power(value):
    """Power in watts. Numbers are watts, strings may carry W, mW, dBm or dBW."""
    return _quantity(value, "power", _POWER_RE, _power_to_watts)


def gain(value):
    """Linear gain. Numbers are linear, strings may carry a dB suffix."""
    return _quantity(value, "gain", _GAIN_RE, lambda v, unit: 10 ** (v / 10) if unit == "dB" else v)


def distance(value):
    """Distance in meters, optionally with m or km suffix."""
    return _quantity(value, "distance", _DISTANCE_RE, lambda v, unit: v * 1e3 if unit == "km" else v)


def db_to_linear(value):
    return 10 ** (float_(value) / 10)


def dbm_to_watts(value):
    return 10 ** ((float_(value) - 30) / 10)


positive_power = All(power, Range(min=0, min_included=False))
positive_distance = All(distance, Range(min=0, min_included=False))
non_negative_gain = All(gain, Range(min=0))


def ensure_list(*validators):
    """Validate this configuration option to be a list.
    A scalar is converted to a single-item list, None to an empty list.
    """
    user = All(*validators)
    list_schema = Schema([user])

    def validator(value):
        if value is None:
            return []
        if not isinstance(value, list):
            return [user(value)]
        return list_schema(value)

    return validator


def strictly_increasing(value):
    for a, b in zip(value, value[1:]):
        if not b > a:
            raise Invalid("Values must be strictly increasing, got {} before {}".format(a, b))
    return value


def unique_sorted(value):
    if len(set(value)) != len(value):
        raise Invalid("Values must be unique, got {}".format(value))
    return sorted(value)


def one_of(*values, lower=False):
    options = ", ".join("'{}'".format(x) for x in values)

    def validator(value):
        if lower:
            value = string(value).lower()
        if value not in values:
            import difflib

            matches = difflib.get_close_matches(str(value), [str(x) for x in values])
            if matches:
                raise Invalid(
                    "Unknown value '{}', did you mean {}?".format(value, ", ".join("'{}'".format(x) for x in matches))
                )
            raise Invalid("Unknown value '{}', valid options are {}.".format(value, options))
        return value

    return validator


def number_list(item_validator):
    """Comma separated string or list of values, each validated with item_validator."""

    def validator(value):
        if isinstance(value, str):
            value = [x for x in (s.strip() for s in value.split(",")) if x]
        if not isinstance(value, (list, tuple)) or len(value) == 0:
            raise Invalid("Expected a non-empty list of values")
        return [item_validator(x) for x in value]

    return validator


def ensure_schema(schema) -> vol.Schema:
    if not isinstance(schema, vol.Schema):
        return Schema(schema)
    return schema


def validate_and_normalize(obj, schema, raise_on_error=True) -> ValidationResult:
    schema = ensure_schema(schema)
    result = ValidationResult(copy.deepcopy(obj))
    try:
        result.normalized_data = schema(obj)
    except MultipleInvalid as e:
        if raise_on_error:
            raise e
        result.error = e
    except Invalid as e:
        if raise_on_error:
            raise MultipleInvalid([e])
        result.error = MultipleInvalid([e])
    return result
