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

from typing import Optional, Any


class FixHintMixin:
    def __init__(self) -> None:
        self.fix_hint: Optional[str] = None

    @staticmethod
    def supports_fix_hint(obj: Any) -> bool:
        if obj is None:
            return False
        return hasattr(obj, "fix_hint")


class RisLabError(Exception, FixHintMixin):
    """
    Base class for all errors raised by the simulator.
    The CLI maps ``exit_code`` to the process exit status.
    """

    exit_code = 1

    def __init__(self, msg, *args, fix_hint: Optional[str] = None) -> None:
        super().__init__(msg, *args)
        self.fix_hint = fix_hint


class ConfigError(RisLabError):
    exit_code = 2

    def __init__(self, msg, *args, key: Optional[str] = None, fix_hint: Optional[str] = None) -> None:
        super().__init__(msg, *args, fix_hint=fix_hint)
        self.key = key


class SingularGram(RisLabError):
    """The K x K Gram matrix of the composite channel can't be inverted reliably."""

    exit_code = 3

    def __init__(self, condition: float, limit: float) -> None:
        super().__init__(
            "Gram matrix is singular (condition estimate {:.3g} exceeds {:.3g})".format(condition, limit),
            fix_hint="Users are likely co-located or the composite channel vanished; check the user set and geometry",
        )
        self.condition = condition
        self.limit = limit


class FormatError(RisLabError):
    exit_code = 2


class DimensionMismatch(RisLabError):
    exit_code = 4

    def __init__(self, field: str, expected: Any, actual: Any) -> None:
        super().__init__(
            "Codebook {} is {} but the scenario expects {}".format(field, actual, expected),
            fix_hint="Regenerate the codebook with the same scenario config",
        )
        self.field = field
        self.expected = expected
        self.actual = actual


class CodewordGenerationError(RisLabError):
    exit_code = 3

    def __init__(self, q: int, reason: str) -> None:
        super().__init__("Unable to generate codeword q={}: {}".format(q, reason))
        self.q = q


class AllBlocksInvalid(RisLabError):
    exit_code = 3

    def __init__(self, num_blocks: int) -> None:
        super().__init__("All {} training blocks are invalid, no codeword can be selected".format(num_blocks))
        self.num_blocks = num_blocks


class InvalidOverhead(RisLabError):
    exit_code = 2

    def __init__(self, tau: float, coherence_time: float) -> None:
        super().__init__(
            "Pilot overhead {} slots exceeds the coherence time of {} slots".format(tau, coherence_time)
        )
        self.tau = tau
        self.coherence_time = coherence_time


class TrialError(RisLabError):
    exit_code = 3

    def __init__(self, sweep_value: Any, scheme: str, trial: int, reason: str) -> None:
        super().__init__(
            "Trial {} of scheme '{}' at sweep value {} failed: {}".format(trial, scheme, sweep_value, reason)
        )
        self.sweep_value = sweep_value
        self.scheme = scheme
        self.trial = trial


class AcceptanceViolation(RisLabError):
    exit_code = 5
