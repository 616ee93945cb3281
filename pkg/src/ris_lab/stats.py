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

import math
import time
from typing import Optional, Sequence

import numpy as np


class ExecutionTimer(object):
    def __init__(self, start=True) -> None:
        self.__start_time: Optional[float] = None
        self.__end_time: Optional[float] = None
        if start:
            self.start()

    def start(self):
        self.__start_time = time.perf_counter()
        self.__end_time = None

    def stop(self):
        self.__end_time = time.perf_counter()

    @property
    def is_running(self):
        return self.__start_time is not None and self.__end_time is None

    @property
    def is_finished(self):
        return self.__start_time is not None and self.__end_time is not None

    @property
    def elapsed(self) -> Optional[float]:
        if self.is_finished:
            return self.__end_time - self.__start_time  # type: ignore
        if self.is_running:
            return time.perf_counter() - self.__start_time  # type: ignore
        else:
            return None

    def format_elapsed(self):
        val = self.elapsed
        if val is None:
            return "n/a"
        else:
            return "{}s".format(round(val, 2))


class RunningMoments(object):
    """
    Count, sum and sum of squares of a sample.
    Merging is associative so partial results may be reduced in any grouping; feed values in a fixed
    order when bit-identical output matters.
    """

    def __init__(self) -> None:
        self.count = 0
        self.total = 0.0
        self.total_sq = 0.0

    def add(self, value: float) -> "RunningMoments":
        self.count += 1
        self.total += value
        self.total_sq += value * value
        return self

    def extend(self, values: Sequence[float]) -> "RunningMoments":
        for x in values:
            self.add(float(x))
        return self

    def merge(self, other: "RunningMoments") -> "RunningMoments":
        self.count += other.count
        self.total += other.total
        self.total_sq += other.total_sq
        return self

    def scaled(self, factor: float) -> "RunningMoments":
        res = RunningMoments()
        res.count = self.count
        res.total = self.total * factor
        res.total_sq = self.total_sq * factor * factor
        return res

    @property
    def mean(self) -> float:
        if self.count == 0:
            return math.nan
        return self.total / self.count

    @property
    def variance(self) -> float:
        """Unbiased sample variance, 0 for fewer than two samples."""
        if self.count < 2:
            return 0.0
        var = (self.total_sq - self.total * self.total / self.count) / (self.count - 1)
        return max(var, 0.0)

    @property
    def stderr(self) -> float:
        if self.count == 0:
            return math.nan
        return math.sqrt(self.variance / self.count)

    def __repr__(self) -> str:
        return "RunningMoments<n={}, mean={:.6g}, se={:.3g}>".format(self.count, self.mean, self.stderr)


# one-sided standard normal quantiles
_Z_ONE_SIDED = {0.90: 1.2815515655446004, 0.95: 1.6448536269514722, 0.99: 2.3263478740408408}


def paired_confidence(a: Sequence[float], b: Sequence[float], level: float = 0.95) -> bool:
    """
    One-sided paired test: True when mean(a - b) > 0 at the given confidence level
    (normal approximation, meant for a few hundred pairs or more).
    """
    diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
    if diff.size < 2:
        raise ValueError("At least two pairs are required")
    se = diff.std(ddof=1) / math.sqrt(diff.size)
    if se == 0.0:
        return bool(diff.mean() > 0)
    return bool(diff.mean() / se > _Z_ONE_SIDED[level])
