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
Zero-forcing precoding, water-filling power allocation and sum-rate evaluation.
"""
import dataclasses
from typing import Union

import numpy as np

from .numerics import DEFAULT_CONDITION_LIMIT, gram_inverse, gram_pseudo_inverse

NoisePower = Union[float, np.ndarray]


@dataclasses.dataclass(frozen=True, eq=False)
class PowerAllocation:
    """
    ``transmit`` holds the per-user transmit powers p_bar_k, ``received`` the received powers
    p_k = p_bar_k / u_k with u_k the k-th diagonal entry of (H^H H)^{-1}.
    """

    transmit: np.ndarray
    received: np.ndarray
    water_level: float

    @property
    def total_power(self) -> float:
        return float(np.sum(self.transmit))

    @property
    def active(self) -> np.ndarray:
        return self.transmit > 0


def _per_user(value: NoisePower, k: int) -> np.ndarray:
    return np.broadcast_to(np.asarray(value, dtype=float), (k,))


def water_fill(u: np.ndarray, sigma2: NoisePower, p_d: float) -> PowerAllocation:
    """
    Exact water-filling: p_bar_k = max(level - sigma_k^2 u_k, 0) with sum(p_bar) = p_d.

    The floors sigma_k^2 u_k are sorted ascending and the largest active set whose
    level stays above its highest floor is kept.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("Expected a non-empty vector of ZF diagonals, got shape {}".format(u.shape))
    if np.any(u <= 0):
        raise ValueError("ZF diagonals must be positive, got {}".format(u))
    if p_d <= 0:
        raise ValueError("Power budget must be positive, got {}".format(p_d))
    floors = _per_user(sigma2, u.size) * u
    ordered = np.sort(floors)
    cumulative = np.cumsum(ordered)
    # a single active user always fits
    level = p_d + ordered[0]
    for active in range(u.size, 1, -1):
        candidate = (p_d + cumulative[active - 1]) / active
        if candidate > ordered[active - 1]:
            level = candidate
            break
    transmit = np.maximum(level - floors, 0.0)
    return PowerAllocation(transmit=transmit, received=transmit / u, water_level=float(level))


def fixed_allocation(transmit: np.ndarray, u: np.ndarray) -> PowerAllocation:
    """Received powers for a stored transmit allocation evaluated on a new channel."""
    transmit = np.asarray(transmit, dtype=float)
    u = np.asarray(u, dtype=float)
    if transmit.shape != u.shape:
        raise ValueError("Allocation has {} users, channel has {}".format(transmit.size, u.size))
    return PowerAllocation(transmit=transmit, received=transmit / u, water_level=float("nan"))


def zf_diagonal(h: np.ndarray, condition_limit: float = DEFAULT_CONDITION_LIMIT) -> np.ndarray:
    """u_k: diagonal of (H^H H)^{-1} for an M x K channel H."""
    return np.real(np.diagonal(gram_inverse(h, condition_limit)))


def zf_precode(
    h: np.ndarray, received_powers: np.ndarray, condition_limit: float = DEFAULT_CONDITION_LIMIT
) -> np.ndarray:
    """W = H (H^H H)^{-1} P^{1/2}, so that H^H W = diag(sqrt(p_k))."""
    w0 = gram_pseudo_inverse(h, condition_limit)
    return w0 * np.sqrt(np.asarray(received_powers, dtype=float))[None, :]


def zf_water_fill(
    h: np.ndarray, sigma2: NoisePower, p_d: float, condition_limit: float = DEFAULT_CONDITION_LIMIT
) -> PowerAllocation:
    return water_fill(zf_diagonal(h, condition_limit), sigma2, p_d)


def zf_rates(alloc: PowerAllocation, sigma2: NoisePower) -> np.ndarray:
    received = np.asarray(alloc.received, dtype=float)
    return np.log2(1.0 + received / _per_user(sigma2, received.size))


def zf_sum_rate(alloc: PowerAllocation, sigma2: NoisePower) -> float:
    return float(np.sum(zf_rates(alloc, sigma2)))


def sinr_rates(h_true: np.ndarray, w: np.ndarray, sigma2: NoisePower) -> np.ndarray:
    """Per-user log2(1 + SINR) of precoder W applied to the channel H (both M x K)."""
    h_true = np.asarray(h_true, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if h_true.shape != w.shape:
        raise ValueError("Channel {} and precoder {} shapes differ".format(h_true.shape, w.shape))
    gains = np.abs(h_true.conj().T @ w) ** 2
    signal = np.diagonal(gains)
    interference = gains.sum(axis=1) - signal
    return np.log2(1.0 + signal / (interference + _per_user(sigma2, signal.size)))


def sinr_sum_rate(h_true: np.ndarray, w: np.ndarray, sigma2: NoisePower) -> float:
    return float(np.sum(sinr_rates(h_true, w, sigma2)))
