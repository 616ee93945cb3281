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
Online stage: every training block the RIS holds one codeword while the users send orthogonal uplink pilots.
The BS estimates the composite channel by least squares, builds a ZF precoder from the estimate and finally keeps
the codeword with the highest predicted sum rate.
"""
import dataclasses
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .channel import ChannelRealization, composite_matrix
from .codebook import Codebook, Codeword
from .config import ScenarioConfig
from .exception import AllBlocksInvalid, SingularGram
from .numerics import RngStream
from .precoding import PowerAllocation, fixed_allocation, sinr_rates, water_fill, zf_diagonal, zf_precode, zf_sum_rate

_LOGGER = logging.getLogger("ris.training")


def pilot_matrix(k: int) -> np.ndarray:
    """K x K DFT pilot matrix, X[k, t] = exp(-j 2 pi k t / K); X X^H = K I."""
    if k < 1:
        raise ValueError("Pilot length must be positive, got {}".format(k))
    idx = np.arange(k)
    x = np.exp(-2j * np.pi * np.outer(idx, idx) / k)
    # snaps values like -1 - 1.2e-16j onto the axes
    return np.round(x.real, 15) + 1j * np.round(x.imag, 15)


def uplink_receive(h: np.ndarray, x: np.ndarray, p_ul: float, sigma_z2: float, stream: RngStream) -> np.ndarray:
    """Y = sqrt(P_ul) H X + Z with Z CSCG of variance sigma_z^2."""
    signal = math.sqrt(p_ul) * (h @ x)
    if sigma_z2 == 0:
        return signal
    return signal + stream.cscg(signal.shape, sigma_z2)


def ls_estimate(y: np.ndarray, x: np.ndarray, p_ul: float, k: Optional[int] = None) -> np.ndarray:
    """H_est = Y X^H / (K sqrt(P_ul))."""
    if p_ul <= 0:
        raise ValueError("Uplink pilot power must be positive, got {}".format(p_ul))
    k = x.shape[0] if k is None else k
    return (y @ x.conj().T) / (k * math.sqrt(p_ul))


def ls_error_variance(config: ScenarioConfig) -> float:
    """Per-entry variance of H_est - H: sigma_z^2 / (K P_ul)."""
    return config.sigma_z2 / (config.K * config.P_ul)


def training_slots(q: int, k: int) -> int:
    """Pilot overhead tau: Q blocks of K pilot slots."""
    return q * k


@dataclasses.dataclass(frozen=True, eq=False)
class BlockEstimate:
    q: int
    h_est: np.ndarray
    precoder: Optional[np.ndarray]
    allocation: Optional[PowerAllocation]
    predicted_rate: float

    @property
    def valid(self) -> bool:
        return self.precoder is not None


@dataclasses.dataclass(frozen=True, eq=False)
class TrainingOutcome:
    selected_q: int
    predicted_rate: float
    block_rates: Tuple[float, ...]
    realized_rate: Optional[float] = None
    received_powers: Optional[np.ndarray] = None
    precoder: Optional[np.ndarray] = None
    training_slots: int = 0


def _invalid_block(q: int, h_est: np.ndarray, reason: str) -> BlockEstimate:
    _LOGGER.warning("Training block {} is invalid: {}".format(q, reason))
    return BlockEstimate(q=q, h_est=h_est, precoder=None, allocation=None, predicted_rate=0.0)


def evaluate_block(
    true_channels: ChannelRealization,
    codeword: Codeword,
    config: ScenarioConfig,
    noise_on: bool,
    stream: RngStream,
    q: int = 1,
) -> BlockEstimate:
    """
    Pilot reception, LS estimation and online ZF for one training block.

    Stored transmit powers are divided by the online ZF diagonals; codewords without stored powers
    are water-filled on the estimated channel.
    """
    if codeword.phase_indices.size != config.N:
        raise ValueError("Codeword has {} phases, scenario has N={}".format(codeword.phase_indices.size, config.N))
    h_q = composite_matrix(true_channels, codeword.phase_indices, config.b)
    if noise_on:
        x = pilot_matrix(config.K)
        y = uplink_receive(h_q, x, config.P_ul, config.sigma_z2, stream)
        h_est = ls_estimate(y, x, config.P_ul, config.K)
    else:
        h_est = h_q.copy()
    try:
        u = zf_diagonal(h_est, config.gram_condition_limit)
    except SingularGram as e:
        return _invalid_block(q, h_est, str(e))
    if np.any(u <= 0):
        return _invalid_block(q, h_est, "non-positive ZF diagonal")
    if codeword.has_power_allocation:
        if codeword.power_allocation.size != config.K:
            raise ValueError(
                "Codeword stores {} powers, scenario has K={}".format(codeword.power_allocation.size, config.K)
            )
        alloc = fixed_allocation(codeword.power_allocation, u)
    else:
        alloc = water_fill(u, config.sigma_k2, config.P_d)
    precoder = zf_precode(h_est, alloc.received, config.gram_condition_limit)
    rate = zf_sum_rate(alloc, config.sigma_k2)
    _LOGGER.debug("Block {}: predicted {:.4f} bps/Hz".format(q, rate))
    return BlockEstimate(q=q, h_est=h_est, precoder=precoder, allocation=alloc, predicted_rate=rate)


def select_codeword(blocks: Sequence[BlockEstimate]) -> TrainingOutcome:
    """Highest predicted rate among valid blocks, ties resolved to the lowest block index."""
    best: Optional[BlockEstimate] = None
    for block in blocks:
        if block.valid and (best is None or block.predicted_rate > best.predicted_rate):
            best = block
    if best is None:
        raise AllBlocksInvalid(len(blocks))
    return TrainingOutcome(
        selected_q=best.q,
        predicted_rate=best.predicted_rate,
        block_rates=tuple(x.predicted_rate for x in blocks),
        precoder=best.precoder,
        training_slots=training_slots(len(blocks), best.h_est.shape[1]),
    )


def evaluate_blocks(
    true_channels: ChannelRealization,
    codebook: Codebook,
    config: ScenarioConfig,
    noise_on: bool,
    stream: RngStream,
) -> List[BlockEstimate]:
    """Every block reads its own child stream, so block q sees the same noise in any codebook."""
    return [
        evaluate_block(true_channels, cw, config, noise_on, stream.derive(q), q)
        for q, cw in enumerate(codebook.entries, start=1)
    ]


def _realized(true_channels: ChannelRealization, codeword: Codeword, precoder: np.ndarray, config: ScenarioConfig):
    h_true = composite_matrix(true_channels, codeword.phase_indices, config.b)
    received = np.abs(np.sum(h_true.conj() * precoder, axis=0)) ** 2
    return float(np.sum(sinr_rates(h_true, precoder, config.sigma_k2))), received


def run_training_epoch(
    true_channels: ChannelRealization,
    codebook: Codebook,
    config: ScenarioConfig,
    noise_on: bool,
    stream: RngStream,
) -> TrainingOutcome:
    """Full online stage; the realized rate applies the selected precoder to the true channel."""
    blocks = evaluate_blocks(true_channels, codebook, config, noise_on, stream)
    outcome = select_codeword(blocks)
    realized, received = _realized(
        true_channels, codebook.entries[outcome.selected_q - 1], outcome.precoder, config  # type: ignore
    )
    return dataclasses.replace(outcome, realized_rate=realized, received_powers=received)


@dataclasses.dataclass(frozen=True)
class GenieOutcome:
    selected_q: int
    realized_rate: float


def genie_select(
    true_channels: ChannelRealization,
    codebook: Codebook,
    config: ScenarioConfig,
    noise_on: bool,
    stream: RngStream,
) -> GenieOutcome:
    """Selects by realized rate under the true channel, with the same estimates the epoch would see."""
    blocks = evaluate_blocks(true_channels, codebook, config, noise_on, stream)
    best: Optional[GenieOutcome] = None
    for block, cw in zip(blocks, codebook.entries):
        if not block.valid:
            continue
        rate, _ = _realized(true_channels, cw, block.precoder, config)  # type: ignore
        if best is None or rate > best.realized_rate:
            best = GenieOutcome(selected_q=block.q, realized_rate=rate)
    if best is None:
        raise AllBlocksInvalid(len(blocks))
    return best
