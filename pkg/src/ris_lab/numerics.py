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
Complex linear algebra helpers, reproducible random streams and order statistics shared by the simulator.
"""
import math
from typing import Tuple, Union

import numpy as np

from .exception import SingularGram

EULER_MASCHERONI = float(np.euler_gamma)
DEFAULT_CONDITION_LIMIT = 1e12

_U64 = (1 << 64) - 1
LINK_BITS = 16

Shape = Union[int, Tuple[int, ...]]


def trial_stream_id(trial: int, link: int) -> int:
    if not 0 <= link < (1 << LINK_BITS):
        raise ValueError("Link index must fit into {} bits".format(LINK_BITS))
    return (trial << LINK_BITS) + link


class RngStream(object):
    """
    Deterministic random stream identified by (seed, stream_id).

    Backed by numpy's SeedSequence + PCG64 so that the draw sequence depends only on the identifiers,
    never on the order in which streams are created or on the thread that consumes them.
    A stream must have a single owner; parallel code derives children instead of sharing one.
    """

    def __init__(self, seed: int, stream_id: int = 0, path: Tuple[int, ...] = ()) -> None:
        self.seed = int(seed) & _U64
        self.stream_id = int(stream_id) & _U64
        self.path = tuple(int(x) & _U64 for x in path)
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,) + self.path)
        self.generator = np.random.Generator(np.random.PCG64(seq))

    @classmethod
    def for_trial(cls, seed: int, trial: int, link: int) -> "RngStream":
        return cls(seed, trial_stream_id(trial, link))

    def derive(self, *coords: int) -> "RngStream":
        """Child stream addressed by coordinates relative to this one."""
        return RngStream(self.seed, self.stream_id, self.path + tuple(coords))

    def derive_seed(self, *coords: int) -> int:
        """A 63-bit integer seed derived from this stream's identity and the coordinates."""
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,) + self.path + tuple(coords))
        return int(seq.generate_state(1, dtype=np.uint64)[0]) >> 1

    def cscg(self, shape: Shape, variance: float = 1.0) -> np.ndarray:
        return sample_cscg(self, shape, variance)

    def integers(self, low: int, high: int, size: Shape) -> np.ndarray:
        return self.generator.integers(low, high, size=size, dtype=np.int64)

    def exponential(self, size: Shape) -> np.ndarray:
        return self.generator.standard_exponential(size=size)

    def first_u64(self) -> int:
        """First raw 64-bit output of a fresh stream with the same identity."""
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,) + self.path)
        return int(np.random.PCG64(seq).random_raw())

    def __repr__(self) -> str:
        return "RngStream<seed={}, id={}, path={}>".format(self.seed, self.stream_id, self.path)


def sample_cscg(stream: RngStream, n: Shape, variance: float) -> np.ndarray:
    """
    Circularly symmetric complex Gaussian draws: real and imaginary parts are independent
    with variance/2 each.
    """
    if variance < 0:
        raise ValueError("Variance must be non-negative, got {}".format(variance))
    scale = math.sqrt(variance / 2.0)
    real = stream.generator.standard_normal(size=n)
    imag = stream.generator.standard_normal(size=n)
    return scale * (real + 1j * imag)


def _as_matrix(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim == 1:
        h = h.reshape(-1, 1)
    if h.ndim != 2 or h.shape[0] < 1 or h.shape[1] < 1:
        raise ValueError("Expected a non-empty matrix, got shape {}".format(h.shape))
    if h.shape[1] > h.shape[0]:
        raise ValueError("Zero-forcing needs K <= M, got M={} K={}".format(*h.shape))
    return h


def gram_condition(gram: np.ndarray) -> np.ndarray:
    """Condition number of Hermitian PSD Gram matrices (batched over leading axes); inf when singular."""
    eig = np.linalg.eigvalsh(gram)
    lo = eig[..., 0]
    hi = eig[..., -1]
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(lo > 0, hi / np.where(lo > 0, lo, 1.0), np.inf)
    return cond


def _checked_gram(h: np.ndarray, condition_limit: float) -> np.ndarray:
    gram = h.conj().T @ h
    cond = float(gram_condition(gram))
    if not cond <= condition_limit:
        raise SingularGram(cond, condition_limit)
    return gram


def gram_inverse(h: np.ndarray, condition_limit: float = DEFAULT_CONDITION_LIMIT) -> np.ndarray:
    """(H^H H)^{-1} for an M x K matrix with K <= M."""
    h = _as_matrix(h)
    gram = _checked_gram(h, condition_limit)
    return np.linalg.solve(gram, np.eye(gram.shape[0], dtype=complex))


def gram_pseudo_inverse(h: np.ndarray, condition_limit: float = DEFAULT_CONDITION_LIMIT) -> np.ndarray:
    """H (H^H H)^{-1}: the right inverse of H^H, i.e. H^H W0 = I_K."""
    h = _as_matrix(h)
    gram = _checked_gram(h, condition_limit)
    # gram is Hermitian, so (gram^{-1} H^H)^H = H gram^{-1}
    return np.linalg.solve(gram, h.conj().T).conj().T


def is_gram_regular(h: np.ndarray, condition_limit: float = DEFAULT_CONDITION_LIMIT) -> bool:
    h = _as_matrix(h)
    return bool(gram_condition(h.conj().T @ h) <= condition_limit)


def batched_inverse_gram_diagonal(h_rows: np.ndarray, condition_limit: float = DEFAULT_CONDITION_LIMIT):
    """
    Diagonals of (H^H H)^{-1} for a batch of composite channels.

    :param h_rows: array (..., K, M) holding the downlink rows h_k^H of every candidate
    :return: tuple (u, valid) with u of shape (..., K) and a boolean mask of regular candidates.
             Entries of u for irregular candidates are undefined.
    """
    gram = np.einsum("...km,...lm->...kl", h_rows, h_rows.conj())
    valid = gram_condition(gram) <= condition_limit
    safe = np.where(valid[..., None, None], gram, np.eye(gram.shape[-1]))
    u = np.real(np.diagonal(np.linalg.inv(safe), axis1=-2, axis2=-1))
    return u, valid


def harmonic_number(q: int) -> float:
    """Exact H_Q = sum_{j=1..Q} 1/j, the mean of the largest of Q i.i.d. unit exponentials."""
    if q < 1:
        raise ValueError("Q must be positive, got {}".format(q))
    return math.fsum(1.0 / np.arange(1, q + 1, dtype=float))


def exponential_max_mean(stream: RngStream, q: int, repetitions: int, chunk: int = 10000) -> float:
    """Monte Carlo mean of max(X_1..X_Q) with X_i i.i.d. unit exponentials."""
    if q < 1 or repetitions < 1:
        raise ValueError("Q and repetitions must be positive")
    total = 0.0
    done = 0
    while done < repetitions:
        size = min(chunk, repetitions - done)
        total += float(stream.exponential((size, q)).max(axis=1).sum())
        done += size
    return total / repetitions
