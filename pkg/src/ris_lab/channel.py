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
Statistical CSI and fading realizations of the BS-RIS, RIS-user and BS-user links.

Coordinates (meters): the BS sits at (0, 0, h_BS) with its ULA along the z axis, the RIS at (d_BR, 0, h_R)
with its planar array in the y-z plane, and user k at (d_BR - (8 - k) * d_1, d_0, h_U).

Channel vectors are stored as they appear in the model: ``h_r[k]`` is h_{r,k} (length N),
``h_d[k]`` is h_{d,k} (length M) and the composite downlink row of user k is
h_{r,k}^H diag(phi) G + h_{d,k}^H.
"""
import dataclasses
import logging
import math
from typing import Tuple

import numpy as np

from .config import MAX_USERS, ScenarioConfig
from .numerics import RngStream

_LOGGER = logging.getLogger("ris.channel")

LINK_G = 0
LINK_RIS_USER = 1
LINK_DIRECT = 2

# sin(gamma) hits 1 for points in the RIS plane; the open upper bound of the elevation domain
_GAMMA_MAX = float(np.nextafter(math.pi / 2, 0.0))


def path_loss(d: float, alpha: float, c0: float, d_m: float) -> float:
    if d <= 0:
        raise ValueError("Distance must be positive, got {}".format(d))
    return c0 * (d / d_m) ** (-alpha)


def ula_steering(delta: float, m: int, spacing: float) -> np.ndarray:
    return np.exp(1j * 2 * np.pi * spacing * math.sin(delta) * np.arange(m))


def upa_steering(zeta: float, gamma: float, n_x: int, n_y: int, spacing: float) -> np.ndarray:
    n = np.arange(n_x * n_y)
    row = n // n_x
    col = n % n_x
    phase = 2 * np.pi * spacing * math.sin(gamma) * (row * math.sin(zeta) + col * math.cos(zeta))
    return np.exp(1j * phase)


def phase_levels(b: int) -> np.ndarray:
    """The discrete phase set {0, 2pi/B, ..., 2pi(B-1)/B} with B = 2^b."""
    levels = 1 << b
    return 2 * np.pi * np.arange(levels) / levels


def phase_coefficients(indices: np.ndarray, b: int) -> np.ndarray:
    """Maps phase indices in [0, 2^b) to reflection coefficients e^{j theta}."""
    indices = np.asarray(indices)
    if indices.size and (indices.min() < 0 or indices.max() >= (1 << b)):
        raise ValueError("Phase indices must lie in [0, {}) for b={}".format(1 << b, b))
    return np.exp(1j * phase_levels(b)[indices])


@dataclasses.dataclass(frozen=True)
class GeometryAngles:
    delta_g: float
    zeta_g: float
    gamma_g: float
    delta_d: Tuple[float, ...]
    zeta_r: Tuple[float, ...]
    gamma_r: Tuple[float, ...]
    d_g: float
    d_r: Tuple[float, ...]
    d_d: Tuple[float, ...]


def bs_position(config: ScenarioConfig) -> np.ndarray:
    return np.array([0.0, 0.0, config.h_BS])


def ris_position(config: ScenarioConfig) -> np.ndarray:
    return np.array([config.d_BR, 0.0, config.h_R])


def user_position(config: ScenarioConfig, user: int) -> np.ndarray:
    if not 1 <= user <= MAX_USERS:
        raise ValueError("User index must be in [1, {}], got {}".format(MAX_USERS, user))
    return np.array([config.d_BR - (MAX_USERS - user) * config.d_1, config.d_0, config.h_U])


def _ula_angle(origin: np.ndarray, target: np.ndarray) -> float:
    diff = target - origin
    sin_delta = diff[2] / np.linalg.norm(diff)
    return min(math.asin(float(np.clip(sin_delta, -1.0, 1.0))), _GAMMA_MAX)


def _upa_angles(origin: np.ndarray, target: np.ndarray) -> Tuple[float, float]:
    """(zeta, gamma) of the direction origin -> target seen by an array in the y-z plane."""
    u = (target - origin) / np.linalg.norm(target - origin)
    in_plane = math.hypot(u[1], u[2])
    gamma = min(math.asin(min(in_plane, 1.0)), _GAMMA_MAX)
    zeta = math.atan2(u[2], u[1]) if in_plane > 0 else 0.0
    # keep zeta in [0, pi): (zeta + pi, -gamma) gives the same phase progression
    if zeta < 0:
        zeta += math.pi
        gamma = -gamma
    elif zeta >= math.pi:
        zeta -= math.pi
        gamma = -gamma
    return zeta, gamma


def derive_geometry(config: ScenarioConfig) -> GeometryAngles:
    bs = bs_position(config)
    ris = ris_position(config)
    zeta_g, gamma_g = _upa_angles(ris, bs)
    delta_d, zeta_r, gamma_r, d_r, d_d = [], [], [], [], []
    for user in config.active_users:
        pos = user_position(config, user)
        zeta, gamma = _upa_angles(ris, pos)
        zeta_r.append(zeta)
        gamma_r.append(gamma)
        delta_d.append(_ula_angle(bs, pos))
        d_r.append(float(np.linalg.norm(pos - ris)))
        d_d.append(float(np.linalg.norm(pos - bs)))
    return GeometryAngles(
        delta_g=_ula_angle(bs, ris),
        zeta_g=zeta_g,
        gamma_g=gamma_g,
        delta_d=tuple(delta_d),
        zeta_r=tuple(zeta_r),
        gamma_r=tuple(gamma_r),
        d_g=float(np.linalg.norm(ris - bs)),
        d_r=tuple(d_r),
        d_d=tuple(d_d),
    )


@dataclasses.dataclass(frozen=True, eq=False)
class StatisticalCsi:
    """LoS components, path losses and Rician factors: everything known offline."""

    G_los: np.ndarray
    h_r_los: np.ndarray
    h_d_los: np.ndarray
    beta_g: float
    beta_r: np.ndarray
    beta_d: np.ndarray
    F_g: float
    F_r: float
    F_d: float
    direct_link_blocked: bool = False
    bs_ris_los_only: bool = False

    @property
    def N(self) -> int:
        return self.G_los.shape[0]

    @property
    def M(self) -> int:
        return self.G_los.shape[1]

    @property
    def K(self) -> int:
        return self.h_r_los.shape[0]


def build_statistical_csi(config: ScenarioConfig) -> StatisticalCsi:
    geo = derive_geometry(config)
    a_bs = ula_steering(geo.delta_g, config.M, config.d_BS)
    a_ris = upa_steering(geo.zeta_g, geo.gamma_g, config.N_x, config.N_y, config.d_R)
    h_r_los = np.stack(
        [upa_steering(z, g, config.N_x, config.N_y, config.d_R) for z, g in zip(geo.zeta_r, geo.gamma_r)]
    )
    h_d_los = np.stack([ula_steering(d, config.M, config.d_BS) for d in geo.delta_d])
    csi = StatisticalCsi(
        G_los=np.outer(a_ris, a_bs.conj()),
        h_r_los=h_r_los,
        h_d_los=h_d_los,
        beta_g=path_loss(geo.d_g, config.alpha_g, config.C0, config.d_m),
        beta_r=np.array([path_loss(d, config.alpha_r, config.C0, config.d_m) for d in geo.d_r]),
        beta_d=np.array([path_loss(d, config.alpha_d, config.C0, config.d_m) for d in geo.d_d]),
        F_g=config.F_g,
        F_r=config.F_r,
        F_d=config.F_d,
        direct_link_blocked=config.direct_link_blocked,
        bs_ris_los_only=config.bs_ris_los_only,
    )
    _LOGGER.debug(
        "Statistical CSI: beta_g={:.4g}, beta_r={}, beta_d={}".format(csi.beta_g, csi.beta_r, csi.beta_d)
    )
    return csi


@dataclasses.dataclass(frozen=True, eq=False)
class ChannelRealization:
    G: np.ndarray
    h_r: np.ndarray
    h_d: np.ndarray

    @property
    def N(self) -> int:
        return self.G.shape[0]

    @property
    def M(self) -> int:
        return self.G.shape[1]

    @property
    def K(self) -> int:
        return self.h_r.shape[0]


def rician(los: np.ndarray, beta, factor: float, stream: RngStream) -> np.ndarray:
    """sqrt(beta) (sqrt(F/(F+1)) LoS + sqrt(1/(F+1)) NLoS) with unit-variance CSCG NLoS."""
    nlos = stream.cscg(los.shape)
    scale = np.sqrt(np.asarray(beta, dtype=float))
    if scale.ndim == 1:
        scale = scale[:, None]
    return scale * (math.sqrt(factor / (factor + 1.0)) * los + math.sqrt(1.0 / (factor + 1.0)) * nlos)


def sample_channel(csi: StatisticalCsi, stream: RngStream) -> ChannelRealization:
    """
    One fading draw. Each link reads its own child stream, so switching a link to LoS-only or
    blocking it leaves the draws of the other links unchanged.
    """
    if csi.bs_ris_los_only:
        g = math.sqrt(csi.beta_g) * csi.G_los
    else:
        g = rician(csi.G_los, csi.beta_g, csi.F_g, stream.derive(LINK_G))
    h_r = rician(csi.h_r_los, csi.beta_r, csi.F_r, stream.derive(LINK_RIS_USER))
    if csi.direct_link_blocked:
        h_d = np.zeros_like(csi.h_d_los)
    else:
        h_d = rician(csi.h_d_los, csi.beta_d, csi.F_d, stream.derive(LINK_DIRECT))
    return ChannelRealization(G=g, h_r=h_r, h_d=h_d)


def composite_channel(h_r: np.ndarray, phases: np.ndarray, g: np.ndarray, h_d: np.ndarray, b: int) -> np.ndarray:
    """Downlink row h^H = h_r^H diag(phi) G + h_d^H of one user, length M."""
    phi = phase_coefficients(phases, b)
    return (np.conj(h_r) * phi) @ g + np.conj(h_d)


def composite_rows(channels: ChannelRealization, phases: np.ndarray, b: int) -> np.ndarray:
    """K x M matrix whose k-th row is the composite downlink row of user k."""
    phi = phase_coefficients(phases, b)
    return (np.conj(channels.h_r) * phi[None, :]) @ channels.G + np.conj(channels.h_d)


def composite_matrix(channels: ChannelRealization, phases: np.ndarray, b: int) -> np.ndarray:
    """M x K matrix H = [h_1, ..., h_K]."""
    return composite_rows(channels, phases, b).conj().T


def cascaded_channels(channels: ChannelRealization) -> np.ndarray:
    """
    Per-user cascaded matrices A_k = diag(h_{r,k}^*) G, shape (K, N, M),
    so that the composite row of user k is phi^T A_k + h_{d,k}^H.
    """
    return np.conj(channels.h_r)[:, :, None] * channels.G[None, :, :]
