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
Closed-form average received power of a single user served through the RIS, with and without
channel estimation error, plus rate and effective-rate conversions.

All expressions assume a blocked direct link and a line-of-sight-only BS-RIS link. The codebook-size
gain enters through the mean of the largest of Q unit exponentials, H_Q, approximated by ln Q + C.
"""
import dataclasses
import math

from .exception import InvalidOverhead
from .numerics import EULER_MASCHERONI, harmonic_number

ORDER_ASYMPTOTIC = "asymptotic"
ORDER_EXACT = "exact"

BOUND_PERFECT = "perfect"
BOUND_ESTIMATED = "estimated"
BOUNDS = (BOUND_PERFECT, BOUND_ESTIMATED)


def _order_statistic(q: int, order_statistic: str) -> float:
    if q < 1:
        raise ValueError("Q must be positive, got {}".format(q))
    if order_statistic == ORDER_ASYMPTOTIC:
        return math.log(q) + EULER_MASCHERONI
    if order_statistic == ORDER_EXACT:
        return harmonic_number(q)
    raise ValueError("Unknown order statistic form {}".format(order_statistic))


def _rician_weights(f_r: float):
    """(F1^2, F2^2, F1 F2) with F1 = sqrt(F/(F+1)), F2 = sqrt(1/(F+1))."""
    if f_r < 0:
        raise ValueError("Rician factor must be non-negative, got {}".format(f_r))
    if math.isinf(f_r):
        return 1.0, 0.0, 0.0
    return f_r / (f_r + 1), 1 / (f_r + 1), math.sqrt(f_r) / (f_r + 1)


def estimation_gain_scaling(n: int, beta_r: float, beta_g: float, sigma_q2: float) -> float:
    """Attenuation u of the codebook-size gain caused by estimation error of variance sigma_q2."""
    if sigma_q2 < 0:
        raise ValueError("Estimation error variance must be non-negative, got {}".format(sigma_q2))
    if n == 1:
        return 1.0
    bb = beta_r * beta_g
    if math.isinf(sigma_q2):
        ratio = 0.0
    else:
        ratio = math.sqrt(bb / ((n - 1) * bb + sigma_q2))
    return (n + math.pi / 2 * (n - 1) * ratio) / (n + math.pi / 2 * math.sqrt(n - 1))


def _power(p_d, beta_r, beta_g, m, n, f_r, gain) -> float:
    if n < 1:
        raise ValueError("N must be positive, got {}".format(n))
    f1_sq, f2_sq, f1f2 = _rician_weights(f_r)
    return p_d * beta_r * beta_g * m * n * (f1_sq * n + f2_sq * gain + math.sqrt(math.pi) * f1f2)


def perfect_csi_power(
    p_d: float,
    beta_r: float,
    beta_g: float,
    m: int,
    n: int,
    f_r: float,
    q: int,
    order_statistic: str = ORDER_ASYMPTOTIC,
) -> float:
    """
    Upper bound on the average received power with perfect CSI:
    P_d beta_r beta_g M N (F1^2 N + F2^2 (ln Q + C) + sqrt(pi) F1 F2).

    ``order_statistic="exact"`` replaces ln Q + C by H_Q, which bounds it from above for every Q.
    """
    return _power(p_d, beta_r, beta_g, m, n, f_r, _order_statistic(q, order_statistic))


def estimated_csi_power(
    p_d: float,
    beta_r: float,
    beta_g: float,
    m: int,
    n: int,
    f_r: float,
    q: int,
    sigma_q2: float,
    order_statistic: str = ORDER_ASYMPTOTIC,
) -> float:
    """Same bound under LS estimation error: the codebook-size gain is scaled by estimation_gain_scaling."""
    u = estimation_gain_scaling(n, beta_r, beta_g, sigma_q2)
    return _power(p_d, beta_r, beta_g, m, n, f_r, u * _order_statistic(q, order_statistic))


def rayleigh_limit_power(p_d: float, beta_r: float, beta_g: float, m: int, n: int, q: int) -> float:
    """F_r -> 0: P_d beta_r beta_g M N (ln Q + C)."""
    return perfect_csi_power(p_d, beta_r, beta_g, m, n, 0.0, q)


def los_limit_power(p_d: float, beta_r: float, beta_g: float, m: int, n: int) -> float:
    """F_r -> infinity: P_d beta_r beta_g M N^2, independent of Q."""
    return p_d * beta_r * beta_g * m * n * n


def rate_from_power(p_r: float, sigma2: float) -> float:
    if p_r < 0:
        raise ValueError("Received power must be non-negative, got {}".format(p_r))
    return math.log2(1 + p_r / sigma2)


def effective_rate(rate: float, coherence_time: float, tau: float) -> float:
    """Rate discounted by the pilot overhead: (T_c - tau) / T_c * R."""
    if tau < 0:
        raise ValueError("Pilot overhead must be non-negative, got {}".format(tau))
    if tau > coherence_time:
        raise InvalidOverhead(tau, coherence_time)
    return (coherence_time - tau) / coherence_time * rate


@dataclasses.dataclass(frozen=True)
class TheoryPoint:
    p_d: float
    beta_r: float
    beta_g: float
    m: int
    n: int
    f_r: float
    q: int
    sigma_q2: float
    sigma2: float
    received_power: float
    rate_bound: float

    @classmethod
    def evaluate(
        cls,
        p_d: float,
        beta_r: float,
        beta_g: float,
        m: int,
        n: int,
        f_r: float,
        q: int,
        sigma2: float,
        sigma_q2: float = 0.0,
        order_statistic: str = ORDER_ASYMPTOTIC,
    ) -> "TheoryPoint":
        power = estimated_csi_power(p_d, beta_r, beta_g, m, n, f_r, q, sigma_q2, order_statistic)
        return cls(
            p_d=p_d,
            beta_r=beta_r,
            beta_g=beta_g,
            m=m,
            n=n,
            f_r=f_r,
            q=q,
            sigma_q2=sigma_q2,
            sigma2=sigma2,
            received_power=power,
            rate_bound=rate_from_power(power, sigma2),
        )
