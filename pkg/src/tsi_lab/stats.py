"""Photon statistics of truncated Fock states.

All expectations are taken inside the truncated space; a TSI has no tail
beyond its largest index, so no correction is applied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from .errors import UndefinedStatistic
from .maps import MapSpec
from .state import FockVector, photon_distribution, truncate_and_renormalize

HUSIMI_WINDOW = (-6.0, 6.0)
HUSIMI_RESOLUTION = 121


@dataclass(frozen=True)
class StatsReport:
    dim: int
    p_even: float
    p_odd: float
    mean_n: float
    delta_n: float
    mandel_q: Optional[float]
    g2: Optional[float]
    dx1: float
    dx2: float

    @property
    def nonclassical_parity(self) -> bool:
        """``P_odd > 0.5`` forces a negative Glauber-Sudarshan P function."""
        return self.p_odd > 0.5

    @property
    def sub_poissonian(self) -> Optional[bool]:
        return None if self.mandel_q is None else self.mandel_q < 0


@dataclass(frozen=True)
class HusimiGrid:
    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray  # values[i, j] = Q(re_axis[j] + 1j * im_axis[i])

    def integral(self) -> float:
        """Riemann-sum estimate of the integral of Q over the window."""
        d_re = self.re_axis[1] - self.re_axis[0]
        d_im = self.im_axis[1] - self.im_axis[0]
        return float(self.values.sum() * d_re * d_im)


def even_odd(state: FockVector) -> Tuple[float, float]:
    p = photon_distribution(state)
    p_even = float(p[0::2].sum())
    p_odd = float(p[1::2].sum())
    return p_even, p_odd


def _raw_moments(state: FockVector) -> Tuple[float, float]:
    p = photon_distribution(state)
    n = np.arange(p.size)
    return float(p @ n), float(p @ (n * n))


def number_moments(state: FockVector) -> Tuple[float, float]:
    """Mean photon number and its standard deviation."""
    m1, m2 = _raw_moments(state)
    return m1, float(np.sqrt(max(m2 - m1 * m1, 0.0)))


def mandel_q(state: FockVector) -> float:
    m1, m2 = _raw_moments(state)
    if m1 <= 0.0:
        raise UndefinedStatistic("Mandel Q is undefined for <n> = 0")
    return (m2 - m1 * m1 - m1) / m1


def g2_zero(state: FockVector) -> float:
    m1, m2 = _raw_moments(state)
    if m1 <= 0.0:
        raise UndefinedStatistic("g2(0) is undefined for <n> = 0")
    return (m2 - m1) / m1 / m1


def quadrature_variances(state: FockVector) -> Tuple[float, float]:
    """Standard deviations of ``X1 = (a + a+)/2`` and ``X2 = (a - a+)/2i``.

    Uses ``<a>``, ``<a^2>`` and ``<a+ a>`` of the vector together with
    ``[a, a+] = 1``.
    """
    c = state.amplitudes
    n = np.arange(c.size)
    a1 = complex(np.vdot(c[:-1], np.sqrt(n[1:]) * c[1:]))
    a2 = complex(np.vdot(c[:-2], np.sqrt(n[1:-1] * n[2:]) * c[2:]))
    m1 = float(np.abs(c) ** 2 @ n)
    x1_sq = (2.0 * a2.real + 2.0 * m1 + 1.0) / 4.0
    x2_sq = (-2.0 * a2.real + 2.0 * m1 + 1.0) / 4.0
    var1 = x1_sq - a1.real ** 2
    var2 = x2_sq - a1.imag ** 2
    return float(np.sqrt(max(var1, 0.0))), float(np.sqrt(max(var2, 0.0)))


def _coherent_overlaps(amps: np.ndarray, beta: np.ndarray) -> np.ndarray:
    # <beta|psi> = exp(-|b|^2/2) sum_n c_n conj(b)^n / sqrt(n!), summed in log space
    beta = np.asarray(beta, dtype=complex)
    flat = beta.reshape(-1)
    n = np.arange(amps.size)
    bc = np.conj(flat)
    r = np.abs(bc)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_r = np.log(r)
        log_mag = n[None, :] * log_r[:, None] - 0.5 * gammaln(n + 1)[None, :] - 0.5 * (r * r)[:, None]
    log_mag[:, 0] = -0.5 * r * r  # 0 * log(0) := 0
    phase = np.exp(1j * n[None, :] * np.angle(bc)[:, None])
    terms = np.exp(log_mag) * phase
    return (terms @ amps).reshape(beta.shape)


def husimi_q(state: FockVector, beta: complex) -> float:
    """``Q(beta) = |<beta|psi>|^2 / pi``."""
    ov = _coherent_overlaps(state.amplitudes, np.array([beta]))[0]
    return float(abs(ov) ** 2 / np.pi)


def husimi_grid(
    state: FockVector,
    re_range: Sequence[float] = HUSIMI_WINDOW,
    im_range: Sequence[float] = HUSIMI_WINDOW,
    resolution: int = HUSIMI_RESOLUTION,
) -> HusimiGrid:
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    re_axis = np.linspace(re_range[0], re_range[1], resolution)
    im_axis = np.linspace(im_range[0], im_range[1], resolution)
    beta = re_axis[None, :] + 1j * im_axis[:, None]
    q = np.abs(_coherent_overlaps(state.amplitudes, beta)) ** 2 / np.pi
    return HusimiGrid(re_axis, im_axis, q)


def stats_report(state: FockVector) -> StatsReport:
    p_even, p_odd = even_odd(state)
    mean_n, delta_n = number_moments(state)
    try:
        q = mandel_q(state)
        g2 = g2_zero(state)
    except UndefinedStatistic:
        q = g2 = None
    dx1, dx2 = quadrature_variances(state)
    return StatsReport(state.dim, p_even, p_odd, mean_n, delta_n, q, g2, dx1, dx2)


def stats_sweep(spec: MapSpec, n_max: int) -> List[StatsReport]:
    """One report per truncation ``N = 0 .. n_max``, each renormalized."""
    return [stats_report(truncate_and_renormalize(spec, n)) for n in range(n_max + 1)]
