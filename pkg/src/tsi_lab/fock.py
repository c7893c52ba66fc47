"""Operator algebra in a truncated Fock space.

Displacement, creation and attenuation matrices, and the conditional
chain ``R^N D(a_{N+1}) a+ T^n D(a_N) ... a+ T^n D(a_1)|0>`` that models
photon addition at beam splitters with zero-photon detection.  Matrices are
applied to vectors one factor at a time; the full product is never formed.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import CutoffError, DomainError
from .state import FockVector

CUTOFF_ENV = "TSI_LAB_CUTOFF"
TAIL_TOL = 1e-10
CONVERGENCE_TOL = 1e-8
MAX_CUTOFF = 600
# squared norms below this are treated as round-off (the chain input has norm 1)
NORM_FLOOR = 1e-20


def _freeze(m: np.ndarray) -> np.ndarray:
    m.setflags(write=False)
    return m


@functools.lru_cache(maxsize=512)
def _displacement_cached(alpha: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    row, col = np.meshgrid(n, n, indexing="ij")
    if alpha == 0:
        return _freeze(np.eye(cutoff + 1, dtype=complex))
    lo = np.minimum(row, col)
    hi = np.maximum(row, col)
    k = hi - lo
    x = abs(alpha) ** 2
    theta = np.angle(alpha)
    log_pref = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + k * math.log(abs(alpha)) - 0.5 * x
    # below the diagonal alpha^k, above it (-conj(alpha))^k
    phase = np.where(row >= col, np.exp(1j * k * theta), np.exp(1j * k * (np.pi - theta)))
    mat = np.exp(log_pref) * phase * eval_genlaguerre(lo, k, x)
    return _freeze(mat.astype(complex))


def displacement_matrix(alpha: complex, cutoff: int) -> np.ndarray:
    """Exact matrix elements ``<m|D(alpha)|n>`` for ``0 <= m, n <= cutoff``.

    For ``m >= n`` the element is
    ``sqrt(n!/m!) alpha^(m-n) exp(-|alpha|^2/2) L_n^(m-n)(|alpha|^2)``;
    the upper triangle follows from ``<m|D(a)|n> = conj(<n|D(-a)|m>)``.
    The returned array is read-only and shared through a cache.
    """
    if cutoff < 0:
        raise DomainError("cutoff must be >= 0")
    alpha = complex(alpha)
    if not np.isfinite(alpha):
        raise DomainError("alpha must be finite")
    return _displacement_cached(alpha, int(cutoff))


def creation_matrix(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), -1).astype(complex)


def annihilation_matrix(cutoff: int) -> np.ndarray:
    return creation_matrix(cutoff).T.copy()


def attenuation_matrix(transmittance: float, cutoff: int) -> np.ndarray:
    """Diagonal ``T^n``."""
    if not 0 < transmittance <= 1:
        raise DomainError(f"transmittance must lie in (0, 1], got {transmittance}")
    return np.diag(transmittance ** np.arange(cutoff + 1, dtype=float)).astype(complex)


@dataclass(frozen=True)
class ChainSpec:
    """Displacements ``alpha_1 .. alpha_{N+1}`` interleaved with ``N`` photon additions.

    ``skip_index`` (1-based) replaces the creation operator of that step by
    the identity, which is the field part of a single-absorption loss
    branch.
    """

    alphas: Tuple[complex, ...]
    transmittance: float
    skip_index: Optional[int] = None

    def __post_init__(self):
        alphas = tuple(complex(a) for a in self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if len(alphas) < 1:
            raise DomainError("a chain needs at least one displacement")
        if not 0 < self.transmittance < 1:
            raise DomainError(f"transmittance must lie in (0, 1), got {self.transmittance}")
        if self.skip_index is not None and not 1 <= self.skip_index <= self.n_steps:
            raise DomainError(f"skip_index {self.skip_index} outside 1..{self.n_steps}")

    @property
    def n_steps(self) -> int:
        return len(self.alphas) - 1

    @property
    def reflectance(self) -> float:
        return math.sqrt(1.0 - self.transmittance ** 2)

    @property
    def prefactor(self) -> float:
        n_add = self.n_steps if self.skip_index is None else self.n_steps - 1
        return self.reflectance ** n_add

    def with_skip(self, k: Optional[int]) -> "ChainSpec":
        return ChainSpec(self.alphas, self.transmittance, k)


def default_cutoff(spec: ChainSpec) -> int:
    """``4 (N + max|alpha|^2 + 1)``, or the value of ``$TSI_LAB_CUTOFF``."""
    env = os.environ.get(CUTOFF_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise DomainError(f"{CUTOFF_ENV} must be an integer, got {env!r}") from None
        if value < 1:
            raise DomainError(f"{CUTOFF_ENV} must be positive")
        return value
    amax = max(abs(a) for a in spec.alphas)
    return int(math.ceil(4 * (spec.n_steps + amax ** 2 + 1)))


def apply_chain(spec: ChainSpec, cutoff: int) -> FockVector:
    """Unnormalized output of the conditional chain at a fixed cutoff.

    Raises
    ------
    CutoffError
        If more than ``1e-10`` of the (relative) probability sits above
        ``cutoff / 2`` after any step.
    """
    if cutoff < spec.n_steps + 1:
        raise CutoffError(f"cutoff {cutoff} cannot hold {spec.n_steps} added photons")
    T = spec.transmittance
    atten = T ** np.arange(cutoff + 1, dtype=float)
    shift = np.sqrt(np.arange(1, cutoff + 1, dtype=float))
    half = cutoff // 2

    def check(v, step):
        total = float(np.vdot(v, v).real)
        tail = float(np.vdot(v[half + 1 :], v[half + 1 :]).real)
        if tail > TAIL_TOL * max(total, NORM_FLOOR):
            raise CutoffError(
                f"cutoff {cutoff} too small: tail mass {tail / total:.2e} above n={half} after step {step}"
            )

    v = displacement_matrix(spec.alphas[0], cutoff)[:, 0].copy()
    check(v, 0)
    for k in range(1, spec.n_steps + 1):
        v = atten * v
        if k != spec.skip_index:
            w = np.zeros_like(v)
            w[1:] = shift * v[:-1]
            v = w
        v = displacement_matrix(spec.alphas[k], cutoff) @ v
        check(v, k)
    return FockVector(spec.prefactor * v)


def apply_chain_converged(spec: ChainSpec, cutoff: Optional[int] = None) -> Tuple[FockVector, int]:
    """Run the chain at increasing cutoffs until ``norm2`` is stable.

    Starting from ``cutoff`` (or :func:`default_cutoff`) the result is
    accepted once a run at 1.5x the cutoff agrees in squared norm to a
    relative ``1e-8``.  Returns the vector and the cutoff that produced it.
    """
    c = default_cutoff(spec) if cutoff is None else int(cutoff)
    c = max(c, spec.n_steps + 2)
    last_err: Optional[Exception] = None
    while c <= MAX_CUTOFF:
        try:
            v = apply_chain(spec, c)
            c2 = int(math.ceil(1.5 * c))
            v2 = apply_chain(spec, c2)
        except CutoffError as exc:
            last_err = exc
            c = int(math.ceil(1.5 * c))
            continue
        n1, n2 = v.norm2(), v2.norm2()
        if abs(n1 - n2) <= CONVERGENCE_TOL * max(n2, NORM_FLOOR):
            return v, c
        c = c2
    raise CutoffError(f"no converged cutoff up to {MAX_CUTOFF}" + (f" ({last_err})" if last_err else ""))


def overlap(a: FockVector, b: FockVector) -> complex:
    """``<a|b>``, zero-padding the shorter vector."""
    dim = max(a.dim, b.dim)
    return complex(np.vdot(a.padded(dim), b.padded(dim)))


def norm2(a: FockVector) -> float:
    return a.norm2()

