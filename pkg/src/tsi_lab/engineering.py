"""Generation plans for finite Fock superpositions.

A state ``sum_n c_n |n>`` with ``c_N != 0`` factorizes as

    (c_N / sqrt(N!)) prod_k (a+ - beta_k*) |0>
        = (c_N / sqrt(N!)) prod_k D(beta_k) a+ D(-beta_k) |0>,

where the ``beta_k*`` are the roots of ``sum_n c_n z^n / sqrt(n!)``.  The
product of displaced photon additions is realized by a chain of beam
splitters (transmittance ``T``) fed with single photons and conditioned on
zero-photon detection, interleaved with displacements ``alpha_k`` obtained
from the ``beta_k``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .errors import DomainError, RootFindingError
from .fock import ChainSpec, apply_chain_converged, overlap
from .state import FockVector

ROOT_TOL = 1e-12
ROOT_MAX_ITER = 200
RESIDUAL_TOL = 1e-9

# Squared norm of the R^N-prefixed chain: the zero-detection probability of
# the beam-splitter model as written.
CONVENTION_CHAIN = "chain"
# Chain probability times T^N (one factor T per photon addition).  This is
# the normalization that reproduces the reference success probabilities and
# optimal transmittances.
CONVENTION_T_WEIGHTED = "t-weighted"
CONVENTIONS = (CONVENTION_T_WEIGHTED, CONVENTION_CHAIN)
DEFAULT_CONVENTION = CONVENTION_T_WEIGHTED


class DegenerateOptimumWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class EngineeringPlan:
    coefficients: np.ndarray
    betas: np.ndarray
    transmittance: float
    alphas: np.ndarray
    success_prob: float
    cutoff_used: int
    convention: str = DEFAULT_CONVENTION

    @property
    def n(self) -> int:
        return len(self.betas)

    @property
    def reflectance(self) -> float:
        return math.sqrt(1.0 - self.transmittance ** 2)

    def chain(self, skip_index: Optional[int] = None) -> ChainSpec:
        return ChainSpec(tuple(self.alphas), self.transmittance, skip_index)


def fock_weighted(coefficients) -> np.ndarray:
    """``c_n / sqrt(n!)``: coefficients of the polynomial in ``a+`` acting on vacuum."""
    c = np.asarray(coefficients, dtype=complex)
    n = np.arange(c.size)
    return c * np.exp(-0.5 * gammaln(n + 1))


def _horner(a_desc: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = np.full(z.shape, a_desc[0], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for coef in a_desc[1:]:
        dp = dp * z + p
        p = p * z + coef
    return p, dp


def _aberth(a_asc: np.ndarray) -> Optional[np.ndarray]:
    n = a_asc.size - 1
    monic_desc = (a_asc / a_asc[-1])[::-1]
    radius = abs(a_asc[0] / a_asc[-1]) ** (1.0 / n)
    if radius == 0.0 or not np.isfinite(radius):
        radius = 1.0
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(ROOT_MAX_ITER):
        p, dp = _horner(monic_desc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulsion = (1.0 / diff).sum(axis=1)
            w = ratio / (1.0 - ratio * repulsion)
        w = np.where(p == 0, 0.0, w)
        if not np.all(np.isfinite(w)):
            return None
        z = z - w
        if np.all(np.abs(w) <= ROOT_TOL * np.maximum(1.0, np.abs(z))):
            return z
    return None


def _residual_ok(a_asc: np.ndarray, z: np.ndarray) -> np.ndarray:
    p, _ = _horner(a_asc[::-1], z)
    scale = np.abs(a_asc[None, :]) * np.abs(z[:, None]) ** np.arange(a_asc.size)[None, :]
    return np.abs(p) <= RESIDUAL_TOL * np.maximum(scale.sum(axis=1), np.abs(a_asc).max())


def polynomial_roots(a_asc) -> np.ndarray:
    """All roots of ``sum_n a_n z^n`` (ascending coefficients), with multiplicity.

    Aberth-Ehrlich simultaneous iteration; falls back to companion-matrix
    eigenvalues if it does not converge.  Each root is checked against the
    residual bound ``|p(z)| <= 1e-9 * sum_n |a_n| |z|^n``.
    """
    a = np.asarray(a_asc, dtype=complex)
    if a.size < 2:
        raise DomainError("polynomial degree must be >= 1")
    if a[-1] == 0:
        raise DomainError("leading coefficient is zero (degenerate degree); reduce N")
    if not np.all(np.isfinite(a)):
        raise DomainError("coefficients must be finite")
    # exact zero roots from vanishing low-order coefficients
    n_zero = int(np.argmax(a != 0))
    reduced = a[n_zero:]
    zeros = np.zeros(n_zero, dtype=complex)
    if reduced.size == 1:
        return zeros
    z = _aberth(reduced)
    if z is None or not np.all(_residual_ok(reduced, z)):
        z = np.roots(reduced[::-1]).astype(complex)
        # one Newton polish step per root
        p, dp = _horner(reduced[::-1], z)
        step = np.where(dp != 0, p / np.where(dp != 0, dp, 1), 0)
        z = z - step
    bad = ~_residual_ok(reduced, z)
    if np.any(bad):
        raise RootFindingError(f"root residuals too large at {z[bad]!r} for coefficients {a!r}")
    return np.concatenate([z, zeros])


def char_poly_roots(coefficients, fock_weighted_poly: bool = True) -> np.ndarray:
    """Roots ``z_k`` of the characteristic polynomial of a coefficient vector.

    With ``fock_weighted_poly`` (the default) the polynomial is
    ``sum_n c_n z^n / sqrt(n!)``, whose roots are the ``beta_k*`` of the
    displaced-addition factorization.  ``fock_weighted_poly=False`` gives
    the roots of the bare ``sum_n c_n z^n``.
    """
    c = np.asarray(coefficients, dtype=complex)
    if c.size < 2:
        raise DomainError("need N >= 1 (at least two coefficients)")
    if c[-1] == 0:
        raise DomainError("c_N = 0: degenerate degree, reduce N")
    return polynomial_roots(fock_weighted(c) if fock_weighted_poly else c)


def canonical_order(betas) -> np.ndarray:
    """Descending modulus, ties broken by ascending phase."""
    b = np.asarray(betas, dtype=complex)
    keys = sorted(range(b.size), key=lambda i: (-round(abs(b[i]), 9), np.angle(b[i])))
    return b[keys]


def order_like(betas, reference: Iterable[complex]) -> np.ndarray:
    """Reorder ``betas`` to follow a reference list by nearest-neighbour matching."""
    b = list(np.asarray(betas, dtype=complex))
    out = []
    for ref in reference:
        j = min(range(len(b)), key=lambda i: abs(b[i] - ref))
        out.append(b.pop(j))
    if b:
        raise DomainError("reference ordering is shorter than the root list")
    return np.array(out)


def apply_root_order(betas, order: Optional[Sequence[int]]) -> np.ndarray:
    """Canonical order, optionally permuted by 1-based indices into it."""
    b = canonical_order(betas)
    if order is None:
        return b
    idx = [int(i) - 1 for i in order]
    if sorted(idx) != list(range(b.size)):
        raise DomainError(f"root order {list(order)} is not a permutation of 1..{b.size}")
    return b[idx]


def alphas_from_roots(betas, transmittance: float) -> np.ndarray:
    """Displacements ``alpha_1 .. alpha_{N+1}`` for ordered ``beta_1 .. beta_N``.

    ``alpha_k = T^(N-k+1) (beta_{k-1} - beta_k)`` for ``k = 2..N``,
    ``alpha_{N+1} = beta_N`` and ``alpha_1 = -sum_l T^(-l) alpha_{l+1}``.
    """
    if not 0 < transmittance < 1:
        raise DomainError(f"transmittance must lie in (0, 1), got {transmittance}")
    b = np.asarray(betas, dtype=complex)
    n = b.size
    if n < 1:
        raise DomainError("need at least one root")
    T = float(transmittance)
    alphas = np.zeros(n + 1, dtype=complex)  # alphas[k-1] holds alpha_k
    for k in range(2, n + 1):
        alphas[k - 1] = T ** (n - k + 1) * (b[k - 2] - b[k - 1])
    alphas[n] = b[n - 1]
    alphas[0] = -sum(T ** (-l) * alphas[l] for l in range(1, n + 1))
    return alphas


def _probability(alphas, transmittance, cutoff, convention) -> Tuple[float, int]:
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown probability convention {convention!r}; choose from {CONVENTIONS}")
    spec = ChainSpec(tuple(alphas), transmittance)
    vec, used = apply_chain_converged(spec, cutoff)
    p = vec.norm2()
    if convention == CONVENTION_T_WEIGHTED:
        p *= transmittance ** spec.n_steps
    return p, used


def build_plan(
    coefficients,
    transmittance: float,
    root_order: Optional[Sequence[int]] = None,
    betas=None,
    cutoff: Optional[int] = None,
    convention: str = DEFAULT_CONVENTION,
) -> EngineeringPlan:
    """Roots, displacements and success probability for one coefficient vector.

    ``betas`` overrides the computed (and ordered) roots, e.g. to impose an
    ordering matched against a reference table.
    """
    c = np.asarray(coefficients, dtype=complex)
    if betas is None:
        betas = apply_root_order(np.conj(char_poly_roots(c)), root_order)
    betas = np.asarray(betas, dtype=complex)
    alphas = alphas_from_roots(betas, transmittance)
    prob, used = _probability(alphas, transmittance, cutoff, convention)
    return EngineeringPlan(c, betas, float(transmittance), alphas, prob, used, convention)


def success_probability(plan: EngineeringPlan, cutoff: Optional[int] = None, convention: Optional[str] = None) -> float:
    """Probability that every detector registers zero photons."""
    conv = plan.convention if convention is None else convention
    return _probability(plan.alphas, plan.transmittance, cutoff, conv)[0]


def verify_equivalence(plan: EngineeringPlan, state: FockVector, cutoff: Optional[int] = None) -> float:
    """``|<state|chain>|^2 / <chain|chain>`` for the plan's chain output."""
    vec, _ = apply_chain_converged(plan.chain(), cutoff)
    target = state if state.normalized else state.normalize()
    return abs(overlap(target, vec)) ** 2 / vec.norm2()


def vieta_reconstruct(betas, c_n: complex) -> np.ndarray:
    """Coefficients of ``(c_N / sqrt(N!)) prod_k (a+ - beta_k*) |0>``."""
    b = np.asarray(betas, dtype=complex)
    n = b.size
    # np.poly: monic coefficients of prod (x - r), highest power first
    e = np.poly(np.conj(b))[::-1] if n else np.ones(1, dtype=complex)
    k = np.arange(n + 1)
    return complex(c_n) * e * np.exp(0.5 * (gammaln(k + 1) - gammaln(n + 1)))


def optimize_transmittance(
    coefficients,
    t_range: Tuple[float, float] = (0.7, 0.99),
    grid: int = 30,
    refine_tol: float = 1e-5,
    root_order: Optional[Sequence[int]] = None,
    betas=None,
    cutoff: Optional[int] = None,
    convention: str = DEFAULT_CONVENTION,
) -> Tuple[float, float]:
    """Transmittance maximizing the success probability.

    Grid scan over ``t_range`` followed by golden-section refinement of the
    best bracket.  Returns ``(T_star, p_star)``.
    """
    lo, hi = t_range
    if not 0 < lo < hi < 1:
        raise DomainError(f"t_range must satisfy 0 < lo < hi < 1, got {t_range}")
    if grid < 16:
        raise DomainError("grid must be >= 16")
    c = np.asarray(coefficients, dtype=complex)
    if betas is None:
        betas = apply_root_order(np.conj(char_poly_roots(c)), root_order)
    betas = np.asarray(betas, dtype=complex)

    def prob(T):
        return _probability(alphas_from_roots(betas, T), T, cutoff, convention)[0]

    ts = np.linspace(lo, hi, grid)
    ps = np.array([prob(T) for T in ts])
    i = int(np.argmax(ps))
    if ps.max() <= 0 or (ps.max() - ps.min()) <= 1e-12 * abs(ps.max()):
        warnings.warn("success probability is flat over the transmittance range", DegenerateOptimumWarning)
        return float(ts[i]), float(ps[i])
    if i == 0 or i == grid - 1:
        return float(ts[i]), float(ps[i])
    res = minimize_scalar(
        lambda T: -prob(T),
        bracket=(ts[i - 1], ts[i], ts[i + 1]),
        method="golden",
        tol=refine_tol,
    )
    if -res.fun < ps[i]:
        return float(ts[i]), float(ps[i])
    return float(res.x), float(-res.fun)


def plan_with_transmittance(plan: EngineeringPlan, transmittance: float, cutoff: Optional[int] = None) -> EngineeringPlan:
    """Same roots and ordering, new transmittance."""
    return build_plan(plan.coefficients, transmittance, betas=plan.betas, cutoff=cutoff, convention=plan.convention)


def polar(values) -> List[Tuple[float, float]]:
    return [(float(abs(v)), float(np.angle(v))) for v in np.asarray(values, dtype=complex)]
