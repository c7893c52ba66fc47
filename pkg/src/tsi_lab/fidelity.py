"""Generation fidelity with inefficient zero-photon detectors.

Each detector of efficiency ``eta`` is modelled by ``sqrt(eta) a + L`` with a
vacuum Langevin reservoir, ``<L L+> = 1 - eta``.  To first order in
``1 - eta`` the field-plus-environment state is the ideal chain output
``chi_0`` plus one branch ``chi_k`` per detector, in which the k-th photon
addition was absorbed instead (its creation operator replaced by the
identity, prefactor ``R^(N-1)``).  The environment labels of different
branches are orthogonal, so branches add incoherently:

    F = [|chi_0|^2 + (1-eta) sum_k |<Psi|chi_k>|^2]
        / [|chi_0|^2 + (1-eta) sum_k |chi_k|^2],   Psi = chi_0 / |chi_0|.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .engineering import EngineeringPlan
from .errors import DomainError
from .fock import apply_chain, apply_chain_converged
from .state import FockVector

VALID_ETA_MIN = 0.9


class LowEfficiencyWarning(UserWarning):
    """eta is below the regime where dropping multi-absorption terms is justified."""


@dataclass(frozen=True)
class LossModel:
    eta: float
    order: int = 1

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise DomainError(f"detector efficiency must lie in (0, 1], got {self.eta}")
        if self.order != 1:
            raise DomainError("only first-order (single-absorption) branches are modelled")

    @property
    def branch_weight(self) -> float:
        return 1.0 - self.eta


@dataclass(frozen=True)
class FidelityReport:
    eta: float
    fidelity: float
    branch_norms: np.ndarray  # |chi_k|^2, k = 0..N
    branch_overlaps: np.ndarray  # |<Psi|chi_k>|^2, k = 0..N


def loss_branches(plan: EngineeringPlan, cutoff: Optional[int] = None) -> List[FockVector]:
    """``chi_0 .. chi_N`` as unnormalized vectors on a common cutoff."""
    _, used = apply_chain_converged(plan.chain(), cutoff)
    return [apply_chain(plan.chain(k), used) for k in [None, *range(1, plan.n + 1)]]


def _branch_moments(branches: Sequence[FockVector]):
    vecs = np.array([b.amplitudes for b in branches])
    norms = np.einsum("ij,ij->i", vecs.conj(), vecs).real
    psi = vecs[0] / np.sqrt(norms[0])
    overlaps = np.abs(vecs @ psi.conj()) ** 2
    return norms, overlaps


def _ratio(norms: np.ndarray, overlaps: np.ndarray, eta: float) -> float:
    eps = 1.0 - eta
    if eps == 0.0:
        return 1.0
    num = norms[0] + eps * overlaps[1:].sum()
    den = norms[0] + eps * norms[1:].sum()
    return float(min(num / den, 1.0))


def fidelity(
    plan: EngineeringPlan,
    eta: float,
    cutoff: Optional[int] = None,
    branches: Optional[Sequence[FockVector]] = None,
) -> FidelityReport:
    model = LossModel(eta)
    if eta < VALID_ETA_MIN:
        warnings.warn(
            f"eta={eta} < {VALID_ETA_MIN}: second-order absorption terms are no longer negligible",
            LowEfficiencyWarning,
        )
    if branches is None:
        branches = loss_branches(plan, cutoff)
    norms, overlaps = _branch_moments(branches)
    return FidelityReport(model.eta, _ratio(norms, overlaps, model.eta), norms, overlaps)


def fidelity_sweep(plan: EngineeringPlan, etas: Sequence[float], cutoff: Optional[int] = None) -> List[FidelityReport]:
    for eta in etas:
        LossModel(eta)
    branches = loss_branches(plan, cutoff)
    return [fidelity(plan, eta, branches=branches) for eta in etas]


def fidelity_slope(report: FidelityReport) -> float:
    """``dF/d(1-eta)`` at ``eta = 1``."""
    n, o = report.branch_norms, report.branch_overlaps
    return float((o[1:].sum() - n[1:].sum()) / n[0])
