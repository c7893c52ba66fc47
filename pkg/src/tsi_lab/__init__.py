"""Truncated Fock states built from iterated-map orbits.

Photon statistics, conditional-generation plans (displaced photon additions
heralded by zero-photon detections) and detector-loss fidelity.
"""

__version__ = "0.1.0"

from .errors import (
    CutoffError,
    DomainError,
    NormalizationError,
    RootFindingError,
    TSIError,
    UndefinedStatistic,
)
from .maps import MapKind, MapSpec, Orbit, detect_eventual_period, iterate, orbit
from .state import FockVector, build_tsi, photon_distribution, truncate_and_renormalize

__all__ = [
    "CutoffError",
    "DomainError",
    "FockVector",
    "MapKind",
    "MapSpec",
    "NormalizationError",
    "Orbit",
    "RootFindingError",
    "TSIError",
    "UndefinedStatistic",
    "build_tsi",
    "detect_eventual_period",
    "iterate",
    "orbit",
    "photon_distribution",
    "truncate_and_renormalize",
]
