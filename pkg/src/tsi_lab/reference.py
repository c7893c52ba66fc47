"""Reference values for the four standard N = 5 configurations.

Polar pairs are ``(modulus, phase)`` to three decimals, in the reference
row order.  Fidelities are listed per map family for
``eta = 0.99, 0.95, 0.90``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from .maps import MapKind, MapSpec

Polar = Tuple[float, float]

N_ENGINEERING = 5
ETAS = (0.99, 0.95, 0.90)
SUMMARY_TRANSMITTANCE = 0.878


@dataclass(frozen=True)
class Configuration:
    name: str
    family: str
    spec: MapSpec
    transmittance: float
    success_prob: float
    betas: Tuple[Polar, ...]
    alphas: Tuple[Polar, ...]
    periodic: bool

    def betas_complex(self) -> np.ndarray:
        return np.array([m * np.exp(1j * p) for m, p in self.betas])


CONFIGURATIONS: Dict[str, Configuration] = {
    c.name: c
    for c in (
        Configuration(
            "doubling-0.3",
            "doubling",
            MapSpec(MapKind.DOUBLING, seed=0.3),
            0.862,
            0.0022,
            ((2.169, 2.638), (2.169, -2.638), (0.545, 3.141), (1.460, 1.084), (1.460, -1.084)),
            ((1.187, -0.220), (1.155, 1.570), (1.096, -2.483), (1.323, -2.331), (2.225, 1.570), (1.460, -1.084)),
            True,
        ),
        Configuration(
            "doubling-0.29711",
            "doubling",
            MapSpec(MapKind.DOUBLING, seed=0.29711),
            0.867,
            0.0021,
            ((2.306, 2.692), (2.306, -2.692), (0.543, 3.141), (1.489, 1.089), (1.489, -1.089)),
            ((1.372, -0.198), (1.130, 1.570), (1.193, -2.563), (1.357, -2.321), (2.289, 1.570), (1.489, -1.089)),
            False,
        ),
        Configuration(
            "logistic-3.49",
            "logistic",
            MapSpec(MapKind.LOGISTIC, mu=3.49, seed=0.2),
            0.893,
            0.0011,
            ((3.948, 3.141), (0.609, 2.566), (0.609, -2.566), (1.828, 1.373), (1.828, -1.373)),
            ((2.794, 0.051), (2.195, -3.045), (0.472, 1.570), (1.830, -1.959), (3.202, 1.570), (1.828, -1.373)),
            True,
        ),
        Configuration(
            "logistic-4",
            "logistic",
            MapSpec(MapKind.LOGISTIC, mu=4.0, seed=0.2),
            0.879,
            0.0015,
            ((3.290, 3.141), (0.563, 2.708), (0.563, -2.708), (1.893, 1.255), (1.893, -1.255)),
            ((2.027, 0.094), (1.665, -3.056), (0.321, 1.570), (1.787, -2.064), (3.165, 1.570), (1.893, -1.255)),
            False,
        ),
    )
}

FIDELITIES = {
    "doubling": (0.9983, 0.9943, 0.9909),
    "logistic": (0.9986, 0.9944, 0.9911),
}

# exact rational seed for the period check: float doubling orbits drift off
# the 4-cycle by more than 1e-9 after ~27 steps
EXACT_DOUBLING_SEED = Fraction(3, 10)
