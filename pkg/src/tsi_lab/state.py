"""Truncated Fock-state vectors built from map orbits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NormalizationError
from .maps import MapSpec, orbit

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FockVector:
    """Complex amplitudes ``c_0 .. c_dim`` over the Fock basis ``|0> .. |dim>``.

    ``normalized`` records whether the constructor guaranteed unit norm;
    operator chains produce unnormalized vectors that carry their norm as a
    probability.
    """

    amplitudes: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise DomainError("a FockVector needs at least one amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size - 1

    def __len__(self) -> int:
        return self.amplitudes.size

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def normalize(self) -> "FockVector":
        # scale by the largest modulus first so huge orbits do not overflow
        scale = float(np.abs(self.amplitudes).max())
        if not np.isfinite(scale):
            raise NormalizationError("cannot normalize a vector with non-finite amplitudes")
        if not scale > 0:
            raise NormalizationError("cannot normalize a zero vector")
        v = self.amplitudes / scale
        return FockVector(v / np.linalg.norm(v), normalized=True)

    def padded(self, dim: int) -> np.ndarray:
        """Amplitudes zero-padded (never truncated) to ``dim + 1`` entries."""
        if dim < self.dim:
            raise DomainError(f"cannot pad dimension {self.dim} down to {dim}")
        out = np.zeros(dim + 1, dtype=complex)
        out[: self.amplitudes.size] = self.amplitudes
        return out

    @classmethod
    def fock(cls, n: int, dim: int | None = None) -> "FockVector":
        """Number state ``|n>`` embedded in a space of largest index ``dim``."""
        dim = n if dim is None else dim
        if not 0 <= n <= dim:
            raise DomainError(f"Fock index {n} outside 0..{dim}")
        amps = np.zeros(dim + 1, dtype=complex)
        amps[n] = 1.0
        return cls(amps, normalized=True)

    @classmethod
    def from_amplitudes(cls, amps) -> "FockVector":
        """Normalize an arbitrary amplitude sequence."""
        return cls(amps).normalize()


def build_tsi(spec: MapSpec, n_max: int) -> FockVector:
    """Normalized state ``sum_n C_n |n>`` with ``C_n`` the map orbit, seed included."""
    values = orbit(spec, n_max).as_array()
    if not np.any(values):
        raise NormalizationError(f"orbit of {spec.kind.value} map from seed {spec.seed!r} is identically zero")
    return FockVector(values).normalize()


def truncate_and_renormalize(spec: MapSpec, n: int) -> FockVector:
    # each truncation is normalized on its own so that sweeps over n stay
    # probability distributions
    if n < 0:
        raise DomainError(f"truncation index must be >= 0, got {n}")
    return build_tsi(spec, n)


def photon_distribution(state: FockVector) -> np.ndarray:
    """``P_n = |c_n|^2``."""
    return np.abs(state.amplitudes) ** 2
