"""Catalogue of generating maps and their orbits.

A TSI amplitude sequence is the orbit ``C0, f(C0), f(f(C0)), ...`` of one of
the maps below.  Orbits are computed in whatever arithmetic the seed carries:
``float``/``complex`` for the usual double-precision path, or
:class:`fractions.Fraction` for exact rational iteration.  The exact path
matters for the doubling map, where ``2x mod 1`` in binary floating point
consumes one mantissa bit per step and every float orbit reaches 0 after at
most ~55 iterations.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DomainError

Scalar = Union[float, complex, Fraction]

DEFAULT_PERIOD_TOL = 1e-9


class MapKind(str, enum.Enum):
    DOUBLING = "doubling"
    LOGISTIC = "logistic"
    QUADRATIC = "quadratic"
    SINE = "sine"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class MapSpec:
    """An iterated generating function.

    Parameters
    ----------
    kind : MapKind or str
        One of ``doubling``, ``logistic``, ``quadratic``, ``sine``,
        ``exponential``.
    mu : float or Fraction
        Control parameter; ignored by the doubling map.
    seed : float, complex or Fraction
        First orbit element ``C0``.  A :class:`~fractions.Fraction` seed
        selects exact rational iteration (doubling, logistic, quadratic).
    """

    kind: MapKind
    mu: Scalar = 0.0
    seed: Scalar = 0.0

    def __post_init__(self):
        try:
            kind = MapKind(self.kind)
        except ValueError:
            raise DomainError(f"unknown map kind {self.kind!r}") from None
        object.__setattr__(self, "kind", kind)
        if not _is_finite(self.mu):
            raise DomainError("mu must be finite")
        if kind is MapKind.DOUBLING:
            _check_doubling_arg(self.seed, what="seed")
        elif not _is_finite(self.seed):
            raise DomainError("seed must be finite")
        if isinstance(self.seed, Fraction) and kind in (MapKind.SINE, MapKind.EXPONENTIAL):
            raise DomainError(f"exact (rational) iteration is not available for the {kind.value} map")

    @property
    def exact(self) -> bool:
        return isinstance(self.seed, Fraction)


@dataclass(frozen=True)
class Orbit:
    """Unnormalized iterates ``values[0] = seed, values[n] = f(values[n-1])``."""

    values: Tuple[Scalar, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def as_array(self) -> np.ndarray:
        """Complex128 copy of the orbit (exact values are rounded)."""
        return np.array([complex(v) for v in self.values], dtype=complex)


def _is_finite(x) -> bool:
    if isinstance(x, Fraction):
        return True
    if not isinstance(x, Number):
        return False
    return cmath.isfinite(complex(x))


def _check_doubling_arg(x, what="x"):
    if isinstance(x, complex):
        if x.imag != 0.0:
            raise DomainError(f"doubling map is real-only; got complex {what} {x!r}")
        x = x.real
    if not _is_finite(x):
        raise DomainError(f"{what} must be finite")
    if not (0 <= x < 1):
        raise DomainError(f"{what} out of [0,1) for the doubling map: {x!r}")
    return x


def iterate(spec: MapSpec, x: Scalar) -> Scalar:
    """Apply the map once: ``f(x)``.

    Raises
    ------
    DomainError
        If ``x`` is not finite, or the doubling map receives a complex or
        out-of-range argument, or the result overflows.
    """
    kind = spec.kind
    mu = spec.mu
    if kind is MapKind.DOUBLING:
        x = _check_doubling_arg(x)
        return (2 * x) % 1
    if not _is_finite(x):
        raise DomainError(f"non-finite argument {x!r}")
    try:
        if kind is MapKind.LOGISTIC:
            y = mu * x * (1 - x)
        elif kind is MapKind.QUADRATIC:
            y = x * x + mu
        elif kind is MapKind.SINE:
            y = mu * (cmath.sin(x) if isinstance(x, complex) else math.sin(x))
        else:
            y = mu * (cmath.exp(x) if isinstance(x, complex) else math.exp(x))
    except OverflowError:
        raise DomainError(f"{kind.value} map overflowed at x={x!r}") from None
    if not _is_finite(y):
        raise DomainError(f"{kind.value} map produced a non-finite value from x={x!r}")
    return y


def orbit(spec: MapSpec, n_max: int) -> Orbit:
    """The first ``n_max + 1`` orbit elements, starting at the seed."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    values = [spec.seed]
    x = spec.seed
    for n in range(1, n_max + 1):
        try:
            x = iterate(spec, x)
        except DomainError as exc:
            raise DomainError(f"iteration {n}: {exc}") from None
        values.append(x)
    return Orbit(tuple(values))


def detect_eventual_period(
    orb: Orbit,
    tol: float = DEFAULT_PERIOD_TOL,
    max_period: Optional[int] = None,
    min_cycles: int = 4,
) -> Optional[Tuple[int, int]]:
    """Find the smallest period ``p`` and transient ``t`` of an orbit.

    ``(t, p)`` is reported when ``|values[n+p] - values[n]| < tol`` for every
    ``n >= t`` inside the orbit.  Since that condition holds vacuously near
    the end of any finite orbit, the periodic tail must also span at least
    ``min_cycles`` full periods.  Returns ``None`` when no period up to
    ``max_period`` qualifies.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    length = len(orb)
    if max_period is None:
        max_period = max(length - 1, 1)
    if max_period < 1:
        raise DomainError("max_period must be >= 1")
    vals = orb.values
    for p in range(1, max_period + 1):
        if length - p <= 0:
            break
        t = 0
        for n in range(length - p - 1, -1, -1):
            if not abs(vals[n + p] - vals[n]) < tol:
                t = n + 1
                break
        if length - t >= min_cycles * p:
            return t, p
    return None
