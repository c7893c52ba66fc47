from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsi_lab.errors import DomainError
from tsi_lab.maps import MapKind, MapSpec, detect_eventual_period, iterate, orbit, Orbit


def test_iterate_examples():
    assert iterate(MapSpec("doubling"), 0.3) == pytest.approx(0.6)
    assert iterate(MapSpec("doubling"), 0.6) == pytest.approx(0.2)
    assert iterate(MapSpec("logistic", mu=4), 0.2) == pytest.approx(0.64)


def test_other_maps():
    assert iterate(MapSpec("quadratic", mu=0.1), 0.5) == pytest.approx(0.35)
    assert iterate(MapSpec("sine", mu=2.0), 0.5) == pytest.approx(2 * np.sin(0.5))
    assert iterate(MapSpec("exponential", mu=0.5), 1j) == pytest.approx(0.5 * np.exp(1j))


def test_doubling_domain_errors():
    with pytest.raises(DomainError, match=r"\[0,1\)"):
        MapSpec("doubling", seed=1.5)
    with pytest.raises(DomainError):
        MapSpec("doubling", seed=0.2 + 0.1j)
    with pytest.raises(DomainError):
        iterate(MapSpec("doubling"), -0.1)


def test_nonfinite_rejected():
    with pytest.raises(DomainError):
        iterate(MapSpec("logistic", mu=4), float("nan"))
    with pytest.raises(DomainError):
        MapSpec("sine", mu=float("inf"))


def test_unknown_kind():
    with pytest.raises(DomainError):
        MapSpec("tent")


def test_overflow_reports_iteration_index():
    with pytest.raises(DomainError, match="iteration"):
        orbit(MapSpec("quadratic", mu=10.0, seed=10.0), 40)


def test_orbit_doubling():
    values = orbit(MapSpec("doubling", seed=0.3), 5).values
    assert np.allclose(values, (0.3, 0.6, 0.2, 0.4, 0.8, 0.6))


def test_orbit_zero_length():
    orb = orbit(MapSpec("logistic", mu=3.0, seed=0.1), 0)
    assert orb.values == (0.1,)
    assert orb.n_max == 0


def test_exact_doubling_is_exact():
    orb = orbit(MapSpec("doubling", seed=Fraction(3, 10)), 60)
    # 0.3 then the cycle 0.6, 0.2, 0.4, 0.8
    assert orb[60] == Fraction(4, 5)
    assert all(isinstance(v, Fraction) for v in orb.values)


def test_exact_not_available_for_sine():
    with pytest.raises(DomainError):
        MapSpec("sine", mu=1.0, seed=Fraction(1, 3))


def test_float_doubling_collapses():
    # 2x mod 1 sheds one mantissa bit per step
    orb = orbit(MapSpec("doubling", seed=0.29711), 60)
    assert orb[60] == 0.0


def test_period_doubling():
    assert detect_eventual_period(orbit(MapSpec("doubling", seed=Fraction(3, 10)), 50)) == (1, 4)
    assert detect_eventual_period(orbit(MapSpec("doubling", seed=0.3), 20)) == (1, 4)


def test_period_constant_orbit():
    assert detect_eventual_period(Orbit((0.5,) * 10)) == (0, 1)


def test_period_logistic_chaotic_absent():
    orb = orbit(MapSpec("logistic", mu=4.0, seed=0.2), 50)
    assert detect_eventual_period(orb, tol=1e-9, max_period=50) is None


def test_period_logistic_four_cycle():
    orb = orbit(MapSpec("logistic", mu=3.49, seed=0.2), 100)
    t, p = detect_eventual_period(orb, tol=1e-9)
    assert p == 4
    vals = orb.as_array()
    assert np.all(np.abs(vals[t + p :] - vals[t:-p]) < 1e-9)


def test_period_bad_args():
    orb = Orbit((0.1, 0.2))
    with pytest.raises(DomainError):
        detect_eventual_period(orb, tol=0)
    with pytest.raises(DomainError):
        detect_eventual_period(orb, max_period=0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1, exclude_max=True), st.integers(0, 60))
def test_doubling_closure(seed, n):
    vals = orbit(MapSpec("doubling", seed=seed), n).as_array()
    assert np.all((vals.real >= 0) & (vals.real < 1))


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 4), st.floats(0, 1), st.integers(0, 60))
def test_logistic_closure(mu, seed, n):
    vals = orbit(MapSpec("logistic", mu=mu, seed=seed), n).as_array().real
    assert np.all((vals >= 0) & (vals <= 1))


@settings(max_examples=30, deadline=None)
@given(st.floats(2.5, 4), st.floats(0.01, 0.99))
def test_detected_period_verifies_itself(mu, seed):
    orb = orbit(MapSpec("logistic", mu=mu, seed=seed), 80)
    found = detect_eventual_period(orb, tol=1e-9)
    if found is not None:
        t, p = found
        vals = orb.as_array()
        assert np.all(np.abs(vals[t + p :] - vals[t : len(vals) - p]) < 1e-9)


def test_determinism():
    spec = MapSpec(MapKind.LOGISTIC, mu=3.9, seed=0.123)
    assert orbit(spec, 50).values == orbit(spec, 50).values
