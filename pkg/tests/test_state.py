import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsi_lab.errors import DomainError, NormalizationError
from tsi_lab.maps import MapSpec, orbit
from tsi_lab.state import FockVector, build_tsi, photon_distribution, truncate_and_renormalize


def test_doubling_n5():
    st_ = build_tsi(MapSpec("doubling", seed=0.3), 5)
    # squares sum to 0.09 + 0.36 + 0.04 + 0.16 + 0.64 + 0.36 = 1.65
    expected = np.array([0.3, 0.6, 0.2, 0.4, 0.8, 0.6]) / np.sqrt(1.65)
    assert np.allclose(st_.amplitudes, expected, atol=1e-14)
    assert st_.normalized and st_.dim == 5


def test_n0_is_vacuum():
    assert np.allclose(build_tsi(MapSpec("logistic", mu=4, seed=0.2), 0).amplitudes, [1.0])


def test_logistic_n3():
    orb = np.array([0.2, 0.64, 0.9216, 0.28901376])
    st_ = build_tsi(MapSpec("logistic", mu=4, seed=0.2), 3)
    assert np.allclose(st_.amplitudes, orb / np.linalg.norm(orb), atol=1e-14)


def test_zero_orbit():
    with pytest.raises(NormalizationError):
        build_tsi(MapSpec("doubling", seed=0.0), 5)


def test_photon_distribution_examples():
    assert np.allclose(photon_distribution(FockVector([1, 0, 0])), [1, 0, 0])
    p = photon_distribution(FockVector(np.array([1, 1j]) / np.sqrt(2)))
    assert np.allclose(p, [0.5, 0.5])


def test_four_plateau_distribution():
    p = photon_distribution(build_tsi(MapSpec("doubling", seed=0.3), 20))
    assert len(set(np.round(p[1:], 8))) == 4


def test_truncate_matches_build():
    spec = MapSpec("doubling", seed=0.3)
    assert np.allclose(truncate_and_renormalize(spec, 0).amplitudes, [1.0])
    assert np.array_equal(truncate_and_renormalize(spec, 5).amplitudes, build_tsi(spec, 5).amplitudes)


def test_p_odd_below_half_for_large_n():
    spec = MapSpec("doubling", seed=0.3)
    for n in range(30, 51):
        p = photon_distribution(truncate_and_renormalize(spec, n))
        assert p[1::2].sum() < 0.5


def test_fockvector_helpers():
    v = FockVector.fock(2, 4)
    assert v.dim == 4 and v.norm2() == 1.0
    assert np.allclose(v.padded(6)[:5], v.amplitudes)
    with pytest.raises(DomainError):
        v.padded(2)
    with pytest.raises(DomainError):
        FockVector.fock(5, 3)
    with pytest.raises(ValueError):
        v.amplitudes[0] = 2.0


@settings(max_examples=60, deadline=None)
@given(st.floats(3.0, 4.0), st.floats(0.01, 0.99), st.integers(0, 50), st.floats(-np.pi, np.pi))
def test_normalization_and_phase_invariance(mu, seed, n, phase):
    spec = MapSpec("logistic", mu=mu, seed=seed)
    state = build_tsi(spec, n)
    p = photon_distribution(state)
    assert abs(state.norm2() - 1) < 1e-12
    assert abs(p.sum() - 1) < 1e-12
    vals = orbit(spec, n).as_array()
    assert np.allclose(p, np.abs(vals) ** 2 / np.sum(np.abs(vals) ** 2), atol=1e-12)
    rotated = FockVector.from_amplitudes(vals * np.exp(1j * phase))
    assert np.allclose(photon_distribution(rotated), p, atol=1e-12)


def test_huge_orbit_normalizes_without_overflow():
    # squares of the last iterate exceed the double range
    state = build_tsi(MapSpec("quadratic", mu=1.0, seed=0.5), 11)
    assert abs(state.norm2() - 1) < 1e-12
    assert abs(state.amplitudes[-1]) == pytest.approx(1.0)


def test_nonfinite_amplitudes_rejected():
    with pytest.raises(NormalizationError):
        FockVector([1.0, np.inf]).normalize()
