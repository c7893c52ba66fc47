import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsi_lab.errors import CutoffError, DomainError
from tsi_lab.fock import (
    ChainSpec,
    annihilation_matrix,
    apply_chain,
    apply_chain_converged,
    attenuation_matrix,
    creation_matrix,
    default_cutoff,
    displacement_matrix,
    norm2,
    overlap,
)
from tsi_lab.state import FockVector

from oracles import chain_dense, coherent, displacement_expm


def test_vacuum_element():
    assert displacement_matrix(1.0, 10)[0, 0] == pytest.approx(math.exp(-0.5))
    assert displacement_matrix(1.0, 10)[0, 0] == pytest.approx(0.60653066, abs=1e-8)


def test_zero_displacement_is_identity():
    assert np.array_equal(displacement_matrix(0, 12), np.eye(13))


def test_first_column_is_coherent_state():
    alpha = 1.3 - 0.4j
    assert np.allclose(displacement_matrix(alpha, 40)[:, 0], coherent(alpha, 40), atol=1e-14)


def test_matches_padded_expm(rng):
    for _ in range(10):
        alpha = 3 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())
        diff = np.abs(displacement_matrix(alpha, 40) - displacement_expm(alpha, 40)).max()
        assert diff < 1e-10


def test_adjoint_relation():
    alpha = 0.7 + 1.1j
    assert np.allclose(displacement_matrix(alpha, 30).conj().T, displacement_matrix(-alpha, 30), atol=1e-13)


def test_unitarity_and_composition_on_low_block():
    # truncation errors of the closed form live in the last rows/columns; the
    # leading block is unitary once the cutoff is well above |alpha|^2
    for alpha in (3.0, -2.2 + 2.0j, 1.5j):
        d = displacement_matrix(alpha, 80)
        block = 10
        assert np.abs((d.conj().T @ d)[:block, :block] - np.eye(block)).max() < 1e-8
        comp = d @ displacement_matrix(-alpha, 80)
        assert np.abs(comp[:block, :block] - np.eye(block)).max() < 1e-8


def test_displaced_creation_identity():
    beta = 0.8 - 0.5j
    cutoff = 80
    ad = creation_matrix(cutoff)
    lhs = displacement_matrix(beta, cutoff) @ ad @ displacement_matrix(-beta, cutoff)
    rhs = ad - np.conj(beta) * np.eye(cutoff + 1)
    assert np.abs(lhs - rhs)[:20, :20].max() < 1e-8


def test_ladder_and_attenuation():
    ad = creation_matrix(5)
    assert np.array_equal(ad @ np.eye(6)[:, 0], np.eye(6)[:, 1])
    assert np.array_equal(annihilation_matrix(5), ad.T)
    assert np.array_equal(attenuation_matrix(1.0, 4), np.eye(5))
    assert attenuation_matrix(0.862, 6)[5, 5] == pytest.approx(0.862 ** 5, rel=1e-15)


def test_matrices_are_read_only():
    with pytest.raises(ValueError):
        displacement_matrix(0.5, 5)[0, 0] = 1


def test_chain_single_displacement():
    v = apply_chain(ChainSpec((1.2j,), 0.9), 40)
    assert np.allclose(v.amplitudes, coherent(1.2j, 40), atol=1e-14)


def test_chain_single_addition():
    spec = ChainSpec((0, 0), 0.7)
    v = apply_chain(spec, 10)
    expected = np.zeros(11)
    expected[1] = math.sqrt(1 - 0.49)
    assert np.allclose(v.amplitudes, expected)


def test_chain_matches_dense_oracle(rng):
    alphas = tuple(rng.normal(size=4) * 0.6 + 1j * rng.normal(size=4) * 0.6)
    for skip in (None, 1, 2, 3):
        v = apply_chain(ChainSpec(alphas, 0.85, skip), 60)
        ref = chain_dense(alphas, 0.85, 60, skip=skip)
        assert np.allclose(v.amplitudes, ref[:61], atol=1e-12)


def test_skip_prefactor():
    spec = ChainSpec((0, 0, 0), 0.6)
    assert spec.prefactor == pytest.approx(0.8 ** 2)
    assert spec.with_skip(2).prefactor == pytest.approx(0.8)


def test_chain_spec_validation():
    with pytest.raises(DomainError):
        ChainSpec((), 0.5)
    with pytest.raises(DomainError):
        ChainSpec((0, 0), 1.0)
    with pytest.raises(DomainError):
        ChainSpec((0, 0), 0.5, skip_index=2)


def test_cutoff_too_small():
    with pytest.raises(CutoffError):
        apply_chain(ChainSpec((3.0, 0, 0), 0.9), 12)


def test_converged_chain_and_env_override(monkeypatch):
    spec = ChainSpec((0.5, -0.3j, 0.4), 0.86)
    assert default_cutoff(spec) == math.ceil(4 * (2 + 0.25 + 1))
    v, used = apply_chain_converged(spec)
    ref = apply_chain(spec, 3 * used)
    assert abs(v.norm2() - ref.norm2()) < 1e-8 * ref.norm2()
    monkeypatch.setenv("TSI_LAB_CUTOFF", "77")
    assert default_cutoff(spec) == 77
    monkeypatch.setenv("TSI_LAB_CUTOFF", "many")
    with pytest.raises(DomainError):
        default_cutoff(spec)


def test_zero_displacement_chain_norm():
    # R^N a+ T^n ... a+ T^n |0> = R^N T^(N(N-1)/2) sqrt(N!) |N>
    n = 3
    for T in (0.95, 0.8, 0.5, 0.2):
        v = apply_chain(ChainSpec((0,) * (n + 1), T), 20)
        assert v.norm2() == pytest.approx((1 - T * T) ** n * T ** (n * (n - 1)) * math.factorial(n), rel=1e-12)


def test_norm_decreases_with_t_below_peak():
    # N! R^(2N) T^(N(N-1)) peaks at T^2 = (N-1)/(2N-1); below that it falls with T
    norms = [apply_chain(ChainSpec((0, 0, 0, 0), T), 20).norm2() for T in (0.6, 0.45, 0.3, 0.15)]
    assert all(a > b for a, b in zip(norms, norms[1:]))


def test_overlap_and_norm():
    assert overlap(FockVector.fock(0, 1), FockVector.fock(1, 1)) == 0
    v = FockVector.from_amplitudes([1, 2j, 3])
    assert norm2(v) == pytest.approx(1.0)
    coh = FockVector(coherent(1.1, 60))
    assert overlap(coh, FockVector([1.0])) == pytest.approx(math.exp(-1.21 / 2))


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 3), st.floats(-math.pi, math.pi))
def test_block_agreement_property(r, phi):
    alpha = r * np.exp(1j * phi)
    d = displacement_matrix(alpha, 60)
    assert np.abs(d - displacement_expm(alpha, 60))[:30, :30].max() < 1e-10
