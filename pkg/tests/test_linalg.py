"""
Tests for the tensor-product linear algebra layer.
"""

import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qmc.errors import DimensionMismatch, NonFiniteEntries, NotHermitian, NotPSD, SingularNegativePower
from qmc.linalg import (
    FactorShape,
    dagger,
    frac_power,
    herm_eig,
    hermitian_residual,
    inverse_permutation,
    kron,
    modular_conjugation,
    partial_trace,
    permute_factors,
    trace_norm,
    unvec,
    vec,
)
from qmc.models import QUTRIT_STOCHASTIC, SHIFT

entries = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


def complex_arrays(shape):
    return st.builds(lambda re, im: re + 1j * im, arrays(np.float64, shape, elements=entries), arrays(np.float64, shape, elements=entries))


def test_kron_examples():
    """kron of identities and diagonals"""
    assert np.allclose(kron(np.eye(2), np.eye(3)), np.eye(6)), "I₂ ⊗ I₃ should be I₆"
    expected = np.diag([4 / 7, 2 / 7, 1 / 7, 0, 0, 0])
    assert np.allclose(kron(np.diag([1, 0]), np.diag([4 / 7, 2 / 7, 1 / 7])), expected)


def test_kron_of_shift():
    """s ⊗ s has ones at ((i+1)·3 + (j+1), i·3 + j)"""
    ss = kron(SHIFT, SHIFT)
    expected = np.zeros((9, 9))
    for i in range(2):
        for j in range(2):
            expected[(i + 1) * 3 + (j + 1), i * 3 + j] = 1
    assert np.array_equal(ss, expected)


@seed(1)
@settings(max_examples=30, deadline=None)
@given(a=complex_arrays((2, 2)), b=complex_arrays((3, 3)))
def test_kron_trace_multiplicative(a, b):
    assert np.isclose(np.trace(kron(a, b)), np.trace(a) * np.trace(b), atol=1e-9)


@seed(2)
@settings(max_examples=30, deadline=None)
@given(a=complex_arrays((2, 2)), b=complex_arrays((3, 3)))
def test_partial_trace_of_product(a, b):
    """tr₂(a ⊗ b) = tr(b)·a and tr₁(a ⊗ b) = tr(a)·b"""
    shape = FactorShape.of(2, 3)
    assert np.allclose(partial_trace(kron(a, b), shape, [0]), np.trace(b) * a, atol=1e-9)
    assert np.allclose(partial_trace(kron(a, b), shape, [1]), np.trace(a) * b, atol=1e-9)


def test_partial_trace_everything_is_trace(rng):
    m = rng.standard_normal((12, 12))
    shape = FactorShape.of(2, 3, 2)
    full = partial_trace(m, shape, [0, 1, 2])
    assert np.allclose(full, m), "keeping all factors is the identity"
    one = partial_trace(partial_trace(m, shape, [0]), FactorShape.of(2), [0])
    assert np.isclose(np.trace(one), np.trace(m))


def test_partial_trace_of_gns_projector(random_density):
    """tr₁ |vec(ρ^{1/2})⟩⟨vec(ρ^{1/2})| = ρᵀ"""
    rho = random_density(3)
    xi = vec(frac_power(rho, 0.5))
    reduced = partial_trace(xi @ dagger(xi), FactorShape.of(3, 3), [1])
    assert np.allclose(reduced, rho.T, atol=1e-10)


def test_partial_trace_rejects_bad_shape():
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(6), FactorShape.of(2, 2), [0])
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4), FactorShape.of(2, 2), [])


def test_permute_flip_on_products(rng):
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2))
    flipped = permute_factors(kron(a, b), FactorShape.of(2, 2), (1, 0))
    assert np.allclose(flipped, kron(b, a))


def test_permute_inner_pair(rng):
    """(A⊗B)⊗(C⊗D) on [d,c,d,c] becomes (A⊗C)⊗(B⊗D)"""
    d, c = 3, 2
    a, b, cc, dd = (rng.standard_normal((n, n)) for n in (d, c, d, c))
    m = kron(kron(a, b), kron(cc, dd))
    out = permute_factors(m, FactorShape.of(d, c, d, c), (0, 2, 1, 3))
    assert np.allclose(out, kron(kron(a, cc), kron(b, dd)))


def test_permute_then_inverse_is_identity(rng):
    shape = FactorShape.of(2, 3, 2)
    perm = (2, 0, 1)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    there = permute_factors(m, shape, perm)
    back = permute_factors(there, shape.permuted(perm), inverse_permutation(perm))
    assert np.allclose(back, m)
    assert np.allclose(permute_factors(m, shape, (0, 1, 2)), m), "identity permutation"


def test_permute_rejects_non_permutation():
    with pytest.raises(DimensionMismatch):
        permute_factors(np.eye(4), FactorShape.of(2, 2), (0, 0))


def test_herm_eig_examples():
    values, vectors = herm_eig(np.diag([1 / 3, 2 / 3]))
    assert np.allclose(values, [1 / 3, 2 / 3])
    assert np.allclose(np.abs(vectors), np.eye(2))

    with pytest.raises(NotHermitian):
        herm_eig(QUTRIT_STOCHASTIC)


def test_hermiticity_is_relative_to_the_norm():
    """Small matrices are judged by the same relative tolerance"""
    with pytest.raises(NotHermitian):
        herm_eig(1e-12 * np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert hermitian_residual(np.zeros((3, 3))) == 0.0
    values, _ = herm_eig(np.zeros((2, 2)))
    assert np.array_equal(values, [0.0, 0.0])
    assert hermitian_residual(1e-12 * np.eye(2)) == 0.0


def test_herm_eig_smallest_block_eigenvalue():
    """Smallest eigenvalue of the p₁ block equals the closed form"""
    s2 = math.sqrt(2)
    block = np.array([[379 - 152 * s2, 54 - 9 * s2], [54 - 9 * s2, 190 - 116 * s2]]) / 1008
    values, _ = herm_eig(block)
    expected = (569 - 268 * s2 - 9 * math.sqrt(625 - 216 * s2)) / 2016
    assert abs(values[0] - expected) < 1e-12, f"got {values[0]}, expected {expected}"


def test_herm_eig_reconstruction(random_density):
    m = random_density(4) - 0.1 * np.eye(4)
    values, vectors = herm_eig(m)
    assert np.linalg.norm(m @ vectors - vectors * values) <= 1e-10 * np.linalg.norm(m)
    assert np.allclose(dagger(vectors) @ vectors, np.eye(4), atol=1e-10)


def test_trace_norm_examples(rng):
    assert trace_norm(np.zeros((2, 2))) == 0.0
    assert math.isclose(trace_norm(np.diag([1, 0]) - 0.5 * np.ones((2, 2))), math.sqrt(2), abs_tol=1e-12)
    h = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = h + dagger(h)
    assert math.isclose(trace_norm(h), np.abs(np.linalg.eigvalsh(h)).sum(), rel_tol=1e-10)


def test_frac_power_examples(random_density):
    assert np.allclose(frac_power(np.diag([4, 9]), 0.5), np.diag([2, 3]))
    rho = random_density(3)
    root = frac_power(rho, 0.5)
    assert np.allclose(root @ root, rho, atol=1e-10), "square root squared"
    psi = np.diag([1 / 3, 2 / 3])
    assert np.allclose(frac_power(psi, -0.25) @ frac_power(psi, 0.25), np.eye(2))
    assert np.allclose(frac_power(rho, 1), rho)


def test_frac_power_zero_is_range_projection():
    assert np.allclose(frac_power(np.diag([0.5, 0.5, 0.0]), 0), np.diag([1, 1, 0]))


def test_frac_power_errors():
    with pytest.raises(NotPSD):
        frac_power(np.diag([1.0, -0.5]), 0.5)
    with pytest.raises(SingularNegativePower):
        frac_power(np.diag([1.0, 0.0]), -0.5)


def test_vec_conventions(rng):
    """(x⊗I)vec(A) = vec(xA), (I⊗conj y)vec(A) = vec(Ay*), J vec(A) = vec(A*)"""
    assert np.array_equal(vec(np.eye(2)).ravel(), [1, 0, 0, 1])
    d = 3
    a, x, y = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)) for _ in range(3))
    eye = np.eye(d)
    assert np.allclose(kron(x, eye) @ vec(a), vec(x @ a), atol=1e-12)
    assert np.allclose(kron(eye, np.conj(y)) @ vec(a), vec(a @ dagger(y)), atol=1e-12)
    assert np.allclose(kron(x, eye) @ vec(eye), vec(x))

    shift = np.array([[0, 1], [0, 0]])
    assert np.allclose(modular_conjugation(vec(shift)), vec([[0, 0], [1, 0]]))

    # J x J = I ⊗ conj(x)
    jxj = modular_conjugation(kron(x, eye) @ modular_conjugation(vec(a)))
    assert np.allclose(jxj, kron(eye, np.conj(x)) @ vec(a), atol=1e-12)


def test_unvec_shapes():
    assert np.array_equal(unvec(np.arange(4)), [[0, 1], [2, 3]])
    assert unvec(np.arange(6), (2, 3)).shape == (2, 3)
    with pytest.raises(DimensionMismatch):
        unvec(np.arange(5))


def test_non_finite_entries_rejected():
    with pytest.raises(NonFiniteEntries):
        trace_norm([[np.nan, 0], [0, 1]])
