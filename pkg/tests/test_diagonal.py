"""
Tests for diagonal states, diagonal projections and the coupling inequality.
"""

import math

import numpy as np
import pytest

from qmc import models
from qmc.diagonal import (
    CouplingState,
    DiagonalProjection,
    bounds_from_overlap,
    diagonal_state,
    gns_vector,
    is_channel_coupling,
    is_diagonal_projection,
    maximal_diagonal_projection,
    optimize_overlap,
    qci_bounds,
    support_projection,
)
from qmc.dilation import diagonal_coupling, induced_channel
from qmc.errors import BasisNotOrthonormal, DimensionMismatch, NotAProjection
from qmc.linalg import FactorShape, kron, min_eigenvalue, permute_factors, trace_norm
from qmc.objects import KrausChannel, State


def test_gns_vector_examples():
    assert np.allclose(gns_vector(State.maximally_mixed(2)).ravel(), np.array([1, 0, 0, 1]) / math.sqrt(2))
    xi = gns_vector(State.diagonal(models.QUTRIT_PHI))
    expected = np.zeros(9)
    for i, w in enumerate(models.QUTRIT_PHI):
        expected[i * 3 + i] = math.sqrt(w)
    assert np.allclose(xi.ravel(), expected)
    assert math.isclose(np.linalg.norm(xi), 1.0)


def test_gns_vector_of_product(random_density):
    """ξ(ρ⊗σ) equals ξρ ⊗ ξσ after grouping the factors"""
    rho, sigma = State.create(random_density(2)), State.create(random_density(3))
    joint = gns_vector(rho.tensor(sigma))
    regrouped = permute_factors(joint, FactorShape.of(2, 3, 2, 3), (0, 2, 1, 3))
    assert np.allclose(regrouped, kron(gns_vector(rho), gns_vector(sigma)), atol=1e-10)


def test_diagonal_state_marginals(random_density):
    state = State.create(random_density(3))
    coupling = diagonal_state(state)
    assert coupling.marginal_residual() < 1e-10
    recovered = CouplingState.from_density(coupling.rho_hat)
    assert trace_norm(recovered.marginal_1.rho - state.rho) < 1e-10
    assert trace_norm(recovered.marginal_2.rho - state.rho) < 1e-10


def test_product_coupling_marginals(random_density):
    phi, psi = State.create(random_density(2)), State.create(random_density(2))
    coupling = CouplingState.product(phi, psi)
    assert coupling.marginal_residual() < 1e-12
    with pytest.raises(DimensionMismatch):
        CouplingState.product(phi, State.maximally_mixed(3))


def test_support_projection_is_diagonal(random_density):
    state = State.create(random_density(3))
    p = support_projection(state)
    assert p.kind == "support-of-state"
    assert p.rank == 1
    assert is_diagonal_projection(p.p)
    assert math.isclose(diagonal_state(state).overlap(p), 1.0, abs_tol=1e-12)


def test_identity_is_not_diagonal():
    assert not is_diagonal_projection(np.eye(9))
    with pytest.raises(NotAProjection):
        DiagonalProjection.custom(np.eye(4))
    with pytest.raises(NotAProjection):
        is_diagonal_projection(2 * np.eye(4))


def test_maximal_projection_from_random_bases(random_unitary):
    for _ in range(50):
        w = random_unitary(3)
        p = maximal_diagonal_projection(w)
        assert p.kind == "maximal-from-basis"
        assert p.rank == 3
        assert np.allclose(p.p @ p.p, p.p, atol=1e-10)
        assert is_diagonal_projection(p.p)


def test_subprojections_of_diagonal_projections_are_diagonal(random_unitary):
    """Every q ≤ p inherits p(x⊗I)p = p(I⊗xᵀ)p"""
    for _ in range(20):
        w = random_unitary(3)
        for keep in ([0], [1, 2], [0, 2]):
            assert is_diagonal_projection(maximal_diagonal_projection(w[:, keep]).p), keep
        columns = np.hstack([np.kron(w[:, [i]], np.conj(w[:, [i]])) for i in range(3)])
        inner = random_unitary(3)[:, :2]
        q = columns @ inner
        assert is_diagonal_projection(q @ q.conj().T)


def test_coupling_raises_support_projection_on_modular_dilations(random_modular_dilation):
    """T̂Δ(pΔ) ≥ pΔ"""
    for d, c in [(2, 2), (2, 3), (3, 2)]:
        for _ in range(3):
            dil = random_modular_dilation(d, c)
            p = support_projection(dil.phi).p
            hat = diagonal_coupling(dil).channel
            assert min_eigenvalue(hat.apply(p) - p) >= -1e-10, (d, c)


def test_maximal_projection_dominates_support(random_density):
    """The eigenbasis projection contains the GNS vector"""
    state = State.create(random_density(3))
    p = maximal_diagonal_projection(state.eigenvectors)
    assert min_eigenvalue(p.p - support_projection(state).p) >= -1e-10


def test_maximal_projection_rejects_bad_basis():
    with pytest.raises(BasisNotOrthonormal):
        maximal_diagonal_projection(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_bounds_from_overlap_endpoints():
    assert bounds_from_overlap(1.0) == (0.0, 0.0, 1.0)
    bound4, refined, _ = bounds_from_overlap(0.0)
    assert (bound4, refined) == (4.0, 2.0)
    _, refined, _ = bounds_from_overlap(0.75)
    assert math.isclose(refined, 1 + math.sqrt(3) / 2)
    assert bounds_from_overlap(1.5).overlap == 1.0, "overlap is clamped"


def test_product_coupling_optimum_on_tightness_pair():
    phi, psi = models.tightness_pair()
    coupling = CouplingState.product(phi, psi)
    optimum = optimize_overlap(coupling, resolution=1000)
    assert optimum.exact
    assert abs(optimum.best - 0.75) < 1e-5
    p = maximal_diagonal_projection(optimum.basis)
    assert abs(coupling.overlap(p) - optimum.best) < 1e-9
    bounds = qci_bounds(coupling, p)
    assert bounds.refined >= math.sqrt(2) - 1e-9


def test_diagonal_state_reaches_full_overlap():
    coupling = diagonal_state(State.diagonal([0.3, 0.7]))
    assert math.isclose(optimize_overlap(coupling, resolution=200).best, 1.0, abs_tol=1e-12)


def test_qubit_scan_is_monotone_in_resolution(random_density):
    for _ in range(5):
        coupling = CouplingState.from_density(random_density(4))
        values = [optimize_overlap(coupling, resolution=res).best for res in (3, 10, 50, 200, 700)]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:])), values


def test_overlap_heuristic_in_dimension_three():
    coupling = diagonal_state(State.diagonal(models.QUTRIT_PHI))
    optimum = optimize_overlap(coupling, starts=2)
    assert not optimum.exact
    assert optimum.best > 1 - 1e-6


@pytest.mark.parametrize("d", [2, 3])
def test_coupling_inequality_on_random_couplings(d, rng, random_unitary):
    for _ in range(100):
        g = rng.standard_normal((d * d, d * d)) + 1j * rng.standard_normal((d * d, d * d))
        rho_hat = g @ g.conj().T
        coupling = CouplingState.from_density(rho_hat / np.trace(rho_hat).real)
        bounds = qci_bounds(coupling, maximal_diagonal_projection(random_unitary(d)))
        distance = trace_norm(coupling.marginal_1.rho - coupling.marginal_2.rho)
        assert distance <= bounds.refined + 1e-9
        assert bounds.refined <= bounds.bound4 + 1e-12


def test_qci_dimension_mismatch():
    coupling = diagonal_state(State.maximally_mixed(2))
    with pytest.raises(DimensionMismatch):
        qci_bounds(coupling, support_projection(State.maximally_mixed(3)))


def test_channel_coupling_examples(qutrit, random_unitary):
    channel = KrausChannel.unitary(random_unitary(2))
    assert is_channel_coupling(channel.product(channel), channel)

    swap = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            swap[j * 2 + i, i * 2 + j] = 1
    assert not is_channel_coupling(KrausChannel.unitary(swap), KrausChannel.identity(2))

    t = induced_channel(qutrit)
    assert is_channel_coupling(diagonal_coupling(qutrit).channel, t)
