"""
Shared fixtures: reference models and seeded random operators.
"""

from typing import Callable

import numpy as np
import pytest
from scipy.stats import unitary_group

from qmc import models
from qmc.dilation import TensorDilation
from qmc.objects import State
from qmc.scattering import certificate


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def random_density(rng) -> Callable[[int], np.ndarray]:
    """Full-rank densities from Ginibre matrices."""

    def make(d: int) -> np.ndarray:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real

    return make


@pytest.fixture
def random_unitary(rng) -> Callable[[int], np.ndarray]:
    def make(d: int) -> np.ndarray:
        return unitary_group.rvs(d, random_state=rng)

    return make


@pytest.fixture
def random_modular_dilation(rng, random_unitary) -> Callable[[int, int], TensorDilation]:
    """
    Dilations with ``[u, ρφ ⊗ ρψ] = 0``.

    ``u = Σ_k u_k ⊗ |k⟩⟨k|`` is block diagonal over the eigenspaces of a generic
    diagonal ψ, and ``φ = I/d`` is invariant for the mixture of unitaries it induces.
    """

    def make(d: int, c: int) -> TensorDilation:
        weights = rng.uniform(0.2, 1.0, size=c)
        weights /= weights.sum()
        u = sum(np.kron(random_unitary(d), np.diag(np.eye(c)[k])) for k in range(c))
        return TensorDilation.create(d, c, u, State.diagonal(weights), State.maximally_mixed(d))

    return make


@pytest.fixture
def qutrit():
    return models.qutrit_model()


@pytest.fixture(scope="session")
def qutrit_certificate():
    return certificate(models.qutrit_model(), 10)


@pytest.fixture
def coloring():
    return models.three_state_coloring()
