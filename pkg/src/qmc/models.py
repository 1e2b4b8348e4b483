"""
Reference models: the three-state road coloring, its quantum embedding on
``M₃ ⊗ M₂``, and a two-state pair on which the coupling inequality is tight.
"""

from __future__ import annotations

import math
from typing import Dict, List, Tuple

import numpy as np

from .classical import RoadColoring
from .dilation import TensorDilation
from .linalg import Matrix, basis_vector, kron
from .objects import State

H = 1 / math.sqrt(2)

SHIFT: Matrix = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=np.complex128)
A: Matrix = np.diag([1.0, H, H]).astype(np.complex128)
A_PLUS: Matrix = np.diag([H, H, 1.0]).astype(np.complex128)

QUTRIT_PSI = (1 / 3, 2 / 3)
QUTRIT_PHI = (4 / 7, 2 / 7, 1 / 7)


def qutrit_unitary_environment_major() -> Matrix:
    """``[[a₊, i/√2 s*], [i/√2 s, a]]`` as a block matrix over the environment."""

    return np.block([[A_PLUS, 1j * H * SHIFT.conj().T], [1j * H * SHIFT, A]])


def qutrit_model(*, with_phi: bool = True) -> TensorDilation:
    return TensorDilation.from_environment_major(
        3,
        2,
        qutrit_unitary_environment_major(),
        State.diagonal(QUTRIT_PSI),
        State.diagonal(QUTRIT_PHI) if with_phi else None,
    )


def qutrit_kraus() -> Tuple[Matrix, Matrix, Matrix, Matrix]:
    """The four Kraus operators of the diagonal coupling, in closed form."""

    s, s_adj = SHIFT, SHIFT.conj().T
    r3, r6 = math.sqrt(3), math.sqrt(6)
    t1 = r3 / 3 * kron(A_PLUS, A_PLUS) + r6 / 6 * kron(s_adj, s_adj)
    t2 = r6 / 6 * kron(s, A_PLUS) - r3 / 3 * kron(A, s_adj)
    t3 = r6 / 6 * kron(A_PLUS, s) - r3 / 3 * kron(s_adj, A)
    t4 = r3 / 6 * kron(s, s) + r6 / 3 * kron(A, A)
    return t1, t2, t3, t4


def _pair(i: int, j: int) -> Matrix:
    return kron(basis_vector(3, i), basis_vector(3, j))


def qutrit_subspaces() -> Dict[int, List[Matrix]]:
    """Bases of the subspaces ``H_k`` spanned by ``e_i ⊗ e_j`` with ``j - i = k``."""

    return {
        0: [_pair(0, 0), _pair(1, 1), _pair(2, 2)],
        1: [_pair(0, 1), _pair(1, 2)],
        -1: [_pair(1, 0), _pair(2, 1)],
        2: [_pair(0, 2)],
        -2: [_pair(2, 0)],
    }


def three_state_coloring() -> RoadColoring:
    """Three states on a line; red steps down, blue steps up, green stays."""

    return RoadColoring.create(
        states=["s1", "s2", "s3"],
        colors=["r", "g", "b"],
        gamma={"r": ["s1", "s1", "s2"], "g": ["s1", "s2", "s3"], "b": ["s2", "s3", "s3"]},
        nu={"r": 1 / 3, "g": 1 / 2, "b": 1 / 6},
    )


def tightness_pair() -> Tuple[State, State]:
    """``|e₁⟩⟨e₁|`` and ``|+⟩⟨+|`` on ``ℂ²``."""

    return State.pure([1.0, 0.0]), State.pure([H, H])


QUTRIT_STOCHASTIC = np.array([[5 / 6, 1 / 6, 0], [1 / 3, 1 / 2, 1 / 6], [0, 1 / 3, 2 / 3]])
