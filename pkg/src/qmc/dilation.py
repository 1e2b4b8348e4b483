"""
Tensor dilations ``Γ(x) = u*(x ⊗ 1)u`` and the channels they induce.

The interaction unitary ``u`` is stored system-major, i.e. on ``ℂ^d ⊗ ℂ^c``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from .errors import DimensionMismatch, InvalidWeights, MissingInvariantState
from .linalg import (
    FactorShape,
    Matrix,
    as_matrix,
    commutator,
    dagger,
    herm_log,
    kron,
    matrix_units,
    operator_norm,
    permute_factors,
    trace_norm,
    unitarity_residual,
    vec,
)
from .objects import KrausChannel, State, invariant_state, kraus_products
from .settings import TOL

logger = logging.getLogger(__name__)


def _as_state(s: State | ArrayLike) -> State:
    return s if isinstance(s, State) else State.create(s)


@dataclass(frozen=True, eq=False)
class TensorDilation:
    d: int
    c: int
    u: Matrix
    psi: State
    phi: State | None = None

    @classmethod
    def create(
        cls,
        d: int,
        c: int,
        u: ArrayLike,
        psi: State | ArrayLike,
        phi: State | ArrayLike | None = None,
    ) -> TensorDilation:
        """
        Build a dilation from a system-major unitary.

        Unitarity and faithfulness are not enforced here; `validate` reports them.
        """

        u = as_matrix(u)
        if u.shape != (d * c, d * c):
            raise DimensionMismatch(f"u is {u.shape}, expected {(d * c, d * c)} for d={d}, c={c}")
        psi = _as_state(psi)
        if psi.dim != c:
            raise DimensionMismatch(f"psi has dimension {psi.dim}, environment has {c}")
        if phi is not None:
            phi = _as_state(phi)
            if phi.dim != d:
                raise DimensionMismatch(f"phi has dimension {phi.dim}, system has {d}")
        return cls(d, c, u, psi, phi)

    @classmethod
    def from_environment_major(
        cls,
        d: int,
        c: int,
        u: ArrayLike,
        psi: State | ArrayLike,
        phi: State | ArrayLike | None = None,
    ) -> TensorDilation:
        """Accept ``u`` on ``ℂ^c ⊗ ℂ^d`` and swap it to system-major order."""

        swapped = permute_factors(u, FactorShape.of(c, d), (1, 0))
        return cls.create(d, c, swapped, psi, phi)

    def gamma(self, x: ArrayLike) -> Matrix:
        x = as_matrix(x)
        if x.shape != (self.d, self.d):
            raise DimensionMismatch(f"observable {x.shape} vs system dimension {self.d}")
        return dagger(self.u) @ kron(x, np.eye(self.c)) @ self.u

    def environment_blocks(self) -> np.ndarray:
        """
        ``blocks[m, k] = (I ⊗ ⟨f_m|) u (I ⊗ |f_k⟩)`` over the eigenbasis ``f`` of ψ.

        The order of ``f`` is that of ``psi.eigenvalues`` (descending).
        """

        f = self.psi.eigenvectors
        u4 = self.u.reshape(self.d, self.c, self.d, self.c)
        return np.einsum("am,iajb,bk->mkij", np.conj(f), u4, f)

    def with_phi(self, phi: State | ArrayLike) -> TensorDilation:
        phi = _as_state(phi)
        if phi.dim != self.d:
            raise DimensionMismatch(f"phi has dimension {phi.dim}, system has {self.d}")
        return replace(self, phi=phi)


def induced_channel(dil: TensorDilation) -> KrausChannel:
    """``T(x) = (Id ⊗ ψ)(Γ(x))`` with Kraus operators ``√μ_k u[m, k]``."""

    blocks = dil.environment_blocks()
    weights = np.sqrt(dil.psi.eigenvalues)
    kraus = [weights[k] * blocks[m, k] for m in range(dil.c) for k in range(dil.c) if weights[k] > 0]
    return KrausChannel(tuple(kraus))


def opposite_channel(ch: KrausChannel) -> KrausChannel:
    return ch.opposite()


def invariant_phi(dil: TensorDilation) -> State:
    """The dilation's own φ, or the invariant state of the induced channel."""

    if dil.phi is not None:
        return dil.phi
    stationary = invariant_state(induced_channel(dil))
    if not stationary.state.faithful:
        raise MissingInvariantState(
            f"invariant state has smallest eigenvalue {stationary.state.eigenvalues[-1]:.3e}; "
            "modular data is undefined"
        )
    return stationary.state


@dataclass(frozen=True)
class ValidationReport:
    unitarity: float
    psi_min_eigenvalue: float
    invariance: float
    generator: float
    commutant: float
    phi: State
    phi_given: bool

    @property
    def psi_faithful(self) -> bool:
        return self.psi_min_eigenvalue > TOL.psd

    @property
    def modular(self) -> bool:
        return self.generator <= TOL.validation

    @property
    def passed(self) -> bool:
        residuals = (self.unitarity, self.invariance, self.generator, self.commutant)
        return self.psi_faithful and all(r <= TOL.validation for r in residuals)

    def rows(self) -> List[Tuple[str, float, bool]]:
        return [
            ("unitarity ‖u*u - I‖", self.unitarity, self.unitarity <= TOL.validation),
            ("psi min eigenvalue", self.psi_min_eigenvalue, self.psi_faithful),
            ("invariance ‖T*(ρφ) - ρφ‖₁", self.invariance, self.invariance <= TOL.validation),
            ("modular generator", self.generator, self.generator <= TOL.validation),
            ("commutant ‖[u, ρφ⊗ρψ]‖", self.commutant, self.commutant <= TOL.validation),
        ]


def validate(dil: TensorDilation) -> ValidationReport:
    phi = invariant_phi(dil)
    if not phi.faithful:
        raise MissingInvariantState("modular checks need a faithful φ")

    channel = induced_channel(dil)
    invariance = trace_norm(channel.predual(phi.rho) - phi.rho)

    joint = kron(phi.rho, dil.psi.rho)
    if dil.psi.faithful:
        log_phi = herm_log(phi.rho)
        log_joint = kron(log_phi, np.eye(dil.c)) + kron(np.eye(dil.d), herm_log(dil.psi.rho))
        generator = 0.0
        for _, _, e in matrix_units(dil.d):
            lhs = dil.gamma(commutator(log_phi, e))
            rhs = commutator(log_joint, dil.gamma(e))
            generator = max(generator, operator_norm(lhs - rhs))
    else:
        # no modular generator without a faithful ψ
        generator = math.inf

    report = ValidationReport(
        unitarity=unitarity_residual(dil.u),
        psi_min_eigenvalue=float(dil.psi.eigenvalues[-1]),
        invariance=invariance,
        generator=generator,
        commutant=operator_norm(commutator(dil.u, joint)),
        phi=phi,
        phi_given=dil.phi is not None,
    )
    logger.info("validated %dx%d dilation: passed=%s", dil.d, dil.c, report.passed)
    return report


@dataclass(frozen=True, eq=False)
class DiagonalCoupling:
    kraus: Tuple[Matrix, ...]
    source: TensorDilation

    @property
    def channel(self) -> KrausChannel:
        return KrausChannel(self.kraus)

    def invariance_residual(self, phi: State | None = None) -> float:
        """``‖T̂Δ*(|ξφ⟩⟨ξφ|) - |ξφ⟩⟨ξφ|‖₁``."""

        phi = invariant_phi(self.source) if phi is None else phi
        xi = vec(phi.sqrt())
        target = xi @ dagger(xi)
        return trace_norm(self.channel.predual(target) - target)


def diagonal_coupling(dil: TensorDilation) -> DiagonalCoupling:
    """
    Kraus form of the diagonal coupling ``T̂Δ`` of ``T`` and ``T′``.

    ``W_mn = Σ_k √μ_k u[m, k] ⊗ conj(u[n, k])``: both copies see the same
    environment eigenvector ``k``.
    """

    blocks = dil.environment_blocks()
    weights = np.sqrt(dil.psi.eigenvalues)
    kraus = []
    for m in range(dil.c):
        for n in range(dil.c):
            kraus.append(sum(weights[k] * np.kron(blocks[m, k], np.conj(blocks[n, k])) for k in range(dil.c)))
    return DiagonalCoupling(tuple(kraus), dil)


def coupling_from_convex(parts: Sequence[Tuple[float, KrausChannel, KrausChannel]]) -> KrausChannel:
    """``Σ λ_k (S_k ⊗ T_k′)`` as one Kraus channel on the doubled space."""

    if not parts:
        raise InvalidWeights("at least one term is required")
    weights = np.array([float(w) for w, _, _ in parts])
    if np.any(weights < -TOL.probability) or abs(weights.sum() - 1.0) > TOL.probability:
        raise InvalidWeights(f"weights {weights.tolist()} must be nonnegative and sum to 1")

    kraus: List[Matrix] = []
    for w, first, second in parts:
        if w <= 0:
            continue
        kraus.extend(np.sqrt(w) * k for k in first.product(second).kraus)
    return KrausChannel(tuple(kraus))


class Extremality(NamedTuple):
    extremal: bool
    rank: int
    products: int


def is_extremal(ch: KrausChannel, *, tol: float = 1e-10) -> Extremality:
    """Choi's criterion: the products ``K_i* K_j`` are linearly independent."""

    products = kraus_products(ch.kraus)
    coefficients = np.array([p.reshape(-1) for p in products])
    rank = int(np.linalg.matrix_rank(coefficients, tol=tol))
    return Extremality(rank == len(products), rank, len(products))


def phase_normalized(k: ArrayLike) -> Matrix:
    """Divide out the phase of the first entry (row-major) of largest modulus."""

    k = as_matrix(k)
    flat = k.reshape(-1)
    moduli = np.abs(flat)
    top = moduli.max()
    if top == 0:
        return k
    index = int(np.flatnonzero(moduli >= top - 1e-12)[0])
    return k * (abs(flat[index]) / flat[index])
