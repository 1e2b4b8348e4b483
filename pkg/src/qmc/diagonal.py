"""
Diagonal states and diagonal projections on ``B(H) ⊗ B(H)′ ≅ B(H ⊗ H̄)``.

The second tensor factor always carries the commutant in its conjugate
realization, so ``x ⊗ I`` and ``I ⊗ xᵀ = J x* J`` are the two copies of an
observable that a diagonal projection must identify.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np
import scipy.linalg
import scipy.optimize
from numpy.typing import ArrayLike
from scipy.stats import unitary_group

from .errors import BasisNotOrthonormal, DimensionMismatch, NotAProjection
from .linalg import (
    FactorShape,
    Matrix,
    as_matrix,
    dagger,
    kron,
    matrix_units,
    orthonormality_residual,
    partial_trace,
    vec,
)
from .objects import KrausChannel, State
from .settings import TOL

logger = logging.getLogger(__name__)

ProjectionKind = Literal["support-of-state", "maximal-from-basis", "custom"]


def _doubled_dim(n: int) -> int:
    d = math.isqrt(n)
    if d * d != n:
        raise DimensionMismatch(f"dimension {n} is not of the form d²")
    return d


def _projection_residual(p: Matrix) -> float:
    return max(
        float(np.max(np.abs(p @ p - p))),
        float(np.max(np.abs(p - dagger(p)))),
    )


def diagonal_residual(p: ArrayLike) -> float:
    """``max ‖p(eᵢⱼ⊗I)p - p(I⊗eᵢⱼᵀ)p‖`` over matrix units."""

    p = as_matrix(p)
    d = _doubled_dim(p.shape[0])
    eye = np.eye(d)
    worst = 0.0
    for _, _, e in matrix_units(d):
        left = p @ kron(e, eye) @ p
        right = p @ kron(eye, e.T) @ p
        worst = max(worst, float(np.max(np.abs(left - right))))
    return worst


def is_diagonal_projection(p: ArrayLike, *, tol: float = TOL.diagonal) -> bool:
    p = as_matrix(p)
    if p.shape[0] != p.shape[1]:
        raise NotAProjection(f"projection must be square, got {p.shape}")
    residual = _projection_residual(p)
    if residual > TOL.projection:
        raise NotAProjection(f"‖p² - p‖, ‖p - p*‖ reach {residual:.3e}")
    return diagonal_residual(p) <= tol


@dataclass(frozen=True, eq=False)
class DiagonalProjection:
    p: Matrix
    kind: ProjectionKind = "custom"

    @classmethod
    def custom(cls, p: ArrayLike) -> DiagonalProjection:
        p = as_matrix(p)
        if not is_diagonal_projection(p):
            raise NotAProjection("projection does not identify x⊗I with I⊗xᵀ")
        return cls(p, "custom")

    @property
    def dim(self) -> int:
        return _doubled_dim(self.p.shape[0])

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.p).real))


@dataclass(frozen=True, eq=False)
class CouplingState:
    """
    A state on ``M ⊗ M′`` together with its marginals ``(φ, ψ)``.

    The second factor sees the opposite state, so ``tr₁(ρ̂) = ρψᵀ``.
    """

    rho_hat: Matrix
    marginal_1: State
    marginal_2: State

    @classmethod
    def from_density(cls, rho_hat: ArrayLike) -> CouplingState:
        rho_hat = as_matrix(rho_hat)
        d = _doubled_dim(rho_hat.shape[0])
        shape = FactorShape.of(d, d)
        first = partial_trace(rho_hat, shape, keep=[0])
        second = partial_trace(rho_hat, shape, keep=[1]).T
        return cls(rho_hat, State.create(first, tol=1e-9), State.create(second, tol=1e-9))

    @classmethod
    def product(cls, phi: State, psi: State) -> CouplingState:
        if phi.dim != psi.dim:
            raise DimensionMismatch(f"marginals of dimension {phi.dim} and {psi.dim}")
        return cls(kron(phi.rho, psi.rho.T), phi, psi)

    @property
    def dim(self) -> int:
        return self.marginal_1.dim

    def marginal_residual(self) -> float:
        shape = FactorShape.of(self.dim, self.dim)
        first = partial_trace(self.rho_hat, shape, keep=[0]) - self.marginal_1.rho
        second = partial_trace(self.rho_hat, shape, keep=[1]) - self.marginal_2.rho.T
        return max(float(np.max(np.abs(first))), float(np.max(np.abs(second))))

    def overlap(self, projection: DiagonalProjection | ArrayLike) -> float:
        """``φ̂(p)`` clamped to ``[0, 1]``."""

        p = projection.p if isinstance(projection, DiagonalProjection) else as_matrix(projection)
        if p.shape != self.rho_hat.shape:
            raise DimensionMismatch(f"projection {p.shape} vs coupling {self.rho_hat.shape}")
        value = float(np.trace(self.rho_hat @ p).real)
        return min(1.0, max(0.0, value))


def gns_vector(state: State) -> Matrix:
    """``ξφ = vec(ρ^{1/2}) = Σ √λᵢ eᵢ ⊗ conj(eᵢ)``."""

    return vec(state.sqrt())


def diagonal_state(state: State) -> CouplingState:
    xi = gns_vector(state)
    return CouplingState(xi @ dagger(xi), state, state)


def support_projection(state: State) -> DiagonalProjection:
    xi = gns_vector(state)
    return DiagonalProjection(xi @ dagger(xi), "support-of-state")


def maximal_diagonal_projection(basis: ArrayLike) -> DiagonalProjection:
    """``Σᵢ |eᵢ⊗conj(eᵢ)⟩⟨eᵢ⊗conj(eᵢ)|`` for orthonormal columns ``eᵢ``."""

    basis = as_matrix(basis)
    residual = orthonormality_residual(basis)
    if residual > TOL.orthonormal:
        raise BasisNotOrthonormal(f"‖B*B - I‖ = {residual:.3e}")
    columns = [np.kron(basis[:, [i]], np.conj(basis[:, [i]])) for i in range(basis.shape[1])]
    w = np.hstack(columns)
    return DiagonalProjection(w @ dagger(w), "maximal-from-basis")


class QciBounds(NamedTuple):
    bound4: float
    refined: float
    overlap: float


def bounds_from_overlap(v: float) -> QciBounds:
    v = min(1.0, max(0.0, float(v)))
    bound4 = 4.0 * math.sqrt(1.0 - v)
    refined = 2.0 * (1.0 + math.sqrt(v)) * math.sqrt(1.0 - v)
    return QciBounds(bound4, refined, v)


def qci_bounds(coupling: CouplingState, projection: DiagonalProjection) -> QciBounds:
    """
    Quantum coupling inequality.

    Returns:
        ``4(1-v)^{1/2}`` and the refined ``2(1+v^{1/2})(1-v)^{1/2}`` with
        ``v = φ̂(p)``. Both bound ``‖φ - ψ‖`` from above.
    """

    if projection.dim != coupling.dim:
        raise DimensionMismatch(f"projection on M_{projection.dim} vs coupling on M_{coupling.dim}")
    return bounds_from_overlap(coupling.overlap(projection))


class OverlapOptimum(NamedTuple):
    best: float
    basis: Matrix
    exact: bool


def _qubit_basis(r: float, omega: float) -> Matrix:
    a, b = math.sqrt(r), math.sqrt(1.0 - r)
    phase = np.exp(1j * omega)
    return np.array([[a, -np.conj(phase) * b], [phase * b, a]], dtype=np.complex128)


def _grid_size(resolution: int) -> int:
    """Smallest power of two ≥ ``resolution``; finer grids contain coarser ones."""

    return 1 << max(1, resolution - 1).bit_length()


def _scan_qubit(rho_hat: Matrix, resolution: int) -> OverlapOptimum:
    n = _grid_size(resolution)
    omegas = 2.0 * np.pi * np.arange(n) / n
    rs = np.linspace(0.0, 1.0, n + 1)
    a = np.sqrt(rs)[None, :]
    b = np.sqrt(1.0 - rs)[None, :]
    phase = np.exp(1j * omegas)[:, None]

    # columns (a, e^{iω} b) and (-e^{-iω} b, a), each as v ⊗ conj(v)
    first = np.stack(np.broadcast_arrays(a * a, a * b * np.conj(phase), a * b * phase, b * b), axis=-1)
    second = np.stack(np.broadcast_arrays(b * b, -a * b * np.conj(phase), -a * b * phase, a * a), axis=-1)
    values = (
        np.einsum("...i,ij,...j->...", np.conj(first), rho_hat, first).real
        + np.einsum("...i,ij,...j->...", np.conj(second), rho_hat, second).real
    )
    w, r = np.unravel_index(int(np.argmax(values)), values.shape)
    best = min(1.0, max(0.0, float(values[w, r])))
    logger.debug("qubit scan: best overlap %.12f at ω=%.6f r=%.6f", best, omegas[w], rs[r])
    return OverlapOptimum(best, _qubit_basis(float(rs[r]), float(omegas[w])), exact=True)


def _hermitian_from(params: np.ndarray, d: int) -> Matrix:
    h = np.zeros((d, d), dtype=np.complex128)
    upper = np.triu_indices(d, 1)
    n_off = len(upper[0])
    h[np.diag_indices(d)] = params[:d]
    h[upper] = params[d : d + n_off] + 1j * params[d + n_off :]
    return h + np.conj(np.triu(h, 1)).T


def _ascend(rho_hat: Matrix, start: Matrix) -> tuple[float, Matrix]:
    d = start.shape[0]

    def basis_for(params: np.ndarray) -> Matrix:
        return start @ scipy.linalg.expm(1j * _hermitian_from(params, d))

    def negative_overlap(params: np.ndarray) -> float:
        p = maximal_diagonal_projection(basis_for(params)).p
        return -float(np.trace(rho_hat @ p).real)

    result = scipy.optimize.minimize(negative_overlap, np.zeros(d * d), method="BFGS")
    basis = basis_for(result.x)
    return -float(result.fun), basis


def optimize_overlap(
    coupling: CouplingState, resolution: int = 1000, *, seed: int = 0, starts: int = 10
) -> OverlapOptimum:
    """
    Maximize ``φ̂(p)`` over maximal diagonal projections.

    For qubits the full ``(ω, r)`` parametrization of orthonormal bases is scanned
    on a grid of ``2^k ≥ resolution`` points per axis, so a larger resolution never
    gives a smaller optimum. Larger dimensions use local ascent over
    unitaries from random starts; that result is only a lower bound on the maximum.
    """

    if coupling.dim == 2:
        return _scan_qubit(coupling.rho_hat, resolution)

    logger.warning("overlap optimization in dimension %d is heuristic", coupling.dim)
    rng = np.random.default_rng(seed)
    candidates = [np.eye(coupling.dim, dtype=np.complex128), coupling.marginal_1.eigenvectors]
    candidates += [unitary_group.rvs(coupling.dim, random_state=rng) for _ in range(starts)]

    best, best_basis = -math.inf, candidates[0]
    for start in candidates:
        value, basis = _ascend(coupling.rho_hat, start)
        if value > best:
            best, best_basis = value, basis
    return OverlapOptimum(min(1.0, max(0.0, best)), best_basis, exact=False)


def coupling_residual(
    hat: KrausChannel, first: KrausChannel, second: KrausChannel | None = None
) -> float:
    """Worst deviation from ``T̂(x⊗I) = S(x)⊗I`` and ``T̂(I⊗conj y) = I⊗conj T(y)``."""

    second = first if second is None else second
    d = first.dim_in
    if hat.dim_in != d * d or second.dim_in != d:
        raise DimensionMismatch(f"coupling on {hat.dim_in} vs marginals on {d} and {second.dim_in}")
    eye = np.eye(d)
    worst = 0.0
    for _, _, e in matrix_units(d):
        left = hat.apply(kron(e, eye)) - kron(first.apply(e), eye)
        right = hat.apply(kron(eye, np.conj(e))) - kron(eye, np.conj(second.apply(e)))
        worst = max(worst, float(np.max(np.abs(left))), float(np.max(np.abs(right))))
    return worst


def is_channel_coupling(
    hat: KrausChannel,
    first: KrausChannel,
    second: KrausChannel | None = None,
    *,
    tol: float = TOL.coupling,
) -> bool:
    """Whether ``hat`` couples ``first`` with the opposite of ``second`` (default ``first``)."""

    return coupling_residual(hat, first, second) <= tol
