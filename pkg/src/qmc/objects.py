"""
States, Heisenberg-picture Kraus channels and their superoperator matrices.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionMismatch, NotNormalized, NoUnitEigenvalue, NotPSD, NotUnital
from .linalg import (
    Matrix,
    as_matrix,
    dagger,
    frac_power,
    herm_eig,
    kron,
    symmetrize,
    trace_norm,
    unvec,
    vec,
)
from .settings import TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class State:
    """Density matrix with its spectral decomposition, eigenvalues descending."""

    rho: Matrix
    eigenvalues: NDArray[np.float64] = field(repr=False)
    eigenvectors: Matrix = field(repr=False)

    @classmethod
    def create(cls, rho: ArrayLike, *, tol: float = TOL.psd) -> State:
        rho = as_matrix(rho)
        if rho.shape[0] != rho.shape[1]:
            raise DimensionMismatch(f"density must be square, got {rho.shape}")
        values, vectors = herm_eig(rho)
        if values[0] < -tol:
            raise NotPSD(f"density has eigenvalue {values[0]:.3e}")
        total = float(np.sum(values))
        if abs(total - 1.0) > tol:
            raise NotNormalized(f"density has trace {total:.12f}, expected 1")
        values = np.clip(values, 0.0, None)[::-1]
        vectors = vectors[:, ::-1]
        return cls(rho=symmetrize(rho), eigenvalues=values, eigenvectors=vectors)

    @classmethod
    def diagonal(cls, weights: Sequence[float]) -> State:
        return cls.create(np.diag(np.asarray(weights, dtype=float)))

    @classmethod
    def pure(cls, vector: ArrayLike) -> State:
        v = as_matrix(vector)
        v = v / np.linalg.norm(v)
        return cls.create(v @ dagger(v))

    @classmethod
    def maximally_mixed(cls, d: int) -> State:
        return cls.create(np.eye(d) / d)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    @property
    def faithful(self) -> bool:
        return bool(self.eigenvalues[-1] > TOL.psd)

    def expectation(self, x: ArrayLike) -> complex:
        return complex(np.trace(self.rho @ as_matrix(x)))

    def power(self, alpha: float) -> Matrix:
        return frac_power(self.rho, alpha)

    def sqrt(self) -> Matrix:
        return (self.eigenvectors * np.sqrt(self.eigenvalues)) @ dagger(self.eigenvectors)

    def tensor(self, other: State) -> State:
        return State.create(kron(self.rho, other.rho))


def _as_kraus_tuple(kraus: Sequence[ArrayLike]) -> Tuple[Matrix, ...]:
    ops = tuple(as_matrix(k) for k in kraus)
    if not ops:
        raise DimensionMismatch("a channel needs at least one Kraus operator")
    shape = ops[0].shape
    for k in ops:
        if k.shape != shape:
            raise DimensionMismatch(f"Kraus shapes differ: {shape} vs {k.shape}")
    return ops


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """
    Heisenberg-picture completely positive map ``T(x) = Σ K* x K``.

    A Kraus operator maps the input space (``dim_in``) into the output space
    (``dim_out``); ``T`` sends ``dim_out × dim_out`` observables to
    ``dim_in × dim_in`` observables.
    """

    kraus: Tuple[Matrix, ...]

    @classmethod
    def create(cls, kraus: Sequence[ArrayLike], *, check_unital: bool = True) -> KrausChannel:
        channel = cls(_as_kraus_tuple(kraus))
        if check_unital:
            residual = channel.unitality_residual()
            if residual > TOL.unital:
                raise NotUnital(f"‖Σ K*K - I‖ = {residual:.3e}")
        return channel

    @classmethod
    def identity(cls, d: int) -> KrausChannel:
        return cls((np.eye(d, dtype=np.complex128),))

    @classmethod
    def unitary(cls, w: ArrayLike) -> KrausChannel:
        return cls.create([w])

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus)

    def unitality_residual(self) -> float:
        total = sum(dagger(k) @ k for k in self.kraus)
        return float(np.linalg.norm(total - np.eye(self.dim_in), ord=2))

    def is_unital(self, *, tol: float = TOL.unital) -> bool:
        return self.unitality_residual() <= tol

    def apply(self, x: ArrayLike) -> Matrix:
        """Heisenberg action ``Σ K* x K``."""

        x = as_matrix(x)
        if x.shape != (self.dim_out, self.dim_out):
            raise DimensionMismatch(f"observable {x.shape} vs channel output {self.dim_out}")
        return sum(dagger(k) @ x @ k for k in self.kraus)

    def predual(self, rho: ArrayLike) -> Matrix:
        """Schrödinger action ``Σ K ρ K*``."""

        rho = as_matrix(rho)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatch(f"density {rho.shape} vs channel input {self.dim_in}")
        return sum(k @ rho @ dagger(k) for k in self.kraus)

    def compose(self, other: KrausChannel) -> KrausChannel:
        """Heisenberg composition ``self ∘ other``: apply ``other`` first, then ``self``."""

        return KrausChannel(tuple(b @ a for a in self.kraus for b in other.kraus))

    def product(self, other: KrausChannel) -> KrausChannel:
        """
        The product coupling ``self ⊗ other′`` on the doubled space.

        The second factor acts on the conjugate copy, so its Kraus operators enter
        entrywise conjugated.
        """

        return KrausChannel(tuple(kron(a, np.conj(b)) for a in self.kraus for b in other.kraus))

    def opposite(self) -> KrausChannel:
        return KrausChannel(tuple(np.conj(k) for k in self.kraus))


@dataclass(frozen=True, eq=False)
class Superoperator:
    """Matrix of a linear map on ``n × n`` matrices in the row-major vec basis."""

    matrix: Matrix

    def __post_init__(self) -> None:
        rows, cols = self.matrix.shape
        n = int(round(np.sqrt(rows)))
        if rows != cols or n * n != rows:
            raise DimensionMismatch(f"superoperator must be n²×n², got {self.matrix.shape}")

    @property
    def n(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def apply(self, x: ArrayLike) -> Matrix:
        return unvec(self.matrix @ vec(x))

    def dual(self) -> Superoperator:
        """Matrix of the adjoint map with respect to the Hilbert-Schmidt pairing."""

        return Superoperator(dagger(self.matrix))

    def choi(self) -> Matrix:
        """``Σ eᵢⱼ ⊗ f(eᵢⱼ)``."""

        n = self.n
        return self.matrix.reshape(n, n, n, n).transpose(2, 0, 3, 1).reshape(n * n, n * n)

    def eigenvalues(self) -> NDArray[np.complex128]:
        return scipy.linalg.eigvals(self.matrix)


def transfer_matrix(channel: KrausChannel) -> Superoperator:
    """Matrix of ``x ↦ Σ K* x K``; ``vec(K* x K) = (K* ⊗ Kᵀ) vec(x)``."""

    if channel.dim_in != channel.dim_out:
        raise DimensionMismatch("transfer matrices need square Kraus operators")
    return Superoperator(sum(np.kron(dagger(k), k.T) for k in channel.kraus))


def is_completely_positive(so: Superoperator, *, tol: float = TOL.cp) -> bool:
    """Choi's criterion: the Choi matrix is Hermitian and PSD."""

    choi = so.choi()
    scale = max(1.0, float(np.linalg.norm(choi)))
    if float(np.linalg.norm(choi - dagger(choi))) > tol * scale:
        return False
    return bool(scipy.linalg.eigvalsh(symmetrize(choi))[0] >= -tol * scale)


@dataclass(frozen=True)
class StationaryState:
    """An invariant density and whether the predual fixed space is one-dimensional."""

    state: State
    unique: bool
    multiplicity: int


def _density_from(block: Matrix) -> Matrix:
    values, vectors = herm_eig(symmetrize(block))
    values = np.clip(values, 0.0, None)
    rho = (vectors * values) @ dagger(vectors)
    return rho / np.trace(rho).real


def invariant_state(channel: KrausChannel, *, tol: float = TOL.unit_eigenvalue) -> StationaryState:
    """
    A density fixed by the predual of a unital channel.

    A one-dimensional eigenvalue-1 eigenspace yields the unique invariant density.
    Otherwise the maximally mixed state is projected onto the fixed space, which
    gives one fixed density and the result is flagged as non-unique.
    """

    d = channel.dim_in
    predual = transfer_matrix(channel).dual()
    values, vectors = scipy.linalg.eig(predual.matrix)
    distance = np.abs(values - 1.0)
    near = np.flatnonzero(distance < tol)
    if near.size == 0:
        raise NoUnitEigenvalue(f"closest eigenvalue to 1 is {values[np.argmin(distance)]}")

    if near.size == 1:
        block = unvec(vectors[:, near[0]])
        trace = np.trace(block)
        if abs(trace) < TOL.trace:
            raise NoUnitEigenvalue("fixed point of the predual has zero trace")
        rho = _density_from(block / trace)
        return StationaryState(State.create(rho, tol=1e-8), unique=True, multiplicity=1)

    logger.warning("predual fixed space has dimension %d; invariant state is not unique", near.size)
    basis, _ = np.linalg.qr(vectors[:, near])
    target = vec(np.eye(d) / d)
    projected = unvec(basis @ (dagger(basis) @ target))
    rho = _density_from(projected)
    return StationaryState(State.create(rho, tol=1e-8), unique=False, multiplicity=int(near.size))


def subdominant_modulus(so: Superoperator | ArrayLike) -> float:
    """Largest eigenvalue modulus after removing the one eigenvalue closest to 1."""

    matrix = so.matrix if isinstance(so, Superoperator) else as_matrix(so)
    values = scipy.linalg.eigvals(matrix)
    rest = np.delete(values, int(np.argmin(np.abs(values - 1.0))))
    if rest.size == 0:
        return 0.0
    return float(np.max(np.abs(rest)))


def state_distance(a: State, b: State) -> float:
    if a.dim != b.dim:
        raise DimensionMismatch(f"states of dimension {a.dim} and {b.dim}")
    return trace_norm(a.rho - b.rho)


def kraus_products(kraus: Sequence[Matrix]) -> List[Matrix]:
    return [dagger(a) @ b for a in kraus for b in kraus]
