"""
Dense complex linear algebra for operators on tensor products.

Conventions used throughout the package:

* ``vec`` is row-major, ``vec(A)[i*d + j] = A[i, j]``. Hence
  ``(x ⊗ I) vec(A) = vec(x A)`` and ``(I ⊗ conj(y)) vec(A) = vec(A y*)``.
* The commutant of ``B(H)`` acting on ``vec`` space is ``{I ⊗ conj(y)}``; the
  modular conjugation is ``J vec(A) = vec(A*)`` so that ``J x J = I ⊗ conj(x)``.
* Inner products are linear in the first argument: ``<a, b> = b^H a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionMismatch, NonFiniteEntries, NotHermitian, NotPSD, SingularNegativePower
from .settings import TOL

Matrix = NDArray[np.complex128]


def as_matrix(a: ArrayLike) -> Matrix:
    """Coerce to a finite 2-D complex array."""

    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntries("matrix has non-finite entries")
    return m


def dagger(a: ArrayLike) -> Matrix:
    return np.conj(np.asarray(a, dtype=np.complex128)).T


def matrix_unit(d: int, i: int, j: int) -> Matrix:
    e = np.zeros((d, d), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def matrix_units(d: int) -> Iterable[Tuple[int, int, Matrix]]:
    for i in range(d):
        for j in range(d):
            yield i, j, matrix_unit(d, i, j)


def basis_vector(d: int, i: int) -> Matrix:
    e = np.zeros((d, 1), dtype=np.complex128)
    e[i, 0] = 1.0
    return e


def kron(a: ArrayLike, b: ArrayLike) -> Matrix:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*factors: ArrayLike) -> Matrix:
    result = as_matrix(factors[0])
    for factor in factors[1:]:
        result = np.kron(result, as_matrix(factor))
    return result


@dataclass(frozen=True)
class FactorShape:
    """Ordered factor dimensions of a tensor product, e.g. ``(d, d, c, c)``."""

    dims: Tuple[int, ...]

    @classmethod
    def of(cls, *dims: int) -> FactorShape:
        return cls(tuple(int(d) for d in dims))

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    def __len__(self) -> int:
        return len(self.dims)

    def permuted(self, perm: Sequence[int]) -> FactorShape:
        return FactorShape(tuple(self.dims[p] for p in perm))


def inverse_permutation(perm: Sequence[int]) -> Tuple[int, ...]:
    inv = [0] * len(perm)
    for new, old in enumerate(perm):
        inv[old] = new
    return tuple(inv)


def _check_perm(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise DimensionMismatch(f"{perm} is not a permutation of {n} factors")
    return perm


def permute_factors(m: ArrayLike, shape: FactorShape, perm: Sequence[int]) -> Matrix:
    """
    Reorder tensor factors: factor ``k`` of the result is factor ``perm[k]`` of ``m``.

    Square matrices are conjugated by the factor-permutation unitary; column
    vectors are simply reindexed.
    """

    m = as_matrix(m)
    n = len(shape)
    perm = _check_perm(perm, n)
    size = shape.size
    dims = list(shape.dims)

    if m.shape == (size, 1):
        return m.reshape(dims).transpose(perm).reshape(size, 1)
    if m.shape == (size, size):
        axes = list(perm) + [p + n for p in perm]
        return m.reshape(dims + dims).transpose(axes).reshape(size, size)
    raise DimensionMismatch(f"shape {shape.dims} does not annotate a {m.shape} matrix")


def partial_trace(m: ArrayLike, shape: FactorShape, keep: Iterable[int]) -> Matrix:
    """Trace out every factor not listed in ``keep``."""

    m = as_matrix(m)
    n = len(shape)
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise DimensionMismatch(f"keep={keep} is not a nonempty subset of {n} factors")
    if m.shape != (shape.size, shape.size):
        raise DimensionMismatch(f"shape {shape.dims} does not annotate a {m.shape} matrix")

    rows = list(range(n))
    cols = [k + n if k in keep else k for k in range(n)]
    out = keep + [k + n for k in keep]
    kept = math.prod(shape.dims[k] for k in keep)
    reduced = np.einsum(m.reshape(list(shape.dims) * 2), rows + cols, out)
    return reduced.reshape(kept, kept)


def hermitian_residual(m: Matrix) -> float:
    """``‖m - m*‖ / ‖m‖``, zero for the zero matrix."""

    scale = float(np.linalg.norm(m))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(m - dagger(m))) / scale


def symmetrize(m: Matrix) -> Matrix:
    return (m + dagger(m)) / 2


def herm_eig(m: ArrayLike, *, tol: float = TOL.herm) -> Tuple[NDArray[np.float64], Matrix]:
    """
    Eigendecomposition of a Hermitian matrix.

    Returns:
        Ascending real eigenvalues and the matching orthonormal eigenvector columns.
    """

    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"herm_eig needs a square matrix, got {m.shape}")
    residual = hermitian_residual(m)
    if residual > tol:
        raise NotHermitian(f"‖m - m*‖ / ‖m‖ = {residual:.3e} exceeds {tol:.1e}")
    values, vectors = scipy.linalg.eigh(symmetrize(m))
    return values, vectors


def herm_func(
    m: ArrayLike, func: Callable[[NDArray[np.float64]], NDArray[np.float64]]
) -> Matrix:
    """Apply a real function to the spectrum of a Hermitian matrix."""

    values, vectors = herm_eig(m)
    return (vectors * func(values)) @ dagger(vectors)


def min_eigenvalue(m: ArrayLike) -> float:
    return float(scipy.linalg.eigvalsh(symmetrize(as_matrix(m)))[0])


def trace_norm(m: ArrayLike) -> float:
    """Sum of singular values."""

    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"trace_norm needs a square matrix, got {m.shape}")
    return float(np.sum(scipy.linalg.svdvals(m)))


def operator_norm(m: ArrayLike) -> float:
    return float(np.linalg.norm(as_matrix(m), ord=2))


def frac_power(rho: ArrayLike, alpha: float, *, tol: float = TOL.psd) -> Matrix:
    """
    ``ρ^α`` for a positive semidefinite ``ρ``.

    ``α = 0`` yields the projection onto the range of ``ρ``. Negative powers
    require ``ρ`` to be positive definite.
    """

    values, vectors = herm_eig(rho)
    scale = max(1.0, float(np.max(np.abs(values))))
    if values[0] < -tol * scale:
        raise NotPSD(f"smallest eigenvalue {values[0]:.3e} is negative")
    support = values > tol * scale
    if alpha < 0 and not np.all(support):
        raise SingularNegativePower(
            f"power {alpha} of a matrix with eigenvalue {values[0]:.3e}"
        )
    powered = np.zeros_like(values)
    if alpha == 0:
        powered[support] = 1.0
    else:
        powered[support] = values[support] ** alpha
    return (vectors * powered) @ dagger(vectors)


def herm_log(rho: ArrayLike) -> Matrix:
    """Logarithm of a positive definite matrix."""

    values, vectors = herm_eig(rho)
    if values[0] <= 0:
        raise SingularNegativePower(f"log of a matrix with eigenvalue {values[0]:.3e}")
    return (vectors * np.log(values)) @ dagger(vectors)


def vec(a: ArrayLike) -> Matrix:
    return as_matrix(a).reshape(-1, 1)


def unvec(v: ArrayLike, shape: Tuple[int, int] | None = None) -> Matrix:
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    if shape is None:
        d = math.isqrt(v.size)
        if d * d != v.size:
            raise DimensionMismatch(f"length {v.size} is not a perfect square")
        shape = (d, d)
    if shape[0] * shape[1] != v.size:
        raise DimensionMismatch(f"cannot unvec length {v.size} into {shape}")
    return v.reshape(shape)


def modular_conjugation(v: ArrayLike) -> Matrix:
    """``J vec(A) = vec(A*)``."""

    return vec(dagger(unvec(v)))


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a


def is_unitary(u: ArrayLike, *, tol: float = TOL.unital) -> bool:
    u = as_matrix(u)
    return unitarity_residual(u) <= tol


def unitarity_residual(u: ArrayLike) -> float:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return math.inf
    return float(np.linalg.norm(dagger(u) @ u - np.eye(u.shape[0]), ord=2))


def orthonormality_residual(columns: ArrayLike) -> float:
    v = as_matrix(columns)
    return float(np.max(np.abs(dagger(v) @ v - np.eye(v.shape[1]))))
