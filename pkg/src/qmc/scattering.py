"""
Scattering analysis of a tensor dilation.

The dilation isometry ``v`` embeds ``L²(M)`` into ``L²(M ⊗ C)`` and defines the
extended dual transition operator ``Z′(t) = v*(t ⊗ 1)v``. A one-dimensional fixed
space of ``Z′`` (equivalently of the diagonal coupling ``T̂Δ``) certifies
asymptotic completeness, and the iterates ``T̂Δⁿ(pΔ)`` turn that into an explicit
mixing bound through the coupling inequality.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Sequence, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike
from scipy.sparse.linalg import LinearOperator, eigs

from .diagonal import support_projection
from .dilation import DiagonalCoupling, TensorDilation, diagonal_coupling, invariant_phi
from .errors import DimensionMismatch, HorizonTooLarge, NotInvariant, NotStrictlyPositive
from .linalg import (
    FactorShape,
    Matrix,
    as_matrix,
    dagger,
    kron,
    kron_all,
    matrix_unit,
    min_eigenvalue,
    permute_factors,
    trace_norm,
    unvec,
    vec,
)
from .objects import KrausChannel, State, Superoperator, transfer_matrix
from .settings import LIMITS, TOL

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScatteringData:
    v: Matrix
    z_prime: Superoperator
    dilation: TensorDilation

    @classmethod
    def create(cls, dil: TensorDilation) -> ScatteringData:
        return cls(build_isometry(dil), extended_dual(dil), dil)

    def z_channel(self) -> KrausChannel:
        return _isometry_channel(self.v, self.dilation)


def build_isometry(dil: TensorDilation) -> Matrix:
    """
    The isometry ``v`` with ``v(x ξφ) = Γ(x)(ξφ ⊗ ξψ)``.

    Columns are indexed by ``vec(A)`` for matrix units ``A``; rows are ordered
    ``[d, d, c, c]`` so that ``Z′(t) = v*(t ⊗ I)v``.
    """

    phi = invariant_phi(dil)
    d, c = dil.d, dil.c
    inverse_sqrt = phi.power(-0.5)
    reference = kron(phi.sqrt(), dil.psi.sqrt())
    shape = FactorShape.of(d, c, d, c)

    columns = []
    for i in range(d):
        for j in range(d):
            image = dil.gamma(matrix_unit(d, i, j) @ inverse_sqrt) @ reference
            columns.append(permute_factors(vec(image), shape, (0, 2, 1, 3)))
    v = np.hstack(columns)

    residual = float(np.max(np.abs(dagger(v) @ v - np.eye(d * d))))
    if residual > TOL.isometry:
        raise NotInvariant(f"‖v*v - I‖ = {residual:.3e}; φ is not invariant for (φ⊗ψ)∘Γ")
    return v


def _isometry_channel(v: Matrix, dil: TensorDilation) -> KrausChannel:
    d2, c2 = dil.d**2, dil.c**2
    blocks = v.reshape(d2, c2, d2)
    return KrausChannel(tuple(blocks[:, j, :] for j in range(c2)))


def extended_dual(dil: TensorDilation) -> Superoperator:
    """Matrix of ``t ↦ v*(t ⊗ I)v`` on ``B(ℂ^d ⊗ ℂ̄^d)``."""

    return transfer_matrix(_isometry_channel(build_isometry(dil), dil))


def _count_unit_eigenvalues(values: np.ndarray, tol: float) -> int:
    return int(np.count_nonzero(np.abs(values - 1.0) < tol))


def fixed_space_dim(op: Superoperator | KrausChannel, *, tol: float = TOL.fixed_space) -> int:
    """
    Number of eigenvalues within ``tol`` of 1.

    Channels too large to materialize are handled by ARPACK on the channel
    action; that count saturates at ``LIMITS.eigs_count``.
    """

    if isinstance(op, Superoperator):
        return _count_unit_eigenvalues(scipy.linalg.eigvals(op.matrix), tol)

    n = op.dim_in
    if n * n <= LIMITS.materialize:
        return _count_unit_eigenvalues(scipy.linalg.eigvals(transfer_matrix(op).matrix), tol)

    size = n * n
    operator = LinearOperator(
        (size, size), matvec=lambda x: vec(op.apply(unvec(x))).reshape(-1), dtype=np.complex128
    )
    k = min(LIMITS.eigs_count, size - 2)
    values = eigs(operator, k=k, which="LM", return_eigenvectors=False, tol=1e-12)
    count = _count_unit_eigenvalues(values, tol)
    if count == k:
        logger.warning("fixed space has at least %d dimensions; count may be truncated", count)
    return count


def is_asymptotically_complete(dil: TensorDilation) -> bool:
    dim = fixed_space_dim(extended_dual(dil))
    logger.info("fixed space of Z′ has dimension %d", dim)
    return dim == 1


def _alpha_step(z: Matrix, u: Matrix, d: int, c: int) -> Matrix:
    """Apply Γ to the system factor of ``z`` on ``[d, E]``; the result lives on ``[d, c, E]``."""

    e = z.shape[0] // d
    size = d * c * e
    lifted = np.einsum("iejf,ab->iaejbf", z.reshape(d, e, d, e), np.eye(c)).reshape(size, size)
    left = (dagger(u) @ lifted.reshape(d * c, e * size)).reshape(size, size)
    right = left.reshape(size, d * c, e).transpose(0, 2, 1) @ u
    return right.transpose(0, 2, 1).reshape(size, size)


def _alpha_iterates(dil: TensorDilation, x: Matrix) -> Iterator[Matrix]:
    z = x
    while True:
        z = _alpha_step(z, dil.u, dil.d, dil.c)
        yield z


def _defect(z: Matrix, phi: State, psi_sqrt: Matrix, n: int) -> float:
    d = phi.dim
    e = z.shape[0] // d
    conditional = np.einsum("ik,keif->ef", phi.rho, z.reshape(d, e, d, e))
    w = z - kron(np.eye(d), conditional)
    weight = kron_all(phi.sqrt(), *([psi_sqrt] * n)) if n else phi.sqrt()
    return float(np.linalg.norm(w @ weight))


def _check_horizon(dil: TensorDilation, n: int) -> None:
    if dil.d * dil.c**n > LIMITS.horizon:
        raise HorizonTooLarge(f"d·cⁿ = {dil.d * dil.c**n} exceeds {LIMITS.horizon}")


def defect_curve(dil: TensorDilation, x: ArrayLike, n_max: int) -> List[float]:
    """``δ_n`` for ``n = 1 … n_max``; see `finite_horizon_defect`."""

    x = as_matrix(x)
    if x.shape != (dil.d, dil.d):
        raise DimensionMismatch(f"observable {x.shape} vs system dimension {dil.d}")
    _check_horizon(dil, n_max)
    phi = invariant_phi(dil)
    psi_sqrt = dil.psi.sqrt()

    curve = []
    for n, z in zip(range(1, n_max + 1), _alpha_iterates(dil, x)):
        curve.append(_defect(z, phi, psi_sqrt, n))
        logger.debug("defect at n=%d: %.6e", n, curve[-1])
    return curve


def finite_horizon_defect(dil: TensorDilation, x: ArrayLike, n: int) -> float:
    """
    ``‖αⁿ(x⊗1) - 1⊗(φ⊗Id)(αⁿ(x⊗1))‖`` in the 2-norm of ``φ ⊗ ψ^{⊗n}``.

    The defect tends to 0 for every ``x`` exactly when the dilation is
    asymptotically complete.
    """

    if n == 0:
        x = as_matrix(x)
        phi = invariant_phi(dil)
        return _defect(x, phi, dil.psi.sqrt(), 0)
    return defect_curve(dil, x, n)[-1]


def _duality_factors(rho: State, alpha: float) -> Tuple[Matrix, Matrix]:
    # i_α(x) = vec(ρ^α x ρ^{1/2-α}) as a matrix on vec space
    low, high = rho.power(alpha), rho.power(0.5 - alpha)
    return np.kron(low, high.T), np.kron(high, low.T)


def duality_pairing(z: Matrix, t: Matrix, a: Matrix, b: Matrix) -> complex:
    """``Φα(z)(t)``, extended linearly from ``Φα(x ⊗ conj y)(t) = ⟨t iα(x), i_{1/2-α}(y)⟩``."""

    d = math.isqrt(math.isqrt(z.size))
    m = dagger(b) @ t @ a
    return complex(np.einsum("ikjl,klij->", z.reshape(d, d, d, d), m.reshape(d, d, d, d)))


def _random_complex(rng: np.random.Generator, n: int) -> Matrix:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def duality_check(dil: TensorDilation, alpha: float, samples: int = 20, seed: int = 0) -> float:
    """
    Largest ``|Φα(T̂Δ(z))(t) - Φα(z)(Z′(t))|`` over random ``z = x ⊗ conj y`` and ``t``.
    """

    if not 0.0 <= alpha <= 0.5:
        raise ValueError(f"alpha must lie in [0, 1/2], got {alpha}")
    phi = invariant_phi(dil)
    a, b = _duality_factors(phi, alpha)
    hat = diagonal_coupling(dil).channel
    z_prime = extended_dual(dil)
    d = dil.d

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        z = np.kron(_random_complex(rng, d), np.conj(_random_complex(rng, d)))
        t = _random_complex(rng, d * d)
        lhs = duality_pairing(hat.apply(z), t, a, b)
        rhs = duality_pairing(z, z_prime.apply(t), a, b)
        worst = max(worst, abs(lhs - rhs))
    logger.debug("duality residual at alpha=%.3f: %.3e", alpha, worst)
    return worst


class FixedSpaces(NamedTuple):
    z_prime: int
    coupling: int


def fixed_spaces(dil: TensorDilation, coupling: DiagonalCoupling | None = None) -> FixedSpaces:
    """Fixed-space dimensions of ``Z′`` and of ``T̂Δ``."""

    if coupling is None:
        coupling = diagonal_coupling(dil)
    return FixedSpaces(fixed_space_dim(extended_dual(dil)), fixed_space_dim(coupling.channel))


@dataclass(frozen=True, eq=False)
class MixingCertificate:
    n0: int
    r: float
    p_delta_min_eigs: List[Tuple[int, float]]
    complete: bool
    fix_dim_Z: int
    fix_dim_coupling: int
    coupling: DiagonalCoupling = field(repr=False)
    iterates: Tuple[Matrix, ...] = field(repr=False)

    @property
    def p_delta(self) -> Matrix:
        return self.iterates[0]

    def iterate(self, n: int) -> Matrix:
        """``T̂Δⁿ(pΔ)``; iterates past the stored ones are recomputed on each call."""

        if n < len(self.iterates):
            return self.iterates[n]
        channel = self.coupling.channel
        q = self.iterates[-1]
        for _ in range(n - len(self.iterates) + 1):
            q = channel.apply(q)
        return q


def certificate(dil: TensorDilation, n_max: int = 10, *, fixed: FixedSpaces | None = None) -> MixingCertificate:
    """
    Find the first ``n0`` with ``T̂Δ^{n0}(pΔ)`` strictly positive.

    ``fixed`` reuses fixed-space dimensions the caller already has.

    Raises:
        NotStrictlyPositive: no ``n ≤ n_max`` qualifies.
    """

    phi = invariant_phi(dil)
    coupling = diagonal_coupling(dil)
    channel = coupling.channel
    p_delta = support_projection(phi).p

    iterates = [p_delta]
    eigs_by_n: List[Tuple[int, float]] = []
    n0 = 0
    for n in range(1, n_max + 1):
        iterates.append(channel.apply(iterates[-1]))
        lam = min_eigenvalue(iterates[-1])
        eigs_by_n.append((n, lam))
        logger.debug("λmin(T̂Δ^%d(pΔ)) = %.12e", n, lam)
        if not n0 and lam > TOL.strict_positivity:
            n0 = n

    fix_z, fix_coupling = fixed if fixed is not None else fixed_spaces(dil, coupling)
    if not n0:
        raise NotStrictlyPositive(
            f"λmin stays ≤ {TOL.strict_positivity:.0e} up to n={n_max} "
            f"(fixed spaces: Z′ {fix_z}, T̂Δ {fix_coupling})"
        )
    r = dict(eigs_by_n)[n0]
    logger.info("certificate: n0=%d r=%.12f, fixed spaces %d/%d", n0, r, fix_z, fix_coupling)
    return MixingCertificate(
        n0=n0,
        r=r,
        p_delta_min_eigs=eigs_by_n,
        complete=fix_z == 1,
        fix_dim_Z=fix_z,
        fix_dim_coupling=fix_coupling,
        coupling=coupling,
        iterates=tuple(iterates),
    )


class MixingBound(NamedTuple):
    direct: float
    closed_form: float


def mixing_bound(cert: MixingCertificate, n: int) -> MixingBound:
    """
    Bounds on ``sup ‖φ₁∘Tⁿ - φ₂∘Tⁿ‖`` from the certificate.

    ``direct`` uses the actual iterate, ``4(1 - λmin(T̂Δⁿ(pΔ)))^{1/2}``;
    ``closed_form`` is ``4(1 - r)^{⌊n/n0⌋/2}``.
    """

    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    lam = min(1.0, max(0.0, min_eigenvalue(cert.iterate(n))))
    direct = 4.0 * math.sqrt(1.0 - lam)
    closed_form = 4.0 * (1.0 - cert.r) ** ((n // cert.n0) / 2)
    return MixingBound(direct, closed_form)


def compress(q: ArrayLike, vectors: Sequence[ArrayLike]) -> Matrix:
    """``V* q V`` where the columns of ``V`` are ``vectors``."""

    basis = np.hstack([as_matrix(v) for v in vectors])
    q = as_matrix(q)
    if basis.shape[0] != q.shape[0]:
        raise DimensionMismatch(f"vectors of length {basis.shape[0]} vs operator {q.shape}")
    return dagger(basis) @ q @ basis


def absorption_curve(
    coupling: DiagonalCoupling | KrausChannel, rho0: ArrayLike, target: ArrayLike, n_max: int
) -> List[float]:
    """Trace-norm distance of the predual iterates of ``rho0`` to ``target``, ``n = 0 … n_max``."""

    channel = coupling.channel if isinstance(coupling, DiagonalCoupling) else coupling
    rho = as_matrix(rho0)
    target = as_matrix(target)
    curve = [trace_norm(rho - target)]
    for _ in range(n_max):
        rho = channel.predual(rho)
        curve.append(trace_norm(rho - target))
    return curve
