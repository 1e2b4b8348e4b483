from __future__ import annotations


class QmcError(Exception):
    """Base class for every error raised by qmc."""


class DimensionMismatch(QmcError, ValueError):
    """Operand shapes do not fit together."""


class NotHermitian(QmcError, ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class NotPSD(QmcError, ValueError):
    """A matrix required to be positive semidefinite has a negative eigenvalue."""


class NotNormalized(QmcError, ValueError):
    """A density does not have trace one."""


class NonFiniteEntries(QmcError, ValueError):
    """A matrix contains NaN or infinite entries."""


class SingularNegativePower(QmcError, ValueError):
    """A negative power was requested of a singular matrix."""


class NotAProjection(QmcError, ValueError):
    """p² = p = p* fails."""


class BasisNotOrthonormal(QmcError, ValueError):
    """Columns given as a basis are not orthonormal."""


class NotUnital(QmcError, ValueError):
    """Kraus operators do not satisfy Σ K*K = I."""


class InvalidWeights(QmcError, ValueError):
    """Convex weights are negative or do not sum to one."""


class UnknownColor(QmcError, KeyError):
    """A word uses a color label the coloring does not define."""


class SpecFormatError(QmcError, ValueError):
    """An input file does not follow its schema."""


class NoUnitEigenvalue(QmcError):
    """No eigenvalue close to 1; the channel is malformed."""


class MissingInvariantState(QmcError):
    """Modular data needs a faithful invariant state and none is available."""


class NotInvariant(QmcError):
    """(φ⊗ψ)∘Γ = φ fails, so the dilation isometry is not isometric."""


class HorizonTooLarge(QmcError):
    """The requested horizon exceeds a size guard."""


class NotStrictlyPositive(QmcError):
    """No iterate T̂Δⁿ(pΔ) with n ≤ n_max is strictly positive."""
