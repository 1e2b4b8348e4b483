from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by every module."""

    herm: float = 1e-9
    psd: float = 1e-10
    trace: float = 1e-10
    unital: float = 1e-9
    cp: float = 1e-9
    projection: float = 1e-9
    diagonal: float = 1e-9
    orthonormal: float = 1e-9
    coupling: float = 1e-9
    unit_eigenvalue: float = 1e-6
    fixed_space: float = 1e-7
    strict_positivity: float = 1e-12
    validation: float = 1e-8
    isometry: float = 1e-9
    probability: float = 1e-12


@dataclass(frozen=True)
class Limits:
    """Size guards for dense materialization and exhaustive enumeration."""

    materialize: int = 1296
    horizon: int = 4096
    enumeration: int = 10**7
    eigs_count: int = 32


TOL = Tolerances()
LIMITS = Limits()
