from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from .dilation import TensorDilation, ValidationReport, diagonal_coupling, invariant_phi, validate
from .diagonal import support_projection
from .errors import NotStrictlyPositive
from .linalg import matrix_unit, min_eigenvalue
from .report import TableFormatter
from .scattering import (
    MixingCertificate,
    certificate,
    defect_curve,
    duality_check,
    fixed_spaces,
    mixing_bound,
)
from .settings import LIMITS

logger = logging.getLogger(__name__)

BOUND_HEADERS = ("n", "lambda_min", "direct_bound", "closed_form_bound")
DEFAULT_ALPHAS = (0.0, 0.25, 0.5)


@dataclass
class AnalysisReport:
    validation: ValidationReport
    complete: bool | None = None
    fix_dim_Z: int | None = None
    fix_dim_coupling: int | None = None
    n0: int | None = None
    r: float | None = None
    bounds: List[Tuple[int, float, float, float]] = field(default_factory=list)
    duality: Dict[float, float] = field(default_factory=dict)
    defect: List[float] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.n0 is not None

    def bound_table(self) -> TableFormatter:
        table = TableFormatter(BOUND_HEADERS)
        table.extend(self.bounds)
        return table

    def summary_table(self) -> TableFormatter:
        table = TableFormatter(["quantity", "value", "status"])
        for name, value, ok in self.validation.rows():
            table.add_row(name, value, ok)
        if self.complete is not None:
            table.add_row("fixed space of Z′", self.fix_dim_Z, self.fix_dim_Z == 1)
            table.add_row("fixed space of T̂Δ", self.fix_dim_coupling, self.fix_dim_coupling == 1)
            table.add_row("n0", self.n0, self.certified)
            table.add_row("r", self.r, self.certified)
        for alpha, residual in sorted(self.duality.items()):
            table.add_row(f"duality residual α={alpha:g}", residual, residual <= 1e-9)
        for n, delta in enumerate(self.defect, start=1):
            table.add_row(f"defect δ_{n}(e₁₁)", delta, None)
        return table

    def to_dict(self) -> Dict[str, Any]:
        v = self.validation
        return {
            "validation": {
                "unitarity": v.unitarity,
                "psi_min_eigenvalue": v.psi_min_eigenvalue,
                "invariance": v.invariance,
                "generator": v.generator if math.isfinite(v.generator) else None,
                "commutant": v.commutant,
                "passed": v.passed,
            },
            "complete": self.complete,
            "fix_dim_Z": self.fix_dim_Z,
            "fix_dim_coupling": self.fix_dim_coupling,
            "n0": self.n0,
            "r": self.r,
            "bounds": [
                {k: (None if isinstance(x, float) and math.isnan(x) else x) for k, x in zip(BOUND_HEADERS, row)}
                for row in self.bounds
            ],
            "duality": {f"{alpha:g}": residual for alpha, residual in sorted(self.duality.items())},
            "defect": self.defect,
        }


def _defect_horizon(dil: TensorDilation, requested: int) -> int:
    n = 0
    while n < requested and dil.d * dil.c ** (n + 1) <= LIMITS.horizon:
        n += 1
    return n


def _bound_rows(dil: TensorDilation, cert: MixingCertificate | None, max_n: int) -> List[Tuple[int, float, float, float]]:
    if cert is not None:
        rows = []
        for n in range(max_n + 1):
            bound = mixing_bound(cert, n)
            rows.append((n, min_eigenvalue(cert.iterate(n)), bound.direct, bound.closed_form))
        return rows

    # no certificate: the direct bound still holds, the closed form does not exist
    channel = diagonal_coupling(dil).channel
    q = support_projection(invariant_phi(dil)).p
    rows = []
    for n in range(max_n + 1):
        lam = min(1.0, max(0.0, min_eigenvalue(q)))
        rows.append((n, lam, 4.0 * math.sqrt(1.0 - lam), math.nan))
        q = channel.apply(q)
    return rows


def analyze(
    dil: TensorDilation,
    *,
    max_n: int = 10,
    alphas: Sequence[float] = DEFAULT_ALPHAS,
    samples: int = 20,
    seed: int = 0,
    defect_n: int = 6,
) -> AnalysisReport:
    """
    Validation, completeness verdicts, certificate, bound table, duality residuals
    and the defect curve of ``e₁₁``.

    ``max_n = 0`` or a failed validation stops after validation.
    """

    report = AnalysisReport(validate(dil))
    if max_n == 0 or not report.validation.passed:
        return report

    fixed = fixed_spaces(dil)
    report.fix_dim_Z, report.fix_dim_coupling = fixed
    report.complete = report.fix_dim_Z == 1
    if (report.fix_dim_Z == 1) != (report.fix_dim_coupling == 1):
        logger.warning(
            "fixed spaces disagree: Z′ has %d, T̂Δ has %d", report.fix_dim_Z, report.fix_dim_coupling
        )

    cert = None
    try:
        cert = certificate(dil, max_n, fixed=fixed)
        report.n0, report.r = cert.n0, cert.r
    except NotStrictlyPositive as e:
        logger.info("certificate withheld: %s", e)
    report.bounds = _bound_rows(dil, cert, max_n)

    report.duality = {alpha: duality_check(dil, alpha, samples, seed) for alpha in alphas}
    horizon = _defect_horizon(dil, defect_n)
    if horizon:
        report.defect = defect_curve(dil, matrix_unit(dil.d, 0, 0), horizon)
    return report
