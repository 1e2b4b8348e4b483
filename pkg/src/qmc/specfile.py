"""
JSON file formats.

Dilation spec::

    {"d": 3, "c": 2, "ordering": "system_environment",
     "u": [[[re, im], ...], ...], "psi": {"diag": [...]}, "phi": [[...], ...]}

Complex entries are ``[re, im]`` pairs (plain numbers are read as real);
``psi`` and ``phi`` are matrices or ``{"diag": [...]}``; ``phi`` is optional.
``ordering`` is required; ``environment_system`` swaps the factors of ``u`` on load.

Road coloring::

    {"states": [...], "colors": [...], "gamma": {color: [targets]}, "nu": {color: p}}
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping

import numpy as np

from .classical import RoadColoring
from .dilation import TensorDilation
from .errors import SpecFormatError
from .linalg import FactorShape, Matrix, permute_factors
from .objects import State

logger = logging.getLogger(__name__)

Ordering = Literal["system_environment", "environment_system"]
ORDERINGS = ("system_environment", "environment_system")


def _read_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from e


def _entry(value: Any, where: str) -> complex:
    if isinstance(value, bool):
        raise SpecFormatError(f"{where}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise SpecFormatError(f"{where}: expected a number or [re, im], got {value!r}")


def _matrix(value: Any, field: str, size: int) -> Matrix:
    if isinstance(value, Mapping):
        if set(value) != {"diag"}:
            raise SpecFormatError(f"field {field!r}: only the key 'diag' is allowed, got {sorted(value)}")
        diag = value["diag"]
        if not isinstance(diag, list) or len(diag) != size:
            raise SpecFormatError(f"field {field!r}: 'diag' must list {size} entries")
        return np.diag([_entry(v, f"{field}.diag[{i}]") for i, v in enumerate(diag)])

    if not isinstance(value, list) or len(value) != size:
        raise SpecFormatError(f"field {field!r}: expected {size} rows")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != size:
            raise SpecFormatError(f"field {field!r} row {i}: expected {size} entries")
        rows.append([_entry(v, f"{field}[{i}][{j}]") for j, v in enumerate(row)])
    return np.array(rows, dtype=np.complex128)


def _count(data: Mapping[str, Any], field: str) -> int:
    value = data.get(field)
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise SpecFormatError(f"field {field!r}: expected a positive integer, got {value!r}")
    return value


def parse_dilation_spec(data: Any) -> TensorDilation:
    if not isinstance(data, Mapping):
        raise SpecFormatError("dilation spec must be a JSON object")
    d, c = _count(data, "d"), _count(data, "c")
    ordering = data.get("ordering")
    if ordering not in ORDERINGS:
        raise SpecFormatError(f"field 'ordering': expected one of {list(ORDERINGS)}, got {ordering!r}")
    for field in ("u", "psi"):
        if field not in data:
            raise SpecFormatError(f"missing field {field!r}")

    u = _matrix(data["u"], "u", d * c)
    psi = State.create(_matrix(data["psi"], "psi", c))
    phi = State.create(_matrix(data["phi"], "phi", d)) if data.get("phi") is not None else None

    if ordering == "environment_system":
        logger.debug("swapping environment-major u to system-major")
        return TensorDilation.from_environment_major(d, c, u, psi, phi)
    return TensorDilation.create(d, c, u, psi, phi)


def load_dilation_spec(path: str | Path) -> TensorDilation:
    return parse_dilation_spec(_read_json(path))


def _encode(m: Matrix) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def dump_dilation_spec(
    dil: TensorDilation, path: str | Path, ordering: Ordering = "system_environment"
) -> None:
    u = dil.u
    if ordering == "environment_system":
        u = permute_factors(u, FactorShape.of(dil.d, dil.c), (1, 0))
    data: Dict[str, Any] = {
        "d": dil.d,
        "c": dil.c,
        "ordering": ordering,
        "u": _encode(u),
        "psi": _encode(dil.psi.rho),
    }
    if dil.phi is not None:
        data["phi"] = _encode(dil.phi.rho)
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")


def parse_road_coloring(data: Any) -> RoadColoring:
    if not isinstance(data, Mapping):
        raise SpecFormatError("road coloring must be a JSON object")
    for field, kind in (("states", list), ("colors", list), ("gamma", Mapping), ("nu", Mapping)):
        if not isinstance(data.get(field), kind):
            raise SpecFormatError(f"field {field!r}: expected a JSON {'array' if kind is list else 'object'}")
    for color, p in data["nu"].items():
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise SpecFormatError(f"field 'nu.{color}': expected a number, got {p!r}")
    for color, targets in data["gamma"].items():
        if not isinstance(targets, list):
            raise SpecFormatError(f"field 'gamma.{color}': expected an array of targets")
    return RoadColoring.create(data["states"], data["colors"], data["gamma"], data["nu"])


def load_road_coloring(path: str | Path) -> RoadColoring:
    return parse_road_coloring(_read_json(path))


def dump_road_coloring(rc: RoadColoring, path: str | Path) -> None:
    data = {
        "states": list(rc.states),
        "colors": list(rc.colors),
        "gamma": {c: [rc.states[t] for t in rc.gamma[i]] for i, c in enumerate(rc.colors)},
        "nu": {c: float(rc.nu[i]) for i, c in enumerate(rc.colors)},
    }
    Path(path).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
