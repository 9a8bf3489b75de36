"""Structured-text (JSON) serialization of the domain objects.

Components are tagged records with the field names `kind`, `center`, `radius`,
`vertices`, `a`, `b`, `p`; complex numbers are two-element [re, im] lists.
Scenario files carry a `schema_version` field for forward compatibility.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .approx import PiecewisePolynomial
from .errors import ConfigError
from .geometry import (
    CompactSet,
    ConvexPolygon,
    Disk,
    Segment,
    SinglePoint,
)
from .potential import GreensModel

SCHEMA_VERSION = 1


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _un_c(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def component_to_record(c) -> dict:
    if isinstance(c, Disk):
        return {"kind": "disk", "center": _c(c.center), "radius": c.radius}
    if isinstance(c, ConvexPolygon):
        return {"kind": "polygon", "vertices": [_c(v) for v in c.vertices]}
    if isinstance(c, Segment):
        return {"kind": "segment", "a": _c(c.a), "b": _c(c.b)}
    if isinstance(c, SinglePoint):
        return {"kind": "point", "p": _c(c.p)}
    raise ConfigError(f"unserializable component {c!r}")


def record_to_component(rec: dict):
    try:
        kind = rec["kind"]
        if kind == "disk":
            return Disk(_un_c(rec["center"]), float(rec["radius"]))
        if kind == "polygon":
            return ConvexPolygon(tuple(_un_c(v) for v in rec["vertices"]))
        if kind == "segment":
            return Segment(_un_c(rec["a"]), _un_c(rec["b"]))
        if kind == "point":
            return SinglePoint(_un_c(rec["p"]))
    except (KeyError, TypeError, IndexError) as err:
        raise ConfigError(f"malformed component record {rec!r}: {err}") from err
    raise ConfigError(f"unknown component kind {kind!r}")


def compact_set_to_records(L: CompactSet) -> list:
    return [component_to_record(c) for c in L.components]


def records_to_compact_set(records: list) -> CompactSet:
    return CompactSet(tuple(record_to_component(r) for r in records))


def piecewise_to_record(F: PiecewisePolynomial) -> list:
    return [[_c(x) for x in coeffs] for coeffs in F.coefficients]


def record_to_piecewise(rec: list) -> PiecewisePolynomial:
    return PiecewisePolynomial(tuple(
        np.array([_un_c(x) for x in coeffs]) for coeffs in rec
    ))


def greens_to_record(model: GreensModel) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "charges": [_c(q) for q in model.charge_points],
        "weights": list(map(float, model.charge_weights)),
        "robin_constant": model.robin_constant,
        "collocation_residual": model.collocation_residual,
        "source_set": compact_set_to_records(model.source_set),
    }


def record_to_greens(rec: dict) -> GreensModel:
    return GreensModel(
        np.array([_un_c(q) for q in rec["charges"]]),
        np.array(rec["weights"], dtype=float),
        float(rec["robin_constant"]),
        float(rec["collocation_residual"]),
        records_to_compact_set(rec["source_set"]),
    )


def load_scenario_file(path):
    """Parse a scenario file; raises ConfigError with a line-anchored message
    on malformed input."""
    from .experiments import Scenario
    from .potential import FitParams

    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(
            f"{path}: line {err.lineno}, column {err.colno}: {err.msg}"
        ) from err
    except OSError as err:
        raise ConfigError(f"{path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"{path}: unsupported schema_version {version!r} "
            f"(expected {SCHEMA_VERSION})"
        )
    try:
        L = records_to_compact_set(data["components"])
        F = record_to_piecewise(data["F"])
        F_alt = record_to_piecewise(data["F_alt"]) if "F_alt" in data else None
        return Scenario(
            name=data.get("name", "scenario"),
            set=L,
            F=F,
            F_alt=F_alt,
            degree_max=int(data.get("degree_max", 40)),
            greens_params=FitParams(**data.get("greens_params", {})),
            curve_margin=float(data.get("curve_margin", 0.3)),
            window=tuple(data.get("window", (15, 35))),
            density=float(data.get("density", 24.0)),
            seed=int(data.get("seed", 0)),
        )
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"{path}: {err}") from err


def scenario_to_record(s) -> dict:
    rec = {
        "schema_version": SCHEMA_VERSION,
        "name": s.name,
        "components": compact_set_to_records(s.set),
        "F": piecewise_to_record(s.F),
        "degree_max": s.degree_max,
        "curve_margin": s.curve_margin,
        "window": list(s.window),
        "density": s.density,
        "seed": s.seed,
    }
    if s.F_alt is not None:
        rec["F_alt"] = piecewise_to_record(s.F_alt)
    return rec


def content_hash(obj) -> str:
    """sha256 of the canonical JSON form (dict/list/scalar tree)."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
