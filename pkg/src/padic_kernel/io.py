"""Reading and writing expression files (JSON, format_version 1).

    {"format_version": 1, "p": 3, "payload": {"kind": "sb", "dim": 1, "terms": [...]}}

Payload kinds: ``sb``, ``distribution``, ``kernel``, ``query`` and ``grid``.
Schwartz-Bruhat payloads are canonicalized on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from jsonschema import Draft202012Validator

from .distribution import Custom, Density, Diagonal, Dirac, Distribution
from .geometry import Polydisc
from .kernel import Kernel
from .padic import LambdaGroup, PAdicPoint, check_coordinate
from .scalar import Cyc, is_prime
from .schwartz import SBFunction, canonicalize
from .wavefront import MicrolocalQuery

FORMAT_VERSION = 1

_FRACTION = {"oneOf": [{"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}, {"type": "integer"}]}
_POINT = {"type": "array", "items": {"$ref": "#/$defs/fraction"}, "minItems": 1}
_SCALAR = {
    "oneOf": [
        {"$ref": "#/$defs/fraction"},
        {
            "type": "object",
            "properties": {"level": {"type": "integer", "minimum": 0}, "coeffs": {"type": "array", "items": {"$ref": "#/$defs/fraction"}}},
            "required": ["level", "coeffs"],
            "additionalProperties": False,
        },
    ]
}
_BALL = {
    "type": "object",
    "properties": {"alpha": {"type": "integer"}, "center": {"$ref": "#/$defs/point"}},
    "required": ["alpha", "center"],
    "additionalProperties": False,
}
_SB = {
    "type": "object",
    "properties": {
        "kind": {"const": "sb"},
        "dim": {"type": "integer", "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"coef": {"$ref": "#/$defs/scalar"}, "ball": {"$ref": "#/$defs/ball"}},
                "required": ["coef", "ball"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["dim", "terms"],
}
_ATOM = {
    "type": "object",
    "properties": {
        "weight": {"$ref": "#/$defs/scalar"},
        "kind": {"enum": ["density", "dirac", "diagonal", "custom"]},
        "f": {"$ref": "#/$defs/sb"},
        "point": {"$ref": "#/$defs/point"},
        "half_dim": {"type": "integer", "minimum": 1},
        "depth_limit": {"type": "integer"},
        "table": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"ball": {"$ref": "#/$defs/ball"}, "value": {"$ref": "#/$defs/scalar"}},
                "required": ["ball", "value"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["kind"],
    "allOf": [
        {"if": {"properties": {"kind": {"const": "density"}}}, "then": {"required": ["f"]}},
        {"if": {"properties": {"kind": {"const": "dirac"}}}, "then": {"required": ["point"]}},
        {"if": {"properties": {"kind": {"const": "diagonal"}}}, "then": {"required": ["half_dim"]}},
        {"if": {"properties": {"kind": {"const": "custom"}}}, "then": {"required": ["depth_limit", "table"]}},
    ],
}
_DIST = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["distribution", "kernel"]},
        "dim": {"type": "integer", "minimum": 1},
        "atoms": {"type": "array", "items": {"$ref": "#/$defs/atom"}},
        "split": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
    },
    "required": ["dim", "atoms"],
}
_LAMBDA = {
    "type": "object",
    "properties": {
        "ord_modulus": {"type": "integer", "minimum": 1},
        "ac_depth": {"type": "integer", "minimum": 0},
        "unit_residues": {"type": "array", "items": {"type": "integer"}},
    },
    "required": ["ord_modulus", "ac_depth", "unit_residues"],
    "additionalProperties": False,
}
_PARAMS = {
    "nbhd_radius": {"type": "integer"},
    "probe_depth": {"type": "integer"},
    "ord_floor": {"type": "integer"},
    "y_depth": {"type": "integer"},
}
_QUERY = {
    "type": "object",
    "properties": {
        "kind": {"const": "query"},
        "distribution": {"$ref": "#/$defs/distribution"},
        "x0": {"$ref": "#/$defs/point"},
        "xi0": {"$ref": "#/$defs/point"},
        "lambda": {"$ref": "#/$defs/lambda"},
        **_PARAMS,
    },
    "required": ["kind", "distribution", "x0", "xi0"],
}
_GRID = {
    "type": "object",
    "properties": {
        "kind": {"const": "grid"},
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"x0": {"$ref": "#/$defs/point"}, "xi0": {"$ref": "#/$defs/point"}},
                "required": ["x0", "xi0"],
                "additionalProperties": False,
            },
        },
        "lambda": {"$ref": "#/$defs/lambda"},
        **_PARAMS,
    },
    "required": ["kind", "points"],
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "p": {"type": "integer", "minimum": 2},
        "payload": {
            "type": "object",
            "properties": {"kind": {"enum": ["sb", "distribution", "kernel", "query", "grid"]}},
            "required": ["kind"],
            "allOf": [
                {"if": {"properties": {"kind": {"const": "sb"}}}, "then": {"$ref": "#/$defs/sb"}},
                {"if": {"properties": {"kind": {"enum": ["distribution", "kernel"]}}}, "then": {"$ref": "#/$defs/distribution"}},
                {"if": {"properties": {"kind": {"const": "kernel"}}}, "then": {"required": ["split"]}},
                {"if": {"properties": {"kind": {"const": "query"}}}, "then": {"$ref": "#/$defs/query"}},
                {"if": {"properties": {"kind": {"const": "grid"}}}, "then": {"$ref": "#/$defs/grid"}},
            ],
        },
    },
    "required": ["format_version", "p", "payload"],
    "additionalProperties": False,
    "$defs": {
        "fraction": _FRACTION,
        "point": _POINT,
        "scalar": _SCALAR,
        "ball": _BALL,
        "sb": _SB,
        "atom": _ATOM,
        "distribution": _DIST,
        "lambda": _LAMBDA,
        "query": _QUERY,
        "grid": _GRID,
    },
}

_VALIDATOR = Draft202012Validator(SCHEMA)


class ParseError(ValueError):
    """Malformed or invalid expression file; ``pointer`` locates the offending value."""

    def __init__(self, message: str, pointer: str = "", line: int | None = None, column: int | None = None):
        self.message = message
        self.pointer = pointer
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if pointer:
            where.append(f"at {pointer}")
        super().__init__(f"{message} ({'; '.join(where)})" if where else message)


@dataclass(frozen=True)
class ExprFile:
    format_version: int
    p: int
    payload: Any  # SBFunction | Distribution | Kernel | MicrolocalQuery | GridSpec

    @property
    def kind(self) -> str:
        return kind_of(self.payload)


@dataclass(frozen=True)
class GridSpec:
    points: tuple[tuple[PAdicPoint, PAdicPoint], ...]
    lam: LambdaGroup
    nbhd_radius: int = 0
    probe_depth: int = 1
    ord_floor: int = -4
    y_depth: int = 1


def kind_of(obj) -> str:
    if isinstance(obj, SBFunction):
        return "sb"
    if isinstance(obj, Kernel):
        return "kernel"
    if isinstance(obj, Distribution):
        return "distribution"
    if isinstance(obj, MicrolocalQuery):
        return "query"
    if isinstance(obj, GridSpec):
        return "grid"
    raise TypeError(f"no file representation for {type(obj).__name__}")


# -- decoding ----------------------------------------------------------------


def _fraction(p: int, raw, ptr: str) -> Fraction:
    try:
        return check_coordinate(p, raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), ptr) from None


def _point(p: int, raw, ptr: str) -> PAdicPoint:
    return PAdicPoint(p, tuple(_fraction(p, c, f"{ptr}/{i}") for i, c in enumerate(raw)))


def _scalar(p: int, raw, ptr: str) -> Cyc:
    if not isinstance(raw, dict):
        try:
            return Cyc.rational(p, Fraction(str(raw)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), ptr) from None
    try:
        coeffs = [Fraction(str(c)) for c in raw["coeffs"]]
        return Cyc(p, raw["level"], coeffs)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), ptr) from None


def _ball(p: int, raw, ptr: str, dim: int | None = None) -> Polydisc:
    center = _point(p, raw["center"], f"{ptr}/center")
    if dim is not None and center.dim != dim:
        raise ParseError(f"ball has dimension {center.dim}, expected {dim}", f"{ptr}/center")
    return Polydisc(p, raw["alpha"], center.coords)


def _sb(p: int, raw, ptr: str) -> SBFunction:
    dim = raw["dim"]
    terms = [
        (_scalar(p, t["coef"], f"{ptr}/terms/{i}/coef"), _ball(p, t["ball"], f"{ptr}/terms/{i}/ball", dim))
        for i, t in enumerate(raw["terms"])
    ]
    return canonicalize(terms, p, dim)


def _atom(p: int, dim: int, raw, ptr: str):
    kind = raw["kind"]
    if kind == "density":
        f = _sb(p, raw["f"], f"{ptr}/f")
        if f.dim != dim:
            raise ParseError(f"density of dimension {f.dim} in a distribution on dimension {dim}", f"{ptr}/f/dim")
        return Density(f)
    if kind == "dirac":
        point = _point(p, raw["point"], f"{ptr}/point")
        if point.dim != dim:
            raise ParseError(f"Dirac point of dimension {point.dim}, expected {dim}", f"{ptr}/point")
        return Dirac(point, Cyc.rational(p, 1))
    if kind == "diagonal":
        if 2 * raw["half_dim"] != dim:
            raise ParseError(f"diagonal with half_dim {raw['half_dim']} on dimension {dim}", f"{ptr}/half_dim")
        return Diagonal(raw["half_dim"])
    depth = raw["depth_limit"]
    table = [
        (_ball(p, e["ball"], f"{ptr}/table/{i}/ball", dim), _scalar(p, e["value"], f"{ptr}/table/{i}/value"))
        for i, e in enumerate(raw["table"])
    ]
    try:
        return Custom.from_table(p, table, depth)
    except ValueError as exc:
        raise ParseError(str(exc), f"{ptr}/table") from None


def _distribution(p: int, raw, ptr: str) -> Distribution:
    dim = raw["dim"]
    atoms = []
    for i, a in enumerate(raw["atoms"]):
        weight = _scalar(p, a.get("weight", 1), f"{ptr}/atoms/{i}/weight")
        atoms.append((weight, _atom(p, dim, a, f"{ptr}/atoms/{i}")))
    return Distribution(p, dim, tuple(atoms))


def _lambda(p: int, raw, ptr: str) -> LambdaGroup:
    if raw is None:
        return LambdaGroup.full(p)
    try:
        return LambdaGroup(p, raw["ord_modulus"], raw["ac_depth"], frozenset(raw["unit_residues"]))
    except ValueError as exc:
        raise ParseError(str(exc), ptr) from None


def _query(p: int, raw, ptr: str) -> MicrolocalQuery:
    u = _distribution(p, raw["distribution"], f"{ptr}/distribution")
    try:
        return MicrolocalQuery(
            u,
            _point(p, raw["x0"], f"{ptr}/x0"),
            _point(p, raw["xi0"], f"{ptr}/xi0"),
            _lambda(p, raw.get("lambda"), f"{ptr}/lambda"),
            raw.get("nbhd_radius", 0),
            raw.get("probe_depth", max(1, raw.get("nbhd_radius", 0))),
            raw.get("ord_floor", -4),
        )
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), ptr) from None


def _grid(p: int, raw, ptr: str) -> GridSpec:
    points = tuple(
        (_point(p, e["x0"], f"{ptr}/points/{i}/x0"), _point(p, e["xi0"], f"{ptr}/points/{i}/xi0"))
        for i, e in enumerate(raw["points"])
    )
    for i, (_, xi0) in enumerate(points):
        if xi0.is_zero():
            raise ParseError("grid covectors must be nonzero", f"{ptr}/points/{i}/xi0")
    return GridSpec(
        points,
        _lambda(p, raw.get("lambda"), f"{ptr}/lambda"),
        raw.get("nbhd_radius", 0),
        raw.get("probe_depth", 1),
        raw.get("ord_floor", -4),
        raw.get("y_depth", 1),
    )


def _pointer(path) -> str:
    return "".join(f"/{part}" for part in path)


def parse(data: str | bytes) -> ExprFile:
    """Parse and validate an expression file."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", "", exc.lineno, exc.colno) from None
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[-1]
        raise ParseError(f"schema violation: {err.message}", _pointer(err.absolute_path))
    p = doc["p"]
    if not is_prime(p):
        raise ParseError(f"{p} is not prime", "/p")
    raw = doc["payload"]
    kind = raw["kind"]
    if kind == "sb":
        payload: Any = _sb(p, raw, "/payload")
    elif kind == "distribution":
        payload = _distribution(p, raw, "/payload")
    elif kind == "kernel":
        u = _distribution(p, raw, "/payload")
        try:
            payload = Kernel(u, tuple(raw["split"]))
        except ValueError as exc:
            raise ParseError(str(exc), "/payload/split") from None
    elif kind == "query":
        payload = _query(p, raw, "/payload")
    else:
        payload = _grid(p, raw, "/payload")
    return ExprFile(doc["format_version"], p, payload)


def load(path) -> ExprFile:
    with open(path, "rb") as fh:
        return parse(fh.read())


# -- encoding ----------------------------------------------------------------


def encode_fraction(x: Fraction) -> str:
    return str(x)


def encode_point(x: PAdicPoint) -> list[str]:
    return [encode_fraction(c) for c in x.coords]


def encode_scalar(c: Cyc) -> str | dict:
    if c.is_rational():
        return encode_fraction(c.to_fraction())
    return {"level": c.level, "coeffs": [encode_fraction(x) for x in c.coeffs]}


def encode_ball(b: Polydisc) -> dict:
    return {"alpha": b.alpha, "center": [encode_fraction(c) for c in b.center]}


def encode_sb(f: SBFunction) -> dict:
    return {"kind": "sb", "dim": f.dim, "terms": [{"coef": encode_scalar(c), "ball": encode_ball(b)} for c, b in f.terms]}


def encode_atom(weight: Cyc, atom) -> dict:
    if isinstance(atom, Density):
        return {"weight": encode_scalar(weight), "kind": "density", "f": encode_sb(atom.f)}
    if isinstance(atom, Dirac):
        return {"weight": encode_scalar(weight * atom.weight), "kind": "dirac", "point": encode_point(atom.point)}
    if isinstance(atom, Diagonal):
        return {"weight": encode_scalar(weight), "kind": "diagonal", "half_dim": atom.half_dim}
    if atom.table is None or atom.depth_limit is None:
        raise TypeError("only table-backed custom atoms can be written to a file")
    return {
        "weight": encode_scalar(weight),
        "kind": "custom",
        "depth_limit": atom.depth_limit,
        "table": [{"ball": encode_ball(b), "value": encode_scalar(v)} for b, v in atom.table],
    }


def encode_distribution(u: Distribution, kind: str = "distribution") -> dict:
    return {"kind": kind, "dim": u.dim, "atoms": [encode_atom(w, a) for w, a in u.atoms]}


def encode_lambda(g: LambdaGroup) -> dict:
    return {"ord_modulus": g.ord_modulus, "ac_depth": g.ac_depth, "unit_residues": sorted(g.unit_residues)}


def encode_payload(obj) -> dict:
    kind = kind_of(obj)
    if kind == "sb":
        return encode_sb(obj)
    if kind == "distribution":
        return encode_distribution(obj)
    if kind == "kernel":
        return {**encode_distribution(obj.u, "kernel"), "split": list(obj.split)}
    if kind == "query":
        return {
            "kind": "query",
            "distribution": encode_distribution(obj.u),
            "x0": encode_point(obj.x0),
            "xi0": encode_point(obj.xi0),
            "lambda": encode_lambda(obj.lam),
            "nbhd_radius": obj.nbhd_radius,
            "probe_depth": obj.probe_depth,
            "ord_floor": obj.ord_floor,
        }
    return {
        "kind": "grid",
        "points": [{"x0": encode_point(x), "xi0": encode_point(xi)} for x, xi in obj.points],
        "lambda": encode_lambda(obj.lam),
        "nbhd_radius": obj.nbhd_radius,
        "probe_depth": obj.probe_depth,
        "ord_floor": obj.ord_floor,
        "y_depth": obj.y_depth,
    }


def emit(obj, p: int | None = None) -> str:
    """Serialize an object as a complete expression file."""
    if p is None:
        p = obj.u.p if isinstance(obj, (Kernel, MicrolocalQuery)) else obj.lam.p if isinstance(obj, GridSpec) else obj.p
    doc = {"format_version": FORMAT_VERSION, "p": p, "payload": encode_payload(obj)}
    return json.dumps(doc, indent=2) + "\n"
