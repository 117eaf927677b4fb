"""JSON ingestion of spaces, point sets, distribution functions and sequences."""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from pathlib import Path

from . import analysis
from .distfn import DistributionFunction, GridSpec
from .errors import ConfigError, DomainError, PhiRejected
from .phi import PhiTransform, flat_example, identity, phi_from_json, square
from .pnspace import PNSpace, Vector, family_from_json
from .triangle import triangle_by_id

_FRACTION = re.compile(r"^\s*-?\d+\s*/\s*\d+\s*$")


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from None


def number(x):
    """int, float, or an exact ``"p/q"`` string."""
    if isinstance(x, bool):
        raise ConfigError(f"not a number: {x!r}")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str) and _FRACTION.match(x):
        return Fraction(x.replace(" ", ""))
    raise ConfigError(f"not a number: {x!r}")


def vector(x) -> Vector:
    """A number, a list of numbers, or ``{"coords": [...], "rational": bool}``."""
    try:
        if isinstance(x, dict):
            coords = x.get("coords", x.get("value"))
            coords = coords if isinstance(coords, list) else [coords]
            return Vector(tuple(number(c) for c in coords), x.get("rational"))
        if isinstance(x, list):
            return Vector(tuple(number(c) for c in x))
        return Vector(number(x))
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def phi_spec(data) -> PhiTransform:
    """A phi JSON object or one of the names identity, square, flat."""
    named = {"identity": identity, "square": square, "flat": flat_example}
    if isinstance(data, str):
        if data not in named:
            raise ConfigError(f"unknown phi {data!r}; use {', '.join(named)} or a JSON object")
        return named[data]()
    return phi_from_json(data)


def space_from_json(data) -> PNSpace:
    if not isinstance(data, dict):
        raise ConfigError("space must be a JSON object")
    if "dim" not in data or "norm" not in data:
        raise ConfigError("space needs 'dim' and 'norm'")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ConfigError(f"dim must be an integer, got {dim!r}")
    phi = data.get("phi")
    try:
        return PNSpace(
            dim,
            family_from_json(data["norm"]),
            triangle_by_id(data.get("tau", "tauT:pi")),
            triangle_by_id(data.get("tau_star", "tauM")),
            None if phi is None else phi_spec(phi),
        )
    except PhiRejected as exc:
        raise ConfigError(f"phi rejected: {exc}") from None


def set_from_json(data) -> analysis.PointSet:
    """``{"kind": "explicit", "points": [...]}``,
    ``{"kind": "parametric", "family": name, "params": {...}}`` or
    ``{"kind": "sampled", "points": [...]}`` /
    ``{"kind": "sampled", "family": name, "params": {...}, "n": N, "seed": S}``."""
    if not isinstance(data, dict) or "kind" not in data:
        raise ConfigError("set must be a JSON object with a 'kind'")
    kind = data["kind"]
    desc = data.get("description", "")
    if "points" in data:
        if kind == "parametric":
            raise ConfigError("parametric sets are given by 'family', not 'points'")
        pts = tuple(vector(p) for p in data["points"])
        if not pts:
            raise ConfigError("point set is empty")
        return analysis.PointSet(kind if kind in ("explicit", "sampled") else _bad_kind(kind), pts, desc or kind)
    name = data.get("family")
    if name not in analysis.PRESETS:
        raise ConfigError(f"unknown set family {name!r}; use {', '.join(analysis.PRESETS)}")
    params = data.get("params") or {}
    try:
        A = analysis.PRESETS[name](**params)
    except (TypeError, DomainError) as exc:
        raise ConfigError(f"bad parameters for set family {name!r}: {exc}") from None
    if kind == "parametric":
        return A
    if kind == "sampled":
        return A.sampled(int(data.get("n", 1000)), int(data.get("seed", 0)))
    if kind == "explicit":
        raise ConfigError("explicit sets need 'points'")
    return _bad_kind(kind)


def _bad_kind(kind):
    raise ConfigError(f"unknown set kind {kind!r}; use explicit, parametric or sampled")


def sequence_from_json(data, A: analysis.PointSet | None = None) -> list[Vector]:
    """A list of points, or ``{"generator": "sqrt3_convergents", "n": N}``
    (terms outside ``A`` are dropped), ``{"generator": "harmonic", "n": N}``."""
    if isinstance(data, list):
        return [vector(p) for p in data]
    if isinstance(data, dict) and "generator" in data:
        n = int(data.get("n", 1000))
        if data["generator"] == "sqrt3_convergents":
            seq = [Vector(c) for c in analysis.sqrt3_convergents(n)]
            return [p for p in seq if A is None or A.member(p)]
        if data["generator"] == "harmonic":
            return [Vector(Fraction(1, m)) for m in range(1, n + 1)]
        raise ConfigError(f"unknown sequence generator {data['generator']!r}")
    raise ConfigError("a sequence is a list of points or {'generator': ..., 'n': ...}")


def distribution_spec(arg: str, grid: GridSpec) -> DistributionFunction:
    """A distribution-function JSON file, or ``<family>:<r>[:a]`` for a built-in nu."""
    m = re.match(r"^(ex22|ex25|simple):([^:]+)(?::([^:]+))?$", arg)
    if m is None:
        return DistributionFunction.from_json(load_json(arg))
    fam, r, a = m.groups()
    try:
        r = float(r)
        params = {"a": float(a)} if a is not None else {}
    except ValueError:
        raise ConfigError(f"bad distribution spec {arg!r}") from None
    if not math.isfinite(r) or r < 0:
        raise ConfigError(f"bad norm value in {arg!r}")
    return family_from_json({"id": fam, "params": params}).distribution(r, grid)
