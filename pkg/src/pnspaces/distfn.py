"""Distance distribution functions on [0, +inf].

A :class:`DistributionFunction` is piecewise linear through its knots,
constant after the last knot, and carries its left limit at +inf
separately.  By convention its value *at* +inf is 1, so every valid
instance lies in Delta+; it lies in D+ when the stored left limit is 1.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from ._kernels import thin_knots
from .errors import ConfigError, DomainError

INF = math.inf

# convolutions carry O(mesh) discretisation error; compare them at this level
CONV_TOL = 1e-3


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid ``0, mesh, 2*mesh, ..., x_max`` and comparison tolerance."""

    mesh: float = 2.0**-6
    x_max: float = 128.0
    tol_eq: float = 1e-9

    def __post_init__(self):
        for name in ("mesh", "x_max", "tol_eq"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"grid {name} must be a finite number, got {v!r}")
        if self.mesh <= 0:
            raise ConfigError("grid mesh must be > 0")
        if self.x_max < 1:
            raise ConfigError("grid x_max must be >= 1")
        if self.tol_eq <= 0:
            raise ConfigError("grid tol_eq must be > 0")

    @property
    def delta(self) -> float:
        """Width of the steep segment standing in for the jump of eps0."""
        return self.mesh / 1024

    def points(self) -> np.ndarray:
        n = int(math.ceil(self.x_max / self.mesh - 1e-9))
        pts = np.arange(n + 1, dtype=float) * self.mesh
        pts[-1] = min(pts[-1], self.x_max)
        return pts

    def to_dict(self) -> dict:
        return {"mesh": self.mesh, "x_max": self.x_max, "tol_eq": self.tol_eq}

    @classmethod
    def parse(cls, text: str, base: "GridSpec | None" = None) -> "GridSpec":
        """Parse ``"mesh=0.03125,xmax=64,tol=1e-9"``; missing keys come from ``base``."""
        base = base or cls()
        values = base.to_dict()
        aliases = {"mesh": "mesh", "xmax": "x_max", "x_max": "x_max", "tol": "tol_eq", "tol_eq": "tol_eq"}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, val = part.partition("=")
            key = key.strip().lower()
            if not sep or key not in aliases:
                raise ConfigError(f"bad grid setting {part!r}")
            try:
                values[aliases[key]] = float(val)
            except ValueError:
                raise ConfigError(f"bad grid value {part!r}") from None
        return cls(**values)

    @classmethod
    def resolve(cls, mesh=None, x_max=None, env=None) -> "GridSpec":
        """Flag values override ``PNSPACE_GRID`` which overrides the defaults."""
        env = os.environ.get("PNSPACE_GRID", "") if env is None else env
        grid = cls.parse(env) if env else cls()
        overrides = grid.to_dict()
        if mesh is not None:
            overrides["mesh"] = float(mesh)
        if x_max is not None:
            overrides["x_max"] = float(x_max)
        return cls(**overrides)


DEFAULT_GRID = GridSpec()


class DistributionFunction:
    """Piecewise-linear element of Delta+.

    ``xs`` start at 0 and strictly increase, ``ys`` start at 0 and never
    decrease, and ``value_at_inf`` (the left limit at +inf) is at least the
    last knot value.
    """

    __slots__ = ("xs", "ys", "value_at_inf")

    def __init__(self, xs, ys, value_at_inf):
        xs = np.array(xs, dtype=float)
        ys = np.array(ys, dtype=float)
        v = float(value_at_inf)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ConfigError("knot abscissae and values must be 1-d arrays of equal length")
        if xs.size == 0:
            raise ConfigError("empty knot list")
        if np.isnan(xs).any() or np.isnan(ys).any() or math.isnan(v):
            raise ConfigError("NaN in distribution function")
        if not np.isfinite(xs).all():
            raise ConfigError("knot abscissae must be finite")
        if xs[0] != 0.0 or ys[0] != 0.0:
            raise ConfigError("first knot must be (0, 0)")
        if xs.size > 1 and not (np.diff(xs) > 0).all():
            raise ConfigError("knot abscissae must be strictly increasing")
        if xs.size > 1 and not (np.diff(ys) >= 0).all():
            raise ConfigError("knot values must be non-decreasing")
        if ys[-1] > 1.0 or not 0.0 <= v <= 1.0:
            raise ConfigError("values must lie in [0, 1]")
        if v < ys[-1]:
            raise ConfigError("value_at_inf must be >= the last knot value")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "value_at_inf", v)

    def __setattr__(self, name, value):
        raise AttributeError("DistributionFunction is immutable")

    @classmethod
    def from_knots(cls, knots, value_at_inf=None) -> "DistributionFunction":
        knots = np.asarray(knots, dtype=float).reshape(-1, 2)
        v = knots[-1, 1] if value_at_inf is None else value_at_inf
        return cls(knots[:, 0], knots[:, 1], v)

    @classmethod
    def sample(cls, f, xs, value_at_inf) -> "DistributionFunction":
        """Sample the vectorised callable ``f`` at ``xs`` (0 is added if missing).

        Round-off is cleaned up: values are clipped to [0, 1] and made
        monotone, and ``value_at_inf`` is raised to the last sample if needed.
        """
        xs = np.unique(np.concatenate(([0.0], np.asarray(xs, dtype=float))))
        xs = xs[xs >= 0]
        ys = np.asarray(f(xs), dtype=float)
        ys[0] = 0.0
        ys = np.maximum.accumulate(np.clip(ys, 0.0, 1.0))
        return cls(xs, ys, max(float(value_at_inf), ys[-1]))

    @property
    def knots(self) -> list[tuple[float, float]]:
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        return f"DistributionFunction({self.xs.size} knots, value_at_inf={self.value_at_inf:g})"

    def simplified(self, tol: float = 1e-7) -> "DistributionFunction":
        """Drop knots while keeping the interpolant within ``tol`` of this one."""
        if self.xs.size <= 2:
            return self
        keep = thin_knots(self.xs, self.ys, float(tol))
        return DistributionFunction(self.xs[keep], self.ys[keep], self.value_at_inf)

    def to_json(self) -> dict:
        return {"knots": [[x, y] for x, y in self.knots], "value_at_inf": self.value_at_inf}

    @classmethod
    def from_json(cls, data) -> "DistributionFunction":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.from_knots(data["knots"], data.get("value_at_inf"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"malformed distribution function: {exc}") from None

    def to_csv(self, grid: GridSpec = DEFAULT_GRID) -> str:
        xs = grid.points()
        lines = ["x,F"] + [f"{x:.10g},{y:.12g}" for x, y in zip(xs, evaluate(self, xs))]
        return "\n".join(lines) + "\n"


def evaluate(F: DistributionFunction, x):
    """F(x) for x in [0, +inf]; F(+inf) is 1 by convention."""
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError("cannot evaluate at NaN")
    if (arr < 0).any():
        raise DomainError(f"distribution functions live on [0, +inf], got {x!r}")
    out = np.interp(np.minimum(arr, F.xs[-1]), F.xs, F.ys)
    out = np.where(np.isinf(arr), 1.0, out)
    return float(out) if out.ndim == 0 else out


def left_limit_at_inf(F: DistributionFunction) -> float:
    return F.value_at_inf


def in_d_plus(F: DistributionFunction, tol: float = DEFAULT_GRID.tol_eq) -> bool:
    return F.value_at_inf >= 1.0 - tol


def epsilon0(grid: GridSpec = DEFAULT_GRID) -> DistributionFunction:
    """Unit step at 0+, the maximum of Delta+ (jump spread over ``grid.delta``)."""
    return DistributionFunction([0.0, grid.delta], [0.0, 1.0], 1.0)


def epsilon_inf() -> DistributionFunction:
    """Identically zero on [0, +inf) with left limit 0 at +inf."""
    return DistributionFunction([0.0], [0.0], 0.0)


def step_at(a: float, grid: GridSpec = DEFAULT_GRID) -> DistributionFunction:
    """eps_a: 0 on [0, a], 1 after (jump spread over ``grid.delta``)."""
    if a < 0 or not math.isfinite(a):
        raise DomainError(f"step position must be finite and >= 0, got {a!r}")
    if a == 0:
        return epsilon0(grid)
    return DistributionFunction([0.0, a, a + grid.delta], [0.0, 0.0, 1.0], 1.0)


def comparison_points(grid: GridSpec, *fs: DistributionFunction) -> np.ndarray:
    parts = [grid.points()] + [F.xs for F in fs]
    return np.unique(np.concatenate(parts))


def pointwise_leq(F, G, grid: GridSpec = DEFAULT_GRID, tol: float | None = None) -> bool:
    """F <= G on the grid, on both knot sets, and for the left limits at +inf."""
    tol = grid.tol_eq if tol is None else tol
    xs = comparison_points(grid, F, G)
    if (evaluate(F, xs) > evaluate(G, xs) + tol).any():
        return False
    return F.value_at_inf <= G.value_at_inf + tol


def excess(F, G, grid: GridSpec = DEFAULT_GRID, at_knots: bool = True) -> tuple[float, float]:
    """Largest amount by which F exceeds G, and where (``inf`` for the tail limit).

    With ``at_knots=False`` only grid abscissae are compared.
    """
    xs = comparison_points(grid, F, G) if at_knots else grid.points()
    d = evaluate(F, xs) - evaluate(G, xs)
    i = int(np.argmax(d))
    worst, where = float(d[i]), float(xs[i])
    tail = F.value_at_inf - G.value_at_inf
    if tail > worst:
        worst, where = tail, INF
    return max(worst, 0.0), where


def df_distance(F, G, grid: GridSpec = DEFAULT_GRID) -> float:
    """Sup-distance over the grid abscissae, including the limits at +inf.

    Only grid points are compared, which keeps the steep stand-ins for jumps
    (width ``grid.delta``) out of the comparison; this is the surrogate used
    for weak convergence.
    """
    xs = grid.points()
    gap = float(np.max(np.abs(evaluate(F, xs) - evaluate(G, xs))))
    return max(gap, abs(F.value_at_inf - G.value_at_inf))


def random_distribution(rng: np.random.Generator, max_scale: float = 32.0) -> DistributionFunction:
    """Random element of Delta+ with 3 to 10 knots.

    Abscissae are sorted uniforms on (0, scale) with a random scale in
    [1, max_scale]; values are sorted uniforms; the left limit at +inf is
    either the last value (outside D+) or 1, with equal odds.
    """
    n = int(rng.integers(3, 11))
    scale = rng.uniform(1.0, max_scale)
    xs = np.sort(rng.uniform(0.0, scale, n - 1))
    while np.any(np.diff(xs) <= 0) or xs[0] <= 0:
        xs = np.sort(rng.uniform(0.0, scale, n - 1))
    ys = np.sort(rng.uniform(0.0, 1.0, n - 1))
    limit = 1.0 if rng.random() < 0.5 else ys[-1]
    return DistributionFunction(np.r_[0.0, xs], np.r_[0.0, ys], limit)
