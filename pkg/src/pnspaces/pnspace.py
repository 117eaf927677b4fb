"""Probabilistic normed spaces over R^n.

A space bundles a norm family p -> nu_p (closed form in |p|), a triangle
function tau, a second triangle function tau_star and optionally a
phi-transform.  Audits sample the axioms

    N1  nu_p = eps0 iff p = 0
    N2  nu_{-p} = nu_p
    N3  nu_{p+q} >= tau(nu_p, nu_q)
    N4  nu_p <= tau_star(nu_{a p}, nu_{(1-a) p}),  a in [0, 1]

and the (phi-)Serstnev scaling laws.  Sequence predicates only see a
finite prefix and say so in their verdicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .distfn import CONV_TOL, DEFAULT_GRID, DistributionFunction, GridSpec, df_distance, epsilon0, excess, pointwise_leq, step_at
from .errors import ConfigError, DomainError
from .phi import PhiTransform
from .reports import INCONCLUSIVE, AxiomReport, LawResult, Verdict, law_result
from .triangle import TAU_M, TAU_PI, TriangleFunction


def _is_exact(c) -> bool:
    return isinstance(c, Rational) and not isinstance(c, bool)


class Vector:
    """Point of R^n.  Coordinates may be ints or Fractions, which stay exact
    under +, - and rational scaling; ``rational`` marks membership of Q^n and
    defaults to whether every coordinate is exact."""

    __slots__ = ("coords", "rational")

    def __init__(self, coords, rational: bool | None = None):
        if isinstance(coords, (int, float, Fraction)):
            coords = (coords,)
        coords = tuple(coords)
        if not coords:
            raise DomainError("a vector needs at least one coordinate")
        for c in coords:
            if isinstance(c, bool) or not isinstance(c, (int, float, Fraction, np.integer, np.floating)):
                raise DomainError(f"bad coordinate {c!r}")
            if not math.isfinite(float(c)):
                raise DomainError("coordinates must be finite")
        coords = tuple(float(c) if isinstance(c, np.floating) else int(c) if isinstance(c, np.integer) else c for c in coords)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "rational", all(map(_is_exact, coords)) if rational is None else bool(rational))

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    @classmethod
    def of(cls, value) -> "Vector":
        return value if isinstance(value, Vector) else cls(value)

    @classmethod
    def zero(cls, dim: int) -> "Vector":
        return cls((0,) * dim)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return math.hypot(*(float(c) for c in self.coords))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def _check(self, other: "Vector"):
        if self.dim != other.dim:
            raise DomainError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        other = Vector.of(other)
        self._check(other)
        return Vector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.rational and other.rational)

    def __sub__(self, other):
        other = Vector.of(other)
        self._check(other)
        return Vector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.rational and other.rational)

    def __neg__(self):
        return Vector(tuple(-a for a in self.coords), self.rational)

    def scaled(self, c) -> "Vector":
        return Vector(tuple(c * a for a in self.coords), self.rational and _is_exact(c))

    def __rmul__(self, c):
        return self.scaled(c)

    def __eq__(self, other):
        return isinstance(other, Vector) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"Vector({list(self.coords)!r})"

    def to_json(self):
        return [float(c) for c in self.coords]


@dataclass(frozen=True)
class LambdaScalar:
    """Nonzero scalar of the scaling laws (kept apart from neighbourhood radii)."""

    value: float

    def __post_init__(self):
        if not math.isfinite(self.value) or self.value == 0:
            raise DomainError(f"scaling factor must be finite and nonzero, got {self.value!r}")


class NormFamily:
    """p -> nu_p given in closed form as a function of r = |p| > 0.

    nu_0 is eps0 for every family.  Subclasses implement ``_value`` (for
    r > 0 and finite x >= 0) and ``limit`` (left limit at +inf).
    """

    id = ""

    def params(self) -> dict:
        return {}

    def _value(self, r, x):
        raise NotImplementedError

    def limit(self, r: float) -> float:
        raise NotImplementedError

    def value(self, r, x):
        """nu(x) for a vector of norm ``r``; broadcasts over both arguments."""
        r, x = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(x, dtype=float))
        pos = r > 0
        finite = np.isfinite(x)
        v = self._value(np.where(pos, r, 1.0), np.where(finite, x, 0.0))
        out = np.where(pos, v, (x > 0).astype(float))
        out = np.where(finite, out, 1.0)
        return float(out) if out.ndim == 0 else out

    def abscissae(self, r: float, grid: GridSpec) -> np.ndarray:
        xs = np.concatenate([grid.points(), r * np.geomspace(1e-4, 1e2, 121)])
        return xs[xs <= grid.x_max]

    def distribution(self, r: float, grid: GridSpec = DEFAULT_GRID, extra=None) -> DistributionFunction:
        if r == 0:
            return epsilon0(grid)
        xs = self.abscissae(r, grid)
        if extra is not None:
            xs = np.concatenate([xs, np.asarray(extra, dtype=float)])
            xs = xs[xs <= grid.x_max]
        return DistributionFunction.sample(lambda x: self._value(r, x), xs, self.limit(r))

    def to_json(self) -> dict:
        return {"id": self.id, "params": self.params()}

    def __repr__(self):
        return f"{type(self).__name__}({self.params()})"


class RationalFamily(NormFamily):
    """nu_p(x) = a x / (x + |p|); ``a`` = 1 gives t/(t+|p|)."""

    def __init__(self, a: float = 1.0):
        self.a = float(a)

    def _value(self, r, x):
        return self.a * x / (x + r)

    def limit(self, r: float) -> float:
        return self.a


class ScaledRational(RationalFamily):
    id = "ex22"

    def __init__(self, a: float = 0.5):
        if not isinstance(a, (int, float)) or not 0 < a < 1:
            raise ConfigError(f"a ∈ (0,1) violated (a={a!r})")
        super().__init__(a)

    def params(self) -> dict:
        return {"a": self.a}


class Rational1(RationalFamily):
    id = "ex25"

    def __init__(self):
        super().__init__(1.0)


class SimpleFamily(NormFamily):
    """nu_p = eps_{|p|}: the embedding of the ordinary norm."""

    id = "simple"

    def _value(self, r, x):
        return (x > r).astype(float)

    def limit(self, r: float) -> float:
        return 1.0

    def abscissae(self, r: float, grid: GridSpec) -> np.ndarray:
        xs = np.r_[grid.points(), r, r + grid.delta]
        return xs[xs <= grid.x_max]

    def distribution(self, r, grid=DEFAULT_GRID, extra=None):
        return step_at(r, grid)


def family_from_json(data) -> NormFamily:
    if not isinstance(data, dict) or "id" not in data:
        raise ConfigError("norm must be {'id': ..., 'params': {...}}")
    params = data.get("params") or {}
    if not isinstance(params, dict):
        raise ConfigError("norm params must be an object")
    kind = data["id"]
    try:
        if kind == "ex22":
            return ScaledRational(**params)
        if kind == "ex25":
            return Rational1(**params)
        if kind == "simple":
            return SimpleFamily(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for norm {kind!r}: {exc}") from None
    raise ConfigError(f"unknown norm family {kind!r}; use ex22, ex25 or simple")


@dataclass(frozen=True, eq=False)
class PNSpace:
    dim: int
    norm: NormFamily
    tau: TriangleFunction = TAU_PI
    tau_star: TriangleFunction = TAU_M
    phi: PhiTransform | None = None

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ConfigError(f"dim must be a positive integer, got {self.dim!r}")
        if not isinstance(self.norm, NormFamily):
            raise ConfigError("norm must be a NormFamily")
        if not isinstance(self.tau, TriangleFunction) or not isinstance(self.tau_star, TriangleFunction):
            raise ConfigError("tau and tau_star must be triangle functions")
        if self.phi is not None and not isinstance(self.phi, PhiTransform):
            raise ConfigError("phi must be a PhiTransform")

    def vector(self, p) -> Vector:
        p = Vector.of(p)
        if p.dim != self.dim:
            raise DomainError(f"dimension mismatch: space has dim {self.dim}, vector has {p.dim}")
        return p

    def value(self, p, x):
        """Closed-form nu_p(x)."""
        return self.norm.value(self.vector(p).norm, x)

    def limit(self, p) -> float:
        p = self.vector(p)
        return 1.0 if p.is_zero else self.norm.limit(p.norm)

    def to_json(self) -> dict:
        out = {"dim": self.dim, "norm": self.norm.to_json(), "tau": self.tau.name, "tau_star": self.tau_star.name}
        if self.phi is not None:
            out["phi"] = self.phi.to_json()
        return out


def norm_eval(space: PNSpace, p, grid: GridSpec = DEFAULT_GRID) -> DistributionFunction:
    """nu_p sampled on the grid (plus abscissae scaled to |p|)."""
    return space.norm.distribution(space.vector(p).norm, grid)


def random_points(dim: int, n: int, rng: np.random.Generator, scale: float = 5.0) -> list[Vector]:
    return [Vector(tuple(row)) for row in rng.uniform(-scale, scale, (n, dim))]


def check_axioms(
    space: PNSpace,
    sample_points,
    scalars=None,
    grid: GridSpec = DEFAULT_GRID,
    seed: int = 0,
    tolerance: float = CONV_TOL,
) -> AxiomReport:
    """Audit N1-N4 on the given points.

    N1 checks nu_0 = eps0 and nu_p != eps0 for each sampled p != 0.  N2
    compares closed forms on the grid.  N3 runs over consecutive pairs of
    sample points and over (p, p) and (p, -p); N4 over every point and
    scalar.  N3/N4 compare on grid abscissae with ``tolerance``.
    """
    points = [space.vector(p) for p in sample_points]
    if not points:
        raise DomainError("check_axioms needs at least one sample point")
    rng = np.random.default_rng(seed)
    if scalars is None:
        scalars = [0.0, 0.25, 0.5, 0.75, 1.0] + rng.uniform(0.0, 1.0, 10).tolist()
    for a in scalars:
        if not 0.0 <= a <= 1.0:
            raise DomainError(f"N4 scalars must lie in [0, 1], got {a!r}")
    xs = grid.points()
    cache: dict[float, DistributionFunction] = {}

    def nu(p: Vector) -> DistributionFunction:
        r = p.norm
        if r not in cache:
            cache[r] = space.norm.distribution(r, grid)
        return cache[r]

    report = AxiomReport("PN axioms", info={"grid": grid.to_dict(), "points": len(points), "scalars": list(scalars)})
    theta = Vector.zero(space.dim)
    e0 = epsilon0(grid)

    # N1
    worst, witness = df_distance(nu(theta), e0, grid), {"p": theta}
    nonzero = [p for p in points if not p.is_zero]
    for p in nonzero:
        if df_distance(nu(p), e0, grid) <= grid.tol_eq:
            worst, witness = max(worst, 1.0), {"p": p, "note": "nu_p equals eps0 for p != 0"}
            break
    if nonzero:
        report.add(law_result("N1", worst, grid.tol_eq, witness, sampled=True))
    else:
        report.add(LawResult("N1", INCONCLUSIVE, worst, grid.tol_eq, None, "no nonzero sample point"))

    # N2
    worst, witness = 0.0, None
    for p in points:
        d = float(np.max(np.abs(space.value(-p, xs) - space.value(p, xs))))
        d = max(d, abs(space.limit(-p) - space.limit(p)))
        if d > worst or witness is None:
            worst, witness = d, {"p": p}
    report.add(law_result("N2", worst, grid.tol_eq, witness))

    # N3
    pairs = list(zip(points, points[1:] + points[:1])) if len(points) > 1 else []
    pairs += [(p, p) for p in points[:5]] + [(p, -p) for p in points[:3]]
    worst, witness = -1.0, None
    for p, q in pairs:
        v, where = excess(space.tau(nu(p), nu(q), grid), nu(p + q), grid, at_knots=False)
        if v > worst:
            worst, witness = v, {"p": p, "q": q, "x": where}
    report.add(law_result("N3", worst, tolerance, witness, sampled=True))

    # N4
    worst, witness = -1.0, None
    seen = set()
    for p in points:
        for a in scalars:
            ap, bp = p.scaled(a), p.scaled(1.0 - a)
            key = (p.norm, *sorted((ap.norm, bp.norm)))
            if key in seen:
                continue
            seen.add(key)
            v, where = excess(nu(p), space.tau_star(nu(ap), nu(bp), grid), grid, at_knots=False)
            if v > worst:
                worst, witness = v, {"p": p, "alpha": a, "x": where}
    report.add(law_result("N4", worst, tolerance, witness, sampled=True))
    return report


def _scaling_residual(space, points, lambdas, xs, transform) -> tuple[float, dict | None]:
    worst, witness = -1.0, None
    xs = np.asarray(xs, dtype=float)
    for p in points:
        p = space.vector(p)
        for lam in lambdas:
            lam = LambdaScalar(float(lam)).value
            lhs = space.value(p.scaled(lam), xs)
            rhs = space.value(p, transform(xs, abs(lam)))
            d = np.abs(np.asarray(lhs) - np.asarray(rhs)).reshape(-1)
            i = int(np.argmax(d))
            if d[i] > worst:
                worst, witness = float(d[i]), {"p": p, "lambda": lam, "x": float(xs.reshape(-1)[i])}
    return worst, witness


def check_serstnev(space: PNSpace, points, lambdas, grid: GridSpec = DEFAULT_GRID, xs=None, tolerance: float = 1e-6) -> LawResult:
    """Largest |nu_{lp}(x) - nu_p(x/|l|)| over points x lambdas x abscissae."""
    xs = grid.points() if xs is None else xs
    worst, witness = _scaling_residual(space, points, lambdas, xs, lambda x, s: np.asarray(x) / s)
    return law_result("serstnev", worst, tolerance, witness, sampled=True)


def check_phi_serstnev(space: PNSpace, points, lambdas, grid: GridSpec = DEFAULT_GRID, xs=None, tolerance: float = 1e-6) -> LawResult:
    """Largest |nu_{lp}(x) - nu_p(phi_hat(phi(x)/|l|))|."""
    if space.phi is None:
        raise ConfigError("the space has no phi-transform")
    phi = space.phi
    xs = grid.points() if xs is None else xs
    worst, witness = _scaling_residual(space, points, lambdas, xs, lambda x, s: phi.hat(np.asarray(phi(x)) / s))
    return law_result("phi-serstnev", worst, tolerance, witness, sampled=True)


def is_characteristic(space: PNSpace, points, tol: float | None = None) -> Verdict:
    """Every sampled nu_p has left limit 1 at +inf."""
    points = [space.vector(p) for p in points]
    if not points:
        raise DomainError("is_characteristic needs at least one point")
    tol = DEFAULT_GRID.tol_eq if tol is None else tol
    for p in points:
        lim = space.limit(p)
        if lim < 1.0 - tol:
            return Verdict(False, "sampled", {"p": p, "limit": lim})
    return Verdict(True, "sampled")


def check_lemma_1_3(space: PNSpace, p, alpha: float, beta: float, grid: GridSpec = DEFAULT_GRID) -> bool:
    """nu_{beta p} <= nu_{alpha p} whenever |alpha| <= |beta|."""
    if abs(alpha) > abs(beta):
        raise DomainError(f"need |alpha| <= |beta|, got alpha={alpha!r}, beta={beta!r}")
    p = space.vector(p)
    ra, rb = p.scaled(alpha).norm, p.scaled(beta).norm
    extra = np.concatenate([space.norm.abscissae(r, grid) for r in (ra, rb) if r > 0] or [[0.0]])
    Fb = space.norm.distribution(rb, grid, extra)
    Fa = space.norm.distribution(ra, grid, extra)
    return pointwise_leq(Fb, Fa, grid)


def in_strong_neighborhood(space: PNSpace, p, lam: float, q) -> bool:
    """q in N_p(lam), i.e. nu_{p-q}(lam) > 1 - lam."""
    if not lam > 0:
        raise DomainError(f"neighbourhood radius must be > 0, got {lam!r}")
    return bool(space.value(space.vector(p) - space.vector(q), lam) > 1.0 - lam)


def _matrix(space: PNSpace, sequence) -> np.ndarray:
    seq = [space.vector(p) for p in sequence]
    if not seq:
        raise DomainError("empty sequence")
    return np.array([[float(c) for c in p.coords] for p in seq])


def _tail_start(bad: np.ndarray) -> int | None:
    # least 1-based N with no bad entry from N on; None if the last one is bad
    if not bad.any():
        return 1
    last = int(np.flatnonzero(bad)[-1])
    return None if last == bad.size - 1 else last + 2


def _prefix_verdict(starts: dict, length: int, tail_fraction: float) -> Verdict:
    need = math.ceil(tail_fraction * length)
    ok = {lam: N is not None and length - N + 1 >= need for lam, N in starts.items()}
    witness = None
    if not all(ok.values()):
        lam = next(k for k, v in ok.items() if not v)
        witness = {"lambda": lam, "tail_index": starts[lam]}
    return Verdict(
        all(ok.values()),
        "prefix-based",
        witness,
        {"length": length, "tail_fraction": tail_fraction, "tail_index": {str(k): v for k, v in starts.items()}},
    )


DEFAULT_LAMBDAS = (0.5, 0.25, 0.1)


def is_strongly_convergent(space: PNSpace, sequence, limit, lambdas=DEFAULT_LAMBDAS, tail_fraction: float = 0.5) -> Verdict:
    """For each lambda, the least N with every later given term in N_limit(lambda).

    The prefix certifies convergence when, for every lambda, that tail
    covers at least ``tail_fraction`` of the terms.
    """
    X = _matrix(space, sequence)
    lim = np.array([float(c) for c in space.vector(limit).coords])
    r = np.sqrt(((X - lim) ** 2).sum(axis=1))
    starts = {}
    for lam in lambdas:
        if not lam > 0:
            raise DomainError(f"neighbourhood radius must be > 0, got {lam!r}")
        starts[lam] = _tail_start(~(space.norm.value(r, lam) > 1.0 - lam))
    return _prefix_verdict(starts, X.shape[0], tail_fraction)


def is_strongly_cauchy(space: PNSpace, sequence, lambdas=DEFAULT_LAMBDAS, tail_fraction: float = 0.5) -> Verdict:
    """For each lambda, the least N with nu_{p_n - p_m}(lambda) > 1 - lambda for all m, n >= N."""
    X = _matrix(space, sequence)
    n = X.shape[0]
    D = np.sqrt(((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2))
    lo = np.minimum.outer(np.arange(n), np.arange(n))
    starts = {}
    for lam in lambdas:
        if not lam > 0:
            raise DomainError(f"neighbourhood radius must be > 0, got {lam!r}")
        bad = ~(space.norm.value(D, lam) > 1.0 - lam)
        if not bad.any():
            starts[lam] = 1
            continue
        N = int(lo[bad].max()) + 2
        starts[lam] = None if N > n else N
    return _prefix_verdict(starts, n, tail_fraction)
