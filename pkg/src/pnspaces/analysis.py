"""Probabilistic radius, boundedness classes and desk-scale probes for
boundedness, absorption and D-compactness.

Every probe works on a finite prefix or sample and labels its verdict
accordingly; the only firm negatives are explicit certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .distfn import (
    DEFAULT_GRID,
    DistributionFunction,
    GridSpec,
    epsilon0,
    epsilon_inf,
    evaluate,
    excess,
    step_at,
)
from .errors import ClassificationError, DomainError
from .pnspace import DEFAULT_LAMBDAS, PNSpace, Vector, is_characteristic, is_strongly_cauchy, is_strongly_convergent
from .reports import Verdict, _plain

CERTAINLY_BOUNDED = "CertainlyBounded"
PERHAPS_BOUNDED = "PerhapsBounded"
PERHAPS_UNBOUNDED = "PerhapsUnbounded"
CERTAINLY_UNBOUNDED = "CertainlyUnbounded"
BOUNDED_CLASSES = (CERTAINLY_BOUNDED, PERHAPS_BOUNDED)


@dataclass(frozen=True, eq=False)
class PointSet:
    """A subset A of the carrier.

    ``explicit``: the finite list ``points``.  ``parametric``: described by
    ``sup_norm`` (sup of |p| over A), a membership test and an enumerating
    ``generator(n, rng)``; ``rule(space, grid)`` may override the radius.
    ``sampled``: finitely many points standing in for a described set.
    ``carrier`` is ``"R"`` or ``"Q"`` (rational points only).
    """

    kind: str
    points: tuple = ()
    description: str = ""
    sup_norm: float | None = None
    contains: Callable | None = field(default=None, repr=False)
    generator: Callable | None = field(default=None, repr=False)
    rule: Callable | None = field(default=None, repr=False)
    carrier: str = "R"

    def __post_init__(self):
        if self.kind not in ("explicit", "parametric", "sampled"):
            raise DomainError(f"unknown point set kind {self.kind!r}")
        if self.kind != "parametric" and not self.points:
            raise DomainError("point set is empty")
        if self.kind == "parametric" and self.sup_norm is None and self.rule is None:
            raise DomainError("parametric sets need sup_norm or a radius rule")
        object.__setattr__(self, "points", tuple(Vector.of(p) for p in self.points))

    @classmethod
    def explicit(cls, points, description: str = "") -> "PointSet":
        return cls("explicit", tuple(points), description or "explicit")

    def member(self, p) -> bool:
        p = Vector.of(p)
        if self.carrier == "Q" and not p.rational:
            return False
        if self.contains is not None:
            return bool(self.contains(p))
        return p in self.points

    def enumerate(self, n: int, seed: int = 0) -> list[Vector]:
        """First ``n`` points of the set (all points for finite kinds)."""
        if self.kind != "parametric":
            return list(self.points)
        if self.generator is None:
            raise DomainError(f"parametric set {self.description!r} has no generator")
        return list(self.generator(n, np.random.default_rng(seed)))

    def sampled(self, n: int, seed: int = 0) -> "PointSet":
        pts = self.enumerate(n, seed)
        return PointSet("sampled", tuple(pts), f"{n} samples of {self.description}", None, self.contains, None, None, self.carrier)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "description": self.description, "carrier": self.carrier}
        if self.kind == "parametric":
            out["sup_norm"] = self.sup_norm
        else:
            out["size"] = len(self.points)
        return _plain(out)


def naturals() -> PointSet:
    def gen(n, rng):
        return [Vector(m) for m in range(1, n + 1)]

    def contains(p):
        return p.dim == 1 and p.coords[0] == int(p.coords[0]) and p.coords[0] >= 1

    return PointSet("parametric", (), "{m : m in N}", math.inf, contains, gen)


def harmonic() -> PointSet:
    def gen(n, rng):
        return [Vector(Fraction(1, m)) for m in range(1, n + 1)]

    def contains(p):
        c = p.coords[0]
        return p.dim == 1 and 0 < c <= 1 and Fraction(c).numerator == 1

    return PointSet("parametric", (), "{1/m : m in N}", 1.0, contains, gen)


def interval(a: float, b: float, rational: bool = False) -> PointSet:
    """[a, b] (intersected with Q when ``rational``) on the line."""
    if not a <= b:
        raise DomainError("interval needs a <= b")

    def contains(p):
        return p.dim == 1 and a <= p.coords[0] <= b

    def gen(n, rng):
        if rational:
            lo, hi = math.ceil(a * 10**6), math.floor(b * 10**6)
            return [Vector(Fraction(int(k), 10**6)) for k in rng.integers(lo, hi + 1, n)]
        return [Vector(float(x)) for x in rng.uniform(a, b, n)]

    carrier = "Q" if rational else "R"
    name = f"[{a:g}, {b:g}]" + (" ∩ Q" if rational else "")
    return PointSet("parametric", (), name, max(abs(a), abs(b)), contains, gen, carrier=carrier)


def root_interval(m: int, n: int) -> PointSet:
    """[sqrt(m), sqrt(n)] ∩ Q, with exact membership (m <= p^2 <= n)."""
    if not 0 <= m <= n:
        raise DomainError("root_interval needs 0 <= m <= n")
    lo, hi = math.sqrt(m), math.sqrt(n)

    def contains(p):
        if p.dim != 1:
            return False
        c = Fraction(p.coords[0])
        return c >= 0 and m <= c * c <= n

    def gen(k, rng):
        out = []
        while len(out) < k:
            q = Fraction(int(rng.integers(math.floor(lo * 10**6), math.ceil(hi * 10**6) + 1)), 10**6)
            if m <= q * q <= n:
                out.append(Vector(q))
        return out

    return PointSet("parametric", (), f"[sqrt({m}), sqrt({n})] ∩ Q", hi, contains, gen, carrier="Q")


def ball(radius: float, dim: int = 1) -> PointSet:
    """Closed Euclidean ball of the given radius about the origin."""

    def contains(p):
        return p.dim == dim and p.norm <= radius

    def gen(n, rng):
        d = rng.normal(size=(n, dim))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = radius * rng.uniform(0, 1, n) ** (1 / dim)
        return [Vector(tuple(v)) for v in d * r[:, None]]

    return PointSet("parametric", (), f"ball(0, {radius:g}) in R^{dim}", float(radius), contains, gen)


PRESETS = {"naturals": naturals, "harmonic": harmonic, "interval": interval, "root_interval": root_interval, "ball": ball}


def probabilistic_radius(space: PNSpace, A: PointSet, grid: GridSpec = DEFAULT_GRID) -> DistributionFunction:
    """R_A: the left-regularised pointwise inf of nu_p over A.

    Finite sets: the inf of finitely many left-continuous functions is
    left-continuous, so regularisation is the identity and the inf is
    taken exactly on the grid plus the knots of the extreme members.
    Parametric sets use their rule, or nu_rho with rho = sup |p| (the
    built-in families decrease in |p|); rho = +inf gives eps_inf.
    """
    if A.kind == "parametric":
        if A.rule is not None:
            return A.rule(space, grid)
        rho = A.sup_norm
        if math.isinf(rho):
            return epsilon_inf()
        return space.norm.distribution(rho, grid)
    radii = np.unique([space.vector(p).norm for p in A.points])
    radii = radii[radii > 0]
    if radii.size == 0:
        return epsilon0(grid)
    extremes = np.unique(np.r_[radii[:4], radii[-4:]])
    xs = np.concatenate([grid.points()] + [space.norm.abscissae(float(r), grid) for r in extremes])
    limit = min(space.norm.limit(float(r)) for r in radii)
    return DistributionFunction.sample(lambda x: space.norm.value(radii[:, None], x[None, :]).min(axis=0), xs, limit)


@dataclass
class Classification:
    cls: str
    witness: dict
    diagnostics: list[str] = field(default_factory=list)

    @property
    def d_bounded(self) -> bool:
        return self.cls in BOUNDED_CLASSES


def classify_boundedness(R: DistributionFunction, grid: GridSpec = DEFAULT_GRID) -> Classification:
    """Place R in one of the four boundedness classes.

    ``R(x0) = 1`` means >= 1 - tol; the left limit at +inf is read in the
    bands [1 - tol, 1], [tol, 1 - tol) and [0, tol).
    """
    if not isinstance(R, DistributionFunction):
        raise ClassificationError(f"expected a distribution function, got {type(R).__name__}", {})
    tol = grid.tol_eq
    xs = np.unique(np.r_[grid.points(), R.xs])
    vals = evaluate(R, xs)
    full = np.flatnonzero(vals >= 1.0 - tol)
    lim = R.value_at_inf
    if full.size:
        return Classification(CERTAINLY_BOUNDED, {"x0": float(xs[full[0]])})
    if lim >= 1.0 - tol:
        return Classification(PERHAPS_BOUNDED, {"left_limit": lim})
    if lim >= tol:
        return Classification(PERHAPS_UNBOUNDED, {"left_limit": lim})
    diag = []
    if vals.max() > 0:
        diag.append(f"left limit below {tol:g} but R is not identically 0 (max {vals.max():.3g}); classified by the left limit")
    return Classification(CERTAINLY_UNBOUNDED, {"left_limit": lim}, diag)


@dataclass
class RadiusReport:
    radius: DistributionFunction
    cls: str
    d_bounded: bool
    witness: dict
    exactness: str
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return _plain(
            {
                "class": self.cls,
                "d_bounded": self.d_bounded,
                "witness": self.witness,
                "exactness": self.exactness,
                "diagnostics": self.diagnostics,
                "radius": self.radius,
            }
        )


def radius_report(space: PNSpace, A: PointSet, grid: GridSpec = DEFAULT_GRID) -> RadiusReport:
    R = probabilistic_radius(space, A, grid)
    c = classify_boundedness(R, grid)
    exactness = "sampled" if A.kind == "sampled" else "exact"
    return RadiusReport(R, c.cls, c.d_bounded, c.witness, exactness, c.diagnostics)


def _members(A: PointSet, n: int = 50, seed: int = 0) -> list[Vector]:
    return A.enumerate(n, seed)


@dataclass
class BoundWitness:
    """Outcome of the search for a D+ lower bound of {nu_p : p in A}."""

    G: DistributionFunction | None
    verified: bool
    details: dict = field(default_factory=dict)


def _test_family(grid: GridSpec) -> list[tuple[str, DistributionFunction]]:
    out = []
    xs = grid.points()
    for c in np.geomspace(1e-3, 1e3, 13):
        out.append((f"x/(x+{c:.4g})", DistributionFunction.sample(lambda x, c=c: x / (x + c), xs, 1.0)))
        if c < grid.x_max:
            out.append((f"step at {c:.4g}", step_at(float(c), grid)))
    return out


def d_bounded_witness(space: PNSpace, A: PointSet, grid: GridSpec = DEFAULT_GRID) -> BoundWitness:
    """A D+ function below every nu_p, p in A, when A is D-bounded.

    The witness is R_A itself, checked against the closed forms of the
    (sampled) members.  Otherwise a fixed family of D+ test functions is
    checked to contain no common lower bound.
    """
    R = probabilistic_radius(space, A, grid)
    cls = classify_boundedness(R, grid)
    members = [space.vector(p) for p in _members(A)]
    if cls.d_bounded:
        xs = np.unique(np.r_[grid.points(), R.xs])
        worst = 0.0
        for p in members:
            worst = max(worst, float(np.max(evaluate(R, xs) - space.value(p, xs))), R.value_at_inf - space.limit(p))
        return BoundWitness(R, worst <= grid.tol_eq, {"class": cls.cls, "worst_excess": worst, "members_checked": len(members)})
    if not members:
        members = [Vector.zero(space.dim)]
    blocked = {}
    for name, G in _test_family(grid):
        best = None
        for p in members:
            v, where = excess(G, space.norm.distribution(p.norm, grid), grid, at_knots=False)
            if v > grid.tol_eq and (best is None or v > best[0]):
                best = (v, p, where)
        blocked[name] = None if best is None else {"p": best[1], "excess": best[0], "x": best[2]}
    return BoundWitness(None, all(v is not None for v in blocked.values()), {"class": cls.cls, "blocked_by": blocked})


def _point_sequence(A: PointSet, space: PNSpace, length: int) -> list[Vector]:
    # worst case for a finite set is its member of largest norm; sampled and
    # parametric sets are walked in order of increasing norm
    if A.kind == "explicit":
        top = max(A.points, key=lambda p: p.norm)
        return [top] * length
    pts = A.enumerate(length) if A.kind == "parametric" else list(A.points)
    return sorted(pts, key=lambda p: p.norm)


def topological_boundedness_probe(
    space: PNSpace,
    A: PointSet,
    scalar_sequences=None,
    point_sequences=None,
    lambdas=DEFAULT_LAMBDAS,
    length: int = 1000,
) -> Verdict:
    """Look for scalars a_n -> 0 and points p_n in A with a_n p_n not tending to 0.

    Defaults: a_n = 1/n paired with the worst-case walk through A.
    """
    if point_sequences is None:
        point_sequences = [_point_sequence(A, space, length)]
    if scalar_sequences is None:
        scalar_sequences = [[Fraction(1, n) for n in range(1, len(seq) + 1)] for seq in point_sequences]
    if len(scalar_sequences) != len(point_sequences):
        raise DomainError("need one scalar sequence per point sequence")
    theta = Vector.zero(space.dim)
    checked = []
    for k, (alphas, pts) in enumerate(zip(scalar_sequences, point_sequences)):
        if len(alphas) != len(pts) or not pts:
            raise DomainError("scalar and point sequences must have equal, nonzero length")
        mags = np.abs(np.array([float(a) for a in alphas]))
        if mags.max() > 0 and mags[-1] > 0.1 * mags.max():
            raise DomainError(f"scalar sequence {k} does not visibly tend to 0 on its prefix")
        for p in pts:
            if not A.member(p) and A.kind != "sampled":
                raise DomainError(f"point {p!r} of sequence {k} is not in the set")
        prod = [space.vector(p).scaled(a) for a, p in zip(alphas, pts)]
        v = is_strongly_convergent(space, prod, theta, lambdas)
        checked.append(v.details["tail_index"])
        if not v:
            witness = {"pairing": k, "alpha_first": float(alphas[0]), "alpha_last": float(alphas[-1]),
                       "p_first": pts[0], "p_last": pts[-1], "lambda": v.witness["lambda"]}
            return Verdict(False, "counterexample found", witness, {"prefix_based": True, "tail_index": checked})
    return Verdict(True, "no counterexample found", None, {"prefix_based": True, "tail_index": checked})


def _absorbing_k(space, r_max: float, lam: float, k_max: int) -> int | None:
    # least k with nu_{p/k}(lam) > 1 - lam for |p| = r_max; membership grows with k
    def ok(k):
        return space.norm.value(r_max / k, lam) > 1.0 - lam

    if r_max == 0:
        return 1
    if not ok(k_max):
        return None
    lo, hi = 1, k_max
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def absorption_check(space: PNSpace, A: PointSet, n_values=(1, 2, 5, 10), k_max: int = 10**6) -> Verdict:
    """For each n the least k <= k_max with A inside k N_0(1/n).

    The member of largest norm decides (the families decrease in |p|);
    the found k is re-checked against every listed member.
    """
    if A.kind == "parametric":
        r_max, top = A.sup_norm, None
        members = A.enumerate(50) if A.generator else []
    else:
        members = [space.vector(p) for p in A.points]
        top = max(members, key=lambda p: p.norm)
        r_max = top.norm
    table, failures = {}, {}
    for n in n_values:
        if n < 1:
            raise DomainError("n must be a positive integer")
        lam = 1.0 / n
        k = None if math.isinf(r_max) else _absorbing_k(space, r_max, lam, k_max)
        if k is not None:
            for p in members:
                if not space.value(space.vector(p).scaled(Fraction(1, k)), lam) > 1.0 - lam:
                    k = None
                    break
        table[n] = k
        if k is None:
            witness = top if top is not None else max(members, key=lambda p: p.norm) if members else None
            failures[n] = {"unabsorbed": witness, "k_max": k_max}
    return Verdict(not failures, "absorbed" if not failures else "not absorbed", failures or None, {"least_k": {str(n): k for n, k in table.items()}})


def _characteristic_probe(space: PNSpace, A: PointSet) -> Verdict:
    e1 = Vector((1,) + (0,) * (space.dim - 1))
    return is_characteristic(space, _members(A) + [e1])


def lemma_1_12_consistency(space: PNSpace, A: PointSet, grid: GridSpec = DEFAULT_GRID, n_values=(1, 2, 5, 10), k_max: int = 10**6) -> Verdict:
    """In a characteristic space: D-bounded, absorbed by every N_0(1/n) and
    topologically bounded must agree."""
    char = _characteristic_probe(space, A)
    if not char:
        return Verdict(False, "hypothesis not met (not characteristic)", char.witness, {"characteristic": False})
    rep = radius_report(space, A, grid)
    absorbed = absorption_check(space, A, n_values, k_max)
    topo = topological_boundedness_probe(space, A)
    outcomes = {"d_bounded": rep.d_bounded, "absorbed": bool(absorbed), "topologically_bounded": bool(topo)}
    agree = len(set(outcomes.values())) == 1
    return Verdict(
        agree,
        "consistent" if agree else "inconsistent",
        None if agree else outcomes,
        {"characteristic": True, "class": rep.cls, **outcomes, "least_k": absorbed.details["least_k"]},
    )


def theorem_2_1_check(space: PNSpace, sequence, limit, grid: GridSpec = DEFAULT_GRID, A: PointSet | None = None) -> Verdict:
    """A strongly convergent sequence forms a D-bounded set.

    The radius is taken over ``A`` when a parametric description is given,
    else over the listed terms.  In a non-characteristic space the
    conclusion is not expected; the report then records whether the set is
    D-bounded without judging it.
    """
    seq = [space.vector(p) for p in sequence]
    if not seq:
        raise DomainError("empty sequence")
    A = A or PointSet.explicit(seq, "sequence terms")
    char = is_characteristic(space, seq + [space.vector(limit)])
    conv = is_strongly_convergent(space, seq, limit)
    rep = radius_report(space, A, grid)
    details = {"characteristic": bool(char), "convergent": bool(conv), "class": rep.cls, "d_bounded": rep.d_bounded}
    if not char:
        return Verdict(not rep.d_bounded, "non-characteristic: D-boundedness not implied", None, details)
    if not conv:
        return Verdict(True, "hypothesis not met (not convergent on prefix)", None, details)
    return Verdict(rep.d_bounded, "D-bounded" if rep.d_bounded else "conclusion fails", None if rep.d_bounded else details, details)


def sqrt3_convergents(n: int) -> list[Fraction]:
    """First ``n`` continued-fraction convergents of sqrt(3) = [1; 1, 2, 1, 2, ...]."""
    h0, h1, k0, k1 = 1, 1, 0, 1
    out = [Fraction(1)]
    i = 0
    while len(out) < n:
        a = 1 if i % 2 == 0 else 2
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        out.append(Fraction(h1, k1))
        i += 1
    return out


def _subsequence_towards(seq: list[Vector], c: Vector) -> list[Vector]:
    # terms whose distance to c never increases along the subsequence
    best, out = math.inf, []
    for p in seq:
        d = (p - c).norm
        if d <= best:
            best = d
            out.append(p)
    return out


@dataclass
class CompactnessProbe:
    verdict: str
    compact_possible: bool
    d_bounded: bool
    closedness: str
    certificates: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return _plain(
            {
                "verdict": self.verdict,
                "compact_possible": self.compact_possible,
                "d_bounded": self.d_bounded,
                "closedness": self.closedness,
                "certificates": self.certificates,
                **self.details,
            }
        )


NO_COUNTEREXAMPLE = "no counterexample found"
COUNTEREXAMPLE = "counterexample to D-compactness"


def d_compactness_probe(
    space: PNSpace,
    A: PointSet,
    test_sequences,
    limit_candidates,
    lambdas=DEFAULT_LAMBDAS,
    grid: GridSpec = DEFAULT_GRID,
    min_terms: int = 5,
) -> CompactnessProbe:
    """Search for sequences in A without a subsequence converging into A.

    For each sequence and candidate limit c (nearest to the last term
    first), the subsequence approaching c
    monotonically is tested for strong convergence to c (prefix-based).  A
    limit inside A clears the sequence.  A limit outside the carrier
    (e.g. irrational for a rational carrier), with the sequence strongly
    Cauchy, certifies that no subsequence converges into A: the limit is
    unique in the ambient space.  A limit in the carrier but outside A
    certifies that A is not closed.  D-compactness is impossible when A is
    not D-bounded or a certificate exists.
    """
    rep = radius_report(space, A, grid)
    certificates, cleared = [], []
    not_closed = None
    cands = [space.vector(c) for c in limit_candidates]
    for k, seq in enumerate(test_sequences):
        seq = [space.vector(p) for p in seq]
        for i, p in enumerate(seq):
            if not A.member(p):
                raise DomainError(f"term {i} of sequence {k} ({p!r}) is not in the set")
        found = None
        # nearest candidates to the latest term first
        for c in sorted(cands, key=lambda c: (seq[-1] - c).norm):
            sub = _subsequence_towards(seq, c)
            if len(sub) < min_terms:
                continue
            v = is_strongly_convergent(space, sub, c, lambdas)
            if v:
                found = (c, v, sub)
                break
        if found is None:
            continue
        c, v, sub = found
        in_carrier = A.carrier == "R" or c.rational
        if in_carrier and A.member(c):
            cleared.append({"sequence": k, "limit": c})
            continue
        cert = {
            "sequence": k,
            "limit": c,
            "subsequence_terms": len(sub),
            "tail_index": v.details["tail_index"],
            "cauchy": is_strongly_cauchy(space, seq, lambdas).to_json(),
        }
        if in_carrier:
            cert["kind"] = "limit in carrier but outside A (A not closed)"
            not_closed = not_closed or cert
        else:
            cert["kind"] = "limit outside the carrier" + (" (irrational)" if A.carrier == "Q" else "")
        certificates.append(cert)
    closedness = "not closed (certificate)" if not_closed else "no non-closedness certificate"
    verdict = COUNTEREXAMPLE if certificates else NO_COUNTEREXAMPLE
    possible = rep.d_bounded and not certificates
    return CompactnessProbe(verdict, possible, rep.d_bounded, closedness, certificates, {"class": rep.cls, "cleared": cleared})
