"""Triangle functions on Delta+.

``tau_T`` is the sup-convolution sup_{s+t=x} T(F(s), G(t)) and ``tau_Tstar``
the inf-convolution inf_{s+t=x} T*(F(s), G(t)).  Both are evaluated on the
grid, on every input knot and (for small inputs) on every sum of knots.
For the built-in t-norms each evaluation is the exact optimum over splits
of the piecewise-linear inputs; the remaining error is interpolation
between output abscissae.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .distfn import (
    DEFAULT_GRID,
    DistributionFunction,
    GridSpec,
    df_distance,
    epsilon0,
    excess,
    random_distribution,
)
from .reports import AxiomReport, law_result
from .tnorm import MAXIMUM, MINIMUM, PRODUCT, TConorm, TNorm, dual_tnorm, tconorm_by_id, tnorm_by_id
from .errors import ConfigError

# inputs are thinned to this accuracy before convolving
INPUT_TOL = 1e-6
_MAX_KNOT_SUMS = 4096
_KERNEL_KIND = {"M": _kernels.T_MIN, "pi": _kernels.T_PRODUCT}


def _output_abscissae(F, G, grid: GridSpec) -> np.ndarray:
    parts = [grid.points(), F.xs, G.xs]
    if F.xs.size * G.xs.size <= _MAX_KNOT_SUMS:
        parts.append(np.add.outer(F.xs, G.xs).ravel())
    xs = np.unique(np.concatenate(parts))
    return xs[xs <= grid.x_max]


def _finish(xs, vals, limit) -> DistributionFunction:
    ys = np.maximum.accumulate(np.clip(vals, 0.0, 1.0))
    ys[0] = 0.0
    return DistributionFunction(xs, ys, max(float(limit), ys[-1])).simplified(1e-10)


def _sup_generic(func, fx, fy, gx, gy, xs, refine=8):
    # user t-norms: grid search over breakpoints plus ``refine`` interior points per piece
    out = np.empty(xs.size)
    theta = np.linspace(0.0, 1.0, refine + 1)[:-1]
    for k, x in enumerate(xs):
        s = np.union1d(np.r_[fx[fx <= x], x - gx[gx <= x]], [0.0, x])
        if s.size > 1:
            s = np.r_[(s[:-1, None] + theta * np.diff(s)[:, None]).ravel(), s[-1]]
        out[k] = np.max(func(np.interp(s, fx, fy), np.interp(x - s, gx, gy)))
    return out


def _sup_values(T: TNorm, fx, fy, gx, gy, xs):
    if T.builtin:
        return _kernels.sup_convolution(_KERNEL_KIND[T.id], fx, fy, gx, gy, xs)
    return _sup_generic(T.func, fx, fy, gx, gy, xs)


def tau_T(T: TNorm, F: DistributionFunction, G: DistributionFunction, grid: GridSpec = DEFAULT_GRID):
    """Sup-convolution of F and G under the t-norm T."""
    xs = _output_abscissae(F, G, grid)
    f, g = F.simplified(INPUT_TOL), G.simplified(INPUT_TOL)
    vals = _sup_values(T, f.xs, f.ys, g.xs, g.ys, xs)
    return _finish(xs, vals, T.func(F.value_at_inf, G.value_at_inf))


def tau_Tstar(S: TConorm, F: DistributionFunction, G: DistributionFunction, grid: GridSpec = DEFAULT_GRID):
    """Inf-convolution of F and G under the t-conorm S.

    Computed as 1 - sup T(1 - F(s), 1 - G(t)) with T the t-norm dual to S.
    Its left limit at +inf is min(l-F, l-G): the splits s = 0 and s = x
    give G(x) and F(x), and every split has one leg >= x/2.
    """
    xs = _output_abscissae(F, G, grid)
    f, g = F.simplified(INPUT_TOL), G.simplified(INPUT_TOL)
    T = dual_tnorm(S)
    vals = 1.0 - _sup_values(T, f.xs, 1.0 - f.ys, g.xs, 1.0 - g.ys, xs)
    return _finish(xs, vals, min(F.value_at_inf, G.value_at_inf))


def _level_inverse(F: DistributionFunction, y: np.ndarray, strict: bool) -> np.ndarray:
    """inf{s : F(s) >= y} (or > y when ``strict``); +inf when never reached."""
    xs, ys = F.xs, F.ys
    i = np.searchsorted(ys, y, side="right" if strict else "left")
    out = np.full(y.shape, np.inf)
    at0 = i == 0
    out[at0] = 0.0
    mid = (i > 0) & (i < ys.size)
    j = i[mid]
    x0, x1, y0, y1 = xs[j - 1], xs[j], ys[j - 1], ys[j]
    out[mid] = x0 + (y[mid] - y0) * (x1 - x0) / (y1 - y0)
    return out


def tau_M_fast(F: DistributionFunction, G: DistributionFunction, grid: GridSpec = DEFAULT_GRID):
    """tau_M by quasi-inverse addition: the result's level-y abscissa is
    F^(y) + G^(y), where F^(y) = inf{s : F(s) >= y}."""
    top = min(F.ys[-1], G.ys[-1])
    levels = np.unique(np.concatenate([F.ys, G.ys]))
    levels = levels[levels <= top]
    lo = _level_inverse(F, levels, False) + _level_inverse(G, levels, False)
    hi = _level_inverse(F, levels, True) + _level_inverse(G, levels, True)
    X = np.column_stack([lo, hi]).ravel()
    Y = np.repeat(levels, 2)
    keep = np.isfinite(X)
    X, Y = X[keep], Y[keep]
    # drop repeated abscissae, keeping the lowest level (left-continuity)
    first = np.r_[True, np.diff(X) > 0]
    X, Y = X[first], Y[first]
    xs = _output_abscissae(F, G, grid)
    vals = np.interp(xs, X, Y, right=top)
    return _finish(xs, vals, min(F.value_at_inf, G.value_at_inf))


def tau_M(F, G, grid: GridSpec = DEFAULT_GRID, method: str = "fast"):
    """tau_T with T = min.  ``method`` is ``"fast"`` (quasi-inverse addition)
    or ``"brute"`` (sup over splits)."""
    if method == "fast":
        return tau_M_fast(F, G, grid)
    if method == "brute":
        return tau_T(MINIMUM, F, G, grid)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class TriangleFunction:
    """A binary operation on distribution functions, tagged with its origin."""

    kind: str  # "tau_T", "tau_Tstar", "tau_M" or "custom"
    name: str
    op: Callable = field(repr=False, compare=False)
    tnorm: TNorm | None = None
    tconorm: TConorm | None = None

    def __call__(self, F, G, grid: GridSpec = DEFAULT_GRID) -> DistributionFunction:
        return self.op(F, G, grid)


def make_tau_T(T: TNorm) -> TriangleFunction:
    return TriangleFunction("tau_T", f"tauT:{T.id}", lambda F, G, grid: tau_T(T, F, G, grid), tnorm=T)


def make_tau_Tstar(S: TConorm) -> TriangleFunction:
    return TriangleFunction("tau_Tstar", f"tauTstar:{S.id}", lambda F, G, grid: tau_Tstar(S, F, G, grid), tconorm=S)


TAU_M = TriangleFunction("tau_M", "tauM", lambda F, G, grid: tau_M(F, G, grid), tnorm=MINIMUM)
TAU_PI = make_tau_T(PRODUCT)
TAU_MAX = make_tau_Tstar(MAXIMUM)


def triangle_by_id(name: str) -> TriangleFunction:
    """Parse ``tauM``, ``tauT:<tnorm>`` or ``tauTstar:<tconorm>``."""
    if name == "tauM":
        return TAU_M
    head, _, arg = name.partition(":")
    if head == "tauT" and arg:
        return make_tau_T(tnorm_by_id(arg))
    if head == "tauTstar" and arg:
        return make_tau_Tstar(tconorm_by_id(arg))
    raise ConfigError(f"unknown triangle function {name!r}; use tauM, tauT:M|pi or tauTstar:max|psum")


def _raise_pair(rng, F: DistributionFunction) -> DistributionFunction:
    # a distribution function >= F: compress the abscissae and/or lift values
    xs, ys, lim = F.xs, F.ys, F.value_at_inf
    if rng.random() < 0.7:
        xs = xs / rng.uniform(1.0, 3.0)
    if rng.random() < 0.7:
        c = rng.uniform(0.0, 0.5)
        ys = ys + c * (1.0 - ys)
        ys[0] = 0.0
        lim = lim + c * (1.0 - lim)
    return DistributionFunction(xs, ys, lim)


def check_triangle_axioms(
    tau: TriangleFunction,
    samples: int = 100,
    grid: GridSpec = DEFAULT_GRID,
    seed: int = 0,
    tolerance: float | None = None,
) -> AxiomReport:
    """Sample the four triangle-function laws on random triples.

    Each law is measured as a sup-distance on the grid (monotonicity as the
    largest excess).  A law passes when its worst violation is within
    ``tolerance`` (default ``2 * grid.mesh``).  A fifth, informational entry
    checks stability under input perturbations of size mesh/4, a finite
    stand-in for continuity under weak convergence.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    tol = 2 * grid.mesh if tolerance is None else tolerance
    rng = np.random.default_rng(seed)
    e0 = epsilon0(grid)
    worst = {k: (-1.0, None) for k in ("associative", "commutative", "monotone", "unit", "continuity")}

    def note(law, value, witness):
        if value > worst[law][0]:
            worst[law] = (value, witness)

    eta = grid.mesh / 4
    for i in range(samples):
        F, G, H = (random_distribution(rng) for _ in range(3))
        FG, GF = tau(F, G, grid), tau(G, F, grid)
        note("commutative", df_distance(FG, GF, grid), {"sample": i, "F": F, "G": G})
        lhs = tau(FG, H, grid)
        rhs = tau(F, tau(G, H, grid), grid)
        note("associative", df_distance(lhs, rhs, grid), {"sample": i, "F": F, "G": G, "H": H})
        F2 = _raise_pair(rng, F)
        v, where = excess(tau(F, H, grid), tau(F2, H, grid), grid)
        note("monotone", v, {"sample": i, "F": F, "F_upper": F2, "H": H, "x": where})
        note("unit", df_distance(tau(F, e0, grid), F, grid), {"sample": i, "F": F})
        Fp = DistributionFunction(F.xs, F.ys + eta * (1.0 - F.ys) * (F.xs > 0), F.value_at_inf + eta * (1 - F.value_at_inf))
        note("continuity", df_distance(tau(Fp, G, grid), FG, grid), {"sample": i, "F": F, "G": G, "eta": eta})

    report = AxiomReport(tau.name, info={"samples": samples, "seed": seed, "grid": grid.to_dict()})
    for law in ("associative", "commutative", "monotone", "unit"):
        value, witness = worst[law]
        report.add(law_result(law, value, tol, witness, sampled=True))
    value, witness = worst["continuity"]
    report.add(
        law_result(
            "continuity", value, tol, witness, sampled=True,
            note="partial: output shift under input perturbation of mesh/4",
        )
    )
    return report

