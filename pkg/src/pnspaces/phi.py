"""phi-transforms: non-decreasing left-continuous maps of [0, +inf] onto
[0, +inf] with phi(0) = 0, phi(+inf) = +inf and phi(x) > 0 for x > 0,
together with their left-continuous quasi-inverse

    phi_hat(t) = sup{u : phi(u) < t},  phi_hat(0) = 0,  phi_hat(+inf) = +inf.

Functions are piecewise linear through knots.  A repeated abscissa encodes
a jump (the first of the pair is the value *at* the point, the second the
right limit); the tail is either a slope after the last knot or a jump to
+inf just after ``jump_at``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DomainError, PhiRejected
from .reports import AxiomReport, law_result

INF = math.inf


class MonotonePL:
    """Non-decreasing piecewise-linear function on [0, +inf], left-continuous."""

    __slots__ = ("xs", "ys", "tail_slope", "jump_at")

    def __init__(self, xs, ys, tail_slope=None, jump_at=None):
        self.xs = np.array(xs, dtype=float)
        self.ys = np.array(ys, dtype=float)
        self.tail_slope = None if tail_slope is None else float(tail_slope)
        self.jump_at = None if jump_at is None else float(jump_at)

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        if np.isnan(arr).any() or (arr < 0).any():
            raise DomainError(f"transforms live on [0, +inf], got {x!r}")
        xs, ys = self.xs, self.ys
        n = xs.size
        flat = arr.reshape(-1)
        idx = np.searchsorted(xs, flat, side="left")
        at = np.minimum(idx, n - 1)
        out = np.empty(flat.shape)
        # at a repeated abscissa the first (left) value wins
        exact = (idx < n) & (xs[at] == flat)
        out[exact] = ys[at[exact]]
        finite = np.isfinite(flat)
        tail = (idx == n) & finite
        if self.jump_at is not None:
            out[tail] = INF
        else:
            out[tail] = ys[-1] + (self.tail_slope or 0.0) * (flat[tail] - xs[-1])
        mid = ~exact & ~tail & finite
        i = idx[mid]
        x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
        out[mid] = y0 + (flat[mid] - x0) * (y1 - y0) / (x1 - x0)
        out[~finite] = INF
        out = out.reshape(arr.shape)
        return float(out) if out.ndim == 0 else out

    @property
    def knots(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    def tail_json(self) -> dict:
        if self.jump_at is not None:
            return {"jump_at": self.jump_at}
        return {"slope": self.tail_slope}

    def __repr__(self):
        return f"MonotonePL({self.knots!r}, tail={self.tail_json()})"


@dataclass(frozen=True, eq=False)
class PhiTransform:
    """A validated transform and its quasi-inverse.

    ``bijective`` marks membership in M_{+inf} (continuous, strictly
    increasing, unbounded slope tail).  ``m_b`` is b when the transform is a
    piecewise-linear stand-in for an element of M_b (continuous and strictly
    increasing on [0, b), with the jump to +inf read as the asymptote), else
    None.
    """

    phi: MonotonePL
    phi_hat: MonotonePL
    bijective: bool
    m_b: float | None

    def __call__(self, x):
        return self.phi(x)

    def hat(self, t):
        return self.phi_hat(t)

    def to_json(self) -> dict:
        return {"phi_knots": [list(k) for k in self.phi.knots], "tail": self.phi.tail_json()}


def _strictly_increasing(f: MonotonePL) -> bool:
    return bool(np.all(np.diff(f.xs) > 0) and np.all(np.diff(f.ys) > 0))


def validate_phi(knots, tail) -> PhiTransform:
    """Check the admissibility conditions and build the transform.

    ``tail`` is ``{"slope": s}`` or ``{"jump_at": b}``.  Raises
    :class:`PhiRejected` naming the first failed condition.
    """
    k = np.asarray(knots, dtype=float)
    if k.ndim != 2 or k.shape[1] != 2 or k.shape[0] == 0:
        raise PhiRejected("knots must be a non-empty list of [x, y] pairs")
    if not np.isfinite(k).all():
        raise PhiRejected("knots must be finite numbers")
    xs, ys = k[:, 0].copy(), k[:, 1].copy()
    if xs[0] != 0 or ys[0] != 0:
        raise PhiRejected("phi(0) = 0", witness=float(xs[0]))
    dx, dy = np.diff(xs), np.diff(ys)
    if (dx < 0).any():
        raise PhiRejected("knot abscissae must be non-decreasing")
    if (dy < 0).any():
        i = int(np.argmax(dy < 0))
        raise PhiRejected("phi non-decreasing", witness=float(xs[i + 1]))
    run = np.r_[False, dx == 0]
    if (run[1:] & run[:-1]).any():
        raise PhiRejected("at most two knots may share an abscissa")
    zero = (xs > 0) & (ys == 0)
    if zero.any():
        raise PhiRejected("phi(x) > 0 for x > 0", witness=float(xs[zero].max() / 2))
    if not isinstance(tail, dict) or len(tail) != 1:
        raise PhiRejected("tail must be {'slope': s} or {'jump_at': b}")
    slope, jump = tail.get("slope"), tail.get("jump_at")
    if jump is None and slope is None:
        raise PhiRejected("tail must be {'slope': s} or {'jump_at': b}")
    if jump is not None:
        jump = float(jump)
        if not jump >= xs[-1]:
            raise PhiRejected("jump_at must not precede the last knot", witness=jump)
        if jump > xs[-1]:
            # constant up to b, then +inf
            xs, ys = np.r_[xs, jump], np.r_[ys, ys[-1]]
        if jump == 0 and xs.size == 1:
            pass
        phi = MonotonePL(xs, ys, jump_at=jump)
    else:
        slope = float(slope)
        if not slope > 0:
            raise PhiRejected("phi(+inf) = +inf needs a positive tail slope", witness=float(xs[-1]) + 1.0)
        if ys[-1] == 0 and xs[-1] > 0:
            raise PhiRejected("phi(x) > 0 for x > 0", witness=float(xs[-1]) / 2)
        phi = MonotonePL(xs, ys, tail_slope=slope)
    strict = _strictly_increasing(phi)
    bijective = strict and phi.tail_slope is not None
    m_b = (INF if phi.tail_slope is not None else phi.jump_at) if strict else None
    return PhiTransform(phi, quasi_inverse(phi), bijective, m_b)


def quasi_inverse(phi: MonotonePL) -> MonotonePL:
    """Exact quasi-inverse of a piecewise-linear transform.

    Swapping coordinates maps rising pieces to rising pieces, flat pieces
    of phi to jumps of phi_hat and jumps of phi to flat pieces.  A slope
    tail s becomes 1/s; a jump to +inf at b becomes the constant tail b.
    """
    if isinstance(phi, PhiTransform):
        phi = phi.phi
    qx, qy = phi.ys.copy(), phi.xs.copy()
    # remove repeated points, and keep only the ends of runs of equal abscissae
    keep = np.r_[True, (np.diff(qx) != 0) | (np.diff(qy) != 0)]
    qx, qy = qx[keep], qy[keep]
    same_prev = np.r_[False, qx[1:] == qx[:-1]]
    same_next = np.r_[qx[:-1] == qx[1:], False]
    keep = ~(same_prev & same_next)
    qx, qy = qx[keep], qy[keep]
    if phi.jump_at is not None:
        return MonotonePL(qx, qy, tail_slope=0.0)
    return MonotonePL(qx, qy, tail_slope=1.0 / phi.tail_slope)


def check_quasi_inverse_inequalities(phi: PhiTransform, samples: int = 1000, seed: int = 0) -> AxiomReport:
    """Check phi_hat(phi(x)) <= x and phi(phi_hat(y)) <= y.

    Points are ``samples`` uniform draws plus every knot.  The first
    inequality is only checked where phi(x) is finite: past a jump to +inf
    phi_hat(phi(x)) = +inf.
    """
    rng = np.random.default_rng(seed)
    f, g = phi.phi, phi.phi_hat
    x_top = f.jump_at if f.jump_at is not None else max(2 * f.xs[-1], 1.0)
    y_top = max(2 * f.ys[-1], 1.0)
    xs = np.r_[f.xs, rng.uniform(0, x_top, samples)]
    ys = np.r_[f.ys, g.xs, rng.uniform(0, y_top, samples)]
    xs = xs[np.isfinite(f(xs))]
    tol_x = 1e-9 * np.maximum(1.0, np.abs(xs))
    tol_y = 1e-9 * np.maximum(1.0, np.abs(ys))
    over1 = g(f(xs)) - xs - tol_x
    over2 = f(g(ys)) - ys - tol_y
    report = AxiomReport("quasi-inverse inequalities", info={"samples": samples, "seed": seed})
    i, j = int(np.argmax(over1)), int(np.argmax(over2))
    report.add(law_result("phi_hat(phi(x)) <= x", max(over1[i], 0.0), 0.0, {"x": float(xs[i])}))
    report.add(law_result("phi(phi_hat(y)) <= y", max(over2[j], 0.0), 0.0, {"y": float(ys[j])}))
    report.info["worst_slack"] = float(min(-over1.max(), -over2.max()))
    return report


def identity() -> PhiTransform:
    return validate_phi([[0.0, 0.0]], {"slope": 1.0})


def from_function(f, xs, tail) -> PhiTransform:
    """Sample the vectorised ``f`` at ``xs`` (which must start at 0)."""
    xs = np.asarray(xs, dtype=float)
    return validate_phi(np.column_stack([xs, f(xs)]), tail)


def square(x_max: float = 16.0, n: int = 257) -> PhiTransform:
    """x**2 sampled on ``n`` equispaced knots, continued with slope 2*x_max."""
    xs = np.linspace(0.0, x_max, n)
    return from_function(np.square, xs, {"slope": 2 * x_max})


def flat_example() -> PhiTransform:
    """phi = 1 on (0, 2] and x - 1 after: a jump at 0+ followed by a flat piece."""
    return validate_phi([[0, 0], [0, 1], [2, 1]], {"slope": 1.0})


def phi_from_json(data) -> PhiTransform:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or "phi_knots" not in data or "tail" not in data:
        raise ConfigError("phi must be {'phi_knots': [[x, y], ...], 'tail': {...}}")
    return validate_phi(data["phi_knots"], data["tail"])
