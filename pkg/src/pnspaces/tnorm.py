"""Continuous t-norms and t-conorms on [0, 1].

Only the minimum ``M`` and the product ``pi`` are built in.  Other t-norms
can be wrapped with :func:`custom_tnorm`, which refuses operations that fail
the sampled axiom check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError


def _check_unit(*vals):
    for v in vals:
        a = np.asarray(v, dtype=float)
        if np.isnan(a).any() or (a < 0).any() or (a > 1).any():
            raise DomainError(f"t-norm arguments must lie in [0, 1], got {v!r}")


@dataclass(frozen=True)
class TNorm:
    id: str
    func: Callable = field(repr=False, compare=False)
    builtin: bool = False

    def __call__(self, x, y):
        return t_apply(self, x, y)


@dataclass(frozen=True)
class TConorm:
    id: str
    func: Callable = field(repr=False, compare=False)
    tnorm: TNorm | None = None  # the t-norm this conorm is dual to

    def __call__(self, x, y):
        _check_unit(x, y)
        out = self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return float(out) if np.ndim(out) == 0 else out


def t_apply(T: TNorm, x, y):
    _check_unit(x, y)
    out = T.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


MINIMUM = TNorm("M", np.minimum, builtin=True)
PRODUCT = TNorm("pi", np.multiply, builtin=True)


def dual_conorm(T: TNorm) -> TConorm:
    """T*(x, y) = 1 - T(1 - x, 1 - y); max for M, x + y - xy for pi."""
    if T.builtin:
        return {"M": MAXIMUM, "pi": PROBABILISTIC_SUM}[T.id]
    return TConorm(f"{T.id}*", lambda x, y: 1.0 - T.func(1.0 - x, 1.0 - y), T)


def dual_tnorm(S: TConorm) -> TNorm:
    if S.tnorm is not None:
        return S.tnorm
    return TNorm(f"{S.id}*", lambda x, y: 1.0 - S.func(1.0 - x, 1.0 - y))


MAXIMUM = TConorm("max", np.maximum, MINIMUM)
PROBABILISTIC_SUM = TConorm("psum", lambda x, y: x + y - x * y, PRODUCT)

TNORMS = {"M": MINIMUM, "pi": PRODUCT}
TCONORMS = {"max": MAXIMUM, "psum": PROBABILISTIC_SUM}


def tnorm_by_id(name: str) -> TNorm:
    try:
        return TNORMS[name]
    except KeyError:
        raise ConfigError(f"unknown t-norm {name!r}; expected one of {sorted(TNORMS)}") from None


def tconorm_by_id(name: str) -> TConorm:
    try:
        return TCONORMS[name]
    except KeyError:
        raise ConfigError(f"unknown t-conorm {name!r}; expected one of {sorted(TCONORMS)}") from None


def check_tnorm_axioms(T: TNorm, samples: int = 500, seed: int = 0, tol: float = 1e-12) -> dict:
    """Sample commutativity, associativity, monotonicity and the unit law.

    Returns ``{law: worst_violation}``; a law holds when its entry is <= tol.
    """
    rng = np.random.default_rng(seed)
    x, y, z = rng.random((3, samples))
    x[:5] = [0.0, 1.0, 0.0, 1.0, 0.5]
    f = T.func
    xs, ys = np.minimum(x, y), np.maximum(x, y)
    worst = {
        "commutative": np.max(np.abs(f(x, y) - f(y, x))),
        "associative": np.max(np.abs(f(f(x, y), z) - f(x, f(y, z)))),
        "monotone": np.max(np.maximum(f(xs, z) - f(ys, z), 0.0)),
        "unit": np.max(np.abs(f(x, np.ones_like(x)) - x)),
        "range": np.max(np.maximum(np.abs(f(x, y) - 0.5) - 0.5, 0.0)),
    }
    return {k: float(v) for k, v in worst.items()}


def custom_tnorm(id: str, func: Callable, samples: int = 500, seed: int = 0, tol: float = 1e-9) -> TNorm:
    """Wrap a vectorised ``func``; raises :class:`ConfigError` if an axiom fails."""
    T = TNorm(id, func)
    bad = {k: v for k, v in check_tnorm_axioms(T, samples, seed).items() if v > tol}
    if bad:
        raise ConfigError(f"t-norm {id!r} fails sampled axioms: {bad}")
    return T
