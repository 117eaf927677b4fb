import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pnspaces.distfn import (
    DEFAULT_GRID,
    DistributionFunction,
    GridSpec,
    df_distance,
    epsilon0,
    epsilon_inf,
    evaluate,
    excess,
    in_d_plus,
    left_limit_at_inf,
    pointwise_leq,
    random_distribution,
    step_at,
)
from pnspaces.errors import ConfigError, DomainError


def test_defaults():
    g = GridSpec()
    assert (g.mesh, g.x_max, g.tol_eq) == (2.0**-6, 128.0, 1e-9)
    pts = g.points()
    assert pts[0] == 0 and pts[-1] == 128.0 and pts.size == 8193


def test_grid_precedence(monkeypatch):
    monkeypatch.setenv("PNSPACE_GRID", "mesh=0.125,xmax=64")
    g = GridSpec.resolve()
    assert (g.mesh, g.x_max) == (0.125, 64.0)
    g = GridSpec.resolve(mesh=0.25)
    assert (g.mesh, g.x_max) == (0.25, 64.0)
    monkeypatch.delenv("PNSPACE_GRID")
    assert GridSpec.resolve() == GridSpec()


@pytest.mark.parametrize("text", ["mesh=0", "mesh=abc", "foo=1", "xmax=0.5", "tol=-1"])
def test_bad_grid(text):
    with pytest.raises(ConfigError):
        GridSpec.parse(text)


def test_evaluate_basics():
    F = DistributionFunction.from_knots([[0, 0], [1, 0.5], [2, 0.8]], 0.9)
    assert evaluate(F, 0) == 0
    assert evaluate(F, 0.5) == 0.25
    assert evaluate(F, 10) == 0.8
    assert evaluate(F, math.inf) == 1.0
    assert left_limit_at_inf(F) == 0.9
    assert not in_d_plus(F)
    with pytest.raises(DomainError):
        evaluate(F, -1)
    with pytest.raises(DomainError):
        evaluate(F, float("nan"))


def test_epsilons():
    e0, einf = epsilon0(), epsilon_inf()
    assert evaluate(e0, 0) == 0 and evaluate(e0, DEFAULT_GRID.mesh) == 1
    assert in_d_plus(e0)
    assert evaluate(einf, 1e6) == 0 and evaluate(einf, math.inf) == 1
    assert left_limit_at_inf(einf) == 0
    s = step_at(2.0)
    assert evaluate(s, 2.0) == 0 and evaluate(s, 2.0 + DEFAULT_GRID.mesh) == 1


@pytest.mark.parametrize(
    "knots, lim",
    [
        ([[0, 0.1]], 1),
        ([[1, 0]], 1),
        ([[0, 0], [1, 0.5], [1, 0.6]], 1),
        ([[0, 0], [1, 0.5], [2, 0.4]], 1),
        ([[0, 0], [1, 0.5]], 0.4),
        ([[0, 0], [1, 1.5]], 1),
        ([[0, 0], [float("nan"), 0.5]], 1),
    ],
)
def test_invalid(knots, lim):
    with pytest.raises(ConfigError):
        DistributionFunction.from_knots(knots, lim)


def test_immutable():
    F = epsilon0()
    with pytest.raises(AttributeError):
        F.value_at_inf = 0.5
    with pytest.raises(ValueError):
        F.xs[0] = 1.0


def test_json_roundtrip():
    F = DistributionFunction.from_knots([[0, 0], [1, 0.25], [3, 0.75]], 0.8)
    G = DistributionFunction.from_json(json.dumps(F.to_json()))
    assert G.knots == F.knots and G.value_at_inf == 0.8
    with pytest.raises(ConfigError):
        DistributionFunction.from_json({"nope": 1})


def test_csv():
    g = GridSpec(mesh=0.5, x_max=2)
    text = epsilon0(g).to_csv(g)
    assert text.splitlines() == ["x,F", "0,0", "0.5,1", "1,1", "1.5,1", "2,1"]


def test_comparisons():
    F = DistributionFunction.from_knots([[0, 0], [4, 0.5]], 0.5)
    G = DistributionFunction.from_knots([[0, 0], [2, 0.5], [3, 1]], 1)
    assert pointwise_leq(F, G) and not pointwise_leq(G, F)
    worst, where = excess(G, F)
    assert worst == pytest.approx(0.625) and where == 3
    assert excess(F, G)[0] == 0
    assert df_distance(F, F) == 0


def test_simplified_within_tolerance():
    xs = np.linspace(0, 20, 4001)
    F = DistributionFunction.sample(lambda x: x / (x + 1), xs, 1.0)
    S = F.simplified(1e-6)
    assert S.xs.size < F.xs.size / 5
    assert np.max(np.abs(evaluate(S, xs) - evaluate(F, xs))) <= 1e-6


@st.composite
def dfs(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_distribution(np.random.default_rng(seed))


@given(dfs(), st.floats(0, 200))
def test_random_dfs_are_valid(F, x):
    v = evaluate(F, x)
    assert 0 <= v <= F.value_at_inf <= 1
    assert evaluate(F, 0) == 0


@given(dfs())
def test_eps0_is_maximal_eps_inf_minimal(F):
    assert excess(F, epsilon0(), at_knots=False)[0] == 0
    assert pointwise_leq(epsilon_inf(), F)


@given(dfs(), st.floats(0, 100), st.floats(0, 100))
def test_monotone(F, a, b):
    lo, hi = min(a, b), max(a, b)
    assert evaluate(F, lo) <= evaluate(F, hi)
