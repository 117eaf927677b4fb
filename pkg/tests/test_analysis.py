import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pnspaces import analysis
from pnspaces.analysis import (
    CERTAINLY_BOUNDED,
    CERTAINLY_UNBOUNDED,
    COUNTEREXAMPLE,
    NO_COUNTEREXAMPLE,
    PERHAPS_BOUNDED,
    PERHAPS_UNBOUNDED,
    PointSet,
    absorption_check,
    classify_boundedness,
    d_bounded_witness,
    d_compactness_probe,
    lemma_1_12_consistency,
    probabilistic_radius,
    radius_report,
    sqrt3_convergents,
    theorem_2_1_check,
    topological_boundedness_probe,
)
from pnspaces.distfn import DEFAULT_GRID, DistributionFunction, epsilon0, epsilon_inf, evaluate
from pnspaces.errors import ClassificationError, DomainError
from pnspaces.pnspace import Vector

XS = DEFAULT_GRID.points()


def brute_radius(space, pts, xs):
    return np.min([space.value(space.vector(p), xs) for p in pts], axis=0)


def test_radius_finite_exact(ex25):
    R = probabilistic_radius(ex25, PointSet.explicit([1, 2, 3]))
    assert np.max(np.abs(evaluate(R, XS) - XS / (XS + 3))) <= 1e-9
    assert R.value_at_inf == 1.0


def test_radius_matches_brute_inf(ex22):
    pts = [Fraction(1, m) for m in range(1, 40)] + [-5, 7]
    R = probabilistic_radius(ex22, PointSet.explicit(pts))
    assert np.max(np.abs(evaluate(R, XS) - brute_radius(ex22, pts, XS))) <= 1e-9
    assert R.value_at_inf == 0.5


def test_radius_special_sets(ex25):
    assert probabilistic_radius(ex25, PointSet.explicit([0])).xs.tolist() == epsilon0().xs.tolist()
    R = probabilistic_radius(ex25, analysis.naturals())
    assert R.value_at_inf == 0 and R.xs.tolist() == epsilon_inf().xs.tolist()
    R = probabilistic_radius(ex25, analysis.interval(-2, 1))
    assert evaluate(R, 2.0) == pytest.approx(0.5, abs=1e-9)


def test_radius_root_interval_sampled(ex25):
    A = analysis.root_interval(2, 3).sampled(1000, 0)
    R = probabilistic_radius(ex25, A)
    ts = np.linspace(DEFAULT_GRID.mesh, DEFAULT_GRID.x_max, 50)
    assert np.max(np.abs(evaluate(R, ts) - ts / (ts + math.sqrt(3)))) <= 1e-3


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=6))
def test_radius_below_members(ex25, pts):
    R = probabilistic_radius(ex25, PointSet.explicit(pts))
    for p in pts:
        assert np.all(evaluate(R, XS) <= ex25.value(Vector(p), XS) + 1e-12)


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=5), st.lists(st.floats(-50, 50), min_size=1, max_size=5))
def test_radius_antitone_in_set(ex22, a, b):
    small = probabilistic_radius(ex22, PointSet.explicit(a))
    big = probabilistic_radius(ex22, PointSet.explicit(a + b))
    assert np.all(evaluate(big, XS) <= evaluate(small, XS) + 1e-12)


@given(st.lists(st.floats(-50, 50), min_size=1, max_size=5), st.sampled_from(["ex25", "ex22", "simple"]))
def test_adding_origin_keeps_class(request, pts, fam):
    space = request.getfixturevalue(fam)
    c1 = radius_report(space, PointSet.explicit(pts)).cls
    c2 = radius_report(space, PointSet.explicit(pts + [0])).cls
    assert c1 == c2


def test_classes(ex25, ex22, simple):
    assert radius_report(ex25, PointSet.explicit([1, 2])).cls == PERHAPS_BOUNDED
    assert radius_report(ex22, PointSet.explicit([Fraction(1, m) for m in range(1, 1001)])).cls == PERHAPS_UNBOUNDED
    assert radius_report(ex25, analysis.naturals()).cls == CERTAINLY_UNBOUNDED
    rep = radius_report(simple, PointSet.explicit([1, 2]))
    assert rep.cls == CERTAINLY_BOUNDED and 2 < rep.witness["x0"] <= 2 + DEFAULT_GRID.delta
    assert radius_report(ex22, PointSet.explicit([0])).cls == CERTAINLY_BOUNDED


@given(
    st.lists(st.tuples(st.floats(0.01, 100), st.floats(0, 1)), max_size=8),
    st.floats(0, 1),
)
def test_classifier_total(knots, limit):
    xs = np.cumsum([0] + [k[0] for k in knots])
    ys = np.maximum.accumulate([0] + [k[1] for k in knots])
    F = DistributionFunction.from_knots(list(zip(xs, ys)), max(limit, ys[-1]))
    assert classify_boundedness(F).cls in (CERTAINLY_BOUNDED, PERHAPS_BOUNDED, PERHAPS_UNBOUNDED, CERTAINLY_UNBOUNDED)


def test_classifier_rejects_non_df():
    with pytest.raises(ClassificationError):
        classify_boundedness([0, 1])


def test_classifier_diagnostic():
    F = DistributionFunction.from_knots([(0, 0), (1, 1e-10)], 1e-10)
    c = classify_boundedness(F)
    assert c.cls == CERTAINLY_UNBOUNDED and c.diagnostics


def test_bound_witness(ex25, ex22):
    w = d_bounded_witness(ex25, PointSet.explicit([1, 2, 3]))
    assert w.verified and w.G is not None
    w = d_bounded_witness(ex22, PointSet.explicit([1]))
    assert w.G is None and w.verified
    assert all(b is not None for b in w.details["blocked_by"].values())


def test_topological_probe(ex25):
    assert topological_boundedness_probe(ex25, PointSet.explicit([1, 2, 3]))
    v = topological_boundedness_probe(ex25, analysis.naturals())
    assert not v and v.label == "counterexample found"
    with pytest.raises(DomainError):
        topological_boundedness_probe(ex25, PointSet.explicit([1]), [[1] * 10], [[Vector(1)] * 10])


def test_absorption(ex25):
    v = absorption_check(ex25, PointSet.explicit([1, -1]), (2,))
    # nu_{1/k}(1/2) = 0.5 / (0.5 + 1/k) > 1/2 iff k >= 3
    assert v and v.details["least_k"] == {"2": 3}
    v = absorption_check(ex25, PointSet.explicit([1, 2, 3]))
    ks = v.details["least_k"]
    for n, k in ks.items():
        lam = 1 / int(n)
        assert ex25.value(3 / k, lam) > 1 - lam
        assert k == 1 or not ex25.value(3 / (k - 1), lam) > 1 - lam
    assert not absorption_check(ex25, analysis.naturals())
    assert not absorption_check(ex25, PointSet.explicit([10**9]), (10,), k_max=100)


def test_lemma_1_12(ex25, ex22):
    v = lemma_1_12_consistency(ex25, PointSet.explicit([1, 2, 3]))
    assert v and v.details["d_bounded"] and v.details["absorbed"] and v.details["topologically_bounded"]
    v = lemma_1_12_consistency(ex25, analysis.naturals())
    assert v and not v.details["d_bounded"] and not v.details["absorbed"] and not v.details["topologically_bounded"]
    v = lemma_1_12_consistency(ex22, PointSet.explicit([1, 2, 3]))
    assert v.label == "hypothesis not met (not characteristic)"


def test_theorem_2_1(ex25, ex22):
    seq = [Fraction(1, m) for m in range(1, 200)]
    v = theorem_2_1_check(ex25, seq, 0)
    assert v and v.details["convergent"] and v.details["d_bounded"]
    v = theorem_2_1_check(ex22, seq, 0)
    assert v.label.startswith("non-characteristic") and not v.details["d_bounded"]
    v = theorem_2_1_check(ex25, list(range(1, 50)), 0)
    assert v.label.startswith("hypothesis not met")


def test_sqrt3_convergents():
    c = sqrt3_convergents(12)
    A = analysis.root_interval(2, 3)
    inside = [x for x in c if A.member(Vector(x))]
    assert inside[:4] == [Fraction(5, 3), Fraction(19, 11), Fraction(71, 41), Fraction(265, 153)]
    assert all(abs(float(x) - math.sqrt(3)) < 1 / x.denominator**2 for x in c)


def test_compactness_probe_root_interval(ex25):
    A = analysis.root_interval(2, 3)
    seq = [Vector(c) for c in sqrt3_convergents(60) if A.member(Vector(c))]
    p = d_compactness_probe(ex25, A, [seq], [Vector(math.sqrt(3), rational=False)])
    assert p.verdict == COUNTEREXAMPLE and not p.compact_possible
    assert p.d_bounded and p.closedness == "no non-closedness certificate"
    assert p.certificates[0]["kind"] == "limit outside the carrier (irrational)"


def test_compactness_probe_closed_interval(ex25):
    A = analysis.interval(0, 1)
    seq = [Vector(Fraction(1, m)) for m in range(1, 300)]
    p = d_compactness_probe(ex25, A, [seq], [Vector(0), Vector(Fraction(41, 100))])
    assert p.verdict == NO_COUNTEREXAMPLE and p.compact_possible and p.details["cleared"]


def test_compactness_probe_not_closed(ex25):
    A = analysis.interval(0, 1)
    seq = [Vector(1 - Fraction(1, m)) for m in range(2, 300)]
    open_ = PointSet("parametric", (), "[0, 1)", 1.0, lambda p: 0 <= p.coords[0] < 1)
    p = d_compactness_probe(ex25, open_, [seq], [Vector(1)])
    assert p.verdict == COUNTEREXAMPLE and p.closedness == "not closed (certificate)"
    with pytest.raises(DomainError):
        d_compactness_probe(ex25, A, [[Vector(5)]], [Vector(0)])


def test_compactness_probe_simple_family(simple):
    A = analysis.interval(0, 1)
    seq = [Vector(Fraction(1, m)) for m in range(1, 300)]
    p = d_compactness_probe(simple, A, [seq], [Vector(Fraction(41, 100)), Vector(0)])
    assert p.verdict == NO_COUNTEREXAMPLE and p.details["cleared"][0]["limit"] == Vector(0)


def test_topological_probe_sampled_counterexample(ex25):
    A = PointSet("sampled", tuple(Vector(m) for m in range(1, 101)), "{m <= 100}")
    alphas = [Fraction(1, m) for m in range(1, 101)]
    v = topological_boundedness_probe(ex25, A, [alphas], [list(A.points)], lambdas=(0.38,))
    assert not v
    assert ex25.value(1, 0.38) <= 1 - 0.38


def test_harmonic_parametric_bounded(ex25, ex22):
    rep = radius_report(ex25, analysis.harmonic())
    assert rep.d_bounded and np.max(np.abs(evaluate(rep.radius, XS) - XS / (XS + 1))) <= 1e-9
    assert not radius_report(ex22, analysis.harmonic()).d_bounded
