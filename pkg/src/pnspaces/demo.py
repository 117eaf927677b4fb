"""End-to-end reproduction of the two worked examples.

Example A: nu_p(x) = a x / (x + |p|) on R with a = 0.5, tau_pi and tau_M.
Example B: nu_p(t) = t / (t + |p|) on Q, with A = [sqrt 2, sqrt 3] ∩ Q.

Each claim is recomputed and compared with its expected outcome; the
expectations encode what the definitions actually imply (see the note on
strong convergence in Example A).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import analysis
from .distfn import DEFAULT_GRID, GridSpec, evaluate
from .phi import identity
from .pnspace import PNSpace, Rational1, ScaledRational, Vector, check_phi_serstnev, is_characteristic, is_strongly_convergent
from .reports import _plain
from .triangle import TAU_M, TAU_PI

A_PARAM = 0.5
SEQ_LEN = 1000


def default_radius_formula(t, a, b):
    return t / (t + max(abs(a), abs(b)))


def _claim(claims, name, expected, observed, note=""):
    entry = {"claim": name, "expected": expected, "observed": observed, "match": expected == observed}
    if note:
        entry["note"] = note
    claims.append(entry)


def _example_a(grid: GridSpec, claims: list):
    space = PNSpace(1, ScaledRational(A_PARAM), TAU_PI, TAU_M, identity())
    xs = grid.points()[:: max(1, grid.points().size // 64)]
    law = check_phi_serstnev(space, [1, -2, Fraction(1, 2)], [2, -1, 0.5], grid, xs)
    _claim(claims, "A: phi-Serstnev identity with phi = id", True, law.passed)
    _claim(claims, "A: space is characteristic", False, bool(is_characteristic(space, [1])))

    seq = [Vector(Fraction(1, m)) for m in range(1, SEQ_LEN + 1)]
    rep = analysis.radius_report(space, analysis.PointSet.explicit(seq, "{1/m : m <= 1000}"), grid)
    _claim(claims, "A: {1/m} has class PerhapsUnbounded (not D-bounded)", analysis.PERHAPS_UNBOUNDED, rep.cls)

    lam_low = (0.5, 0.25, 0.1)
    conv = is_strongly_convergent(space, seq, 0, lam_low)
    _claim(
        claims,
        "A: {1/m} -> 0 strongly, lambda in {0.5, 0.25, 0.1}",
        False,
        bool(conv),
        f"nu_p(lambda) < a = {A_PARAM} <= 1 - lambda for every p != 0 when lambda <= 1 - a, "
        "so N_0(lambda) = {0} and no nonzero sequence enters it",
    )
    conv_high = is_strongly_convergent(space, seq, 0, (0.9, 0.75, 0.6))
    _claim(claims, "A: {1/m} enters N_0(lambda) for lambda in {0.9, 0.75, 0.6}", True, bool(conv_high))

    singles = [Fraction(1, 1000), Fraction(1, 10), 1, 10, 1000, -1]
    bounded = {str(p): analysis.radius_report(space, analysis.PointSet.explicit([p]), grid).d_bounded for p in singles}
    _claim(claims, "A: no nonzero singleton is D-bounded", True, not any(bounded.values()))
    _claim(claims, "A: {0} is D-bounded", True, analysis.radius_report(space, analysis.PointSet.explicit([0]), grid).d_bounded)
    return {"space": space.to_json(), "tail_index_low": conv.details["tail_index"], "tail_index_high": conv_high.details["tail_index"]}


def _example_b(grid: GridSpec, claims: list, formula, seed: int):
    space = PNSpace(1, Rational1(), TAU_PI, TAU_M, identity())
    a, b = math.sqrt(2), math.sqrt(3)
    A = analysis.root_interval(2, 3)
    _claim(claims, "B: space is characteristic", True, bool(is_characteristic(space, [1, Fraction(5, 3)])))

    ts = np.linspace(grid.mesh, grid.x_max, 50)
    ts = np.round(ts / grid.mesh) * grid.mesh
    target = np.array([formula(t, a, b) for t in ts])
    R = analysis.probabilistic_radius(space, A, grid)
    gap_exact = float(np.max(np.abs(evaluate(R, ts) - target)))
    R_s = analysis.probabilistic_radius(space, A.sampled(1000, seed), grid)
    gap_sampled = float(np.max(np.abs(evaluate(R_s, ts) - target)))
    _claim(claims, "B: radius equals t/(t + max(|a|, |b|)) at 50 abscissae (exact)", True, gap_exact <= 1e-3)
    _claim(claims, "B: radius equals t/(t + max(|a|, |b|)) at 50 abscissae (1000 samples)", True, gap_sampled <= 1e-3)

    conv = [Vector(c) for c in analysis.sqrt3_convergents(60) if A.member(Vector(c))]
    probe = analysis.d_compactness_probe(space, A, [conv], [Vector(b, rational=False)], grid=grid)
    _claim(claims, "B: A is D-bounded", True, probe.d_bounded)
    _claim(claims, "B: no non-closedness certificate for A in Q", "no non-closedness certificate", probe.closedness)
    _claim(claims, "B: A is not D-compact (sqrt 3 convergents)", analysis.COUNTEREXAMPLE, probe.verdict)
    return {
        "space": space.to_json(),
        "radius_gap_exact": gap_exact,
        "radius_gap_sampled": gap_sampled,
        "sequence_head": [str(c.coords[0]) for c in conv[:4]],
        "compactness": probe.to_json(),
    }


def paper_demo(grid: GridSpec = DEFAULT_GRID, seed: int = 0, radius_formula=None) -> tuple[bool, dict]:
    """Run both examples.  ``radius_formula(t, a, b)`` replaces the expected
    radius (a hook for negative controls)."""
    claims: list = []
    a = _example_a(grid, claims)
    b = _example_b(grid, claims, radius_formula or default_radius_formula, seed)
    ok = all(c["match"] for c in claims)
    failed = [c["claim"] for c in claims if not c["match"]]
    report = {"ok": ok, "failed": failed, "claims": claims, "example_a": a, "example_b": b, "grid": grid.to_dict(), "seed": seed}
    return ok, _plain(report)
