"""Compiled inner loops: exact sup-convolution of piecewise-linear functions
and tolerance-bounded knot thinning."""

import numpy as np
from numba import njit

T_MIN = 0
T_PRODUCT = 1


@njit(cache=True)
def _piece_max(kind, fa, fb, ga, gb):
    # max over theta in [0, 1] of T(fa + theta*(fb-fa), ga + theta*(gb-ga))
    if kind == T_MIN:
        best = max(min(fa, ga), min(fb, gb))
        da = fa - ga
        db = fb - gb
        if (da < 0.0 < db) or (db < 0.0 < da):
            th = da / (da - db)
            v = fa + th * (fb - fa)
            if v > best:
                best = v
        return best
    best = max(fa * ga, fb * gb)
    df = fb - fa
    dg = gb - ga
    if df * dg < 0.0:
        th = -(df * ga + dg * fa) / (2.0 * df * dg)
        if 0.0 < th < 1.0:
            v = (fa + th * df) * (ga + th * dg)
            if v > best:
                best = v
    return best


@njit(cache=True)
def _affine(xs, ys, i, x):
    # segment i extended affinely (constant past the last knot); no clamping,
    # so endpoints a rounding error outside the segment stay accurate
    if i >= xs.shape[0] - 1:
        return ys[xs.shape[0] - 1]
    return ys[i] + (x - xs[i]) * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])


@njit(cache=True)
def _value(kind, a, b):
    if kind == T_MIN:
        return min(a, b)
    return a * b


@njit(cache=True)
def sup_convolution(kind, fx, fy, gx, gy, out_x):
    """sup over s in [0, x] of T(f(s), g(x - s)) for every x in ``out_x``.

    ``f`` and ``g`` are piecewise linear through their knots and constant
    past the last one; both knot arrays start at 0.  Between consecutive
    breakpoints of s -> (f(s), g(x-s)) both arguments are affine, so each
    piece is maximised in closed form and the result is exact.
    """
    nf = fx.shape[0]
    ng = gx.shape[0]
    m = out_x.shape[0]
    out = np.empty(m)
    cand = np.empty(nf + ng + 1)
    for k in range(m):
        x = out_x[k]
        ia = 0
        while ia < nf and fx[ia] <= x:
            ia += 1
        jb = 0
        while jb < ng and gx[jb] <= x:
            jb += 1
        # breakpoints in s: knots of f and x - knots of g, merged ascending
        c = 0
        i = 0
        j = jb - 1
        while i < ia or j >= 0:
            if j < 0 or (i < ia and fx[i] <= x - gx[j]):
                cand[c] = fx[i]
                i += 1
            else:
                cand[c] = x - gx[j]
                j -= 1
            c += 1
        cand[c] = x
        c += 1
        pf = 0
        pg = jb - 1
        best = max(
            _value(kind, fy[0], _affine(gx, gy, jb - 1, x)),
            _value(kind, _affine(fx, fy, ia - 1, x), gy[0]),
        )
        s = cand[0]
        for q in range(1, c):
            s1 = cand[q]
            if s1 <= s:
                continue
            # segments holding the piece, located by its midpoint
            sm = 0.5 * (s + s1)
            while pf + 1 < nf and fx[pf + 1] <= sm:
                pf += 1
            while pg > 0 and gx[pg] > x - sm:
                pg -= 1
            v = _piece_max(
                kind,
                _affine(fx, fy, pf, s),
                _affine(fx, fy, pf, s1),
                _affine(gx, gy, pg, x - s),
                _affine(gx, gy, pg, x - s1),
            )
            if v > best:
                best = v
            s = s1
        out[k] = best
    return out


@njit(cache=True)
def thin_knots(xs, ys, tol):
    """Indices of a knot subset whose interpolant stays within ``tol``.

    Greedy funnel: from an anchor, extend while the chord to the next knot
    has a slope inside the band allowed by every skipped knot.  The first
    and last knots are always kept.
    """
    n = xs.shape[0]
    keep = np.empty(n, dtype=np.int64)
    keep[0] = 0
    nk = 1
    a = 0
    while a < n - 1:
        lo = -np.inf
        hi = np.inf
        last_ok = a + 1
        k = a + 1
        while k < n:
            dx = xs[k] - xs[a]
            slope = (ys[k] - ys[a]) / dx
            if slope < lo or slope > hi:
                break
            last_ok = k
            lo = max(lo, (ys[k] - tol - ys[a]) / dx)
            hi = min(hi, (ys[k] + tol - ys[a]) / dx)
            if lo > hi:
                break
            k += 1
        keep[nk] = last_ok
        nk += 1
        a = last_ok
    return keep[:nk]
