"""Pure-Python exact lattice minimization (the reference backend).

Minimizes ``q(m) = 1/2 m B m^T + m.c`` over ``m`` in Z^g by Fincke-Pohst
enumeration.  Every bound and comparison is an exact Fraction comparison,
so the returned argmin set is complete.
"""
from __future__ import annotations

from fractions import Fraction
from math import floor, isqrt

from .linalg import dot, ldl_solve, matvec


def _q(B, c, m):
    Bm = matvec(B, m)
    return dot(m, Bm) / 2 + dot(m, c)


def _range(center: Fraction, d: Fraction, rem: Fraction):
    """All integers k with ``d (k - center)^2 <= rem``, as (lo, hi)."""
    if rem < 0:
        return 1, 0
    s = rem / d
    # integer bracket of sqrt(s), then exact correction
    r = isqrt(s.numerator // s.denominator)
    lo = floor(center) - r - 1
    hi = floor(center) + r + 2
    while d * (lo - center) ** 2 > rem and lo <= hi:
        lo += 1
    while d * (lo - 1 - center) ** 2 <= rem:
        lo -= 1
    while d * (hi - center) ** 2 > rem and hi >= lo:
        hi -= 1
    while d * (hi + 1 - center) ** 2 <= rem:
        hi += 1
    return lo, hi


def minimize(B, L, D, c):
    """Return ``(min q, sorted list of all minimizers)``."""
    g = len(B)
    x = ldl_solve(L, D, [-ci for ci in c])
    qx = dot(x, c) / 2          # q at the real minimizer
    # Babai nearest-plane seed
    m = [0] * g
    for k in reversed(range(g)):
        ck = x[k] - sum(L[j][k] * (m[j] - x[j]) for j in range(k + 1, g))
        m[k] = floor(ck + Fraction(1, 2))
    best = _q(B, c, m)
    args = []
    state = {"best": best, "bound": 2 * (best - qx)}

    cur = [0] * g

    def rec(k, partial):
        ck = x[k] - sum(L[j][k] * (cur[j] - x[j]) for j in range(k + 1, g))
        lo, hi = _range(ck, D[k], state["bound"] - partial)
        for mk in range(lo, hi + 1):
            p = partial + D[k] * (mk - ck) ** 2
            if p > state["bound"]:
                continue
            cur[k] = mk
            if k == 0:
                v = _q(B, c, cur)
                if v < state["best"]:
                    state["best"] = v
                    state["bound"] = 2 * (v - qx)
                    args.clear()
                    args.append(tuple(cur))
                elif v == state["best"]:
                    args.append(tuple(cur))
            else:
                rec(k - 1, p)
        cur[k] = 0

    rec(g - 1, Fraction(0))
    return state["best"], sorted(set(args))


def brute_force(B, c, box=50):
    """Minimum over the box [-box, box]^g (test oracle, g <= 2)."""
    from itertools import product

    g = len(B)
    best, args = None, []
    for m in product(range(-box, box + 1), repeat=g):
        v = _q(B, c, m)
        if best is None or v < best:
            best, args = v, [m]
        elif v == best:
            args.append(m)
    return best, sorted(args)
