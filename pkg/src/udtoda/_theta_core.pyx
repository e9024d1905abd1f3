# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice minimization kernel.

Minimizes ``f(m) = m A m^T + 2 b.m`` over Z^g for an integer symmetric
positive definite ``A`` and integer ``b``.  Pruning uses a float LDL^T with
a widened radius, so the explored set is a superset of the exact ellipsoid;
every candidate value is computed exactly in 64-bit integers.  The Python
caller guarantees no overflow and a well-conditioned ``A``.
"""
from libc.math cimport sqrt, floor, ceil, fabs

cdef enum:
    GMAX = 24
    TIE_CAP = 256

cdef struct Ctx:
    int g
    long long A[GMAX][GMAX]
    long long b[GMAX]
    double L[GMAX][GMAX]
    double D[GMAX]
    double x[GMAX]
    double fx
    long long best
    double bound
    long long cur[GMAX]
    long long ties[TIE_CAP][GMAX]
    int nties
    int overflow_ties


cdef long long _f(Ctx* c):
    cdef int i, j
    cdef long long s = 0, r
    for i in range(c.g):
        r = 0
        for j in range(c.g):
            r += c.A[i][j] * c.cur[j]
        s += c.cur[i] * (r + 2 * c.b[i])
    return s


cdef inline double _slack(Ctx* c, double v):
    return v * (1.0 + 1e-9) + 1e-9 * (fabs(<double>c.best) + fabs(c.fx) + 1.0)


cdef void _rec(Ctx* c, int k, double partial):
    cdef int j, t
    cdef double ck = c.x[k], rem, s, d
    cdef long long lo, hi, mk, v
    for j in range(k + 1, c.g):
        ck -= c.L[j][k] * (c.cur[j] - c.x[j])
    rem = _slack(c, c.bound) - partial
    if rem < 0:
        return
    s = sqrt(rem / c.D[k]) + 1e-7 * (1.0 + fabs(ck))
    lo = <long long>ceil(ck - s)
    hi = <long long>floor(ck + s)
    mk = lo
    while mk <= hi:
        d = (mk - ck)
        d = partial + c.D[k] * d * d
        if d <= _slack(c, c.bound):
            c.cur[k] = mk
            if k == 0:
                v = _f(c)
                if v < c.best:
                    c.best = v
                    c.bound = <double>v - c.fx
                    c.nties = 0
                    c.overflow_ties = 0
                if v == c.best:
                    if c.nties < TIE_CAP:
                        for t in range(c.g):
                            c.ties[c.nties][t] = c.cur[t]
                        c.nties += 1
                    else:
                        c.overflow_ties = 1
            else:
                _rec(c, k - 1, d)
        mk += 1
    c.cur[k] = 0


def minimize_int(list A, list b, list Lf, list Df, list xf, double fx):
    """Return ``(best f, argmins)`` or ``None`` when the tie buffer overflows.

    ``Lf``, ``Df``: float LDL^T of A; ``xf``: float real minimizer;
    ``fx``: float value of f at ``xf``.
    """
    cdef Ctx c
    cdef int g = len(A), i, j, k
    cdef double ck
    if g > GMAX:
        return None
    c.g = g
    for i in range(g):
        c.b[i] = b[i]
        c.D[i] = Df[i]
        c.x[i] = xf[i]
        c.cur[i] = 0
        for j in range(g):
            c.A[i][j] = A[i][j]
            c.L[i][j] = Lf[i][j]
    c.fx = fx
    # Babai seed
    for k in reversed(range(g)):
        ck = c.x[k]
        for j in range(k + 1, g):
            ck -= c.L[j][k] * (c.cur[j] - c.x[j])
        c.cur[k] = <long long>floor(ck + 0.5)
    c.best = _f(&c)
    c.bound = <double>c.best - c.fx
    c.nties = 0
    c.overflow_ties = 0
    for i in range(g):
        c.cur[i] = 0
    _rec(&c, g - 1, 0.0)
    if c.overflow_ties:
        return None
    out = []
    for i in range(c.nties):
        out.append(tuple(c.ties[i][j] for j in range(g)))
    return c.best, out
