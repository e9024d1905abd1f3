"""Tropical Riemann theta function.

``Theta(Z; B) = min_m (1/2 m B m^T + m Z^T)`` and its characteristic
version, evaluated exactly.  Two interchangeable backends compute the
lattice minimum: a compiled kernel (``_theta_core``) and the pure-Python
exact enumerator (``_theta_py``).  The compiled one is picked at import
when it built; set ``UDTODA_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from fractions import Fraction
from math import gcd, sqrt

from . import _theta_py
from .exact import Q
from .linalg import as_matrix, as_vector, dot, is_symmetric, ldl, matvec

try:
    if os.environ.get("UDTODA_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _theta_core
except ImportError:  # pragma: no cover - depends on the build
    _theta_core = None

_backend = "cython" if _theta_core is not None else "python"

_INT_LIMIT = 2 ** 62


def backend() -> str:
    return _backend


def set_backend(name: str) -> str:
    """Select ``"cython"``, ``"python"`` or ``"auto"``; returns the previous one."""
    global _backend
    prev = _backend
    if name == "auto":
        name = "cython" if _theta_core is not None else "python"
    if name == "cython" and _theta_core is None:
        raise RuntimeError("compiled theta kernel is not available")
    if name not in ("cython", "python"):
        raise ValueError(name)
    _backend = name
    return prev


def _lcm(a, b):
    return a // gcd(a, b) * b


class ThetaContext:
    """A positive definite period matrix with its cached factorizations."""

    def __init__(self, B):
        B = as_matrix(B)
        if not is_symmetric(B):
            raise ValueError("B must be symmetric")
        L, D = ldl(B)
        if len(D) < len(B) or any(d <= 0 for d in D):
            raise ValueError(f"B is not positive definite (LDL^T pivot {D[-1]} at {len(D) - 1})")
        self.g = len(B)
        self.B = B
        self.L = L
        self.D = D
        self._cache: dict = {}
        # data for the compiled kernel
        den = 1
        for row in B:
            for x in row:
                den = _lcm(den, x.denominator)
        self._den = den
        self._Aint = [[int(x * den) for x in row] for row in B]
        self._Lf = [[float(x) for x in row] for row in L]
        self._Df = [float(d) for d in D]
        g = self.g
        # float inverse via the LDL factors, columns of the identity
        inv = []
        from .linalg import ldl_solve
        for j in range(g):
            e = [Fraction(int(i == j)) for i in range(g)]
            inv.append(ldl_solve(L, D, e))
        self._inv = [[float(inv[j][i]) for j in range(g)] for i in range(g)]
        self._inv_diag = [float(inv[i][i]) for i in range(g)]
        self._absB = sum(abs(float(x)) for row in B for x in row)
        self._sumD = sum(self._Df)
        self._fast_ok = g <= 24 and max(self._Df) / min(self._Df) < 1e8

    def __repr__(self):
        return f"ThetaContext(g={self.g}, B={[[str(x) for x in r] for r in self.B]})"

    def clear_cache(self):
        self._cache.clear()


def _minimize_fast(ctx: ThetaContext, c):
    s = ctx._den
    for ci in c:
        s = _lcm(s, ci.denominator)
    k = s // ctx._den
    A = [[a * k for a in row] for row in ctx._Aint]
    b = [int(ci * s) for ci in c]
    cf = [float(ci) for ci in c]
    g = ctx.g
    xf = [-sum(ctx._inv[i][j] * cf[j] for j in range(g)) for i in range(g)]
    # overflow guard on every candidate the kernel may visit
    R = 0.25 * (ctx._absB + ctx._sumD) * 1.01 + 1.0
    mmax = max(abs(xf[i]) + sqrt(R * ctx._inv_diag[i]) + 3.0 for i in range(g))
    amax = max(abs(a) for row in A for a in row)
    bmax = max([abs(x) for x in b] + [1])
    if g * g * amax * mmax * mmax + 2 * g * bmax * mmax > _INT_LIMIT / 4:
        return None
    fx = s * sum(x * y for x, y in zip(xf, cf))
    Df = [d * s for d in ctx._Df]
    res = _theta_core.minimize_int(A, b, ctx._Lf, Df, xf, fx)
    if res is None:
        return None
    fbest, ties = res
    return Fraction(fbest, 2 * s), sorted(set(ties))


def minimize(ctx: ThetaContext, c):
    """``(min_m 1/2 mBm^T + m.c, sorted minimizers)`` over Z^g."""
    c = [Q(x) for x in c]
    if len(c) != ctx.g:
        raise ValueError(f"vector of length {len(c)} for g={ctx.g}")
    key = tuple(c)
    hit = ctx._cache.get(key)
    if hit is not None:
        return hit
    res = None
    if _backend == "cython" and ctx._fast_ok:
        res = _minimize_fast(ctx, c)
    if res is None:
        res = _theta_py.minimize(ctx.B, ctx.L, ctx.D, c)
    ctx._cache[key] = res
    return res


def q_form(ctx: ThetaContext, beta, m, Z) -> Fraction:
    beta, Z = as_vector(beta), as_vector(Z)
    m = [int(x) for x in m]
    Bm = matvec(ctx.B, m)
    return dot(m, Bm) / 2 + dot(m, Z) + dot(beta, Bm)


def _shifted(ctx, beta, Z):
    Z = as_vector(Z)
    if beta is None:
        return Z
    beta = as_vector(beta)
    Bb = matvec(ctx.B, beta)
    return [z + x for z, x in zip(Z, Bb)]


def theta(ctx: ThetaContext, Z) -> Fraction:
    return minimize(ctx, as_vector(Z))[0]


def theta_argmin_set(ctx: ThetaContext, beta, Z) -> list:
    return minimize(ctx, _shifted(ctx, beta, Z))[1]


def theta_argmin(ctx: ThetaContext, beta, Z) -> tuple:
    """Lexicographically smallest minimizer of ``q_beta(., Z)``."""
    return theta_argmin_set(ctx, beta, Z)[0]


def theta_char(ctx: ThetaContext, beta, Z) -> Fraction:
    beta, Z = as_vector(beta), as_vector(Z)
    Bb = matvec(ctx.B, beta)
    val, _ = minimize(ctx, [z + x for z, x in zip(Z, Bb)])
    return dot(beta, Bb) / 2 + dot(beta, Z) + val
