"""Generalized periodic Toda lattice: discrete (jets) and ultradiscrete (rationals).

State layout, with ``n = 0..N-1`` standing for the sites ``1..N``:

* ``Q[n][k]`` is ``Q_{n+1}^{t+k/M}`` for ``k = 0..M-1`` and ``W[n]`` is ``W_{n+1}^t``.
* one step consumes level 0 and ``W``, appends the new level ``Q^{t+1}`` at
  the end and replaces ``W`` by ``W^{t+1/M}``; the clock moves by ``1/M``.

The discrete state stores Puiseux jets ``I``, ``V`` in the same layout.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import gcd

from .errors import GenericityFailure, PhaseSpaceViolation, PrecisionExhausted, UDTodaError
from .exact import Jet, Q as rat, fmt
from .tropical_poly import SpectralShape, TropicalPolynomial2, degrees, tropicalize


# ---------------------------------------------------------------- ultradiscrete

@dataclass(frozen=True)
class TodaStateU:
    M: int
    N: int
    Q: tuple
    W: tuple
    t: Fraction = Fraction(0)

    def __post_init__(self):
        Qs = tuple(tuple(rat(x) for x in row) for row in self.Q)
        Ws = tuple(rat(x) for x in self.W)
        if len(Qs) != self.N or any(len(r) != self.M for r in Qs) or len(Ws) != self.N:
            raise ValueError(f"state shape does not match M={self.M}, N={self.N}")
        object.__setattr__(self, "Q", Qs)
        object.__setattr__(self, "W", Ws)
        object.__setattr__(self, "t", rat(self.t))

    def level_sums(self):
        return [sum(self.Q[n][k] for n in range(self.N)) for k in range(self.M)]

    def w_sum(self):
        return sum(self.W)

    def phase_space_violation(self):
        """Describe the first violated phase-space inequality, or None."""
        sums, sw = self.level_sums(), self.w_sum()
        for k, s in enumerate(sums):
            if not s < sw:
                return f"sum_n Q^(t+{k}/M) = {fmt(s)} is not < sum_n W = {fmt(sw)}"
        if len(set(sums)) < len(sums):
            return f"level sums {[fmt(s) for s in sums]} are not distinct"
        return None

    def in_phase_space(self) -> bool:
        return self.phase_space_violation() is None

    def to_json(self):
        return {
            "M": self.M, "N": self.N, "t": fmt(self.t),
            "Q": [[fmt(x) for x in row] for row in self.Q],
            "W": [fmt(x) for x in self.W],
        }

    @classmethod
    def from_json(cls, d, M=None, N=None):
        Qr = d["Q"]
        N = d.get("N", N if N is not None else len(Qr))
        M = d.get("M", M if M is not None else len(Qr[0]))
        return cls(int(M), int(N), [[rat(x) for x in row] for row in Qr],
                   [rat(x) for x in d["W"]], rat(d.get("t", 0)))


def x_ud(Q0, W):
    """``X_n = min_{k<N} sum_{j=1}^k (W_{n-j} - Q_{n-j})``."""
    N = len(W)
    out = []
    for n in range(N):
        acc, best = Fraction(0), Fraction(0)
        for j in range(1, N):
            acc += W[(n - j) % N] - Q0[(n - j) % N]
            best = min(best, acc)
        out.append(best)
    return out


def step_ud(s: TodaStateU, check=True) -> TodaStateU:
    if check:
        bad = s.phase_space_violation()
        if bad:
            raise PhaseSpaceViolation(bad)
    N = s.N
    Q0 = [row[0] for row in s.Q]
    X = x_ud(Q0, s.W)
    Qn = [min(s.W[n], Q0[n] - X[n]) for n in range(N)]
    Wn = [Q0[(n + 1) % N] + s.W[n] - Qn[n] for n in range(N)]
    Qrows = [s.Q[n][1:] + (Qn[n],) for n in range(N)]
    return TodaStateU(s.M, N, Qrows, Wn, s.t + Fraction(1, s.M))


def evolve_ud(s: TodaStateU, steps: int):
    out = [s]
    for _ in range(steps):
        s = step_ud(s)
        out.append(s)
    return out


# ---------------------------------------------------------------- discrete

@dataclass(frozen=True)
class TodaStateP:
    M: int
    N: int
    I: tuple
    V: tuple
    t: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "I", tuple(tuple(r) for r in self.I))
        object.__setattr__(self, "V", tuple(self.V))
        object.__setattr__(self, "t", rat(self.t))

    def val(self) -> TodaStateU:
        return TodaStateU(self.M, self.N,
                          [[a.val() for a in row] for row in self.I],
                          [v.val() for v in self.V], self.t)

    def products(self):
        """``(prod_n I^(k) for each k, prod_n V)``."""
        Ip = []
        for k in range(self.M):
            p = Jet.const(1, self.I[0][k].window)
            for n in range(self.N):
                p = p * self.I[n][k]
            Ip.append(p)
        Vp = Jet.const(1, self.V[0].window)
        for v in self.V:
            Vp = Vp * v
        return Ip, Vp


def lift(s: TodaStateU, rng=None, window=None, coef_range=(1, 10 ** 6)) -> TodaStateP:
    """Generic jet state over ``s``: ``c e^{value}`` with random integer ``c``."""
    rng = rng or random.Random()
    if window is None:
        window = Jet.const(1).window
    lo, hi = coef_range

    def mono(v):
        return Jet.monomial(rng.randint(lo, hi), v, window)

    I = [[mono(x) for x in row] for row in s.Q]
    V = [mono(w) for w in s.W]
    return TodaStateP(s.M, s.N, I, V, s.t)


def _resolvent(I0, V):
    """``x_n = sum_{k<N} prod_{j=1}^k V_{n-j}/I_{n-j}``."""
    N = len(V)
    out = []
    for n in range(N):
        term = Jet.const(1, V[0].window)
        acc = term
        for j in range(1, N):
            term = term * V[(n - j) % N] / I0[(n - j) % N]
            acc = acc + term
        out.append(acc)
    return out


def step_p(s: TodaStateP, check=True) -> TodaStateP:
    N = s.N
    I0 = [row[0] for row in s.I]
    V = list(s.V)
    Ip, Vp = s.products()
    if check:
        try:
            if (Ip[0] - Vp).val() == float("inf"):
                raise PhaseSpaceViolation("prod I^(t) equals prod V^t")
        except PrecisionExhausted as exc:
            raise PhaseSpaceViolation(f"cannot separate prod I^(t) from prod V^t: {exc}") from None
    ratio = Vp / Ip[0]
    one_minus = 1 - ratio
    x = _resolvent(I0, V)
    In = [V[n] + I0[n] * one_minus / x[n] for n in range(N)]
    Vn = [I0[(n + 1) % N] * V[n] / In[n] for n in range(N)]
    Irows = [s.I[n][1:] + (In[n],) for n in range(N)]
    return TodaStateP(s.M, N, Irows, Vn, s.t + Fraction(1, s.M))


def step_residuals(before: TodaStateP, after: TodaStateP):
    """Residual jets of the two defining relations for one step (should vanish)."""
    N = before.N
    I0 = [row[0] for row in before.I]
    In = [row[-1] for row in after.I]
    out = []
    for n in range(N):
        out.append(In[n] + after.V[(n - 1) % N] - I0[n] - before.V[n])
        out.append(after.V[n] * In[n] - I0[(n + 1) % N] * before.V[n])
    return out


def relations_hold(before: TodaStateP, after: TodaStateP) -> bool:
    """True when both relations hold to every certified exponent."""
    for r in step_residuals(before, after):
        if r.terms:
            return False
    return True


def jacobian_test(s: TodaStateP) -> bool:
    """Nonvanishing of ``prod_k (I^(k) - V) prod_{j<k} (I^(k) - I^(j))``."""
    Ip, Vp = s.products()
    acc = Jet.const(1, Vp.window)
    for k in range(s.M):
        acc = acc * (Ip[k] - Vp)
        for j in range(k):
            acc = acc * (Ip[k] - Ip[j])
    return bool(acc.terms)


# ---------------------------------------------------------------- Lax form
# polynomials in (x, y) are dicts {(i, j): Jet}; y may carry negative powers


def _padd(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return out


def _pmul(a, b):
    out = {}
    for (i1, j1), u in a.items():
        for (i2, j2), v in b.items():
            k = (i1 + i2, j1 + j2)
            w = u * v
            out[k] = out[k] + w if k in out else w
    return out


def _matmul(A, B):
    n = len(A)
    C = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            acc = {}
            for k in range(n):
                if A[i][k] and B[k][j]:
                    acc = _padd(acc, _pmul(A[i][k], B[k][j]))
            C[i][j] = acc
    return C


def _perm_sign(p):
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


@dataclass
class LaxFamily:
    R: list            # R^{t+k/M} for k = 0..M-1
    Mmat: list
    L: list = field(default_factory=list)


def lax(s: TodaStateP) -> LaxFamily:
    N, w = s.N, s.V[0].window
    one = Jet.const(1, w)
    Rs = []
    for k in range(s.M):
        R = [[{} for _ in range(N)] for _ in range(N)]
        for i in range(N):
            R[i][i] = {(0, 0): s.I[(i + 1) % N][k]}
            if i < N - 1:
                R[i][i + 1] = {(0, 0): one}
        R[N - 1][0] = _padd(R[N - 1][0], {(0, 1): one})
        Rs.append(R)
    Mm = [[{} for _ in range(N)] for _ in range(N)]
    for i in range(N):
        Mm[i][i] = {(0, 0): one}
    Mm[0][N - 1] = _padd(Mm[0][N - 1], {(0, -1): s.V[0]})
    for i in range(1, N):
        Mm[i][i - 1] = _padd(Mm[i][i - 1], {(0, 0): s.V[i]})
    L = Mm
    for R in reversed(Rs):
        L = _matmul(L, R)
    return LaxFamily(Rs, Mm, L)


def _shape_support(M, N):
    d = degrees(M, N)
    allowed = {(0, M + 1), (0, 0)}
    for j in range(1, M + 1):
        allowed |= {(i, j) for i in range(d[j - 1] + 1)}
    return allowed


def spectral_poly(s: TodaStateP) -> dict:
    """``(-1)^{N+1} y Det(L(y) - x)`` as ``{(i, j): Jet}`` (x^i y^j).

    Coefficients outside the spectral shape vanish identically; when jet
    truncation leaves one of them indeterminate it is dropped, but a
    surviving term there is an error.
    """
    if gcd(s.M, s.N) != 1:
        raise ValueError(f"gcd(M, N) must be 1, got M={s.M}, N={s.N}")
    N = s.N
    w = s.V[0].window
    A = [[dict(e) for e in row] for row in lax(s).L]
    for i in range(N):
        A[i][i] = _padd(A[i][i], {(1, 0): Jet.const(-1, w)})
    det = {}
    for p in permutations(range(N)):
        term = {(0, 0): Jet.const(_perm_sign(p), w)}
        for i in range(N):
            if not A[i][p[i]]:
                break
            term = _pmul(term, A[i][p[i]])
        else:
            det = _padd(det, term)
    sgn = -1 if N % 2 == 0 else 1
    allowed = _shape_support(s.M, N)
    out = {}
    for (i, j), c in det.items():
        key = (i, j + 1)
        if c.zero_flag:
            continue
        if key not in allowed:
            if c.terms:
                raise UDTodaError(f"spectral polynomial has a term x^{i} y^{j + 1} outside its shape")
            continue
        out[key] = c * sgn
    return out


def _lift_window(s: TodaStateU):
    """A window wide enough that the determinant of a monomial lift is exact."""
    vals = [abs(x) for row in s.Q for x in row] + [abs(x) for x in s.W]
    return Fraction(2 * (s.M + 1) * s.N) * (max(vals) + 1) + 16


def spectral_map_ud(s: TodaStateU, rng=None, retries=8, check=True) -> SpectralShape:
    """The map Phi: valuations of the spectral polynomial of a generic lift."""
    if check:
        bad = s.phase_space_violation()
        if bad:
            raise PhaseSpaceViolation(bad)
    rng = rng or random.Random(0)
    window = _lift_window(s)
    last = None
    for _ in range(retries):
        try:
            poly = spectral_poly(lift(s, rng, window))
            f = tropicalize(poly)
            return SpectralShape.from_tropical(s.M, s.N, f)
        except PrecisionExhausted as exc:
            last = exc
    raise GenericityFailure(f"no generic lift found after {retries} draws: {last}")


# ---- min-plus shortcut

def _tadd(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = min(out[k], v) if k in out else v
    return out


def _tmul(a, b):
    out = {}
    for (i1, j1), u in a.items():
        for (i2, j2), v in b.items():
            k = (i1 + i2, j1 + j2)
            out[k] = min(out[k], u + v) if k in out else u + v
    return out


def spectral_map_perm(s: TodaStateU) -> SpectralShape:
    """Phi through the min-plus permanent of the tropical Lax matrix.

    Ignores cancellations, so it agrees with :func:`spectral_map_ud` only on
    generic states; the jet pipeline is the reference.
    """
    N, M = s.N, s.M
    Rs = []
    for k in range(M):
        R = [[{} for _ in range(N)] for _ in range(N)]
        for i in range(N):
            R[i][i] = {(0, 0): s.Q[(i + 1) % N][k]}
            if i < N - 1:
                R[i][i + 1] = {(0, 0): Fraction(0)}
        R[N - 1][0] = _tadd(R[N - 1][0], {(0, 1): Fraction(0)})
        Rs.append(R)
    L = [[{} for _ in range(N)] for _ in range(N)]
    for i in range(N):
        L[i][i] = {(0, 0): Fraction(0)}
    L[0][N - 1] = _tadd(L[0][N - 1], {(0, -1): s.W[0]})
    for i in range(1, N):
        L[i][i - 1] = _tadd(L[i][i - 1], {(0, 0): s.W[i]})
    for R in reversed(Rs):
        C = [[{} for _ in range(N)] for _ in range(N)]
        for i in range(N):
            for j in range(N):
                acc = {}
                for k in range(N):
                    if L[i][k] and R[k][j]:
                        acc = _tadd(acc, _tmul(L[i][k], R[k][j]))
                C[i][j] = acc
        L = C
    for i in range(N):
        L[i][i] = _tadd(L[i][i], {(1, 0): Fraction(0)})
    perm = {}
    for p in permutations(range(N)):
        term = {(0, 0): Fraction(0)}
        for i in range(N):
            if not L[i][p[i]]:
                break
            term = _tmul(term, L[i][p[i]])
        else:
            perm = _tadd(perm, term)
    allowed = _shape_support(M, N)
    terms = {(i, j + 1): v for (i, j), v in perm.items() if (i, j + 1) in allowed}
    return SpectralShape.from_tropical(M, N, TropicalPolynomial2(terms))
