"""Min-plus polynomials in two variables."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import DegenerateInput, PrecisionExhausted
from .exact import INF, Jet, Q, fmt


class TropicalPolynomial2:
    """``min_w (c_w + w1*X + w2*Y)`` over a finite support ``w`` in Z^2."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        if isinstance(terms, TropicalPolynomial2):
            terms = terms.terms
        items = {}
        for w, c in dict(terms).items():
            w = (int(w[0]), int(w[1]))
            items[w] = Q(c)
        if not items:
            raise DegenerateInput("tropical polynomial needs a nonempty support")
        self.terms = dict(sorted(items.items()))

    def __call__(self, X, Y):
        return trop_eval(self, (X, Y))

    def __eq__(self, other):
        return isinstance(other, TropicalPolynomial2) and self.terms == other.terms

    def __repr__(self):
        return f"TropicalPolynomial2({ {w: fmt(c) for w, c in self.terms.items()} })"

    @property
    def support(self):
        return list(self.terms)

    def shift(self, a: int, b: int) -> "TropicalPolynomial2":
        """Tropical product with the monomial ``a*X + b*Y``."""
        return TropicalPolynomial2({(w[0] + a, w[1] + b): c for w, c in self.terms.items()})

    def to_json(self):
        return {"terms": [[w[0], w[1], c.numerator, c.denominator] for w, c in self.terms.items()]}

    @classmethod
    def from_json(cls, d):
        return cls({(a, b): Fraction(p, q) for a, b, p, q in d["terms"]})

    def pretty(self) -> str:
        """``min[...]`` rendering grouped by powers of Y (highest first)."""
        rows: dict[int, list] = {}
        for (i, j), c in self.terms.items():
            rows.setdefault(j, []).append((i, c))
        parts = []
        for j in sorted(rows, reverse=True):
            inner = [_lin(i, "X", c) for i, c in sorted(rows[j], reverse=True)]
            ypart = _mono(j, "Y")
            body = inner[0] if len(inner) == 1 else "min[" + ", ".join(inner) + "]"
            if not ypart:
                parts.extend(inner)
            elif len(inner) == 1:
                parts.append(_lin(j, "Y", 0) + ("" if inner[0] == "0" else " + " + inner[0]))
            else:
                parts.append(f"{ypart} + {body}")
        return "min[" + ", ".join(parts) + "]"


def _mono(k, v):
    if k == 0:
        return ""
    if k == 1:
        return v
    return f"{k}{v}"


def _lin(k, v, c):
    m = _mono(k, v)
    c = Q(c)
    if not m:
        return fmt(c)
    if c == 0:
        return m
    if c < 0:
        return f"{m} - {fmt(-c)}"
    return f"{m} + {fmt(c)}"


def trop_eval(f: TropicalPolynomial2, P) -> Fraction:
    X, Y = Q(P[0]), Q(P[1])
    return min(c + w[0] * X + w[1] * Y for w, c in f.terms.items())


@dataclass(frozen=True)
class SupportSet:
    point: tuple
    achievers: frozenset
    value: Fraction


def support_at(f: TropicalPolynomial2, P) -> SupportSet:
    X, Y = Q(P[0]), Q(P[1])
    vals = {w: c + w[0] * X + w[1] * Y for w, c in f.terms.items()}
    m = min(vals.values())
    return SupportSet((X, Y), frozenset(w for w, v in vals.items() if v == m), m)


def tropicalize(f) -> TropicalPolynomial2:
    """Valuations of a ``{(w1, w2): Jet}`` polynomial; exact zeros are omitted."""
    out = {}
    for w, a in dict(f).items():
        if not isinstance(a, Jet):
            a = Jet.const(a)
        v = a.val()
        if v != INF:
            out[w] = v
    return TropicalPolynomial2(out)


def degrees(M: int, N: int) -> list[int]:
    """``d_j = floor((M + 1 - j) N / M)`` for j = 1..M."""
    return [((M + 1 - j) * N) // M for j in range(1, M + 1)]


@dataclass
class SpectralShape:
    """A point of the space of tropical spectral polynomials for (M, N).

    ``F[(j, i)]`` is the constant attached to ``jY + iX``; ``F0`` the constant
    term.  The ``(M+1)Y`` term carries constant 0 and ``F[(1, d_1)] == 0``.
    """

    M: int
    N: int
    F: dict = field(default_factory=dict)
    F0: Fraction = Fraction(0)

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError("M and N must be positive")
        if gcd(self.M, self.N) != 1:
            raise ValueError(f"gcd(M, N) must be 1, got M={self.M}, N={self.N}")
        self.F = {(int(j), int(i)): Q(c) for (j, i), c in dict(self.F).items()}
        self.F0 = Q(self.F0)
        d = self.d
        for (j, i) in self.F:
            if not (1 <= j <= self.M and 0 <= i <= d[j - 1]):
                raise ValueError(f"coefficient index ({j},{i}) outside the degree bounds {d}")
        top = (1, d[0])
        if self.F.get(top, Fraction(0)) != 0:
            raise ValueError("normalization requires F[1, d_1] == 0")
        self.F[top] = Fraction(0)

    @property
    def d(self):
        return degrees(self.M, self.N)

    def to_tropical(self) -> TropicalPolynomial2:
        terms = {(0, self.M + 1): Fraction(0), (0, 0): self.F0}
        for (j, i), c in self.F.items():
            terms[(i, j)] = c
        return TropicalPolynomial2(terms)

    @classmethod
    def from_tropical(cls, M, N, f: TropicalPolynomial2) -> "SpectralShape":
        d = degrees(M, N)
        allowed = {(0, M + 1), (0, 0)} | {(i, j) for j in range(1, M + 1) for i in range(d[j - 1] + 1)}
        extra = set(f.terms) - allowed
        if extra:
            raise ValueError(f"support {sorted(extra)} outside the spectral shape for (M,N)=({M},{N})")
        if f.terms.get((0, M + 1)) != 0:
            raise ValueError("the (M+1)Y term must carry constant 0")
        if (0, 0) not in f.terms:
            raise ValueError("missing constant term")
        F = {(j, i): c for (i, j), c in f.terms.items() if 1 <= j <= M}
        return cls(M, N, F, f.terms[(0, 0)])

    def to_json(self):
        return {
            "M": self.M,
            "N": self.N,
            "F0": fmt(self.F0),
            "F": {f"{j},{i}": fmt(c) for (j, i), c in sorted(self.F.items())},
        }

    @classmethod
    def from_json(cls, d):
        F = {tuple(int(x) for x in k.split(",")): Fraction(v) for k, v in d["F"].items()}
        return cls(int(d["M"]), int(d["N"]), F, Fraction(d["F0"]))
