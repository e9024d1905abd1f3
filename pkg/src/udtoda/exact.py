"""Exact rationals and truncated Puiseux jets.

A jet stands in for an element of the field of Puiseux series in
``e = exp(-1/eps)``.  It keeps every term below an absolute precision
bound ``prec`` (``None`` when the jet is known exactly) and never more than
``window`` exponent units past its leading exponent.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable

from .errors import JetDivisionByZero, PrecisionExhausted

Rational = Fraction
INF = math.inf

DEFAULT_WINDOW = Fraction(os.environ.get("UDTODA_JET_WINDOW", "8"))


def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def fmt(x) -> str:
    """Render a rational as ``p`` or ``p/q``."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _shift(p, d):
    return None if p is None else p + d


class Jet:
    """Truncated Puiseux series ``sum c_k e^{x_k}`` with exact rational data.

    Three states are possible: an ordinary jet with at least one term, the
    exact zero (no terms, ``prec is None``), and an *indeterminate* jet
    ``O(e^prec)`` produced when every known term cancelled.  Asking an
    indeterminate jet for its valuation raises :class:`PrecisionExhausted`.
    """

    __slots__ = ("terms", "window", "prec")

    def __init__(self, terms: Iterable = (), window=DEFAULT_WINDOW, prec=None):
        window = Q(window)
        if window <= 0:
            raise ValueError("window must be positive")
        prec = None if prec is None else Q(prec)
        acc: dict[Fraction, Fraction] = {}
        for x, c in terms:
            x, c = Q(x), Q(c)
            acc[x] = acc.get(x, 0) + c
        items = sorted((x, c) for x, c in acc.items() if c != 0 and (prec is None or x < prec))
        if items:
            cut = items[0][0] + window
            if items[-1][0] >= cut:
                items = [t for t in items if t[0] < cut]
                prec = _min_prec(prec, cut)
            elif prec is not None and prec > cut:
                prec = cut
        self.terms = tuple(items)
        self.window = window
        self.prec = prec

    # constructors

    @classmethod
    def zero(cls, window=DEFAULT_WINDOW):
        return cls((), window)

    @classmethod
    def const(cls, c, window=DEFAULT_WINDOW):
        return cls([(0, c)], window)

    @classmethod
    def monomial(cls, coef, exp, window=DEFAULT_WINDOW):
        return cls([(exp, coef)], window)

    # predicates

    @property
    def zero_flag(self) -> bool:
        return not self.terms and self.prec is None

    @property
    def indeterminate(self) -> bool:
        return not self.terms and self.prec is not None

    @property
    def exact(self) -> bool:
        return self.prec is None

    def val(self):
        if self.terms:
            return self.terms[0][0]
        if self.prec is None:
            return INF
        raise PrecisionExhausted(f"all terms below e^{fmt(self.prec)} cancelled")

    def lead(self) -> Fraction:
        """Leading coefficient."""
        if not self.terms:
            self.val()
            raise ValueError("zero jet has no leading coefficient")
        return self.terms[0][1]

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.const(Q(other), self.window)

    def __add__(self, other):
        other = self._coerce(other)
        window = min(self.window, other.window)
        prec = _min_prec(self.prec, other.prec)
        return Jet(self.terms + other.terms, window, prec)

    __radd__ = __add__

    def __neg__(self):
        return Jet([(x, -c) for x, c in self.terms], self.window, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        window = min(self.window, other.window)
        if self.zero_flag or other.zero_flag:
            return Jet.zero(window)
        va = self.terms[0][0] if self.terms else self.prec
        vb = other.terms[0][0] if other.terms else other.prec
        prec = _min_prec(_shift(other.prec, va), _shift(self.prec, vb))
        bound = va + vb + window
        if prec is not None:
            bound = min(bound, prec)
        out: dict[Fraction, Fraction] = {}
        dropped = False
        for x, c in self.terms:
            for y, d in other.terms:
                e = x + y
                if e >= bound:
                    dropped = True
                    break
                out[e] = out.get(e, 0) + c * d
        if dropped:
            prec = _min_prec(prec, bound)
        return Jet(out.items(), window, prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.zero_flag:
            raise JetDivisionByZero("division by the zero jet")
        v, c = self.terms[0] if self.terms else (None, None)
        if v is None:
            self.val()
        rel = self.window if self.prec is None else min(self.window, self.prec - v)
        # 1/(c e^v (1+u)) = c^-1 e^-v sum (-u)^k, u has strictly positive exponents
        u = [(x - v, d / c) for x, d in self.terms[1:]]
        series = {Fraction(0): Fraction(1)}
        power = {Fraction(0): Fraction(1)}
        while power and u:
            nxt: dict[Fraction, Fraction] = {}
            for x, a in power.items():
                for y, b in u:
                    e = x + y
                    if e < rel:
                        nxt[e] = nxt.get(e, 0) - a * b
            power = {e: a for e, a in nxt.items() if a != 0}
            for e, a in power.items():
                series[e] = series.get(e, 0) + a
        exact = self.prec is None and not u
        prec = None if exact else rel - v
        return Jet([(e - v, a / c) for e, a in series.items()], self.window, prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Jet.const(1, self.window)
        for _ in range(n):
            out = out * self
        return out

    # comparison

    def agrees(self, other, upto=None) -> bool:
        """True when both jets have identical terms below their common precision."""
        other = self._coerce(other)
        bound = _min_prec(self.prec, other.prec)
        bound = _min_prec(bound, None if upto is None else Q(upto))
        a = [t for t in self.terms if bound is None or t[0] < bound]
        b = [t for t in other.terms if bound is None or t[0] < bound]
        return a == b

    def __eq__(self, other):
        if not isinstance(other, Jet):
            if isinstance(other, (int, Fraction)):
                other = Jet.const(other, self.window)
            else:
                return NotImplemented
        return self.terms == other.terms and self.prec == other.prec

    def __hash__(self):
        return hash((self.terms, self.prec))

    def __repr__(self):
        if self.zero_flag:
            return "Jet(0)"
        parts = [f"{fmt(c)}*e^{fmt(x)}" for x, c in self.terms]
        if self.prec is not None:
            parts.append(f"O(e^{fmt(self.prec)})")
        return "Jet(" + " + ".join(parts) + ")"

    # serialization

    def to_json(self) -> dict:
        d = {
            "terms": [[x.numerator, x.denominator, c.numerator, c.denominator] for x, c in self.terms],
            "window": [self.window.numerator, self.window.denominator],
        }
        if self.prec is not None:
            d["prec"] = [self.prec.numerator, self.prec.denominator]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Jet":
        terms = [(Fraction(a, b), Fraction(c, e)) for a, b, c, e in d["terms"]]
        window = Fraction(*d.get("window", [8, 1]))
        prec = d.get("prec")
        return cls(terms, window, None if prec is None else Fraction(*prec))


def jet_add(a: Jet, b: Jet) -> Jet:
    """Sum of two jets; raises if every known term cancels."""
    out = a + b
    if out.indeterminate:
        raise PrecisionExhausted(f"sum cancels below e^{fmt(out.prec)}")
    return out


def jet_mul(a: Jet, b: Jet) -> Jet:
    return a * b


def jet_div(a: Jet, b: Jet) -> Jet:
    return a / b


def jet_val(a: Jet):
    return a.val()
