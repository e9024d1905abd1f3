"""Tropical trisecant identity: characteristics, signs and the three sums F_1, F_2, F_3."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import AmbiguousArgmin, IdentityViolation, InvalidBeta, SignPatternInvalid
from .exact import fmt
from .linalg import as_vector, dot, vadd, vsub
from .theta import ThetaContext, theta, theta_argmin_set, theta_char


@dataclass(frozen=True)
class ThetaCharacteristic:
    alpha: tuple
    beta: tuple

    def __post_init__(self):
        for x in self.alpha + self.beta:
            if (2 * Fraction(x)).denominator != 1:
                raise ValueError(f"characteristic entry {x} is not a half-integer")


def odd_characteristic(g: int, beta) -> ThetaCharacteristic:
    """alpha_j = -1/2 [j = i-1] + 1/2 [j = i], i the first index with beta_i not in Z."""
    beta = tuple(as_vector(beta))
    if len(beta) != g:
        raise ValueError("beta has the wrong length")
    idx = next((j for j, b in enumerate(beta) if b.denominator != 1), None)
    if idx is None:
        raise InvalidBeta(f"beta = {[fmt(b) for b in beta]} is congruent to 0 mod Z")
    alpha = [Fraction(0)] * g
    alpha[idx] = Fraction(1, 2)
    if idx > 0:
        alpha[idx - 1] = Fraction(-1, 2)
    return ThetaCharacteristic(tuple(alpha), beta)


@dataclass
class FayConfiguration:
    """Four points on the universal cover, given by lifted Abel-Jacobi images.

    Only differences matter: ``integral(a, b) = points[b] - points[a]``.
    """
    ctx: ThetaContext
    char: ThetaCharacteristic
    points: dict                    # {1..4: vector}
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.points = {int(k): as_vector(v) for k, v in self.points.items()}
        if sorted(self.points) != [1, 2, 3, 4]:
            raise ValueError("points must be labelled 1..4")

    @classmethod
    def from_integrals(cls, ctx, char, integrals):
        """Build from pairwise integrals ``{(a, b): vector}``; checks they are
        antisymmetric and additive."""
        integrals = {(int(a), int(b)): as_vector(v) for (a, b), v in integrals.items()}
        pts = {1: [Fraction(0)] * ctx.g}
        changed = True
        while changed:
            changed = False
            for (a, b), v in integrals.items():
                if a in pts and b not in pts:
                    pts[b], changed = vadd(pts[a], v), True
                elif b in pts and a not in pts:
                    pts[a], changed = vsub(pts[b], v), True
        if sorted(pts) != [1, 2, 3, 4]:
            raise ValueError("integrals do not connect all four points")
        for (a, b), v in integrals.items():
            if vsub(pts[b], pts[a]) != v:
                raise ValueError(f"integral ({a},{b}) is inconsistent with the others")
        return cls(ctx, char, pts)

    def integral(self, a, b):
        return vsub(self.points[b], self.points[a])

    def char_theta(self, a, b):
        key = ("c", a, b)
        if key not in self._memo:
            self._memo[key] = theta_char(self.ctx, self.char.beta, self.integral(a, b))
        return self._memo[key]

    def constants(self):
        """The Theta[beta] blocks of F_1, F_2, F_3."""
        return (
            self.char_theta(3, 2) + self.char_theta(1, 4),
            self.char_theta(3, 1) + self.char_theta(4, 2),
            self.char_theta(4, 3) + self.char_theta(1, 2),
        )

    def to_json(self):
        return {
            "B": [[fmt(x) for x in row] for row in self.ctx.B],
            "alpha": [fmt(x) for x in self.char.alpha],
            "beta": [fmt(x) for x in self.char.beta],
            "points": {str(k): [fmt(x) for x in v] for k, v in self.points.items()},
        }


_SIGN_PAIRS = {1: ((3, 2), (1, 4)), 2: ((3, 1), (4, 2)), 3: ((3, 4), (1, 2))}


@dataclass
class SignReport:
    signs: tuple
    k: tuple
    argmins: dict          # {(a, b): argmin vector}

    @property
    def distinguished(self):
        """Index i whose sign differs from the other two, or None."""
        for i in range(3):
            if self.signs[i] != self.signs[(i + 1) % 3] == self.signs[(i + 2) % 3]:
                return i + 1
        return None


def fay_signs(cfg: FayConfiguration) -> SignReport:
    args = {}
    for pairs in _SIGN_PAIRS.values():
        for a, b in pairs:
            Z = cfg.integral(a, b)
            tied = theta_argmin_set(cfg.ctx, cfg.char.beta, Z)
            if len(tied) > 1:
                raise AmbiguousArgmin(
                    f"q_beta(., int_P{a}^P{b}) has {len(tied)} minimizers {tied}", Z, tied)
            args[(a, b)] = tied[0]
    ks, signs = [], []
    for i in (1, 2, 3):
        (a, b), (c, d) = _SIGN_PAIRS[i]
        s = [x + y for x, y in zip(args[(a, b)], args[(c, d)])]
        k = 2 * dot(cfg.char.alpha, s) + (1 if i == 3 else 0)
        assert k.denominator == 1
        k = int(k)
        ks.append(k)
        signs.append(-1 if k % 2 else 1)
    return SignReport(tuple(signs), tuple(ks), args)


def fay_values(cfg: FayConfiguration, Z):
    Z = as_vector(Z)
    P = cfg.points
    c1, c2, c3 = cfg.constants()
    ctx = cfg.ctx
    F1 = theta(ctx, vadd(Z, cfg.integral(1, 3))) + theta(ctx, vadd(Z, cfg.integral(2, 4))) + c1
    F2 = theta(ctx, vadd(Z, cfg.integral(2, 3))) + theta(ctx, vadd(Z, cfg.integral(1, 4))) + c2
    shift = vsub(vadd(P[3], P[4]), vadd(P[1], P[2]))
    F3 = theta(ctx, vadd(Z, shift)) + theta(ctx, Z) + c3
    return F1, F2, F3


@dataclass
class FayVerdict:
    holds: bool
    index: int
    Z: list
    values: tuple

    def to_json(self):
        return {"holds": self.holds, "i": self.index, "Z": [fmt(x) for x in self.Z],
                "F": [fmt(x) for x in self.values]}


def fay_check(cfg: FayConfiguration, Z, signs: SignReport | None = None, raise_on_fail=True) -> FayVerdict:
    """Check ``F_i(Z) = min(F_{i+1}(Z), F_{i+2}(Z))`` for the distinguished i."""
    signs = signs or fay_signs(cfg)
    i = signs.distinguished
    if i is None:
        raise SignPatternInvalid(f"signs {signs.signs} have no distinguished index")
    vals = fay_values(cfg, Z)
    lhs = vals[i - 1]
    rhs = min(vals[i % 3], vals[(i + 1) % 3])
    verdict = FayVerdict(lhs == rhs, i, as_vector(Z), vals)
    if not verdict.holds and raise_on_fail:
        witness = {"config": cfg.to_json(), "signs": list(signs.signs), "k": list(signs.k),
                   "argmins": {f"{a},{b}": list(m) for (a, b), m in signs.argmins.items()},
                   **verdict.to_json()}
        raise IdentityViolation(
            f"F_{i}(Z) = {fmt(lhs)} but min of the other two is {fmt(rhs)} at Z = {[fmt(x) for x in Z]}",
            witness)
    return verdict


def fundamental_grid(B, density: int):
    """Points ``sum_i (k_i / density) B_i`` with ``0 <= k_i < density``."""
    g = len(B)
    for ks in product(range(density), repeat=g):
        yield [sum(Fraction(ks[i], density) * B[i][j] for i in range(g)) for j in range(g)]
