"""Theta-function solutions of the ultradiscrete Toda lattice.

Pipeline: spectral shape -> tropical curve -> period matrix and marked
points -> tau functions ``T_n^{t+k/M} = Theta(Z0 - L n + lam t + sum_{i<=k} lam_{sigma(i)})``
-> bilinear check -> (Q, W) trajectory -> cross-check against ``step_ud``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import floor, gcd

from .curve import (TropicalCurve, abel_jacobi, extract_curve, face_cycles, genus, is_smooth,
                    lower_faces, period_matrix, shortest_path)
from .errors import GenericityFailure, IdentityViolation, NotSmooth, PhaseSpaceViolation, UDTodaError
from .exact import fmt
from .fay import FayConfiguration, fay_signs, odd_characteristic
from .linalg import as_vector, dot, matvec, solve, vadd, vscale, vsub
from .theta import ThetaContext, theta, theta_char
from .toda import TodaStateU, spectral_map_ud, step_ud
from .tropical_poly import SpectralShape, degrees


# ------------------------------------------------------------ marked points

def marked_points(c: TropicalCurve, M: int, N: int) -> dict:
    """Vertex ids of P, Q, R, A_1..A_M on a spectral curve of shape (M, N).

    Each point is the vertex carrying the ray dual to one boundary segment
    of the Newton polygon: R and A_k sit on the horizontal rays (left side
    segments, from the bottom up R, A_M, ..., A_1), P on the ray dual to
    (0,0)-(N,1) and Q on the ray dual to (N,1)-(0,M+1).
    """
    pts = {
        "R": c.vertex_with_ray([(0, 0), (0, 1)]),
        "P": c.vertex_with_ray([(0, 0), (N, 1)]),
        "Q": c.vertex_with_ray([(N, 1), (0, M + 1)]),
    }
    for k in range(1, M + 1):
        pts[f"A{k}"] = c.vertex_with_ray([(0, M + 1 - k), (0, M + 2 - k)])
    return pts


def lattice_coords(B, v):
    """Solve ``v = l B``; returns l (rational)."""
    g = len(B)
    Bt = [[B[j][i] for j in range(g)] for i in range(g)]
    return solve(Bt, v)


@dataclass
class CurveData:
    M: int
    N: int
    shape: SpectralShape
    curve: TropicalCurve
    period: object          # PeriodData
    marks: dict
    L: list
    lam: list
    lams: list              # lam_1..lam_M
    winding: list           # lattice correction added to lam_1

    @property
    def B(self):
        return self.period.B

    @property
    def g(self):
        return self.period.g


def curve_data(shape: SpectralShape, require_smooth=True) -> CurveData:
    """Curve, period matrix and the vectors L, lam, lam_i for a smooth shape.

    With ``require_smooth=False`` the same recipe runs on a degenerate curve
    (useful for plotting); the results then carry no guarantee.
    """
    M, N = shape.M, shape.N
    c = extract_curve(shape.to_tropical())
    rep = is_smooth(c)
    if not rep and require_smooth:
        raise NotSmooth(rep.reason, rep)
    basis = face_cycles(c)
    if basis.g != genus(c):
        raise UDTodaError("bounded faces do not give a full cycle basis")
    pd = period_matrix(c, basis)
    try:
        marks = marked_points(c, M, N)
    except KeyError:
        if require_smooth:
            raise
        # rays merged on a degenerate curve: no marked points to speak of
        return CurveData(M, N, shape, c, pd, {}, None, None, None, None)

    def aj(u, v):
        return abel_jacobi(c, shortest_path(c, marks[u], marks[v]), basis)

    L = aj("P", "Q")
    lam = aj("R", "P")
    lams = [aj("Q", f"A{M + 1 - i}") for i in range(1, M + 1)]
    # lam must equal the sum of the lam_i; fix the winding of lam_1 when the
    # fewest-edge paths disagree by a period
    diff = vsub(lam, vadd(*lams))
    winding = [Fraction(0)] * pd.g
    if any(diff):
        l = lattice_coords(pd.B, diff)
        if any(x.denominator != 1 for x in l):
            raise GenericityFailure(
                f"lam - sum lam_i = {[fmt(x) for x in diff]} is not a period (l = {[fmt(x) for x in l]})")
        winding = diff
        lams[0] = vadd(lams[0], diff)
    pd.marked_points = {k: [fmt(x) for x in c.vertices[v]] for k, v in marks.items()}
    pd.aj_vectors = {"L": L, "lambda": lam, **{f"lambda{i}": v for i, v in enumerate(lams, 1)}}
    return CurveData(M, N, shape, c, pd, marks, L, lam, lams, winding)


# ------------------------------------------------------------ T(3,2) fixture

def t32_shape(F0, F30, F21, F20, F11, F10) -> SpectralShape:
    return SpectralShape(3, 2, {(3, 0): F30, (2, 1): F21, (2, 0): F20, (1, 2): 0,
                                (1, 1): F11, (1, 0): F10}, F0)


def t32_gauge(F0, F30, F21, F20, F11, F10):
    """Translate the curve so that F21 = 0 (shift Y by -F21/2 and X by F21).

    B and every Abel-Jacobi vector are unchanged; the closed forms of the
    fixture are stated in this gauge.
    """
    F0, F30, F21, F20, F11, F10 = map(Fraction, (F0, F30, F21, F20, F11, F10))
    b = 2 * F21
    return (F0 - 4 * b, F30 - b, F21 - b / 2, F20 - 2 * b, F11 - 3 * b / 2, F10 - 3 * b)


def t32_closed_form(F0, F30, F21, F20, F11, F10):
    """Closed-form B, L, lam, lam_1..3, theta_1..3 (any gauge)."""
    F0, F30, _, F20, F11, F10 = t32_gauge(F0, F30, F21, F20, F11, F10)
    return {
        "B": [[2 * F0 - 7 * F11 + F20, F11 - F20], [F11 - F20, F11 + F20]],
        "L": [F0 - 3 * F11, F11],
        "lambda": [F10 - 2 * F11, Fraction(0)],
        "lambda1": [F10 - 2 * F11, -F20],
        "lambda2": [Fraction(0), F20 - F30],
        "lambda3": [Fraction(0), F30],
        "theta": [F0 - 3 * F11, F0 - 2 * F11, F0 - 2 * F11],
        "delta_plus_theta": F0 - 2 * F11,
    }


@dataclass
class Fixture:
    data: CurveData
    thetas: list            # theta_1..theta_M
    level: Fraction         # delta^[t] + theta^[t]
    closed_form: dict


def t32_fixture(F0, F30, F21, F20, F11, F10) -> Fixture:
    shape = t32_shape(F0, F30, F21, F20, F11, F10)
    data = curve_data(shape)
    cf = t32_closed_form(F0, F30, F21, F20, F11, F10)
    return Fixture(data, cf["theta"], cf["delta_plus_theta"], cf)


def random_t32_parameters(rng: random.Random, den=8, gauge_free=True):
    """Random rationals in the chamber where the curve has the fixture's combinatorics.

    Also imposes ``2 F10 < F0`` (in the F21 = 0 gauge), which the
    quasi-periodicity condition of the bilinear form needs for theta_1.
    """
    def r(lo, hi):
        lo, hi = Fraction(lo), Fraction(hi)
        a = floor(lo * den) + 1
        b = -floor(-hi * den) - 1
        if a > b:
            return None
        return Fraction(rng.randint(a, b), den)

    while True:
        F11 = Fraction(rng.randint(1, 4 * den), den)
        F20 = r(F11, 2 * F11)
        if F20 is None:
            continue
        F30 = r(F20 - F11, F20 / 2)
        if F30 is None:
            continue
        F10 = r(F11 + F20, F11 + F20 + 6)
        if F10 is None:
            continue
        F0 = r(max(3 * F11, 2 * F10 - F20, 2 * F10), 2 * F10 + 8)
        if F0 is None:
            continue
        F21 = Fraction(0)
        if gauge_free:
            F21 = Fraction(rng.randint(-4 * den, 4 * den), den)
            # move the curve to a random translate (inverse of t32_gauge)
            b = -2 * F21
            F0, F30, F20, F11, F10 = F0 - 4 * b, F30 - b, F20 - 2 * b, F11 - 3 * b / 2, F10 - 3 * b
        return F0, F30, F21, F20, F11, F10


# ------------------------------------------------------------ tau functions

@dataclass
class SolutionParams:
    ctx: ThetaContext
    M: int
    N: int
    Z0: list
    L: list
    lam: list
    lams: list               # lam_1..lam_M
    sigma: tuple             # permutation of 1..M
    thetas: list             # theta^[k/M], k = 0..M-1
    deltas: list             # delta^[k/M]
    l: list = field(default_factory=list)   # N L = l B

    def __post_init__(self):
        self.Z0 = as_vector(self.Z0)
        self.sigma = tuple(int(s) for s in self.sigma)
        if sorted(self.sigma) != list(range(1, self.M + 1)):
            raise ValueError(f"sigma {self.sigma} is not a permutation of 1..{self.M}")
        # N L = l B; a non-integral l only blocks the quasi-periodicity data
        l = lattice_coords(self.ctx.B, vscale(self.N, self.L))
        self.l = [int(x) if x.denominator == 1 else x for x in l]
        self._offsets = [[Fraction(0)] * self.ctx.g]
        for k in range(1, self.M):
            self._offsets.append(vadd(self._offsets[-1], self.lams[self.sigma[k - 1] - 1]))

    @property
    def in_lattice(self) -> bool:
        return all(isinstance(x, int) for x in self.l)

    def _need_lattice(self):
        if not self.in_lattice:
            raise UDTodaError(f"N L is not in the period lattice (l = {[fmt(x) for x in self.l]})")

    # quasi-periodicity T_{n+N}^{t+k/M} = T_n^{t+k/M} + a n + b t + c_k
    @property
    def a(self):
        self._need_lattice()
        return -dot(self.l, self.L)

    @property
    def b(self):
        self._need_lattice()
        return dot(self.l, self.lam)

    def c(self, k=0):
        self._need_lattice()
        lB = matvec(self.ctx.B, self.l)
        return dot(self.l, vadd(self.Z0, self._offsets[k])) - dot(self.l, lB) / 2

    def condition_a(self) -> bool:
        return len({d + th for d, th in zip(self.deltas, self.thetas)}) == 1

    def condition_b(self) -> bool:
        return all(2 * self.b - self.a < self.N * th for th in self.thetas)

    def argument(self, n, tau):
        tau = Fraction(tau)
        t = floor(tau)
        k = int((tau - t) * self.M)
        Z = vadd(self.Z0, vscale(-n, self.L), vscale(t, self.lam), self._offsets[k])
        return Z

    def to_json(self):
        return {
            "M": self.M, "N": self.N, "B": [[fmt(x) for x in r] for r in self.ctx.B],
            "Z0": [fmt(x) for x in self.Z0], "L": [fmt(x) for x in self.L],
            "lambda": [fmt(x) for x in self.lam],
            "lambdas": [[fmt(x) for x in v] for v in self.lams],
            "sigma": list(self.sigma), "theta": [fmt(x) for x in self.thetas],
            "delta": [fmt(x) for x in self.deltas], "l": [fmt(x) for x in self.l],
        }


def tau(params: SolutionParams, n, t, k=0) -> Fraction:
    """``T_n^{t+k/M}``."""
    if not 0 <= k < params.M:
        raise ValueError("level k must satisfy 0 <= k < M")
    return theta(params.ctx, params.argument(n, Fraction(t) + Fraction(k, params.M)))


def _T(params, n, tau_):
    return theta(params.ctx, params.argument(n, tau_))


def _level(params, tau_):
    return int((Fraction(tau_) - floor(Fraction(tau_))) * params.M)


@dataclass
class BilinearVerdict:
    holds: bool
    checked: int
    witness: dict | None = None

    def to_json(self):
        return {"holds": self.holds, "checked": self.checked, "witness": self.witness}

    def raise_if_failed(self):
        if not self.holds:
            w = self.witness
            raise IdentityViolation(f"{w['reason']} fails at n={w.get('n')}, t={w.get('t')}", w)
        return self


def bilinear_sides(params, n, tau_):
    M = params.M
    d = Fraction(1, M)
    th = params.thetas[_level(params, tau_)]
    lhs = _T(params, n, tau_) + _T(params, n, tau_ + 1 + d)
    r1 = _T(params, n, tau_ + 1) + _T(params, n, tau_ + d)
    r2 = _T(params, n - 1, tau_ + 1 + d) + _T(params, n + 1, tau_) + th
    return lhs, r1, r2


def verify_bilinear(params: SolutionParams, window=(2, 50), n0=0, t0=0) -> BilinearVerdict:
    """Check the tau lattice on ``n0..n0+window[0]-1`` and the time slices
    ``t0 + j/M`` for ``j < window[1]``.

    At every point the bilinear identity is checked together with the
    quasi-periodicity ``T_{n+N} - T_n = a n + b t + c_k`` that the periodic
    (Q, W) rely on (this needs ``N L`` in the period lattice).  The parameter
    conditions (a), (b) and ``lam = sum lam_i`` are checked last.
    """
    if not params.in_lattice:
        return BilinearVerdict(False, 0, {
            "reason": "N L is not in the period lattice", "l": [fmt(x) for x in params.l],
            "params": params.to_json()})
    nn, tt = window
    N, M = params.N, params.M
    a, b = params.a, params.b
    cs = [params.c(k) for k in range(M)]
    count = 0
    for j in range(tt):
        tau_ = Fraction(t0) + Fraction(j, M)
        t, k = floor(tau_), _level(params, tau_)
        for n in range(n0, n0 + nn):
            lhs, r1, r2 = bilinear_sides(params, n, tau_)
            count += 1
            if lhs != min(r1, r2):
                return BilinearVerdict(False, count, {
                    "reason": "bilinear identity", "n": n, "t": fmt(tau_), "lhs": fmt(lhs),
                    "rhs_first": fmt(r1), "rhs_second": fmt(r2),
                    "theta": fmt(params.thetas[k]), "params": params.to_json()})
            jump = _T(params, n + N, tau_) - _T(params, n, tau_)
            if jump != a * n + b * t + cs[k]:
                return BilinearVerdict(False, count, {
                    "reason": "quasi-periodicity", "n": n, "t": fmt(tau_), "jump": fmt(jump),
                    "expected": fmt(a * n + b * t + cs[k]), "params": params.to_json()})
    # the parameter invariants the (Q, W) transform needs
    if vadd(*params.lams) != params.lam:
        return BilinearVerdict(False, count, {"reason": "lambda is not the sum of the lambda_i",
                                              "params": params.to_json()})
    if not params.condition_a():
        return BilinearVerdict(False, count, {
            "reason": "condition (a): delta + theta depends on t",
            "sums": [fmt(d + th) for d, th in zip(params.deltas, params.thetas)],
            "params": params.to_json()})
    if not params.condition_b():
        return BilinearVerdict(False, count, {
            "reason": "condition (b): 2b - a < N theta fails", "2b-a": fmt(2 * b - a),
            "params": params.to_json()})
    return BilinearVerdict(True, count)


def qw_state(params: SolutionParams, tau_) -> TodaStateU:
    """The (Q, W) state at time ``tau_`` given by the tau functions."""
    M, N = params.M, params.N
    d = Fraction(1, M)
    tau_ = Fraction(tau_)

    def Qv(n, s):
        k = _level(params, s)
        return (_T(params, n - 1, s) + _T(params, n, s + d) - _T(params, n - 1, s + d)
                - _T(params, n, s) + params.deltas[k])

    k0 = _level(params, tau_)
    Wrow = [(_T(params, n - 1, tau_ + 1) + _T(params, n + 1, tau_) - _T(params, n, tau_)
             - _T(params, n, tau_ + 1) + params.deltas[k0] + params.thetas[k0])
            for n in range(1, N + 1)]
    Qrows = [[Qv(n, tau_ + j * d) for j in range(M)] for n in range(1, N + 1)]
    return TodaStateU(M, N, Qrows, Wrow, tau_)


def qw_from_tau(params: SolutionParams, steps: int, t0=0) -> list:
    """States at ``t0 + j/M`` for ``j = 0..steps``; each must lie in phase space."""
    out = []
    for j in range(steps + 1):
        s = qw_state(params, Fraction(t0) + Fraction(j, params.M))
        bad = s.phase_space_violation()
        if bad:
            raise PhaseSpaceViolation(f"at t = {fmt(s.t)}: {bad}")
        out.append(s)
    return out


@dataclass
class TrajectoryReport:
    ok: bool
    steps: int
    message: str = ""
    phi: object = None

    def to_json(self):
        return {"ok": self.ok, "steps": self.steps, "message": self.message,
                "phi": self.phi.to_json() if self.phi is not None else None}


def check_trajectory(traj: list, phi_check=True, seed=0) -> TrajectoryReport:
    """``step_ud`` reproduces each slice; level sums, W sum and Phi are conserved.

    ``phi_check`` is True (Phi at every slice), ``"ends"`` (first and last
    slice only, much cheaper) or False.
    """
    rng = random.Random(seed)
    sums0, w0 = sorted(traj[0].level_sums()), traj[0].w_sum()
    phi0 = spectral_map_ud(traj[0], rng) if phi_check else None
    for j, (s, s2) in enumerate(zip(traj, traj[1:])):
        nxt = step_ud(s)
        if nxt != s2:
            return TrajectoryReport(False, j, f"step_ud disagrees at t = {fmt(s.t)}", phi0)
        if sorted(s2.level_sums()) != sums0 or s2.w_sum() != w0:
            return TrajectoryReport(False, j, f"sums not conserved at t = {fmt(s2.t)}", phi0)
        last = j == len(traj) - 2
        if phi_check and (phi_check is True or last) and spectral_map_ud(s2, rng) != phi0:
            return TrajectoryReport(False, j, f"Phi changed at t = {fmt(s2.t)}", phi0)
    return TrajectoryReport(True, len(traj) - 1, "", phi0)


# ------------------------------------------------------------ theta inference

def fay_thetas(data: CurveData, ctx: ThetaContext | None = None):
    """theta_i from the trisecant identity with points (R, Q, P, A):
    difference of the constant blocks of F_2 and F_3 (returns also whether
    the block of F_1 equals that of F_3, which the reduction needs)."""
    ctx = ctx or ThetaContext(data.B)
    g = data.g
    beta = [Fraction(1, 2)] * g
    char = odd_characteristic(g, beta)
    out = []
    for li in data.lams:
        pts = {1: [Fraction(0)] * g, 2: vadd(data.lam, data.L), 3: list(data.lam),
               4: vadd(data.lam, data.L, li)}
        cfg = FayConfiguration(ctx, char, pts)
        c1, c2, c3 = cfg.constants()
        out.append((c2 - c3, c1 == c3, cfg))
    return out


def infer_thetas(data: CurveData, ctx, sigma, Z0=None, rng=None, tries=64):
    """theta^[k/M] read off the bilinear identity where its first branch is
    not active (so theta enters with equality); falls back to ``None``."""
    rng = rng or random.Random(0)
    M, N = data.M, data.N
    found = [None] * M
    base = SolutionParams(ctx, M, N, Z0 or [Fraction(0)] * data.g, data.L, data.lam, data.lams,
                          sigma, [Fraction(0)] * M, [Fraction(0)] * M)
    for _ in range(tries):
        if all(f is not None for f in found):
            break
        Z = random_z0(ctx.B, rng)
        base.Z0 = Z
        for k in range(M):
            if found[k] is not None:
                continue
            lhs, r1, r2 = bilinear_sides(base, 0, Fraction(k, M))
            r2 -= base.thetas[k]
            if lhs < r1:
                found[k] = lhs - r2
    return found


def random_z0(B, rng, den=16):
    g = len(B)
    u = []
    for _ in range(g):
        q = rng.randint(1, den)
        u.append(Fraction(rng.randint(0, q - 1), q))
    return [sum(u[i] * B[i][j] for i in range(g)) for j in range(g)]


def solution_params(fx: Fixture, sigma, Z0, ctx=None) -> SolutionParams:
    """Fixture parameters for a permutation: theta^[k/M] = theta_{sigma(k+1)}."""
    d = fx.data
    ctx = ctx or ThetaContext(d.B)
    thetas = [fx.thetas[s - 1] for s in sigma]
    deltas = [fx.level - th for th in thetas]
    return SolutionParams(ctx, d.M, d.N, Z0, d.L, d.lam, d.lams, sigma, thetas, deltas)


# ------------------------------------------------------------ random shapes and scans

def random_phase_state(M, N, rng, den=4, span=10):
    while True:
        Q = [[Fraction(rng.randint(0, span * den), den) for _ in range(M)] for _ in range(N)]
        W = [Fraction(rng.randint(span * den // 2, 2 * span * den), den) for _ in range(N)]
        s = TodaStateU(M, N, Q, W)
        if s.in_phase_space():
            return s


def random_smooth_shape(M, N, rng, max_tries=200, den=4, span=10):
    """Phi of a random phase-space point, redrawn until the curve is smooth.

    Returns ``(shape, state, attempts)``.
    """
    for attempt in range(1, max_tries + 1):
        s = random_phase_state(M, N, rng, den, span)
        shape = spectral_map_ud(s, rng)
        c = extract_curve(shape.to_tropical())
        if is_smooth(c):
            return shape, s, attempt
    raise GenericityFailure(f"no smooth curve for (M,N)=({M},{N}) in {max_tries} draws")


def random_convex_shape(M, N, rng, den=64):
    """A shape whose heights come from a random strictly convex quadratic plus a
    small perturbation, normalized so the (M+1)Y and x^{d_1} y terms carry 0.

    Generic such heights induce a unimodular triangulation, i.e. a smooth curve.
    """
    d = degrees(M, N)
    pts = [(0, M + 1), (0, 0)] + [(i, j) for j in range(1, M + 1) for i in range(d[j - 1] + 1)]
    a = Fraction(rng.randint(den, 4 * den), den)
    cc = Fraction(rng.randint(den, 4 * den), den)
    bmax = int(min(a, cc) * den)
    b = Fraction(rng.randint(-bmax + 1, bmax - 1), den)
    h = {}
    for (i, j) in pts:
        h[(i, j)] = a * i * i + b * i * j + cc * j * j + Fraction(rng.randint(-8, 8), 64 * den)
    b2 = -h[(0, M + 1)] / (M + 1)
    b1 = -(h[(d[0], 1)] + b2) / d[0]
    h = {(i, j): v + b1 * i + b2 * j for (i, j), v in h.items()}
    F = {(j, i): v for (i, j), v in h.items() if 1 <= j <= M}
    F[(1, d[0])] = Fraction(0)
    return SpectralShape(M, N, F, h[(0, 0)])


def subdivision(shape: SpectralShape) -> frozenset:
    """Dual subdivision of the Newton polygon as a set of cells."""
    return frozenset(frozenset(pts) for _, pts in lower_faces(shape.to_tropical()))


_T32_CELLS = None


def is_t32_type(shape: SpectralShape) -> bool:
    """Whether a (3,2) shape has the same combinatorial type as the shipped fixture,
    i.e. the type for which the marked-point paths are pinned down."""
    global _T32_CELLS
    if (shape.M, shape.N) != (3, 2):
        return False
    if _T32_CELLS is None:
        _T32_CELLS = subdivision(t32_fixture(7, Fraction(5, 8), 0, Fraction(3, 2), 1, 3).data.shape)
    return subdivision(shape) == _T32_CELLS


def regime(shape: SpectralShape) -> str:
    """'proven' for M = 1 and for (3,2) curves of the fixture type, else 'unproven'."""
    if shape.M == 1 or is_t32_type(shape):
        return "proven"
    return "unproven"


@dataclass
class TrialResult:
    index: int
    seed: int
    status: str             # pass | fail | skip
    reason: str = ""
    details: dict = field(default_factory=dict)
    regime: str = "unproven"

    def to_json(self):
        return {"trial": self.index, "seed": self.seed, "status": self.status,
                "regime": self.regime, "reason": self.reason, **self.details}


def run_trial(M, N, index, seed, window=(None, 12)):
    """One scan sample: random smooth curve from a phase-space point, then every
    permutation sigma with one random Z0 each."""
    res = _run_trial(M, N, index, seed, window)
    sh = res.details.get("shape")
    if sh is not None:
        res.regime = regime(SpectralShape.from_json(sh))
    return res


def _run_trial(M, N, index, seed, window):
    rng = random.Random(seed)
    try:
        shape, state, _ = random_smooth_shape(M, N, rng)
    except GenericityFailure as exc:
        return TrialResult(index, seed, "skip", str(exc))
    try:
        data = curve_data(shape)
    except (GenericityFailure, NotSmooth, KeyError) as exc:
        return TrialResult(index, seed, "skip", f"curve data: {exc}")
    ctx = ThetaContext(data.B)
    details = {"shape": shape.to_json(), "g": data.g, "B": [[fmt(x) for x in r] for r in data.B]}
    fay = fay_thetas(data, ctx)
    fay_theta = [th for th, _, _ in fay]
    details["fay_theta"] = [fmt(x) for x in fay_theta]
    details["fay_blocks_agree"] = [ok for _, ok, _ in fay]
    nwin = window[0] or N
    starts = []
    for sigma in permutations(range(1, M + 1)):
        inferred = infer_thetas(data, ctx, sigma, rng=rng)
        thetas = [x if x is not None else fay_theta[s - 1] for x, s in zip(inferred, sigma)]
        details.setdefault("theta", {})[",".join(map(str, sigma))] = [fmt(x) for x in thetas]
        Z0 = random_z0(data.B, rng)
        params = SolutionParams(ctx, M, N, Z0, data.L, data.lam, data.lams, sigma, thetas,
                                [-th for th in thetas])
        if not params.condition_b():
            return TrialResult(index, seed, "skip",
                               f"quasi-periodicity condition 2b - a < N theta fails (sigma={sigma})", details)
        v = verify_bilinear(params, (nwin, window[1]))
        if not v.holds:
            return TrialResult(index, seed, "fail", f"bilinear identity (sigma={sigma})",
                               {**details, "witness": v.witness})
        try:
            level = match_level(params, shape)
        except PhaseSpaceViolation as exc:
            return TrialResult(index, seed, "fail", f"sigma={sigma}: {exc}", details)
        params.deltas = [level - th for th in thetas]
        try:
            traj = qw_from_tau(params, window[1])
        except PhaseSpaceViolation as exc:
            return TrialResult(index, seed, "fail", f"sigma={sigma}: {exc}", details)
        rep = check_trajectory(traj, phi_check="ends", seed=seed)
        if not rep.ok:
            return TrialResult(index, seed, "fail", f"sigma={sigma}: {rep.message}", details)
        if rep.phi != shape:
            return TrialResult(index, seed, "fail",
                               f"sigma={sigma}: Phi of the trajectory {rep.phi.to_json()} differs from the curve",
                               details)
        starts.append(traj[0])
    details["solution_types"] = len({(s.Q, s.W) for s in starts})
    return TrialResult(index, seed, "pass", "", details)


def match_level(params: SolutionParams, shape: SpectralShape) -> Fraction:
    """The constant ``delta^[t] + theta^[t]`` putting the trajectory on the
    isolevel set of ``shape``.

    Raising every Q and W by ``d`` moves the coefficient of ``x^i y^j`` by
    ``d ((M+1)N - N j - M i)``, a translation of the curve; so the constant
    term of Phi fixes ``d``.  Returns the level for the current thetas.
    """
    M, N = params.M, params.N
    saved = params.deltas
    params.deltas = [-th for th in params.thetas]
    try:
        phi = spectral_map_ud(qw_state(params, 0))
    finally:
        params.deltas = saved
    return (shape.F0 - phi.F0) / ((M + 1) * N)


def conjecture_scan(M, N, trials, seed, window=(None, 12)):
    if gcd(M, N) != 1:
        raise ValueError("gcd(M, N) must be 1")
    master = random.Random(seed)
    seeds = [master.randrange(2 ** 31) for _ in range(trials)]
    results = [run_trial(M, N, i, s, window) for i, s in enumerate(seeds)]
    counts = {k: sum(r.status == k for r in results) for k in ("pass", "fail", "skip")}
    by_regime = {reg: {k: sum(r.status == k and r.regime == reg for r in results)
                       for k in ("pass", "fail", "skip")} for reg in ("proven", "unproven")}
    return {"M": M, "N": N, "seed": seed, "trials": trials, "counts": counts, "by_regime": by_regime,
            "results": [r.to_json() for r in results]}
