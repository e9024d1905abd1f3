"""Tropical plane curves from the dual regular subdivision.

The curve of ``f = min_w (c_w + w.P)`` is read off the lower convex hull
of the lifted support ``{(w, c_w)}``: each lower facet gives a vertex,
each interior subdivision edge a bounded edge, each boundary edge a ray.
Everything is exact over Fractions.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import DegenerateInput, InvalidPath, SingularBasis
from .exact import Q, fmt
from .linalg import ldl
from .tropical_poly import TropicalPolynomial2


def primitive(v):
    a, b = int(v[0]), int(v[1])
    g = gcd(a, b)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return (a // g, b // g)


def lattice_length(v) -> int:
    return gcd(int(v[0]), int(v[1]))


def wedge(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    xi: tuple          # primitive direction from a to b
    length: Fraction   # lattice length: pos[b] - pos[a] == length * xi
    weight: int
    dual: tuple        # the two support points of the dual subdivision edge


@dataclass(frozen=True)
class Ray:
    v: int
    xi: tuple
    weight: int
    dual: tuple


@dataclass(frozen=True)
class Line:
    """A full line; only occurs when the support is collinear."""
    point: tuple
    xi: tuple
    weight: int
    dual: tuple


@dataclass
class TropicalCurve:
    vertices: list                  # [(X, Y)] as Fractions
    edges: list                     # [Edge]
    rays: list                      # [Ray]
    dual_cells: list                # per vertex: frozenset of support points
    lines: list = field(default_factory=list)
    poly: TropicalPolynomial2 | None = None

    def incident(self, v):
        """Outgoing (primitive direction, weight, kind, index) at vertex v."""
        out = []
        for k, e in enumerate(self.edges):
            if e.a == v:
                out.append((e.xi, e.weight, "edge", k))
            if e.b == v:
                out.append(((-e.xi[0], -e.xi[1]), e.weight, "edge", k))
        for k, r in enumerate(self.rays):
            if r.v == v:
                out.append((r.xi, r.weight, "ray", k))
        return out

    def balancing_defects(self):
        bad = []
        for v in range(len(self.vertices)):
            sx = sum(w * xi[0] for xi, w, _, _ in self.incident(v))
            sy = sum(w * xi[1] for xi, w, _, _ in self.incident(v))
            if (sx, sy) != (0, 0):
                bad.append((v, (sx, sy)))
        return bad

    def vertex_by_dual(self, points) -> int:
        points = frozenset(points)
        for v, cell in enumerate(self.dual_cells):
            if cell == points:
                return v
        raise KeyError(f"no vertex dual to {sorted(points)}")

    def vertex_with_ray(self, dual_edge) -> int:
        key = tuple(sorted(dual_edge))
        for r in self.rays:
            if r.dual == key:
                return r.v
        raise KeyError(f"no ray dual to {key}")

    def to_json(self):
        return {
            "vertices": [[fmt(x), fmt(y)] for x, y in self.vertices],
            "edges": [
                {"a": e.a, "b": e.b, "xi": list(e.xi), "length": fmt(e.length), "weight": e.weight,
                 "dual": [list(p) for p in e.dual]}
                for e in self.edges
            ],
            "rays": [{"v": r.v, "xi": list(r.xi), "weight": r.weight, "dual": [list(p) for p in r.dual]}
                     for r in self.rays],
            "lines": [{"point": [fmt(l.point[0]), fmt(l.point[1])], "xi": list(l.xi), "weight": l.weight}
                      for l in self.lines],
            "dual_cells": [sorted(list(p) for p in c) for c in self.dual_cells],
        }


def _hull2d(points):
    """Counterclockwise convex hull vertices (collinear points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and wedge((out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                                          (p[0] - out[-2][0], p[1] - out[-2][1])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def lower_faces(f: TropicalPolynomial2):
    """Lower facets of the lifted support as ``(plane, points)``.

    ``plane = (a, b1, b2)`` with ``c_w = a + b1 w1 + b2 w2`` on the facet and
    ``c_w > a + b.w`` off it.
    """
    pts = list(f.terms.items())
    faces = {}
    for (p, cp), (q, cq), (r, cr) in combinations(pts, 3):
        det = wedge((q[0] - p[0], q[1] - p[1]), (r[0] - p[0], r[1] - p[1]))
        if det == 0:
            continue
        # solve for b from two differences, then a
        dq, dr = cq - cp, cr - cp
        u, v = (q[0] - p[0], q[1] - p[1]), (r[0] - p[0], r[1] - p[1])
        b1 = Fraction(dq * v[1] - dr * u[1], det)
        b2 = Fraction(dr * u[0] - dq * v[0], det)
        a = cp - b1 * p[0] - b2 * p[1]
        on = []
        ok = True
        for w, c in pts:
            h = c - (a + b1 * w[0] + b2 * w[1])
            if h < 0:
                ok = False
                break
            if h == 0:
                on.append(w)
        if ok:
            faces[frozenset(on)] = (a, b1, b2)
    return [(plane, pts_) for pts_, plane in faces.items()]


def extract_curve(f: TropicalPolynomial2) -> TropicalCurve:
    f = TropicalPolynomial2(f)
    support = list(f.terms)
    if len(support) < 2:
        raise DegenerateInput("a single monomial has an empty tropical curve")
    p0 = support[0]
    collinear = all(wedge((q[0] - p0[0], q[1] - p0[1]), (r[0] - p0[0], r[1] - p0[1])) == 0
                    for q in support for r in support)
    if collinear:
        return _collinear_curve(f)

    faces = lower_faces(f)
    # deterministic vertex order: by position
    faces.sort(key=lambda fp: (-fp[0][1], -fp[0][2]))
    vertices = [(-b1, -b2) for (_, b1, b2), _ in faces]
    cells = [pts for _, pts in faces]

    owners: dict[tuple, list] = {}
    for k, pts in enumerate(cells):
        hull = _hull2d(pts)
        for i in range(len(hull)):
            key = tuple(sorted((hull[i], hull[(i + 1) % len(hull)])))
            owners.setdefault(key, []).append(k)

    edges, rays = [], []
    for key, ks in sorted(owners.items()):
        (p, q) = key
        w = lattice_length((q[0] - p[0], q[1] - p[1]))
        if len(ks) == 2:
            a, b = sorted(ks)
            d = (vertices[b][0] - vertices[a][0], vertices[b][1] - vertices[a][1])
            xi, length = _direction(d)
            edges.append(Edge(a, b, xi, length, w, key))
        elif len(ks) == 1:
            k = ks[0]
            xi = primitive((q[1] - p[1], p[0] - q[0]))
            other = next(r for r in cells[k] if wedge((q[0] - p[0], q[1] - p[1]), (r[0] - p[0], r[1] - p[1])) != 0)
            if xi[0] * (other[0] - p[0]) + xi[1] * (other[1] - p[1]) < 0:
                xi = (-xi[0], -xi[1])
            rays.append(Ray(k, xi, w, key))
        else:
            raise AssertionError(f"subdivision edge {key} owned by {len(ks)} cells")
    curve = TropicalCurve(vertices, edges, rays, cells, poly=f)
    bad = curve.balancing_defects()
    assert not bad, f"balancing fails at {bad}"
    return curve


def _direction(d):
    """Primitive rational direction and lattice length of a rational vector."""
    dx, dy = Q(d[0]), Q(d[1])
    den = dx.denominator * dy.denominator // gcd(dx.denominator, dy.denominator)
    ix, iy = int(dx * den), int(dy * den)
    g = gcd(ix, iy)
    return (ix // g, iy // g), Fraction(g, den)


def _collinear_curve(f):
    pts = sorted(f.terms)
    p0, p1 = pts[0], pts[-1]
    u = primitive((p1[0] - p0[0], p1[1] - p0[1]))
    # position along u and heights; keep the lower chain
    chain = sorted(((p[0] - p0[0]) * u[0] + (p[1] - p0[1]) * u[1], p) for p in pts)
    seq = [(Fraction(s, u[0] ** 2 + u[1] ** 2), f.terms[p], p) for s, p in chain]
    hull = []
    for s, c, p in seq:
        while len(hull) >= 2:
            (s1, c1, _), (s2, c2, _) = hull[-2], hull[-1]
            if (c2 - c1) * (s - s1) >= (c - c1) * (s2 - s1):
                hull.pop()
            else:
                break
        hull.append((s, c, p))
    lines = []
    xi = (-u[1], u[0])
    for (s1, c1, p), (s2, c2, q) in zip(hull, hull[1:]):
        d = (q[0] - p[0], q[1] - p[1])
        t = Fraction(c1 - c2) / (d[0] ** 2 + d[1] ** 2)
        lines.append(Line((t * d[0], t * d[1]), xi, lattice_length(d), (p, q)))
    return TropicalCurve([], [], [], [], lines=lines, poly=f)


@dataclass(frozen=True)
class SmoothnessReport:
    smooth: bool
    vertex: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.smooth


def is_smooth(c: TropicalCurve) -> SmoothnessReport:
    for k, l in enumerate(c.lines):
        if l.weight != 1:
            return SmoothnessReport(False, None, f"line {k} has weight {l.weight}")
    for v in range(len(c.vertices)):
        inc = c.incident(v)
        if len(inc) != 3:
            return SmoothnessReport(False, v, f"vertex {v} at {_pt(c.vertices[v])} has valence {len(inc)}")
        if len(c.dual_cells[v]) != 3:
            return SmoothnessReport(False, v, f"vertex {v} at {_pt(c.vertices[v])} is dual to a cell "
                                              f"with {len(c.dual_cells[v])} lattice points")
        for xi, w, kind, k in inc:
            if w != 1:
                return SmoothnessReport(False, v, f"vertex {v}: {kind} {k} has weight {w}")
        xs = [xi for xi, _, _, _ in inc]
        if (sum(x[0] for x in xs), sum(x[1] for x in xs)) != (0, 0):
            return SmoothnessReport(False, v, f"vertex {v}: primitive vectors do not sum to zero")
        for i, j in combinations(range(3), 2):
            if abs(wedge(xs[i], xs[j])) != 1:
                return SmoothnessReport(False, v, f"vertex {v}: |xi_{i} ^ xi_{j}| = {abs(wedge(xs[i], xs[j]))}")
    return SmoothnessReport(True)


def _pt(p):
    return f"({fmt(p[0])}, {fmt(p[1])})"


def genus(c: TropicalCurve) -> int:
    n = len(c.vertices)
    if n == 0:
        return 0
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for e in c.edges:
        ra, rb = find(e.a), find(e.b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return len(c.edges) - n + comps


# cycles and paths

@dataclass(frozen=True)
class CycleBasis:
    cycles: tuple   # each a dict {edge id: +-1 or integer}

    @property
    def g(self):
        return len(self.cycles)

    def to_json(self):
        return [{str(k): v for k, v in sorted(c.items())} for c in self.cycles]


def _adjacency(c: TropicalCurve):
    adj = {v: [] for v in range(len(c.vertices))}
    for k, e in enumerate(c.edges):
        adj[e.a].append((k, 1, e.b))
        adj[e.b].append((k, -1, e.a))
    return adj


def validate_cycle(c: TropicalCurve, cycle: dict) -> None:
    flow = [0] * len(c.vertices)
    for k, m in cycle.items():
        e = c.edges[k]
        flow[e.a] -= m
        flow[e.b] += m
    if any(flow):
        raise InvalidPath(f"circulation not conserved at vertices {[v for v, x in enumerate(flow) if x]}")


def signed_area(c: TropicalCurve, cycle: dict) -> Fraction:
    """Shoelace area of a circulation; positive means counterclockwise."""
    s = Fraction(0)
    for k, m in cycle.items():
        e = c.edges[k]
        (x1, y1), (x2, y2) = c.vertices[e.a], c.vertices[e.b]
        s += m * (x1 * y2 - x2 * y1)
    return s / 2


def _orient_ccw(c, cyc):
    if signed_area(c, cyc) < 0:
        cyc = {k: -m for k, m in cyc.items()}
    return cyc


def cycle_basis(c: TropicalCurve) -> CycleBasis:
    """Fundamental cycles of a BFS spanning forest, oriented counterclockwise."""
    adj = _adjacency(c)
    parent: dict[int, tuple] = {}
    seen = set()
    tree = set()
    for root in range(len(c.vertices)):
        if root in seen:
            continue
        seen.add(root)
        parent[root] = None
        dq = deque([root])
        while dq:
            v = dq.popleft()
            for k, s, u in sorted(adj[v]):
                if u not in seen:
                    seen.add(u)
                    parent[u] = (v, k, s)
                    tree.add(k)
                    dq.append(u)

    def to_root(v):
        path = {}
        while parent[v] is not None:
            p, k, s = parent[v]
            path[k] = -s   # walking from v up to p
            v = p
        return path

    cycles = []
    for k, e in enumerate(c.edges):
        if k in tree:
            continue
        cyc = {k: 1}
        # edge a -> b, then b -> root -> a
        for kk, s in to_root(e.b).items():
            cyc[kk] = cyc.get(kk, 0) + s
        for kk, s in to_root(e.a).items():
            cyc[kk] = cyc.get(kk, 0) - s
        cyc = {kk: s for kk, s in cyc.items() if s}
        cycles.append(_orient_ccw(c, cyc))
    return CycleBasis(tuple(cycles))


def face_cycles(c: TropicalCurve) -> CycleBasis:
    """Counterclockwise boundaries of the bounded regions, ordered by their
    lattice point (by row of Y-exponent, then X-exponent)."""
    pts = set()
    for cell in c.dual_cells:
        pts |= cell
    boundary = set()
    for r in c.rays:
        boundary |= set(r.dual)
    cycles = []
    for w in sorted(pts - boundary, key=lambda p: (p[1], p[0])):
        cyc = {k: 1 for k, e in enumerate(c.edges) if w in e.dual}
        if not cyc:
            continue
        # orient edges head to tail around the region
        cyc = _chain(c, list(cyc))
        if cyc is None:
            continue
        cycles.append(_orient_ccw(c, cyc))
    return CycleBasis(tuple(cycles))


def face_points(c: TropicalCurve):
    """Lattice points labelling :func:`face_cycles`, same order."""
    pts = set()
    for cell in c.dual_cells:
        pts |= cell
    boundary = set()
    for r in c.rays:
        boundary |= set(r.dual)
    out = []
    for w in sorted(pts - boundary, key=lambda p: (p[1], p[0])):
        if any(w in e.dual for e in c.edges):
            out.append(w)
    return out


def _chain(c, ks):
    ks = list(ks)
    first = c.edges[ks[0]]
    cyc = {ks[0]: 1}
    cur = first.b
    rest = set(ks[1:])
    while rest:
        nxt = None
        for k in sorted(rest):
            e = c.edges[k]
            if e.a == cur:
                nxt, s, cur2 = k, 1, e.b
                break
            if e.b == cur:
                nxt, s, cur2 = k, -1, e.a
                break
        if nxt is None:
            return None
        cyc[nxt] = s
        rest.discard(nxt)
        cur = cur2
    if cur != first.a:
        return None
    return cyc


@dataclass
class PeriodData:
    basis: CycleBasis
    B: list
    pivots: list
    marked_points: dict = field(default_factory=dict)
    aj_vectors: dict = field(default_factory=dict)

    @property
    def g(self):
        return len(self.B)

    def to_json(self):
        return {
            "g": self.g,
            "B": [[fmt(x) for x in row] for row in self.B],
            "ldl_pivots": [fmt(d) for d in self.pivots],
            "marked_points": {k: v for k, v in self.marked_points.items()},
            "aj_vectors": {k: [fmt(x) for x in v] for k, v in self.aj_vectors.items()},
        }


def period_matrix(c: TropicalCurve, basis: CycleBasis) -> PeriodData:
    for cyc in basis.cycles:
        validate_cycle(c, cyc)
    g = basis.g
    B = [[sum(c.edges[k].length * m * basis.cycles[j].get(k, 0) for k, m in basis.cycles[i].items())
          for j in range(g)] for i in range(g)]
    _, D = ldl(B)
    if len(D) < g or any(d <= 0 for d in D):
        raise SingularBasis(f"LDL^T pivot {fmt(D[-1])} at index {len(D) - 1}: cycles are not independent")
    return PeriodData(basis, B, D)


@dataclass(frozen=True)
class PathChain:
    start: int
    end: int
    steps: tuple = ()    # ((edge id, +1 | -1), ...)

    def __add__(self, other):
        if self.end != other.start:
            raise InvalidPath("paths do not compose")
        return PathChain(self.start, other.end, self.steps + other.steps)

    def reversed(self):
        return PathChain(self.end, self.start, tuple((k, -s) for k, s in reversed(self.steps)))

    def to_json(self):
        return {"start": self.start, "end": self.end, "steps": [list(s) for s in self.steps]}


def validate_path(c: TropicalCurve, path: PathChain) -> None:
    cur = path.start
    for k, s in path.steps:
        e = c.edges[k]
        if s == 1 and e.a == cur:
            cur = e.b
        elif s == -1 and e.b == cur:
            cur = e.a
        else:
            raise InvalidPath(f"step ({k},{s}) does not leave vertex {cur}")
    if cur != path.end:
        raise InvalidPath(f"path ends at {cur}, expected {path.end}")


def walk(c: TropicalCurve, vertices) -> PathChain:
    """PathChain through a sequence of adjacent vertices."""
    steps = []
    for u, v in zip(vertices, vertices[1:]):
        for k, e in enumerate(c.edges):
            if (e.a, e.b) == (u, v):
                steps.append((k, 1))
                break
            if (e.a, e.b) == (v, u):
                steps.append((k, -1))
                break
        else:
            raise InvalidPath(f"vertices {u} and {v} are not adjacent")
    return PathChain(vertices[0], vertices[-1], tuple(steps))


def shortest_path(c: TropicalCurve, u: int, v: int) -> PathChain:
    """Fewest-edges path; ties broken by lowest edge ids (BFS order)."""
    adj = _adjacency(c)
    prev = {u: None}
    dq = deque([u])
    while dq:
        x = dq.popleft()
        if x == v:
            break
        for k, s, y in sorted(adj[x]):
            if y not in prev:
                prev[y] = (x, k, s)
                dq.append(y)
    if v not in prev:
        raise InvalidPath(f"vertex {v} unreachable from {u}")
    steps = []
    x = v
    while prev[x] is not None:
        p, k, s = prev[x]
        steps.append((k, s))
        x = p
    return PathChain(u, v, tuple(reversed(steps)))


def loop_path(c: TropicalCurve, cycle: dict, start: int | None = None) -> PathChain:
    """Traverse a simple cycle once, starting at ``start``."""
    ks = list(cycle)
    verts = {c.edges[k].a for k in ks} | {c.edges[k].b for k in ks}
    if start is None:
        start = min(verts)
    steps = []
    cur = start
    rest = dict(cycle)
    while rest:
        for k, s in sorted(rest.items()):
            e = c.edges[k]
            if (s > 0 and e.a == cur) or (s < 0 and e.b == cur):
                steps.append((k, 1 if s > 0 else -1))
                cur = e.b if s > 0 else e.a
                del rest[k]
                break
        else:
            raise InvalidPath("cycle is not a simple loop through the start vertex")
    return PathChain(start, cur, tuple(steps))


def abel_jacobi(c: TropicalCurve, path: PathChain, basis: CycleBasis) -> list:
    validate_path(c, path)
    out = []
    for cyc in basis.cycles:
        out.append(sum((c.edges[k].length * cyc.get(k, 0) * s for k, s in path.steps), Fraction(0)))
    return out
