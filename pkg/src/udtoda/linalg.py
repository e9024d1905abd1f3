"""Small exact linear algebra over Fractions."""
from __future__ import annotations

from fractions import Fraction

from .exact import Q


def as_matrix(B) -> list[list[Fraction]]:
    B = [[Q(x) for x in row] for row in B]
    n = len(B)
    if any(len(row) != n for row in B):
        raise ValueError("matrix must be square")
    return B


def as_vector(v) -> list[Fraction]:
    return [Q(x) for x in v]


def is_symmetric(B) -> bool:
    n = len(B)
    return all(B[i][j] == B[j][i] for i in range(n) for j in range(i))


def ldl(B):
    """Exact ``B = L diag(D) L^T`` with L unit lower triangular.

    Returns ``(L, D)``; stops at the first non-positive pivot and returns
    the partial factorization with that pivot in ``D`` so callers can
    report it.
    """
    n = len(B)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D: list[Fraction] = []
    for j in range(n):
        d = B[j][j] - sum(L[j][k] ** 2 * D[k] for k in range(j))
        D.append(d)
        if d <= 0:
            return L, D
        for i in range(j + 1, n):
            L[i][j] = (B[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / d
    return L, D


def is_positive_definite(B) -> bool:
    if not is_symmetric(B):
        return False
    _, D = ldl(B)
    return len(D) == len(B) and all(d > 0 for d in D)


def ldl_solve(L, D, b):
    """Solve ``L diag(D) L^T x = b``."""
    n = len(b)
    y = list(b)
    for i in range(n):
        y[i] = b[i] - sum(L[i][k] * y[k] for k in range(i))
    z = [y[i] / D[i] for i in range(n)]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        x[i] = z[i] - sum(L[k][i] * x[k] for k in range(i + 1, n))
    return x


def matvec(B, v):
    return [sum(b * x for b, x in zip(row, v)) for row in B]


def vecmat(v, B):
    n = len(B)
    return [sum(v[i] * B[i][j] for i in range(n)) for j in range(n)]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def quad(B, m):
    """``m B m^T``."""
    return dot(m, matvec(B, m))


def vadd(*vs):
    return [sum(xs) for xs in zip(*vs)]


def vsub(u, v):
    return [a - b for a, b in zip(u, v)]


def vscale(c, v):
    return [c * x for x in v]


def solve(A, b):
    """Gaussian elimination; raises ZeroDivisionError for singular A."""
    n = len(A)
    M = [list(map(Q, row)) + [Q(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]
