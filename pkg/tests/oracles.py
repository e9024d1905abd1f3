"""Independent reference implementations used by the tests.

Nothing here imports the enumeration code: theta values come from a plain
box search and the quadratic form is written out by hand.
"""
from fractions import Fraction as F
from itertools import product


def qform(B, beta, m, Z):
    g = len(B)
    quad = sum(m[i] * B[i][j] * m[j] for i in range(g) for j in range(g)) / F(2)
    shift = [Z[j] + sum(beta[i] * B[i][j] for i in range(g)) for j in range(g)]
    return quad + sum(m[j] * shift[j] for j in range(g))


def brute_theta(B, Z, box=50, beta=None):
    """(min, sorted argmin list) of q_beta over [-box, box]^g."""
    g = len(B)
    beta = beta or [F(0)] * g
    best, arg = None, []
    for m in product(range(-box, box + 1), repeat=g):
        v = qform(B, beta, m, Z)
        if best is None or v < best:
            best, arg = v, [m]
        elif v == best:
            arg.append(m)
    return best, sorted(arg)


def brute_theta_char(B, beta, Z, box=50):
    g = len(B)
    const = sum(beta[i] * B[i][j] * beta[j] for i in range(g) for j in range(g)) / F(2) \
        + sum(b * z for b, z in zip(beta, Z))
    return const + brute_theta(B, Z, box, beta)[0]


def random_spd(rng, g, diag=(2, 12), off=1, den=1):
    """Diagonally dominant symmetric matrix with entries in (1/den)Z."""
    while True:
        B = [[F(0)] * g for _ in range(g)]
        for i in range(g):
            for j in range(i + 1, g):
                B[i][j] = B[j][i] = F(rng.randint(-off * den, off * den), den)
        for i in range(g):
            row = sum(abs(B[i][j]) for j in range(g) if j != i)
            B[i][i] = F(rng.randint(diag[0] * den, diag[1] * den), den) + row
        return B


def random_rat(rng, lo, hi, den):
    return F(rng.randint(lo * den, hi * den), den)


def brute_theta_int(B, Z, box=50):
    """Same as :func:`brute_theta` with beta = 0, done in integers.

    Scales by the common denominator D so that 2 D q(m) = m B' m + 2 m Z'.
    """
    from math import lcm
    g = len(B)
    D = 1
    for x in [*(v for row in B for v in row), *Z]:
        D = lcm(D, F(x).denominator)
    Bi = [[int(F(B[i][j]) * D) for j in range(g)] for i in range(g)]
    Zi = [int(F(z) * D) for z in Z]
    rng = range(-box, box + 1)
    best, arg = None, []
    if g == 1:
        b, z = Bi[0][0], Zi[0]
        for m in rng:
            v = b * m * m + 2 * m * z
            if best is None or v < best:
                best, arg = v, [(m,)]
            elif v == best:
                arg.append((m,))
    else:
        (a, b), (_, c) = Bi
        z1, z2 = Zi
        for m1 in rng:
            p1 = a * m1 * m1 + 2 * m1 * z1
            for m2 in rng:
                v = p1 + 2 * b * m1 * m2 + c * m2 * m2 + 2 * m2 * z2
                if best is None or v < best:
                    best, arg = v, [(m1, m2)]
                elif v == best:
                    arg.append((m1, m2))
    return F(best, 2 * D), sorted(arg)
