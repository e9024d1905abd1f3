"""Time the compiled theta kernel against the pure-Python enumerator.

    python3 benchmarks/bench_theta.py [--repeat 5] [--points 400]

Both backends are run on the same random matrices and arguments, results are
compared exactly, and the per-evaluation time is printed for each genus.
"""
import argparse
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from oracles import random_rat, random_spd  # noqa: E402
from udtoda import theta as th  # noqa: E402


def workload(g, points, rng):
    B = random_spd(rng, g, den=rng.choice([1, 2, 4]))
    Zs = [[random_rat(rng, -30, 30, rng.randint(1, 9)) for _ in range(g)] for _ in range(points)]
    return B, Zs


def run(backend, B, Zs):
    th.set_backend(backend)
    ctx = th.ThetaContext(B)   # fresh context so the value cache starts empty
    t0 = time.perf_counter()
    out = [th.minimize(ctx, Z) for Z in Zs]
    return time.perf_counter() - t0, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    have_c = th.backend() == "cython"
    if not have_c:
        print("compiled kernel not available; timing the Python enumerator only")
    rng = random.Random(args.seed)
    print(f"{'g':>2} {'python us/eval':>15} {'cython us/eval':>15} {'speedup':>8}")
    for g in (1, 2, 3, 4):
        py_best = c_best = float("inf")
        for _ in range(args.repeat):
            B, Zs = workload(g, args.points, rng)
            t_py, r_py = run("python", B, Zs)
            py_best = min(py_best, t_py)
            if have_c:
                t_c, r_c = run("cython", B, Zs)
                c_best = min(c_best, t_c)
                if [(Fraction(v), list(m)) for v, m in r_py] != [(Fraction(v), list(m)) for v, m in r_c]:
                    raise SystemExit(f"backends disagree at g={g}")
        py_us = 1e6 * py_best / args.points
        if have_c:
            c_us = 1e6 * c_best / args.points
            print(f"{g:>2} {py_us:>15.1f} {c_us:>15.1f} {py_us / c_us:>7.1f}x")
        else:
            print(f"{g:>2} {py_us:>15.1f} {'-':>15} {'-':>8}")
    th.set_backend("auto")


if __name__ == "__main__":
    main()
