"""Command line entry point: ``udtoda <subcommand> ...``.

Exit status: 0 on success or when a verdict holds, 1 when a verdict fails,
2 on usage or input errors.  Numbers are printed as exact rationals.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from itertools import permutations

from .errors import UDTodaError
from .exact import fmt


class InputError(Exception):
    pass


def _load(text):
    """JSON from a literal string or ``@path``."""
    if text is None:
        return None
    try:
        if text.startswith("@"):
            with open(text[1:]) as fh:
                return json.load(fh)
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {text!r}: {exc}") from None


def _rat(x):
    try:
        if isinstance(x, float):
            raise InputError(f"{x!r}: give rationals as integers or 'p/q' strings")
        return Fraction(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise InputError(f"not a rational: {x!r} ({exc})") from None


def _vec(x):
    return [_rat(v) for v in x]


def _dump(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _window(text):
    try:
        a, b = text.lower().split("x")
        return int(a), int(b)
    except ValueError:
        raise InputError(f"window must look like 2x50, got {text!r}") from None


def _sigmas(text, M):
    if text in (None, "all"):
        return list(permutations(range(1, M + 1)))
    try:
        sig = tuple(int(s) for s in text.replace(" ", "").split(","))
    except ValueError:
        raise InputError(f"sigma must be a comma separated permutation, got {text!r}") from None
    if sorted(sig) != list(range(1, M + 1)):
        raise InputError(f"sigma {text!r} is not a permutation of 1..{M}")
    return [sig]


# ------------------------------------------------------------ subcommands

def _state(args):
    from .toda import TodaStateU
    d = _load(args.state)
    if not isinstance(d, dict) or "Q" not in d or "W" not in d:
        raise InputError("state JSON needs keys Q and W")
    d = dict(d)
    if args.M is not None:
        d.setdefault("M", args.M)
    if args.N is not None:
        d.setdefault("N", args.N)
    try:
        return TodaStateU.from_json(d)
    except (ValueError, TypeError, IndexError) as exc:
        raise InputError(f"bad state: {exc}") from None


def cmd_simulate(args, out):
    from .toda import step_ud
    s = _state(args)
    rows = [s]
    for _ in range(args.steps):
        s = step_ud(s)
        rows.append(s)
    if args.json or args.emit == "json":
        for r in rows:
            _dump(r.to_json(), out)
        return 0
    M, N = s.M, s.N
    head = ["t"] + [f"Q{n + 1}_{k + 1}" for n in range(N) for k in range(M)] + [f"W{n + 1}" for n in range(N)]
    out.write("\t".join(head) + "\n")
    for r in rows:
        cells = [fmt(r.t)] + [fmt(x) for row in r.Q for x in row] + [fmt(x) for x in r.W]
        out.write("\t".join(cells) + "\n")
    return 0


def cmd_invariants(args, out):
    from .toda import spectral_map_ud, step_ud
    s = _state(args)
    rng = random.Random(args.seed)
    first = None
    same = True
    for _ in range(args.steps + 1):
        phi = spectral_map_ud(s, rng)
        first = first or phi
        same = same and phi == first
        if args.json:
            _dump({"t": fmt(s.t), "phi": phi.to_json()}, out)
        else:
            out.write(f"{fmt(s.t)}\t{phi.to_tropical().pretty()}\n")
        s = step_ud(s)
    return 0 if same else 1


def _t32_args(p):
    for name in ("F0", "F30", "F21", "F20", "F11", "F10"):
        p.add_argument(f"--{name}", default="0" if name == "F21" else None)


def _t32_values(args):
    vals = []
    for name in ("F0", "F30", "F21", "F20", "F11", "F10"):
        v = getattr(args, name)
        if v is None:
            raise InputError(f"--{name} is required with --fixture t32")
        vals.append(_rat(v))
    return vals


def cmd_curve(args, out):
    from .curve import is_smooth
    from .solutions import curve_data, t32_shape
    from .svg import curve_svg
    from .tropical_poly import SpectralShape
    if args.fixture == "t32":
        shape = t32_shape(*_t32_values(args))
    elif args.shape:
        shape = SpectralShape.from_json(_load(args.shape))
    else:
        raise InputError("give --fixture t32 or --shape")
    data = curve_data(shape, require_smooth=False)
    rep = is_smooth(data.curve)
    payload = {
        "shape": shape.to_json(),
        "smooth": bool(rep),
        "certificate": None if rep else {"vertex": rep.vertex, "reason": rep.reason},
        "curve": data.curve.to_json(),
        "period": data.period.to_json(),
        "cycles": [{str(k): v for k, v in cyc.items()} for cyc in data.period.basis.cycles],
    }
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(curve_svg(data.curve, data.marks, data.period.basis.cycles))
    _dump(payload, out)
    return 0


def cmd_theta(args, out):
    from .theta import ThetaContext, minimize, theta_argmin_set, theta_char
    B = [_vec(r) for r in _load(args.B)]
    Z = _vec(_load(args.Z))
    beta = _vec(_load(args.beta)) if args.beta else None
    try:
        ctx = ThetaContext(B)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if len(Z) != ctx.g or (beta is not None and len(beta) != ctx.g):
        raise InputError("dimensions of B, Z and beta do not match")
    if beta is None:
        val, args_ = minimize(ctx, Z)
    else:
        args_ = theta_argmin_set(ctx, beta, Z)
        val = theta_char(ctx, beta, Z)
    if args.json:
        _dump({"value": fmt(val), "argmin": list(args_[0]), "argmin_set": [list(m) for m in args_]}, out)
    else:
        def vec(m):
            return "[" + ",".join(str(x) for x in m) + "]"
        line = f"{fmt(val)} at m={vec(args_[0])}"
        if len(args_) > 1:
            line += " (ties: " + " ".join(vec(m) for m in args_) + ")"
        out.write(line + "\n")
    return 0


def _fay_configs(args):
    from .fay import FayConfiguration, ThetaCharacteristic, odd_characteristic
    from .theta import ThetaContext
    from .linalg import vadd
    if args.fixture == "t32":
        from .solutions import t32_fixture
        fx = t32_fixture(*_t32_values(args))
        d = fx.data
        ctx = ThetaContext(d.B)
        char = odd_characteristic(2, [Fraction(1, 2)] * 2)
        idx = [args.i] if args.i else [1, 2, 3]
        out = []
        for i in idx:
            pts = {1: [Fraction(0)] * 2, 2: vadd(d.lam, d.L), 3: list(d.lam), 4: vadd(d.lam, d.L, d.lams[i - 1])}
            out.append((f"i={i}", FayConfiguration(ctx, char, pts)))
        return out
    cfg = _load(args.config)
    if not isinstance(cfg, dict) or "B" not in cfg:
        raise InputError("config JSON needs B, beta and points (or integrals)")
    try:
        ctx = ThetaContext([_vec(r) for r in cfg["B"]])
    except ValueError as exc:
        raise InputError(str(exc)) from None
    beta = _vec(cfg.get("beta", ["1/2"] * ctx.g))
    char = (ThetaCharacteristic(tuple(_vec(cfg["alpha"])), tuple(beta)) if "alpha" in cfg
            else odd_characteristic(ctx.g, beta))
    if "points" in cfg:
        pts = {int(k): _vec(v) for k, v in cfg["points"].items()}
        return [("config", FayConfiguration(ctx, char, pts))]
    integrals = {tuple(int(x) for x in k.split(",")): _vec(v) for k, v in cfg["integrals"].items()}
    try:
        return [("config", FayConfiguration.from_integrals(ctx, char, integrals))]
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_fay_check(args, out):
    from .fay import fay_check, fay_signs, fundamental_grid
    status = 0
    for label, cfg in _fay_configs(args):
        signs = fay_signs(cfg)
        total = bad = 0
        for Z in fundamental_grid(cfg.ctx.B, args.grid):
            v = fay_check(cfg, Z, signs, raise_on_fail=False)
            total += 1
            if not v.holds:
                bad += 1
                _dump({"config": label, "verdict": "fails", **v.to_json()}, out)
            elif args.verbose:
                _dump({"config": label, "verdict": "holds", **v.to_json()}, out)
        _dump({"config": label, "signs": list(signs.signs), "k": list(signs.k), "i": signs.distinguished,
               "points": total, "failures": bad, "verdict": "holds" if bad == 0 else "fails"}, out)
        if bad:
            status = 1
    return status


def cmd_solution_check(args, out):
    from .solutions import check_trajectory, qw_from_tau, random_z0, solution_params, t32_fixture, verify_bilinear
    from .theta import ThetaContext
    if args.fixture != "t32":
        raise InputError("only --fixture t32 is available")
    fx = t32_fixture(*_t32_values(args))
    ctx = ThetaContext(fx.data.B)
    nwin, twin = _window(args.window)
    rng = random.Random(args.seed)
    status = 0
    for sigma in _sigmas(args.sigma, 3):
        Z0 = _vec(_load(args.z0)) if args.z0 else random_z0(fx.data.B, rng)
        params = solution_params(fx, sigma, Z0, ctx)
        v = verify_bilinear(params, (nwin, twin))
        rec = {"sigma": list(sigma), "Z0": [fmt(x) for x in Z0], "bilinear": v.to_json(),
               "condition_a": params.condition_a(), "condition_b": params.condition_b()}
        if v.holds:
            try:
                rep = check_trajectory(qw_from_tau(params, twin), phi_check=True, seed=args.seed)
                rec["trajectory"] = rep.to_json()
                ok = rep.ok
            except UDTodaError as exc:
                rec["trajectory"] = {"ok": False, "message": str(exc)}
                ok = False
        else:
            ok = False
        rec["verdict"] = "holds" if ok else "fails"
        status = status or (0 if ok else 1)
        _dump(rec, out)
    return status


def cmd_scan(args, out):
    from .solutions import conjecture_scan
    rep = conjecture_scan(args.M, args.N, args.trials, args.seed, window=(None, args.steps))
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump(rep, fh, sort_keys=True, indent=1)
            fh.write("\n")
    _dump({"M": rep["M"], "N": rep["N"], "seed": rep["seed"], "counts": rep["counts"],
           "by_regime": rep["by_regime"]}, out)
    # only the proven regime carries a verdict; the rest is a report
    return 0 if rep["by_regime"]["proven"]["fail"] == 0 else 1


# ------------------------------------------------------------ parser

def build_parser():
    p = argparse.ArgumentParser(prog="udtoda", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="structured output")
        sp.set_defaults(fn=fn)
        return sp

    for name, fn, h in (("simulate", cmd_simulate, "evolve an ultradiscrete state"),
                        ("invariants", cmd_invariants, "print the spectral curve at each step")):
        sp = add(name, fn, h)
        sp.add_argument("--M", type=int)
        sp.add_argument("--N", type=int)
        sp.add_argument("--state", required=True, help="JSON {Q:[[...]],W:[...]} or @file")
        sp.add_argument("--steps", type=int, default=1)
        sp.add_argument("--seed", type=int, default=0)
        if name == "simulate":
            sp.add_argument("--emit", choices=["tsv", "json"], default="tsv")

    sp = add("curve", cmd_curve, "extract a spectral curve, its period matrix and marked points")
    sp.add_argument("--fixture", choices=["t32"])
    sp.add_argument("--shape", help="SpectralShape JSON or @file")
    _t32_args(sp)
    sp.add_argument("--svg")

    sp = add("theta", cmd_theta, "evaluate the tropical theta function")
    sp.add_argument("--B", required=True)
    sp.add_argument("--Z", required=True)
    sp.add_argument("--beta")

    sp = add("fay-check", cmd_fay_check, "check the trisecant identity on a grid")
    sp.add_argument("--config")
    sp.add_argument("--fixture", choices=["t32"])
    _t32_args(sp)
    sp.add_argument("--i", type=int, choices=[1, 2, 3])
    sp.add_argument("--grid", type=int, default=8, help="grid points per period direction")
    sp.add_argument("--verbose", action="store_true", help="also print passing points")

    sp = add("solution-check", cmd_solution_check, "verify theta-function solutions")
    sp.add_argument("--fixture", choices=["t32"], default="t32")
    _t32_args(sp)
    sp.add_argument("--sigma", default="all")
    sp.add_argument("--window", default="2x50")
    sp.add_argument("--z0")
    sp.add_argument("--seed", type=int, default=0)

    sp = add("scan", cmd_scan, "conjecture scan over random smooth curves")
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=12)
    sp.add_argument("--json-report", dest="json_path", help="write the full report here")
    return p


def dispatch(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except (InputError, UDTodaError, ValueError, KeyError) as exc:
        sys.stderr.write(f"udtoda {args.cmd}: {type(exc).__name__}: {exc}\n")
        return 2


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
