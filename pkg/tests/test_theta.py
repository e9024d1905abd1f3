import random
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from udtoda import theta as th
from udtoda.linalg import vecmat, dot, quad
from udtoda.theta import (ThetaContext, q_form, set_backend, theta, theta_argmin, theta_argmin_set,
                          theta_char)
from oracles import brute_theta, brute_theta_char, qform, random_spd, random_rat

B4 = ThetaContext([[4]])
B2 = ThetaContext([[15, -1], [-1, 3]])


def test_q_form_examples():
    assert q_form(B4, [0], [0], [3]) == 0
    assert q_form(B2, [F(1, 2), F(1, 2)], [0, 0], [F(7), F(-2, 3)]) == 0
    assert q_form(B4, [0], [-1], [3]) == -1


def test_theta_examples():
    assert theta(B4, [3]) == -1
    assert theta_argmin(B4, [0], [3]) == (-1,)
    assert theta(B2, [0, 0]) == 0
    assert theta_char(B4, [F(1, 2)], [0]) == F(1, 2)
    assert theta_char(B4, [F(1, 2)], [0]) == brute_theta_char([[4]], [F(1, 2)], [0], box=5)


def test_quasi_periodic_instance():
    assert theta(B4, [7]) == -6
    assert theta(B4, [7]) == F(-1, 2) * 4 - 3 + theta(B4, [3])


def test_ties_are_reported_and_broken_lexicographically():
    ctx = ThetaContext([[2]])
    assert theta_argmin_set(ctx, [0], [1]) == [(-1,), (0,)]
    assert theta_argmin(ctx, [0], [1]) == (-1,)


def test_rejects_indefinite():
    with pytest.raises(ValueError):
        ThetaContext([[1, 2], [2, 1]])
    with pytest.raises(ValueError):
        ThetaContext([[1, 0], [1, 1]])


def test_backends_agree():
    rng = random.Random(7)
    was = th.backend()
    try:
        for _ in range(40):
            g = rng.randint(1, 4)
            B = random_spd(rng, g, den=rng.choice([1, 2, 3]))
            Z = [random_rat(rng, -20, 20, 7) for _ in range(g)]
            out = {}
            for name in ("python", was):
                set_backend(name)
                out[name] = th.minimize(ThetaContext(B), Z)
            assert out["python"] == out[was]
    finally:
        set_backend(was)


def test_pure_python_env_switch():
    code = "from udtoda import theta; print(theta.backend())"
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"UDTODA_PURE_PYTHON": "1", "PATH": ""})
    assert res.stdout.strip() == "python"


def test_ill_conditioned_falls_back_exactly():
    # pivot ratio far beyond what the float kernel accepts
    B = [[F(10**9), 1], [1, F(1, 10)]]
    ctx = ThetaContext(B)
    Z = [F(1, 3), F(-1, 7)]
    assert th.minimize(ctx, Z)[0] == brute_theta(B, Z, box=5)[0]
    assert not ctx._fast_ok


# ---------------------------------------------------------------- properties

@st.composite
def instances(draw, gmax=3):
    seed = draw(st.integers(0, 10**9))
    rng = random.Random(seed)
    g = rng.randint(1, gmax)
    B = random_spd(rng, g, den=rng.choice([1, 2, 4]))
    Z = [random_rat(rng, -6, 6, 5) for _ in range(g)]
    beta = [F(rng.randint(-2, 2), 2) for _ in range(g)]
    l = [rng.randint(-3, 3) for _ in range(g)]
    return B, Z, beta, l


@given(instances())
def test_quasi_periodicity(inst):
    B, Z, beta, l = inst
    ctx = ThetaContext(B)
    lB = vecmat(l, B)
    lhs = theta_char(ctx, beta, [z + x for z, x in zip(Z, lB)])
    assert lhs == -quad(B, l) / 2 - dot(l, Z) + theta_char(ctx, beta, Z)


@given(instances())
def test_zero_characteristic_is_theta(inst):
    B, Z, _, _ = inst
    ctx = ThetaContext(B)
    assert theta_char(ctx, [0] * len(B), Z) == theta(ctx, Z)


@settings(max_examples=30)
@given(instances(gmax=2))
def test_matches_box_search(inst):
    B, Z, beta, _ = inst
    ctx = ThetaContext(B)
    val, args = brute_theta(B, Z, box=12, beta=beta)
    assert theta_argmin_set(ctx, beta, Z) == [tuple(a) for a in args]
    assert q_form(ctx, beta, args[0], Z) == val == qform(B, beta, args[0], Z)


@given(instances())
def test_theta_at_zero_and_positive_form(inst):
    B, _, _, l = inst
    ctx = ThetaContext(B)
    assert theta(ctx, [0] * len(B)) == 0
    if any(l):
        assert q_form(ctx, [0] * len(B), l, [0] * len(B)) > 0


@given(instances())
def test_theta_is_even(inst):
    B, Z, _, _ = inst
    ctx = ThetaContext(B)
    assert theta(ctx, Z) == theta(ctx, [-z for z in Z])
