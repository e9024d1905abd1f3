import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from udtoda.curve import (PathChain, abel_jacobi, cycle_basis, extract_curve, face_cycles, genus,
                          is_smooth, loop_path, period_matrix, shortest_path, validate_cycle,
                          validate_path, walk)
from udtoda.errors import InvalidPath, NotSmooth, SingularBasis
from udtoda.linalg import is_positive_definite
from udtoda.solutions import curve_data, random_smooth_shape, random_t32_parameters, t32_fixture, t32_shape
from udtoda.tropical_poly import TropicalPolynomial2 as TP

LINE = TP({(0, 0): 0, (1, 0): 0, (0, 1): 0})
DOUBLE = TP({(0, 0): 0, (2, 0): 0})
# diamond around (1,1); the bounded region is the square [-1/2, 1/2]^2
DIAMOND = TP({(1, 0): F(1, 2), (0, 1): F(1, 2), (2, 1): F(1, 2), (1, 2): F(1, 2), (1, 1): 0})
T32 = (7, F(5, 8), 0, F(3, 2), 1, 3)


def test_tropical_line():
    c = extract_curve(LINE)
    assert c.vertices == [(0, 0)]
    # min-plus: rays point away from the region where each term is smallest
    assert sorted(r.xi for r in c.rays) == [(-1, -1), (0, 1), (1, 0)]
    assert is_smooth(c)
    assert genus(c) == 0
    assert cycle_basis(c).g == 0


def test_collinear_support_gives_weight_two():
    c = extract_curve(DOUBLE)
    assert len(c.lines) == 1 and c.lines[0].weight == 2
    rep = is_smooth(c)
    assert not rep and "weight 2" in rep.reason


def test_balancing_everywhere():
    for f in (LINE, DIAMOND, t32_shape(*T32).to_tropical()):
        assert extract_curve(f).balancing_defects() == []


def test_diamond_period():
    c = extract_curve(DIAMOND)
    assert is_smooth(c) and genus(c) == 1
    basis = face_cycles(c)
    assert basis.g == 1
    (cyc,) = basis.cycles
    assert len(cyc) == 4 and set(map(abs, cyc.values())) == {1}
    assert period_matrix(c, basis).B == [[4]]


def test_fixture_curve():
    d = t32_fixture(*T32).data
    assert is_smooth(d.curve)
    assert genus(d.curve) == 2
    assert len(set(d.marks.values())) == 6
    assert sorted(d.marks) == ["A1", "A2", "A3", "P", "Q", "R"]


def test_wall_example_matrix():
    # F11=1, F20=2 leaves no room for F30, so this curve sits on a wall;
    # the period matrix is still the instantiated closed form
    d = curve_data(t32_shape(10, 1, 0, 2, 1, 5), require_smooth=False)
    assert d.B == [[15, -1], [-1, 3]]
    with pytest.raises(NotSmooth):
        curve_data(t32_shape(10, 1, 0, 2, 1, 5))


def test_cycle_rows_and_empty_path():
    d = t32_fixture(*T32).data
    c, basis = d.curve, d.period.basis
    assert abel_jacobi(c, PathChain(0, 0), basis) == [0, 0]
    for i, cyc in enumerate(basis.cycles):
        loop = loop_path(c, cyc)
        assert abel_jacobi(c, loop, basis) == d.B[i]


def test_user_basis_validated():
    d = t32_fixture(*T32).data
    c = d.curve
    good = d.period.basis.cycles[0]
    validate_cycle(c, good)
    broken = dict(good)
    broken.pop(next(iter(broken)))
    with pytest.raises(InvalidPath):
        validate_cycle(c, broken)


def test_dependent_basis_rejected():
    from udtoda.curve import CycleBasis
    c = t32_fixture(*T32).data.curve
    cyc = face_cycles(c).cycles[0]
    with pytest.raises(SingularBasis):
        period_matrix(c, CycleBasis((cyc, cyc)))


def test_bad_path_rejected():
    c = t32_fixture(*T32).data.curve
    p = shortest_path(c, 0, 5)
    validate_path(c, p)
    with pytest.raises(InvalidPath):
        validate_path(c, PathChain(p.start, p.end, p.steps[:-1]))
    with pytest.raises(InvalidPath):
        walk(c, [0, 0])


def test_reversed_path_negates():
    d = t32_fixture(*T32).data
    c, basis = d.curve, d.period.basis
    p = shortest_path(c, d.marks["P"], d.marks["A1"])
    fwd = abel_jacobi(c, p, basis)
    assert abel_jacobi(c, p.reversed(), basis) == [-x for x in fwd]


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_face_and_tree_bases_give_congruent_forms(seed):
    # two bases of the same lattice: det B and positivity agree
    rng = random.Random(seed)
    shape, _, _ = random_smooth_shape(1, 3, rng)
    c = extract_curve(shape.to_tropical())
    B1 = period_matrix(c, face_cycles(c)).B
    B2 = period_matrix(c, cycle_basis(c)).B
    det = lambda B: B[0][0] * B[1][1] - B[0][1] * B[1][0]
    assert det(B1) == det(B2)
    assert is_positive_definite(B1) and is_positive_definite(B2)


@settings(max_examples=20)
@given(st.integers(0, 10**6))
def test_fixture_matrix_symmetric_positive(seed):
    p = random_t32_parameters(random.Random(seed))
    B = t32_fixture(*p).data.B
    assert B[0][1] == B[1][0]
    assert is_positive_definite(B)
