from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcflab import projlin
from mcflab.errors import DimensionMismatch, NotUnimodular, SingularPoint
from mcflab.projlin import IntMatrix, act, act_exact, compose, identity, inverse, jacobian, transpose
from mcflab.systems import registry


def unimodular(draw_ops, n):
    """Product of elementary integer matrices; always det +-1."""
    m = identity(n)
    for i, j, c, swap in draw_ops:
        rows = [list(r) for r in identity(n).rows]
        if swap:
            rows[i], rows[j] = rows[j], rows[i]
        elif i != j:
            rows[i][j] = c
        m = m @ IntMatrix(rows)
    return m


@st.composite
def unimodular_matrices(draw, n=None):
    n = draw(st.integers(1, 4)) if n is None else n
    ops = draw(
        st.lists(
            st.tuples(st.integers(0, n), st.integers(0, n), st.integers(-2, 2), st.booleans()),
            min_size=0,
            max_size=6,
        )
    )
    return unimodular(ops, n)


def test_identity_action():
    assert act(identity(2), (0.3, 0.2)) == pytest.approx((0.3, 0.2))


def test_gauss_branch_action():
    assert act(IntMatrix([[0, 1], [1, -2]]), (0.4,)) == pytest.approx((0.5,))


def test_gs_branch_action():
    m = IntMatrix([[0, 1, 0], [0, 0, 1], [1, -1, -1]])
    assert act(m, (0.6, 0.3)) == pytest.approx((0.5, 1 / 6))
    assert act_exact(m, (Fraction(3, 5), Fraction(3, 10))) == (Fraction(1, 2), Fraction(1, 6))


def test_inverse_examples():
    assert inverse(identity(3)) == identity(3)
    assert inverse(IntMatrix([[0, 1], [1, -3]])) == IntMatrix([[3, 1], [1, 0]])
    a_phi = IntMatrix([[1, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert inverse(a_phi) == IntMatrix([[0, 1, 0], [1, -1, 0], [0, 0, 1]])


def test_inverse_rejects_non_unimodular():
    with pytest.raises(NotUnimodular):
        inverse(IntMatrix([[2, 0], [0, 1]]))


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        IntMatrix([[1, 0], [0]])
    with pytest.raises(DimensionMismatch):
        compose(identity(1), identity(2))
    with pytest.raises(DimensionMismatch):
        act(identity(2), (0.1,))


def test_singular_point():
    with pytest.raises(SingularPoint):
        act(IntMatrix([[0, 1], [1, -2]]), (0.0,))


def test_transpose_examples():
    g = IntMatrix([[0, 1], [1, -4]])
    assert transpose(g) == g
    assert transpose(identity(3)) == identity(3)
    # dual Garrity-Schweiger branch: ((1 - x2)/x2, (x1 - k x2)/x2)
    k = 2
    a = registry("gs", 2).branch_matrix(k)
    x = (Fraction(7, 3), Fraction(2, 5))
    assert act_exact(a.T, x) == ((1 - x[1]) / x[1], (x[0] - k * x[1]) / x[1])


def test_jacobian_examples():
    assert jacobian(identity(2), (0.2, 0.9)) == pytest.approx(1.0)
    assert jacobian(IntMatrix([[2, 1], [1, 0]]), (0.5,)) == pytest.approx(0.16)


def test_jacobian_matches_finite_differences(rng):
    gs = registry("gs", 3)
    m = gs.inverse_branch(2) @ gs.inverse_branch(0)
    h = 1e-6
    for x in rng.uniform(0.05, 0.3, size=(100, 3)):
        cols = []
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            cols.append((np.array(act(m, x + e)) - np.array(act(m, x - e))) / (2 * h))
        fd = abs(np.linalg.det(np.array(cols).T))
        assert jacobian(m, x) == pytest.approx(fd, rel=1e-6)


def test_vectorized_matches_scalar(rng):
    m = IntMatrix([[1, 2, 0], [0, 1, 1], [1, 1, 1]])
    xs = rng.uniform(0, 1, size=(50, 2))
    ys, den = projlin.act_many(m, xs)
    for x, y in zip(xs, ys):
        assert act(m, x) == pytest.approx(tuple(y), rel=1e-12)
    assert projlin.jacobian_many(m, xs) == pytest.approx([jacobian(m, x) for x in xs], rel=1e-12)


def test_act_many_marks_singular_rows():
    ys, _ = projlin.act_many(IntMatrix([[0, 1], [1, -2]]), np.array([[0.0], [0.4]]))
    assert np.isnan(ys[0]).all() and ys[1, 0] == pytest.approx(0.5)


def test_primitive():
    assert projlin.primitive(IntMatrix([[-2, 4], [0, -6]])) == IntMatrix([[1, -2], [0, 3]])


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_action_is_a_homomorphism(data):
    n = data.draw(st.integers(1, 3))
    a = data.draw(unimodular_matrices(n))
    b = data.draw(unimodular_matrices(n))
    x = tuple(Fraction(data.draw(st.integers(1, 97)), 101) for _ in range(n))
    try:
        lhs = act_exact(a @ b, x)
        rhs = act_exact(a, act_exact(b, x))
    except SingularPoint:
        return
    assert lhs == rhs


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_inverse_and_transpose_round_trip(data):
    m = data.draw(unimodular_matrices())
    assert abs(m.det) == 1
    assert m @ inverse(m) == identity(m.dim)
    assert m.T.T == m
    assert (m @ m).T == m.T @ m.T


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_jacobian_chain_rule(data):
    n = data.draw(st.integers(1, 3))
    a = data.draw(unimodular_matrices(n))
    b = data.draw(unimodular_matrices(n))
    x = tuple(data.draw(st.floats(0.05, 0.95)) for _ in range(n))
    try:
        bx = act(b, x)
        lhs = jacobian(a @ b, x)
        rhs = jacobian(a, bx) * jacobian(b, x)
    except SingularPoint:
        return
    if not all(np.isfinite([lhs, rhs])) or min(abs(projlin.denominator(b, x)), abs(projlin.denominator(a, bx))) < 1e-6:
        return
    assert lhs == pytest.approx(rhs, rel=1e-8)
