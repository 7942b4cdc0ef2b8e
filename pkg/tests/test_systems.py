from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcflab.errors import BoundaryPoint, OutOfDomain, UnknownAlgorithm, UnknownDigit, UnsupportedDimension
from mcflab.permutations import parse_cycles
from mcflab.projlin import IntMatrix, act_many, inverse
from mcflab.systems import ALGORITHMS, OK, dualize, jump, registry

F = Fraction
FULL = [("gauss", 1), ("gs", 2), ("gs", 3), ("selmer", 2), ("selmer", 3), ("brun", 2), ("brun", 3),
        ("brun-mult", 2), ("poincare", 2), ("poincare", 3), ("flipflop", 2), ("flipflop", 3)]


def cf_digits(p, q, s):
    """Regular continued fraction digits of p/q by Euclid."""
    out = []
    while len(out) < s and p:
        a, r = divmod(q, p)
        out.append(a)
        p, q = r, p
    return out


def test_registry_examples():
    assert registry("gauss", 1).branch_matrix(2) == IntMatrix([[0, 1], [1, -2]])
    assert registry("gs", 2).branch_matrix(0) == IntMatrix([[0, 1, 0], [0, 0, 1], [1, -1, 0]])
    assert registry("selmer", 2).selfdual_digits == {1, 2}


def test_registry_errors():
    with pytest.raises(UnknownAlgorithm):
        registry("jacobi-perron", 2)
    with pytest.raises(UnsupportedDimension):
        registry("gs", 1)
    with pytest.raises(UnsupportedDimension):
        registry("gauss", 2)
    with pytest.raises(UnknownDigit):
        registry("selmer", 2).branch_matrix(0)


@pytest.mark.parametrize("name,n", FULL)
def test_branches_unimodular(name, n):
    s = registry(name, n)
    for d in s.alphabet(4):
        assert abs(s.branch_matrix(d).det) == 1


def test_digit_examples():
    assert registry("gs", 2).digit_of((0.6, 0.3)) == 1
    assert registry("selmer", 2).digit_of((0.8, 0.7)) == 2
    assert registry("poincare", 2).digit_of((0.7, 0.2)) == parse_cycles("(12)", 3)


def test_step_examples():
    d, y = registry("gauss", 1).step((0.4,))
    assert d == 2 and y == pytest.approx((0.5,))
    d, y = registry("gs", 2).step((0.6, 0.3))
    assert d == 1 and y == pytest.approx((0.5, 1 / 6))
    ff = registry("flipflop", 2)
    d, y = ff.step((0.2, 0.1))
    assert ff.format_digit(d) == "S0"
    assert ff.branch_matrix(d) == IntMatrix([[1, 0, -1], [0, 1, 0], [0, 0, 1]])
    assert y == pytest.approx((0.2 / 0.9, 0.1 / 0.9))


def test_expand_examples():
    assert registry("gauss", 1).expand((F(2, 5),), 2).digits == (2, 2)
    assert registry("gs", 2).expand((F(3, 5), F(3, 10)), 2).digits == (1, 3)
    for name, n in FULL:
        s = registry(name, n)
        x = tuple(s.domain.sample(np.random.default_rng(0), 1)[0][0])
        assert s.expand(x, 0).digits == ()


def test_expand_reports_boundaries():
    e = registry("gs", 2).expand((0.6, 0.3), 3)
    assert e.digits == (1,) and not e.complete and e.reason == "boundary"
    with pytest.raises(OutOfDomain):
        registry("gs", 2).digit_of((0.3, 0.5))
    with pytest.raises(BoundaryPoint):
        registry("gauss", 1).digit_of((0.5,))


@given(st.integers(1, 500), st.integers(2, 500))
@settings(max_examples=100, deadline=None)
def test_gauss_expansion_is_the_continued_fraction(p, q):
    p = p % q or 1
    exp = registry("gauss", 1).expand((F(p, q),), 6)
    oracle = cf_digits(p, q, 6)
    # the exact expansion stops at 0; the last CF digit a_k is the pair (a_k - 1, 1)
    assert list(exp.digits[: len(oracle) - 1]) == oracle[:-1]


def test_gauss_cylinders():
    g = registry("gauss", 1)
    c = g.cylinder([2])
    assert c.map == IntMatrix([[2, 1], [1, 0]])
    assert sorted(v[0] for v in g.cylinder_vertices(c)[0]) == [F(1, 3), F(1, 2)]
    ends = sorted(v[0] for v in g.cylinder_vertices(g.cylinder([1, 2]))[0])
    # [0; 1, 2 + t] for t in [0, 1]
    assert ends == [F(2, 3), F(3, 4)]


@pytest.mark.parametrize("name,n", FULL)
def test_single_digit_cylinder_is_inverse_branch(name, n):
    s = registry(name, n)
    for d in s.alphabet(3):
        assert s.cylinder([d]).map == inverse(s.branch_matrix(d))


def test_dualize_examples():
    g = registry("gauss", 1)
    gd = dualize(g)
    for k in range(1, 6):
        assert gd.branch_matrix(k) == g.branch_matrix(k)
    s = registry("selmer", 3)
    assert dualize(dualize(s)) is s
    for d in s.alphabet():
        assert dualize(s).branch_matrix(d) == s.branch_matrix(d).T


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_jump_is_garrity_schweiger(n):
    ff, gs = registry("flipflop", n), registry("gs", n)
    j = jump(ff)
    for k in range(11):
        assert j.branch_matrix(k) == gs.branch_matrix(k)
        assert ff.branch_matrix(n) @ ff.branch_matrix(0) ** k == gs.branch_matrix(k)


def test_jump_digits_agree_with_gs(rng):
    gs = registry("gs", 3)
    j = jump(registry("flipflop", 3))
    xs, _ = gs.domain.sample(rng, 2000)
    d1, s1 = gs.digits_batch(xs)
    d2, s2 = j.digits_batch(xs)
    ok = (np.asarray(s1) == OK) & (np.asarray(s2) == OK)
    assert ok.mean() > 0.99
    assert [a for a, o in zip(d1, ok) if o] == [b for b, o in zip(d2, ok) if o]


@pytest.mark.parametrize("name,n", FULL)
@pytest.mark.parametrize("dual", [False, True])
def test_branches_map_cells_into_domain(name, n, dual, rng):
    """Digit-by-digit orbit coherence: the image of each cell lies in the domain,
    and points pulled back through an inverse branch land in that cell."""
    s = registry(name, n)
    s = dualize(s) if dual else s
    xs, _ = s.domain.sample(rng, 4000)
    ds, st_ = s.digits_batch(xs)
    for d in set(d for d, c in zip(ds, st_) if c == OK):
        rows = np.array([e == d and c == OK for e, c in zip(ds, st_)])
        ys, _ = act_many(s.branch_matrix(d), xs[rows])
        assert s.domain.contains(ys, tol=1e-7).all()
    for d in s.alphabet(3):
        back, _ = act_many(s.inverse_branch(d), xs)
        got, code = s.digits_batch(back)
        keep = np.asarray(code) == OK
        assert keep.mean() > 0.95
        assert all(g == d for g, k in zip(got, keep) if k)


@pytest.mark.parametrize("name,n", FULL)
def test_exact_and_float_digits_agree(name, n, rng):
    s = registry(name, n)
    xs, _ = s.domain.sample(rng, 300)
    ds, st_ = s.digits_batch(xs)
    for x, d, c in zip(xs, ds, st_):
        if c == OK:
            exact = tuple(F(v).limit_denominator(10**9) for v in x)
            try:
                assert s.digit_of(exact) == d
            except BoundaryPoint:
                pass


def test_selmer_restricted_transitions(rng):
    """On X the Selmer map only uses digits n-1 and n, and T(X) stays in X."""
    for n in (2, 3, 4):
        s = registry("selmer", n)
        xs, _ = s.domain.sample(rng, 2000)
        exp_digits = set()
        for x in xs[:200]:
            exp_digits.update(s.expand(tuple(x), 8).digits)
        assert exp_digits <= {n - 1, n}


def test_unrestricted_selmer_is_not_full():
    s = registry("selmer", 2, restricted=False)
    assert not s.is_full and s.alphabet() == [0, 1, 2]


def test_poincare_digit_law(rng):
    """sigma ranks the differences x' in descending order and T maps the cell
    back into the simplex."""
    s = registry("poincare", 3)
    xs, _ = s.domain.sample(rng, 500)
    for x in xs:
        diffs = np.concatenate([[1 - x[0]], -np.diff(x), [x[-1]]])
        sigma = s.digit_of(tuple(x))
        # sigma(j) is the descending rank of x'_j
        ranks = np.argsort(np.argsort(-diffs)) + 1
        assert tuple(int(r) for r in ranks) == sigma.images
        y = act_many(s.branch_matrix(sigma), x[None])[0][0]
        assert s.domain.contains(y[None], tol=1e-9).all()


@pytest.mark.parametrize("name", sorted(ALGORITHMS))
def test_describe_round_trips_json(name):
    import json

    s = registry(name, 1 if name == "gauss" else 2)
    json.loads(json.dumps(s.describe()))
