import numpy as np
import pytest

from mcflab.duality import involution_criterion_check, telephone
from mcflab.permutations import Permutation, all_permutations, involutions, parse_cycles, w0_coset


def test_parse_and_format():
    p = parse_cycles("(123)", 3)
    assert str(p) == "(123)"
    assert str(parse_cycles("e", 3)) == "e"
    assert p * p.inverse() == Permutation.identity(3)


@pytest.mark.parametrize("text", ["(14)", "(1 1)", "12", "(12)(2"])
def test_parse_rejects(text):
    with pytest.raises(Exception):
        parse_cycles(text, 3)


def test_matrix_is_permutation_matrix():
    for p in all_permutations(4):
        a = p.matrix().array
        assert (a.sum(axis=0) == 1).all() and (a.sum(axis=1) == 1).all()
        assert p.matrix().T == p.inverse().matrix()


def test_matrix_multiplicative():
    perms = list(all_permutations(3))
    for p in perms:
        for q in perms:
            assert (p * q).matrix() == p.matrix() @ q.matrix()


def test_involution_counts():
    assert [len(involutions(m)) for m in range(1, 8)] == [1, 2, 4, 10, 26, 76, 232]
    assert [telephone(m) for m in range(1, 8)] == [1, 2, 4, 10, 26, 76, 232]
    assert [str(p) for p in involutions(1)] == ["e"]


def test_w0_coset():
    assert {str(p) for p in w0_coset(3)} == {"e", "(13)", "(123)", "(132)"}
    assert {str(p) for p in w0_coset(2)} == {"e", "(12)"}
    for m in range(1, 6):
        assert len(w0_coset(m)) == len(involutions(m))


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_involution_criterion(m):
    assert involution_criterion_check(m)


def test_criterion_set_size_for_four():
    w0 = Permutation.reversal(4).matrix()
    hits = [p for p in all_permutations(4) if w0 @ p.matrix().T == p.matrix() @ w0]
    assert len(hits) == 10
