"""The algorithms: Gauss, Garrity-Schweiger, Selmer, Brun (additive and
multiplicative), sorted Poincare and Flip-flop, plus the Flip-flop jump map.

Matrix rows use index 0 for the homogeneous coordinate.  ``e(n, i)`` is the
i-th unit row of length n + 1.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import McfError, UnknownAlgorithm, UnknownDigit, UnsupportedDimension
from ..permutations import Permutation, all_permutations, parse_cycles, ranks_descending, w0_coset
from ..projlin import IntMatrix
from .base import BOUNDARY, OK, FibredSystem, hs
from .domains import EPS_CELL, Box, Simplex, order_simplex

__all__ = ["registry", "ALGORITHMS", "jump"]

INF = math.inf


def e(n: int, i: int, scale: int = 1) -> list[int]:
    row = [0] * (n + 1)
    row[i] = scale
    return row


def _add(*rows: list[int]) -> list[int]:
    return [sum(v) for v in zip(*rows)]


def _floor_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.floor(num / den)


def _to_ints(ks: np.ndarray, status: np.ndarray) -> list:
    return [int(k) if s == OK else None for k, s in zip(ks, status)]


def _status(*bad_masks: np.ndarray) -> np.ndarray:
    bad = np.zeros_like(bad_masks[0], dtype=bool)
    for b in bad_masks:
        bad |= b
    return np.where(bad, BOUNDARY, OK).astype(np.int8)


def _count_at_least(xs: np.ndarray, c: np.ndarray, strict: bool) -> np.ndarray:
    return np.sum(xs > c[:, None] if strict else xs >= c[:, None], axis=1)


def _near(xs: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.any(np.abs(xs - c[:, None]) < EPS_CELL, axis=1)


class _UnboundedInt(FibredSystem):
    """Systems with digits k = 0, 1, 2, ... (or from ``k_min``)."""

    k_min = 0
    finite_alphabet = False

    def alphabet(self, bound=None):
        return list(range(self.k_min, (self.k_min + 10 if bound is None else bound) + 1))

    def validate_digit(self, d):
        if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or d < self.k_min:
            raise UnknownDigit(f"{d!r} is not a digit of {self.name} (integers >= {self.k_min})")
        return int(d)


class Gauss(_UnboundedInt):
    name = "gauss"
    k_min = 1
    selfdual_digits = "all"
    notes = "regular continued fraction map x -> 1/x - k"

    def __init__(self, n: int = 1):
        self.n = 1
        self.domain = Simplex([[0], [1]], [hs(1, (1, 1), strict=True), hs(1, (0, 1), (1, -1))], "(0,1]")
        self.dual_domain = self.domain

    def branch_matrix(self, d):
        return _gauss(self.validate_digit(d))

    def _digits(self, xs):
        x = xs[:, 0]
        k = _floor_div(np.ones_like(x), x)
        st = _status(x < EPS_CELL, 1 - k * x < EPS_CELL, (k + 1) * x - 1 < EPS_CELL)
        return _to_ints(k, st), st

    def _digit_exact(self, x):
        return math.floor(1 / x[0])

    _dual_digits = _digits
    _dual_digit_exact = _digit_exact

    def cell_halfspaces(self, d):
        return [hs(1, (0, 1), (1, -d)), hs(1, (0, -1), (1, d + 1), strict=True)]

    dual_cell_halfspaces = cell_halfspaces

    def tail_halfspaces(self, bound):
        return [hs(1, (0, 1), (1, -(bound + 1)))]

    dual_tail_halfspaces = tail_halfspaces


@lru_cache(maxsize=None)
def _gauss(k: int) -> IntMatrix:
    return IntMatrix([[0, 1], [1, -k]])


class GarritySchweiger(_UnboundedInt):
    name = "gs"
    selfdual_digits = "all"
    notes = "k = floor((1 - x1) / xn)"

    def __init__(self, n: int):
        self.n = n
        self.domain = order_simplex(n)
        self.dual_domain = Box([0] * n, [INF] * (n - 1) + [1], "R^{n-1}_>= x [0,1)")

    def branch_matrix(self, d):
        return _gs(self.n, self.validate_digit(d))

    def _digits(self, xs):
        n = self.n
        x1, xn = xs[:, 0], xs[:, n - 1]
        k = _floor_div(1 - x1, xn)
        st = _status(xn < EPS_CELL, 1 - x1 - k * xn < EPS_CELL, (k + 1) * xn - (1 - x1) < EPS_CELL)
        return _to_ints(k, st), st

    def _digit_exact(self, x):
        if x[-1] == 0:
            return None
        return math.floor((1 - x[0]) / x[-1])

    def _dual_digits(self, ys):
        n = self.n
        a, b = ys[:, n - 2], ys[:, n - 1]
        k = _floor_div(a, b)
        st = _status(b < EPS_CELL, a - k * b < EPS_CELL, (k + 1) * b - a < EPS_CELL)
        return _to_ints(k, st), st

    def _dual_digit_exact(self, y):
        if y[-1] == 0:
            return None
        return math.floor(y[-2] / y[-1])

    def cell_halfspaces(self, d):
        n = self.n
        return [
            hs(n, (0, 1), (1, -1), (n, -d)),
            hs(n, (0, -1), (1, 1), (n, d + 1), strict=True),
        ]

    def dual_cell_halfspaces(self, d):
        n = self.n
        return [hs(n, (n - 1, 1), (n, -d)), hs(n, (n - 1, -1), (n, d + 1), strict=True)]

    def tail_halfspaces(self, bound):
        n = self.n
        return [hs(n, (0, 1), (1, -1), (n, -(bound + 1)))]

    def dual_tail_halfspaces(self, bound):
        n = self.n
        return [hs(n, (n - 1, 1), (n, -(bound + 1)))]


@lru_cache(maxsize=None)
def _gs(n: int, k: int) -> IntMatrix:
    rows = [e(n, r + 1) for r in range(n)]
    rows.append(_add(e(n, 0), e(n, 1, -1), e(n, n, -k)))
    return IntMatrix(rows)


def _shifted(n: int, i: int, special: list[int]) -> IntMatrix:
    """Rows r < i are e_{r+1}, row i is ``special``, rows r > i are e_r."""
    rows = [e(n, r + 1) for r in range(i)] + [special] + [e(n, r) for r in range(i + 1, n + 1)]
    return IntMatrix(rows)


class Selmer(FibredSystem):
    """Sorted Selmer map.  The restricted version lives on X = D(n-1) u D(n),
    where it is full; the unrestricted one is kept for admissibility work."""

    name = "selmer"

    def __init__(self, n: int, restricted: bool = True):
        self.n = n
        self.restricted = restricted
        self.is_full = restricted
        if restricted:
            verts = [[1] * n, [1] * (n - 1) + [0]]
            verts += [[1] * k + [Fraction(1, 2)] * (n - k) for k in range(n - 1)]
            halfspaces = list(order_simplex(n).halfspaces) + [hs(n, (0, -1), (n - 1, 1), (n, 1), strict=True)]
            self.domain = Simplex(verts, halfspaces, "X = D(n-1) u D(n)")
            self.digit_set = (n - 1, n)
            self.notes = "restricted to X = {x_{n-1} + x_n > 1}"
        else:
            self.name = "selmer-full"
            self.domain = order_simplex(n)
            self.digit_set = tuple(range(n + 1))
            self.notes = "unrestricted; not full, no dual partition"
        self.selfdual_digits = frozenset((n - 1, n))
        self.dual_domain = Box([0] * n, [INF] * n, "R^n_>=")

    def alphabet(self, bound=None):
        return list(self.digit_set)

    def validate_digit(self, d):
        if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or int(d) not in self.digit_set:
            raise UnknownDigit(f"{d!r} is not a digit of {self.name} (n={self.n}); allowed {self.digit_set}")
        return int(d)

    def branch_matrix(self, d):
        return _selmer(self.n, self.validate_digit(d))

    def _digits(self, xs):
        c = 1 - xs[:, -1]
        i = _count_at_least(xs, c, strict=True)
        st = _status(xs[:, -1] < EPS_CELL, c < EPS_CELL, _near(xs, c))
        if self.restricted:
            st = np.where(i < self.n - 1, BOUNDARY, st).astype(np.int8)
        return _to_ints(i, st), st

    def _digit_exact(self, x):
        if x[-1] == 0:
            return None
        c = 1 - x[-1]
        i = sum(1 for v in x if v > c)
        return i if i in self.digit_set else None

    def _dual_digits(self, ys):
        if not self.restricted:
            raise McfError("the unrestricted Selmer map has no dual partition")
        a, b = ys[:, -2], ys[:, -1]
        d = np.where(a <= b, self.n - 1, self.n)
        st = _status(np.abs(a - b) < EPS_CELL)
        return _to_ints(d, st), st

    def _dual_digit_exact(self, y):
        if not self.restricted:
            raise McfError("the unrestricted Selmer map has no dual partition")
        return self.n - 1 if y[-2] <= y[-1] else self.n

    def cell_halfspaces(self, d):
        n = self.n
        # x_i > 1 - x_n >= x_{i+1}
        return [hs(n, (0, -1), (d, 1), (n, 1), strict=True), hs(n, (0, 1), (n, -1), (d + 1, -1))]

    def dual_cell_halfspaces(self, d):
        n = self.n
        if d == n - 1:
            return [hs(n, (n, 1), (n - 1, -1))]
        return [hs(n, (n - 1, 1), (n, -1), strict=True)]


@lru_cache(maxsize=None)
def _selmer(n: int, i: int) -> IntMatrix:
    return _shifted(n, i, _add(e(n, 0), e(n, n, -1)))


class Brun(FibredSystem):
    """Sorted Brun map: x_0 - x_1 is reinserted at position i."""

    name = "brun"

    def __init__(self, n: int):
        self.n = n
        self.domain = order_simplex(n)
        self.dual_domain = Box([0] * n, [INF] + [1] * (n - 1), "R_>= x [0,1)^{n-1}")
        self.selfdual_digits = "all" if n == 2 else frozenset({0})
        self.notes = "each branch maps its cell onto the whole simplex"

    def alphabet(self, bound=None):
        return list(range(self.n + 1))

    def validate_digit(self, d):
        if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or not 0 <= d <= self.n:
            raise UnknownDigit(f"{d!r} is not a digit of brun (n={self.n}); allowed 0..{self.n}")
        return int(d)

    def branch_matrix(self, d):
        return _brun(self.n, self.validate_digit(d))

    def _digits(self, xs):
        c = 1 - xs[:, 0]
        i = _count_at_least(xs, c, strict=False)
        st = _status(_near(xs, c))
        return _to_ints(i, st), st

    def _digit_exact(self, x):
        c = 1 - x[0]
        return sum(1 for v in x if v >= c)

    def _dual_digits(self, ys):
        y1 = ys[:, 0]
        top = np.argmax(ys, axis=1)
        srt = np.sort(ys, axis=1)
        tie = srt[:, -1] - srt[:, -2] < EPS_CELL
        d = np.where(y1 >= 1, 0, top + 1)
        st = _status(np.abs(y1 - 1) < EPS_CELL, (y1 < 1) & tie)
        return _to_ints(d, st), st

    def _dual_digit_exact(self, y):
        if y[0] >= 1:
            return 0
        top = max(y)
        if sum(1 for v in y if v == top) > 1:
            return None
        return y.index(top) + 1

    def cell_halfspaces(self, d):
        n = self.n
        # x_i >= 1 - x_1 > x_{i+1}
        return [hs(n, (0, -1), (1, 1), (d, 1)), hs(n, (0, 1), (1, -1), (d + 1, -1), strict=True)]

    def dual_cell_halfspaces(self, d):
        n = self.n
        if d == 0:
            return [hs(n, (0, -1), (1, 1))]
        out = [hs(n, (0, 1), (1, -1), strict=True)]
        out += [hs(n, (d, 1), (j, -1), strict=True) for j in range(1, n + 1) if j != d]
        return out


@lru_cache(maxsize=None)
def _brun(n: int, i: int) -> IntMatrix:
    return _shifted(n, i, _add(e(n, 0), e(n, 1, -1)))


class BrunMultiplicative(FibredSystem):
    """Brun with the multiplicative quotient N = floor(1 / x1); digits (i, N)."""

    name = "brun-mult"
    digit_kind = "pair"
    finite_alphabet = False
    notes = "cells D(i,N) = {x_i >= 1 - N x1 > x_{i+1}}, reconstructed"

    def __init__(self, n: int):
        self.n = n
        self.domain = order_simplex(n)
        self.dual_domain = Box([0] * n, [1] * n, "[0,1]^n")

    def alphabet(self, bound=None):
        top = 3 if bound is None else bound
        return [(i, big_n) for big_n in range(1, top + 1) for i in range(1, self.n + 1)]

    def validate_digit(self, d):
        try:
            i, big_n = d
        except (TypeError, ValueError):
            raise UnknownDigit(f"{d!r} is not an (i, N) pair") from None
        if not (1 <= int(i) <= self.n and int(big_n) >= 1):
            raise UnknownDigit(f"{d!r} is not a digit of brun-mult (n={self.n})")
        return (int(i), int(big_n))

    def branch_matrix(self, d):
        i, big_n = self.validate_digit(d)
        return _brun_mult(self.n, i, big_n)

    def _digits(self, xs):
        x1 = xs[:, 0]
        big_n = _floor_div(np.ones_like(x1), x1)
        c = 1 - big_n * x1
        i = _count_at_least(xs, c, strict=False)
        st = _status(x1 < EPS_CELL, c < EPS_CELL, (big_n + 1) * x1 - 1 < EPS_CELL, _near(xs, c))
        return [(int(a), int(b)) if s == OK else None for a, b, s in zip(i, big_n, st)], st

    def _digit_exact(self, x):
        if x[0] == 0:
            return None
        big_n = math.floor(1 / x[0])
        c = 1 - big_n * x[0]
        return (sum(1 for v in x if v >= c), big_n)

    def _dual_digits(self, ys):
        top = np.argmax(ys, axis=1)
        srt = np.sort(ys, axis=1)
        m = srt[:, -1]
        big_n = _floor_div(np.ones_like(m), m)
        st = _status(
            srt[:, -1] - srt[:, -2] < EPS_CELL,
            m < EPS_CELL,
            1 - big_n * m < EPS_CELL,
            (big_n + 1) * m - 1 < EPS_CELL,
        )
        return [(int(a) + 1, int(b)) if s == OK else None for a, b, s in zip(top, big_n, st)], st

    def _dual_digit_exact(self, y):
        top = max(y)
        if top == 0 or sum(1 for v in y if v == top) > 1:
            return None
        return (y.index(top) + 1, math.floor(1 / top))

    def cell_halfspaces(self, d):
        n = self.n
        i, big_n = d
        return [
            hs(n, (0, 1), (1, -big_n)),
            hs(n, (0, -1), (1, big_n + 1), strict=True),
            hs(n, (0, -1), (1, big_n), (i, 1)),
            hs(n, (0, 1), (1, -big_n), (i + 1, -1), strict=True),
        ]

    def dual_cell_halfspaces(self, d):
        n = self.n
        i, big_n = d
        out = [hs(n, (0, 1), (i, -big_n)), hs(n, (0, -1), (i, big_n + 1), strict=True)]
        out += [hs(n, (i, 1), (j, -1), strict=True) for j in range(1, n + 1) if j != i]
        return out

    def tail_halfspaces(self, bound):
        n = self.n
        return [hs(n, (0, 1), (1, -(bound + 1)))]

    def dual_tail_halfspaces(self, bound):
        n = self.n
        return [hs(n, (0, 1), (i, -(bound + 1))) for i in range(1, n + 1)]


@lru_cache(maxsize=None)
def _brun_mult(n: int, i: int, big_n: int) -> IntMatrix:
    return _shifted(n, i, _add(e(n, 0), e(n, 1, -big_n)))


class Poincare(FibredSystem):
    """Sorted Poincare map: difference vector, then sort nonincreasingly.

    The digit sigma sends position j of x' = (1 - x1, x1 - x2, ..., xn) to
    its rank, so the branch matrix is P_sigma D with D the difference matrix.
    """

    name = "poincare"
    digit_kind = "perm"
    notes = "infinite invariant measure; density ~ 1/(x1...xn)"

    def __init__(self, n: int):
        self.n = n
        self.domain = order_simplex(n)
        self.dual_domain = Box([0] * n, [INF] * n, "R^n_>")
        self.selfdual_digits = frozenset(w0_coset(n + 1))
        self._perm_cache: dict[tuple, Permutation] = {}

    def _perm(self, images) -> Permutation:
        images = tuple(images)
        p = self._perm_cache.get(images)
        if p is None:
            p = self._perm_cache[images] = Permutation(images)
        return p

    def alphabet(self, bound=None):
        return sorted(all_permutations(self.n + 1))

    def validate_digit(self, d):
        if isinstance(d, str):
            d = parse_cycles(d, self.n + 1)
        if not isinstance(d, Permutation) or d.m != self.n + 1:
            raise UnknownDigit(f"{d!r} is not a permutation of 1..{self.n + 1}")
        return d

    def branch_matrix(self, d):
        return _poincare(self.validate_digit(d))

    def differences(self, xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_2d(xs)
        m = xs.shape[0]
        full = np.hstack([np.ones((m, 1)), xs, np.zeros((m, 1))])
        return full[:, :-1] - full[:, 1:]

    def _digits(self, xs):
        xp = self.differences(xs)
        ranks = ranks_descending(xp)
        srt = np.sort(xp, axis=1)
        st = _status(np.any(np.diff(srt, axis=1) < EPS_CELL, axis=1))
        return [self._perm(r) if s == OK else None for r, s in zip(ranks.tolist(), st)], st

    def _digit_exact(self, x):
        full = [Fraction(1), *x, Fraction(0)]
        xp = [a - b for a, b in zip(full, full[1:])]
        if len(set(xp)) < len(xp):
            return None
        order = sorted(range(len(xp)), key=lambda j: -xp[j])
        ranks = [0] * len(xp)
        for r, j in enumerate(order, start=1):
            ranks[j] = r
        return self._perm(ranks)

    def _dual_digits(self, ys):
        m = ys.shape[0]
        big_y = np.hstack([np.ones((m, 1)), ys])
        order = np.argsort(big_y, axis=1, kind="stable") + 1
        srt = np.sort(big_y, axis=1)
        st = _status(np.any(np.diff(srt, axis=1) < EPS_CELL, axis=1))
        return [self._perm(r) if s == OK else None for r, s in zip(order.tolist(), st)], st

    def _dual_digit_exact(self, y):
        big_y = [Fraction(1), *y]
        if len(set(big_y)) < len(big_y):
            return None
        return self._perm(j + 1 for j in sorted(range(len(big_y)), key=lambda j: big_y[j]))

    def cell_halfspaces(self, d):
        n = self.n
        inv = d.inverse()

        def xprime(j):  # x'_j = x_{j-1} - x_j, 1-based
            return [(j - 1, 1), (j, -1)]

        out = []
        for r in range(1, n + 1):
            a, b = inv(r), inv(r + 1)
            out.append(hs(n, *xprime(a), *[(i, -c) for i, c in xprime(b)], strict=True))
        return out

    def dual_cell_halfspaces(self, d):
        n = self.n
        # Y_{sigma(1)} < ... < Y_{sigma(n+1)} with Y = (1, y)
        return [hs(n, (d(r + 1) - 1, 1), (d(r) - 1, -1), strict=True) for r in range(1, n + 1)]


@lru_cache(maxsize=None)
def _poincare(sigma: Permutation) -> IntMatrix:
    m = sigma.m
    diff = IntMatrix([[1 if j == i else -1 if j == i + 1 else 0 for j in range(m)] for i in range(m)])
    return sigma.matrix() @ diff


class FlipFlop(FibredSystem):
    """Selmer branch 0 on D_S(0) = {x1 + xn <= 1} and Brun branch n on
    D_B(n) = {x1 + xn > 1}.  Digits are 0 (shown S0) and n (shown Bn)."""

    name = "flipflop"
    selfdual_digits = "all"
    notes = "jump transformation over S0 gives the Garrity-Schweiger map"

    def __init__(self, n: int):
        self.n = n
        self.domain = order_simplex(n)
        self.dual_domain = Box([0] * n, [INF] * n, "R^n_>=")

    def alphabet(self, bound=None):
        return [0, self.n]

    def validate_digit(self, d):
        if isinstance(d, str):
            return self.parse_digit(d)
        if isinstance(d, bool) or d not in (0, self.n):
            raise UnknownDigit(f"{d!r} is not a flip-flop digit (0 or {self.n})")
        return int(d)

    def format_digit(self, d):
        return "S0" if d == 0 else f"B{self.n}"

    def parse_digit(self, token):
        t = token.strip().upper()
        if t in ("S0", "S"):
            return 0
        if t in (f"B{self.n}", "BN", "B"):
            return self.n
        return self.validate_digit(int(t))

    def branch_matrix(self, d):
        d = self.validate_digit(d)
        return _selmer(self.n, 0) if d == 0 else _brun(self.n, self.n)

    def _digits(self, xs):
        s = xs[:, 0] + xs[:, -1] - 1
        d = np.where(s <= 0, 0, self.n)
        st = _status(np.abs(s) < EPS_CELL, xs[:, -1] < EPS_CELL)
        return _to_ints(d, st), st

    def _digit_exact(self, x):
        if x[-1] == 0:
            return None
        return 0 if x[0] + x[-1] <= 1 else self.n

    def _dual_digits(self, ys):
        yn = ys[:, -1]
        d = np.where(yn >= 1, 0, self.n)
        st = _status(np.abs(yn - 1) < EPS_CELL)
        return _to_ints(d, st), st

    def _dual_digit_exact(self, y):
        return 0 if y[-1] >= 1 else self.n

    def cell_halfspaces(self, d):
        n = self.n
        if d == 0:
            return [hs(n, (0, 1), (1, -1), (n, -1)), hs(n, (n, 1), strict=True)]
        return [hs(n, (0, -1), (1, 1), (n, 1), strict=True)]

    def dual_cell_halfspaces(self, d):
        n = self.n
        if d == 0:
            return [hs(n, (0, -1), (n, 1))]
        return [hs(n, (0, 1), (n, -1), strict=True)]


class FlipFlopJump(_UnboundedInt):
    """First return of the flip-flop map to D_B(n): digit k counts the visits
    to S0 before the Brun branch fires.  Branch matrix Bn S0^k."""

    max_visits = 10_000

    def __init__(self, base: FlipFlop):
        self.base = base
        self.n = base.n
        self.name = "flipflop-jump"
        self.domain = base.domain
        self.dual_domain = Box([0] * self.n, [INF] * (self.n - 1) + [1], "R^{n-1}_>= x [0,1)")
        self.notes = "jump transformation of flipflop over S0"

    def branch_matrix(self, d):
        k = self.validate_digit(d)
        return _jump(self.n, k)

    def _digits(self, xs):
        n = self.n
        m = xs.shape[0]
        k = np.zeros(m)
        st = np.full(m, OK, dtype=np.int8)
        pts = xs.copy()
        active = np.arange(m)
        for _ in range(self.max_visits):
            if active.size == 0:
                break
            digits, s = self.base._digits(pts[active])
            st[active[s != OK]] = BOUNDARY
            is_s0 = np.array([d == 0 for d in digits]) & (s == OK)
            active = active[is_s0]
            k[active] += 1
            # S0 acts by x -> x / (1 - xn)
            pts[active] = pts[active] / (1 - pts[active, n - 1])[:, None]
        else:
            st[active] = BOUNDARY
        return _to_ints(k, st), st

    def _digit_exact(self, x):
        k = 0
        for _ in range(self.max_visits):
            d = self.base._digit_exact(x)
            if d is None:
                return None
            if d == self.n:
                return k
            x = tuple(v / (1 - x[-1]) for v in x)
            k += 1
        return None

    def _dual_digits(self, ys):
        return GarritySchweiger(self.n)._dual_digits(ys)

    def _dual_digit_exact(self, y):
        return GarritySchweiger(self.n)._dual_digit_exact(y)

    def cell_halfspaces(self, d):
        return GarritySchweiger(self.n).cell_halfspaces(d)

    def dual_cell_halfspaces(self, d):
        return GarritySchweiger(self.n).dual_cell_halfspaces(d)


@lru_cache(maxsize=None)
def _jump(n: int, k: int) -> IntMatrix:
    return _brun(n, n) @ (_selmer(n, 0) ** k)


def jump(system: FibredSystem) -> FibredSystem:
    """Jump transformation of the flip-flop map over its S0 cell."""
    if not isinstance(system, FlipFlop):
        raise UnknownAlgorithm(f"the jump transformation is defined for flipflop, not {system.name}")
    return FlipFlopJump(system)


ALGORITHMS = {
    "gauss": Gauss,
    "gs": GarritySchweiger,
    "selmer": Selmer,
    "brun": Brun,
    "brun-mult": BrunMultiplicative,
    "poincare": Poincare,
    "flipflop": FlipFlop,
}

MAX_N = 9


@lru_cache(maxsize=None)
def registry(name: str, n: int = 2, restricted: bool = True) -> FibredSystem:
    """Look up an algorithm by name and dimension."""
    key = name.strip().lower()
    if key not in ALGORITHMS:
        raise UnknownAlgorithm(f"unknown algorithm {name!r}; known: {', '.join(ALGORITHMS)}")
    if key == "gauss":
        if n != 1:
            raise UnsupportedDimension("gauss is one-dimensional (n=1)")
        return Gauss()
    if not 2 <= n <= MAX_N:
        raise UnsupportedDimension(f"{key} needs 2 <= n <= {MAX_N}, got {n}")
    if key == "selmer":
        return Selmer(n, restricted=restricted)
    return ALGORITHMS[key](n)
