"""Exact integer matrices and their fractional-linear action on R^n.

A point ``x = (x_1, ..., x_n)`` is lifted to homogeneous coordinates
``X = (1, x_1, ..., x_n)``; index 0 is the homogeneous one.  A matrix ``M``
acts by ``y_i = (M X)_i / (M X)_0``.  Matrix entries are Python ints, so
products of many branch matrices never overflow.  Points are floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NotUnimodular, SingularPoint

__all__ = [
    "IntMatrix",
    "act",
    "act_exact",
    "act_many",
    "compose",
    "identity",
    "inverse",
    "jacobian",
    "jacobian_many",
    "transpose",
]


@dataclass(frozen=True)
class IntMatrix:
    """Square integer matrix of side ``dim + 1`` acting on R^dim."""

    rows: tuple[tuple[int, ...], ...]
    _hash: int = field(init=False, repr=False, compare=False)

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        m = len(rows)
        if m < 2 or any(len(r) != m for r in rows):
            raise DimensionMismatch(f"expected a square matrix of side >= 2, got {rows!r}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_hash", hash(rows))

    def __hash__(self) -> int:
        return self._hash

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        """Dimension n of the space the matrix acts on."""
        return len(self.rows) - 1

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return compose(self, other)

    def __pow__(self, k: int) -> "IntMatrix":
        if k < 0:
            return inverse(self) ** (-k)
        result = identity(self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "IntMatrix":
        return transpose(self)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @cached_property
    def det(self) -> int:
        return _bareiss_det(self.rows)

    @cached_property
    def array(self) -> np.ndarray:
        """Float copy used by the batch evaluators."""
        return np.array(self.rows, dtype=float)

    def max_abs(self) -> int:
        return max(abs(v) for r in self.rows for v in r)

    def is_symmetric(self) -> bool:
        return self == transpose(self)

    def __str__(self) -> str:
        width = max(len(str(v)) for r in self.rows for v in r)
        return "\n".join(" ".join(str(v).rjust(width) for v in r) for r in self.rows)


def identity(n: int) -> IntMatrix:
    return IntMatrix([[int(i == j) for j in range(n + 1)] for i in range(n + 1)])


def _bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    a = [list(r) for r in rows]
    m = len(a)
    sign = 1
    prev = 1
    for k in range(m - 1):
        if a[k][k] == 0:
            for r in range(k + 1, m):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, m):
            for j in range(k + 1, m):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[m - 1][m - 1]


def compose(m1: IntMatrix, m2: IntMatrix) -> IntMatrix:
    """Matrix product; ``act(compose(m1, m2), x) == act(m1, act(m2, x))``."""
    if m1.size != m2.size:
        raise DimensionMismatch(f"cannot compose {m1.size}x{m1.size} with {m2.size}x{m2.size}")
    cols = list(zip(*m2.rows))
    return IntMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in m1.rows])


def transpose(m: IntMatrix) -> IntMatrix:
    return IntMatrix(zip(*m.rows))


def adjugate(m: IntMatrix) -> IntMatrix:
    """Integer adjugate, so that ``adjugate(m) @ m == det(m) * I``."""
    size = m.size
    frac = [[Fraction(v) for v in r] for r in m.rows]
    inv = _fraction_inverse(frac)
    d = m.det
    return IntMatrix([[int(inv[i][j] * d) for j in range(size)] for i in range(size)])


def inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    d = m.det
    if abs(d) != 1:
        raise NotUnimodular(f"determinant {d} is not +-1; the inverse is not integral")
    adj = adjugate(m)
    return IntMatrix([[d * v for v in r] for r in adj.rows])


def _fraction_inverse(a: list[list[Fraction]]) -> list[list[Fraction]]:
    size = len(a)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(size)] for i, row in enumerate(a)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if pivot is None:
            raise NotUnimodular("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]


def primitive(m: IntMatrix) -> IntMatrix:
    """Divide out the content and make the first nonzero entry positive."""
    g = 0
    for r in m.rows:
        for v in r:
            g = gcd(g, v)
    if g == 0:
        return m
    first = next(v for r in m.rows for v in r if v != 0)
    s = 1 if first > 0 else -1
    return IntMatrix([[s * v // g for v in r] for r in m.rows])


def _check_point(m: IntMatrix, x: Sequence[float]) -> None:
    if len(x) != m.dim:
        raise DimensionMismatch(f"point of length {len(x)} for a matrix acting on R^{m.dim}")


def denominator(m: IntMatrix, x: Sequence[float]) -> float:
    _check_point(m, x)
    r0 = m.rows[0]
    return float(r0[0]) + sum(float(a) * float(v) for a, v in zip(r0[1:], x))


def act(m: IntMatrix, x: Sequence[float]) -> tuple[float, ...]:
    """Fractional-linear image of ``x`` under ``m``."""
    den = denominator(m, x)
    if den == 0.0:
        raise SingularPoint(f"{tuple(x)} is sent to infinity")
    return tuple(
        (float(r[0]) + sum(float(a) * float(v) for a, v in zip(r[1:], x))) / den
        for r in m.rows[1:]
    )


def act_exact(m: IntMatrix, x: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
    """Rational image of a rational point; used for cell vertices."""
    _check_point(m, x)
    hom = [Fraction(1), *(Fraction(v) for v in x)]
    img = [sum(a * v for a, v in zip(r, hom)) for r in m.rows]
    if img[0] == 0:
        raise SingularPoint(f"{tuple(x)} is sent to infinity")
    return tuple(v / img[0] for v in img[1:])


def jacobian(m: IntMatrix, x: Sequence[float]) -> float:
    """Absolute Jacobian determinant of ``act(m, .)`` at ``x``.

    For ``|det m| = 1`` this is ``|den|^-(n+1)``.
    """
    den = denominator(m, x)
    if den == 0.0:
        raise SingularPoint(f"{tuple(x)} is sent to infinity")
    return abs(m.det) * abs(den) ** (-(m.dim + 1))


def _homogeneous(m: IntMatrix, xs: np.ndarray) -> np.ndarray:
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[1] != m.dim:
        raise DimensionMismatch(f"points of width {xs.shape[1]} for a matrix acting on R^{m.dim}")
    a = m.array
    return a[:, 0] + xs @ a[:, 1:].T


def act_many(m: IntMatrix, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Batch action. Returns ``(images, denominators)``; rows with a zero
    denominator come back as NaN instead of raising."""
    hom = _homogeneous(m, xs)
    den = hom[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        ys = hom[:, 1:] / den[:, None]
    ys[den == 0.0] = np.nan
    return ys, den


def jacobian_many(m: IntMatrix, xs: np.ndarray, den: np.ndarray | None = None) -> np.ndarray:
    if den is None:
        den = _homogeneous(m, xs)[:, 0]
    with np.errstate(divide="ignore"):
        return abs(m.det) * np.abs(den) ** (-(m.dim + 1))
