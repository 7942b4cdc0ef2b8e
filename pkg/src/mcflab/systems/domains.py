"""Domains of the fibred systems: bounded simplices and (half-)infinite boxes.

Every domain is described twice: by linear inequalities (membership) and by
a sampler.  Samplers return points together with per-point weights such that
``mean(f(x) * w)`` is an unbiased estimate of the Lebesgue integral of ``f``
over the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

__all__ = ["Halfspace", "Simplex", "Box", "Domain", "order_simplex", "simplex_volume"]

# Cell-boundary tolerance on the defining inequalities.
EPS_CELL = 1e-12


@dataclass(frozen=True)
class Halfspace:
    """``c0 + c1 x1 + ... + cn xn >= 0`` (``> 0`` when strict)."""

    coeffs: tuple[Fraction, ...]
    strict: bool = False

    @classmethod
    def of(cls, *coeffs, strict: bool = False) -> "Halfspace":
        return cls(tuple(Fraction(c) for c in coeffs), strict)

    def value(self, xs: np.ndarray) -> np.ndarray:
        c = np.array([float(v) for v in self.coeffs])
        return c[0] + np.atleast_2d(xs) @ c[1:]

    def value_exact(self, x: Sequence[Fraction]) -> Fraction:
        return self.coeffs[0] + sum(a * Fraction(v) for a, v in zip(self.coeffs[1:], x))


class Domain:
    n: int
    kind: str
    halfspaces: tuple[Halfspace, ...]

    def slack(self, xs: np.ndarray) -> np.ndarray:
        """Smallest constraint value per row (negative means outside)."""
        xs = np.atleast_2d(xs)
        if not self.halfspaces:
            return np.full(xs.shape[0], np.inf)
        return np.min([h.value(xs) for h in self.halfspaces], axis=0)

    def contains(self, xs: np.ndarray, tol: float = EPS_CELL) -> np.ndarray:
        xs = np.atleast_2d(xs)
        return np.all(np.isfinite(xs), axis=1) & (self.slack(xs) >= -tol)

    def describe(self) -> dict:
        raise NotImplementedError


def simplex_volume(vertices: Sequence[Sequence[Fraction]]) -> Fraction:
    v0 = [Fraction(c) for c in vertices[0]]
    rows = [[Fraction(c) - a for c, a in zip(v, v0)] for v in vertices[1:]]
    n = len(v0)
    # Gaussian elimination on rationals
    det = Fraction(1)
    a = [r[:] for r in rows]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return abs(det) / factorial(n)


def sample_simplex(vertices: np.ndarray, rng: np.random.Generator, m: int) -> np.ndarray:
    """Uniform points in the simplex spanned by the rows of ``vertices``.

    Barycentric weights are the spacings of n sorted uniforms.
    """
    k = vertices.shape[0] - 1
    u = np.sort(rng.random((m, k)), axis=1)
    edges = np.concatenate([np.zeros((m, 1)), u, np.ones((m, 1))], axis=1)
    lam = np.diff(edges, axis=1)
    return lam @ vertices


class Simplex(Domain):
    """A bounded n-simplex given by exact vertices and its facet inequalities."""

    kind = "simplex"

    def __init__(self, vertices: Sequence[Sequence], halfspaces: Sequence[Halfspace], name: str = ""):
        self.vertices = tuple(tuple(Fraction(c) for c in v) for v in vertices)
        self.n = len(self.vertices[0])
        if len(self.vertices) != self.n + 1:
            raise ValueError("an n-simplex needs n + 1 vertices")
        self.halfspaces = tuple(halfspaces)
        self.name = name
        self.volume = simplex_volume(self.vertices)
        self._vf = np.array([[float(c) for c in v] for v in self.vertices])

    @property
    def bounded(self) -> bool:
        return True

    def simplices(self) -> list[tuple[tuple[Fraction, ...], ...]]:
        return [self.vertices]

    def sample(self, rng: np.random.Generator, m: int) -> tuple[np.ndarray, np.ndarray]:
        return sample_simplex(self._vf, rng, m), np.full(m, float(self.volume))

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "vertices": [[str(c) for c in v] for v in self.vertices],
            "volume": str(self.volume),
        }


def order_simplex(n: int) -> Simplex:
    """``{1 >= x1 >= ... >= xn >= 0}``; vertex k has k leading ones."""
    verts = [[1] * k + [0] * (n - k) for k in range(n + 1)]
    hs = [Halfspace.of(1, *([-1] + [0] * (n - 1)))]
    for i in range(1, n):
        c = [0] * (n + 1)
        c[i], c[i + 1] = 1, -1
        hs.append(Halfspace.of(*c))
    hs.append(Halfspace.of(*([0] * n + [1])))
    return Simplex(verts, hs, name="order simplex")


class Box(Domain):
    """Product of intervals ``[a_i, b_i]`` with ``b_i`` possibly infinite.

    Infinite axes are sampled through ``u = a + t / (1 - t)`` with ``t``
    uniform on [0, 1); the weight carries the Jacobian ``1 / (1 - t)^2``.
    """

    kind = "box"

    def __init__(self, lower: Sequence[float], upper: Sequence[float], name: str = ""):
        self.lower = tuple(float(a) for a in lower)
        self.upper = tuple(float(b) for b in upper)
        self.n = len(self.lower)
        if any(not b > a for a, b in zip(self.lower, self.upper)):
            raise ValueError("empty box")
        if any(a < 0 for a in self.lower):
            raise ValueError("boxes live in the nonnegative orthant")
        self.name = name
        hs = []
        for i, (a, b) in enumerate(zip(self.lower, self.upper), start=1):
            c = [0] * (self.n + 1)
            c[0], c[i] = -Fraction(a), 1
            hs.append(Halfspace.of(*c))
            if math.isfinite(b):
                c = [0] * (self.n + 1)
                c[0], c[i] = Fraction(b), -1
                hs.append(Halfspace.of(*c))
        self.halfspaces = tuple(hs)

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(b) for b in self.upper)

    @property
    def infinite_axes(self) -> tuple[int, ...]:
        """0-based indices of axes with infinite upper bound."""
        return tuple(i for i, b in enumerate(self.upper) if not math.isfinite(b))

    @property
    def volume(self) -> float:
        return math.prod(b - a for a, b in zip(self.lower, self.upper))

    def sample(self, rng: np.random.Generator, m: int) -> tuple[np.ndarray, np.ndarray]:
        t = rng.random((m, self.n))
        xs = np.empty_like(t)
        w = np.ones(m)
        for i, (a, b) in enumerate(zip(self.lower, self.upper)):
            if math.isfinite(b):
                xs[:, i] = a + (b - a) * t[:, i]
                w *= b - a
            else:
                s = 1.0 - t[:, i]
                xs[:, i] = a + t[:, i] / s
                w /= s * s
        return xs, w

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "name": self.name,
            "lower": list(self.lower),
            "upper": [b if math.isfinite(b) else "inf" for b in self.upper],
        }
