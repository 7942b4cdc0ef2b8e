"""Fibred-system machinery shared by every algorithm in the catalogue."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from .. import projlin
from ..errors import BoundaryPoint, EmptyCylinder, OutOfDomain, SingularPoint, UnknownDigit
from ..permutations import Permutation, parse_cycles
from ..projlin import IntMatrix
from .domains import EPS_CELL, Box, Domain, Halfspace, Simplex

__all__ = [
    "FibredSystem",
    "DualSystem",
    "CylinderSpec",
    "Expansion",
    "OK",
    "OUTSIDE",
    "BOUNDARY",
]

Digit = Hashable  # int | tuple[int, int] | Permutation

# status codes of the batch digit functions
OK, OUTSIDE, BOUNDARY = 0, 2, 3

# orbit points drift off the domain by rounding; beyond this it is an error
DOMAIN_TOL = 1e-9


def hs(n: int, *terms: tuple[int, Any], strict: bool = False) -> Halfspace:
    """Halfspace from ``(index, coefficient)`` pairs. Index 0 is the constant
    term (x_0 = 1) and index ``n + 1`` is dropped (x_{n+1} = 0)."""
    c = [Fraction(0)] * (n + 1)
    for i, v in terms:
        if i <= n:
            c[i] += Fraction(v)
    return Halfspace(tuple(c), strict)


def _is_exact(x: Sequence) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in x)


@dataclass(frozen=True)
class Expansion:
    digits: tuple
    point: tuple
    complete: bool
    reason: str = ""


@dataclass(frozen=True)
class CylinderSpec:
    system: str
    digits: tuple
    map: IntMatrix

    @property
    def depth(self) -> int:
        return len(self.digits)


class FibredSystem:
    """A multidimensional continued fraction given by integer branch matrices.

    Subclasses provide the digit rules (batch float and exact rational),
    the branch matrices and the cell inequalities of both the map and its
    dual.  ``digit_of`` and friends are assembled here.
    """

    name: str = ""
    n: int
    is_full: bool = True
    digit_kind: str = "int"
    domain: Domain
    dual_domain: Domain
    notes: str = ""
    # digit subset D on which self-duality is claimed: a frozenset, "all",
    # or None when no claim is made
    selfdual_digits: frozenset | str | None = None
    # finite alphabets list every digit; unbounded ones are truncated on request
    finite_alphabet: bool = True

    # -- per-system hooks -------------------------------------------------
    def branch_matrix(self, d: Digit) -> IntMatrix:
        raise NotImplementedError

    def _digits(self, xs: np.ndarray) -> tuple[list, np.ndarray]:
        raise NotImplementedError

    def _digit_exact(self, x: tuple[Fraction, ...]) -> Digit:
        raise NotImplementedError

    def _dual_digits(self, ys: np.ndarray) -> tuple[list, np.ndarray]:
        raise NotImplementedError

    def _dual_digit_exact(self, y: tuple[Fraction, ...]) -> Digit:
        raise NotImplementedError

    def cell_halfspaces(self, d: Digit) -> list[Halfspace]:
        raise NotImplementedError

    def dual_cell_halfspaces(self, d: Digit) -> list[Halfspace]:
        raise NotImplementedError

    def alphabet(self, bound: int | None = None) -> list:
        raise NotImplementedError

    def tail_halfspaces(self, bound: int) -> list[Halfspace] | None:
        """Region covered by the digits beyond ``alphabet(bound)``."""
        return None

    def dual_tail_halfspaces(self, bound: int) -> list[Halfspace] | None:
        return None

    def validate_digit(self, d: Digit) -> Digit:
        if d not in set(self.alphabet()):
            raise UnknownDigit(f"{d!r} is not a digit of {self.name} (n={self.n})")
        return d

    # -- digit syntax -------------------------------------------------------
    def format_digit(self, d: Digit) -> str:
        if isinstance(d, Permutation):
            return str(d)
        if isinstance(d, tuple):
            return f"{d[0]}:{d[1]}"
        return str(d)

    def parse_digit(self, token: str) -> Digit:
        token = token.strip()
        if self.digit_kind == "perm":
            d = parse_cycles(token, self.n + 1)
        elif self.digit_kind == "pair":
            i, _, big_n = token.partition(":")
            d = (int(i), int(big_n))
        else:
            d = int(token)
        return self.validate_digit(d)

    # -- digit functions -----------------------------------------------------
    def digits_batch(self, xs: np.ndarray) -> tuple[list, np.ndarray]:
        """Digits of many float points. Returns ``(digits, status)``; digits
        are None wherever status is OUTSIDE or BOUNDARY."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        inside = self.domain.contains(xs, tol=DOMAIN_TOL)
        digits, status = self._digits(np.where(inside[:, None], xs, 0.5))
        status = np.where(inside, status, OUTSIDE)
        return [d if s == OK else None for d, s in zip(digits, status)], status

    def dual_digits_batch(self, ys: np.ndarray) -> tuple[list, np.ndarray]:
        ys = np.atleast_2d(np.asarray(ys, dtype=float))
        inside = self.dual_domain.contains(ys, tol=DOMAIN_TOL)
        digits, status = self._dual_digits(np.where(inside[:, None], ys, 0.5))
        status = np.where(inside, status, OUTSIDE)
        return [d if s == OK else None for d, s in zip(digits, status)], status

    def _single(self, x, domain, batch, exact, what):
        if len(x) != self.n:
            raise OutOfDomain(f"expected {self.n} coordinates, got {len(x)}")
        if _is_exact(x):
            x = tuple(Fraction(v) for v in x)
            if any(h.value_exact(x) < 0 or (h.strict and h.value_exact(x) == 0) for h in domain.halfspaces):
                raise OutOfDomain(f"{tuple(map(str, x))} is outside the {what} of {self.name}")
            d = exact(x)
            if d is None:
                raise BoundaryPoint(f"{tuple(map(str, x))} lies on a cell boundary of {self.name}")
            return d
        digits, status = batch(np.array([x], dtype=float))
        if status[0] == OUTSIDE:
            raise OutOfDomain(f"{tuple(x)} is outside the {what} of {self.name}")
        if status[0] == BOUNDARY:
            raise BoundaryPoint(f"{tuple(x)} is within {EPS_CELL} of a cell boundary of {self.name}")
        return digits[0]

    def digit_of(self, x: Sequence) -> Digit:
        """Digit of a single point. Float points within ``EPS_CELL`` of a cell
        boundary raise BoundaryPoint; exact rational points follow the
        half-open cell inequalities and raise only on a genuine tie."""
        return self._single(tuple(x), self.domain, self.digits_batch, self._digit_exact, "domain")

    def dual_digit_of(self, y: Sequence) -> Digit:
        return self._single(tuple(y), self.dual_domain, self.dual_digits_batch, self._dual_digit_exact, "dual domain")

    # -- dynamics -------------------------------------------------------------
    def step(self, x: Sequence) -> tuple[Digit, tuple]:
        d = self.digit_of(x)
        m = self.branch_matrix(d)
        y = projlin.act_exact(m, x) if _is_exact(x) else projlin.act(m, x)
        return d, y

    def expand(self, x: Sequence, s: int) -> Expansion:
        """First ``s`` digits of the orbit of ``x``; stops early (complete=False)
        at a boundary point or when the orbit leaves the domain."""
        digits = []
        point = tuple(x)
        for _ in range(s):
            try:
                d, point_next = self.step(point)
            except BoundaryPoint:
                return Expansion(tuple(digits), point, False, "boundary")
            except (OutOfDomain, SingularPoint):
                return Expansion(tuple(digits), point, False, "out of domain")
            digits.append(d)
            point = point_next
        return Expansion(tuple(digits), point, True)

    @lru_cache(maxsize=4096)
    def inverse_branch(self, d: Digit) -> IntMatrix:
        return projlin.inverse(self.branch_matrix(d))

    def cylinder(self, digits: Iterable[Digit], check: bool | None = None, seed: int = 0) -> CylinderSpec:
        """Cylinder of a digit string with its composed inverse branch
        ``V(k1) V(k2) ... V(ks)``.

        Non-full systems are checked for admissibility by sampling (set
        ``check`` to force either way).
        """
        digits = tuple(self.validate_digit(d) for d in digits)
        m = projlin.identity(self.n)
        for d in digits:
            m = m @ self.inverse_branch(d)
        spec = CylinderSpec(self.name, digits, m)
        if check is None:
            check = not self.is_full
        if check and digits:
            self._check_nonempty(spec, seed)
        return spec

    def _check_nonempty(self, spec: CylinderSpec, seed: int, samples: int = 4000) -> None:
        rng = np.random.default_rng(seed)
        xs, _ = self.domain.sample(rng, samples)
        ys, _ = projlin.act_many(spec.map, xs)
        ys = ys[np.all(np.isfinite(ys), axis=1)]
        for y in ys[:samples]:
            if self.expand(tuple(y), spec.depth).digits == spec.digits:
                return
        raise EmptyCylinder(
            f"no sampled point expands to {[self.format_digit(d) for d in spec.digits]} in {self.name}"
        )

    def cylinder_vertices(self, spec: CylinderSpec) -> list[tuple[tuple[Fraction, ...], ...]]:
        """Exact vertices of the cylinder simplices (full systems on bounded
        simplicial domains only)."""
        if not isinstance(self.domain, Simplex):
            raise ValueError(f"{self.name} has an unbounded domain")
        return [tuple(projlin.act_exact(spec.map, v) for v in simplex) for simplex in self.domain.simplices()]

    def in_cell(self, d: Digit, xs: np.ndarray, dual: bool = False) -> np.ndarray:
        """Membership in a cell via its defining inequalities."""
        cell = self.dual_cell_halfspaces(d) if dual else self.cell_halfspaces(d)
        dom = self.dual_domain if dual else self.domain
        xs = np.atleast_2d(xs)
        ok = dom.contains(xs, tol=DOMAIN_TOL)
        for h in cell:
            v = h.value(xs)
            ok &= v > 0 if h.strict else v >= 0
        return ok

    # -- descriptors -------------------------------------------------------------
    def describe(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "digit_kind": self.digit_kind,
            "alphabet": "finite" if self.finite_alphabet else "unbounded",
            "alphabet_sample": [self.format_digit(d) for d in self.alphabet(3)][:8],
            "is_full": self.is_full,
            "domain": self.domain.describe(),
            "dual_domain": self.dual_domain.describe(),
            "selfdual_digits": self.selfdual_digits
            if self.selfdual_digits in (None, "all")
            else sorted(self.format_digit(d) for d in self.selfdual_digits),
            "notes": self.notes,
        }

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} n={self.n}>"


class DualSystem(FibredSystem):
    """The dual algorithm: transposed branch matrices on the dual domain."""

    def __init__(self, base: FibredSystem):
        self.base = base
        self.name = base.name + "#"
        self.n = base.n
        self.is_full = base.is_full
        self.digit_kind = base.digit_kind
        self.domain = base.dual_domain
        self.dual_domain = base.domain
        self.finite_alphabet = base.finite_alphabet
        self.selfdual_digits = base.selfdual_digits
        self.notes = f"dual of {base.name}"

    def branch_matrix(self, d):
        return projlin.transpose(self.base.branch_matrix(d))

    def _digits(self, xs):
        return self.base._dual_digits(xs)

    def _digit_exact(self, x):
        return self.base._dual_digit_exact(x)

    def _dual_digits(self, ys):
        return self.base._digits(ys)

    def _dual_digit_exact(self, y):
        return self.base._digit_exact(y)

    def cell_halfspaces(self, d):
        return self.base.dual_cell_halfspaces(d)

    def dual_cell_halfspaces(self, d):
        return self.base.cell_halfspaces(d)

    def alphabet(self, bound=None):
        return self.base.alphabet(bound)

    def tail_halfspaces(self, bound):
        return self.base.dual_tail_halfspaces(bound)

    def dual_tail_halfspaces(self, bound):
        return self.base.tail_halfspaces(bound)

    def validate_digit(self, d):
        return self.base.validate_digit(d)

    def parse_digit(self, token):
        return self.base.parse_digit(token)

    def format_digit(self, d):
        return self.base.format_digit(d)


def dualize(system: FibredSystem) -> FibredSystem:
    if isinstance(system, DualSystem):
        return system.base
    return DualSystem(system)


def dual_box(system: FibredSystem) -> Box | None:
    return system.dual_domain if isinstance(system.dual_domain, Box) else None
