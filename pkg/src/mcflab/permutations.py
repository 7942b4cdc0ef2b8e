"""Permutations of {1, ..., m} in one-line notation.

``Permutation((2, 3, 1))`` is the map 1->2, 2->3, 3->1, written ``(123)`` in
cycle notation.  Composition is right to left: ``(s * r)(i) == s(r(i))``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .projlin import IntMatrix

__all__ = ["Permutation", "all_permutations", "involutions", "parse_cycles", "w0_coset"]


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(v) for v in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images!r} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def reversal(cls, m: int) -> "Permutation":
        """The longest element w0: i -> m + 1 - i."""
        return cls(tuple(range(m, 0, -1)))

    @property
    def m(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.m != other.m:
            raise ValueError("permutations act on sets of different size")
        return Permutation(tuple(self(other(i)) for i in range(1, self.m + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.m
        for i, v in enumerate(self.images, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def is_involution(self) -> bool:
        return all(self(self(i)) == i for i in range(1, self.m + 1))

    def matrix(self) -> IntMatrix:
        """Permutation matrix P with P[sigma(j), j] = 1, so that
        ``(P v)[sigma(j)] = v[j]``."""
        rows = [[0] * self.m for _ in range(self.m)]
        for j, v in enumerate(self.images):
            rows[v - 1][j] = 1
        return IntMatrix(rows)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.m + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "e"
        sep = "," if self.m > 9 else ""
        return "".join("(" + sep.join(str(v) for v in c) + ")" for c in cyc)


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, m: int) -> Permutation:
    """Parse cycle notation such as ``"(123)"``, ``"(12)(34)"`` or ``"e"``."""
    text = text.strip()
    images = list(range(1, m + 1))
    if text in ("e", "id", "()"):
        return Permutation(tuple(images))
    if _CYCLE.sub("", text).strip():
        raise ValueError(f"cannot parse permutation {text!r}")
    # cycles compose right to left
    perm = Permutation(tuple(images))
    for body in reversed(_CYCLE.findall(text)):
        body = body.strip()
        if "," in body or " " in body:
            elems = [int(t) for t in re.split(r"[,\s]+", body) if t]
        else:
            elems = [int(ch) for ch in body]
        if len(set(elems)) != len(elems) or any(not 1 <= e <= m for e in elems):
            raise ValueError(f"bad cycle ({body}) for S_{m}")
        cyc = list(range(1, m + 1))
        for a, b in zip(elems, elems[1:] + elems[:1]):
            cyc[a - 1] = b
        perm = Permutation(tuple(cyc)) * perm
    return perm


def all_permutations(m: int) -> Iterator[Permutation]:
    for p in itertools.permutations(range(1, m + 1)):
        yield Permutation(p)


def ranks_descending(values: np.ndarray) -> np.ndarray:
    """Row-wise one-line permutation sending position j to its 1-based rank
    in nonincreasing order."""
    order = np.argsort(-values, axis=1, kind="stable")
    ranks = np.empty_like(order)
    rows = np.arange(values.shape[0])[:, None]
    ranks[rows, order] = np.arange(1, values.shape[1] + 1)
    return ranks


def from_rows(rows: np.ndarray) -> list[Permutation]:
    return [Permutation(tuple(r)) for r in rows.tolist()]


def involutions(m: int) -> list[Permutation]:
    """All sigma in S_m with sigma^2 = e, by brute force."""
    return [p for p in all_permutations(m) if p.is_involution()]


def w0_coset(m: int) -> list[Permutation]:
    w0 = Permutation.reversal(m)
    return sorted(w0 * s for s in involutions(m))
