"""Algebraic self-duality: intertwining matrices, exact commutation checks,
sampled cell mappings, brute-force intertwiner search and the permutation
machinery behind the sorted Poincare map.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NoKnownIntertwiner
from .permutations import Permutation, all_permutations, involutions, w0_coset
from .projlin import IntMatrix, act_many, identity, inverse, primitive, transpose
from .systems import OK, FibredSystem, registry

__all__ = [
    "Intertwiner",
    "DualityReport",
    "known_intertwiner",
    "verify_commutation",
    "verify_cell_mapping",
    "search_intertwiner",
    "involutions",
    "w0_coset",
    "involution_criterion_check",
    "dual_check",
]

K_MAX = 50


@dataclass(frozen=True)
class Intertwiner:
    """A witness of self-duality on the digit set ``digits``.

    ``digits`` is "all", "w0-coset" or an explicit tuple.  Closed-form
    intertwiners carry the map and its inverse on row-stacked points.
    """

    system: str
    n: int
    kind: str
    digits: str | tuple
    matrix: IntMatrix | None = None
    label: str = ""
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False, repr=False)
    inverse_func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False, repr=False)

    def apply(self, ys: np.ndarray) -> np.ndarray:
        if self.kind == "matrix":
            return act_many(self.matrix, ys)[0]
        return self.func(np.atleast_2d(ys))

    def apply_inverse(self, xs: np.ndarray) -> np.ndarray:
        if self.kind == "matrix":
            return act_many(inverse(self.matrix), xs)[0]
        return self.inverse_func(np.atleast_2d(xs))

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "n": self.n,
            "kind": self.kind,
            "digits": self.digits if isinstance(self.digits, str) else [str(d) for d in self.digits],
            "matrix": None if self.matrix is None else self.matrix.tolist(),
            "label": self.label,
        }


def _square(n: int, entry: Callable[[int, int], int]) -> IntMatrix:
    return IntMatrix([[entry(i, j) for j in range(n + 1)] for i in range(n + 1)])


def brun_phi(ys: np.ndarray) -> np.ndarray:
    """(1, x2, x2 x3, ..., x2...xn) / (1 + x1)."""
    ys = np.atleast_2d(ys)
    head = np.ones((ys.shape[0], 1))
    prods = np.cumprod(ys[:, 1:], axis=1)
    return np.hstack([head, prods]) / (1.0 + ys[:, :1])


def brun_phi_inverse(zs: np.ndarray) -> np.ndarray:
    zs = np.atleast_2d(zs)
    with np.errstate(divide="ignore", invalid="ignore"):
        first = 1.0 / zs[:, :1] - 1.0
        rest = zs[:, 1:] / zs[:, :-1]
    return np.hstack([first, rest])


def known_intertwiner(name: str, n: int) -> Intertwiner:
    """The intertwining maps known for each algorithm."""
    key = name.strip().lower()
    if key == "gauss":
        return Intertwiner("gauss", 1, "matrix", "all", identity(1), "identity")
    if key == "gs":
        # all-ones above the anti-diagonal of the leading n x n block, 1 in the corner
        m = _square(n, lambda i, j: int((i < n and j < n and i + j <= n - 1) or i == j == n))
        return Intertwiner("gs", n, "matrix", "all", m, "anti-triangular block plus corner")
    if key == "selmer":
        m = _square(n, lambda i, j: 0 if i == j == n else 2 if i + j <= n - 2 else 1)
        return Intertwiner("selmer", n, "matrix", (n - 1, n), m, "2s in the leading block, 0 in the corner")
    if key == "brun":
        if n == 2:
            return Intertwiner("brun", 2, "matrix", "all", IntMatrix([[1, 1, 0], [1, 0, 0], [0, 0, 1]]), "n=2 matrix")
        return Intertwiner("brun", n, "closed-form", (0,), None, "(1, x2, x2 x3, ...) / (1 + x1) on D(0)", brun_phi, brun_phi_inverse)
    if key in ("poincare", "flipflop"):
        m = _square(n, lambda i, j: int(i + j <= n))
        digits = "w0-coset" if key == "poincare" else "all"
        return Intertwiner(key, n, "matrix", digits, m, "ones on and above the anti-diagonal")
    raise NoKnownIntertwiner(f"no intertwiner is known for {name} (n={n})")


def claimed_digits(system: FibredSystem, tw: Intertwiner, bound: int = K_MAX) -> list:
    if tw.digits == "w0-coset":
        return w0_coset(system.n + 1)
    if tw.digits == "all":
        return system.alphabet(bound)
    return list(tw.digits)


# -- commutation ---------------------------------------------------------------


@dataclass(frozen=True)
class CommutationResult:
    digit: str
    passed: bool
    residual: float | None = None  # closed-form checks only


def _sample_cell(system: FibredSystem, d, m: int, rng: np.random.Generator, dual: bool) -> np.ndarray:
    """Interior points of B(d) (or B#(d)): images of domain samples under the
    inverse branch, kept only where the digit function confirms ``d``."""
    a = system.branch_matrix(d)
    v = inverse(transpose(a) if dual else a)
    dom = system.dual_domain if dual else system.domain
    batch = system.dual_digits_batch if dual else system.digits_batch
    out = []
    got = 0
    for _ in range(50):
        xs, _ = dom.sample(rng, max(m, 1024))
        ys, _ = act_many(v, xs)
        ys = ys[np.all(np.isfinite(ys), axis=1)]
        ds, st = batch(ys)
        keep = np.array([s == OK and e == d for e, s in zip(ds, st)], dtype=bool)
        out.append(ys[keep])
        got += int(keep.sum())
        if got >= m:
            break
    return np.concatenate(out)[:m]


def verify_commutation(
    system: FibredSystem,
    tw: Intertwiner,
    digit_probe: Sequence | None = None,
    samples: int = 10_000,
    seed: int = 0,
) -> list[CommutationResult]:
    """Per digit: exact ``A_phi A_T(d)^t == A_T(d) A_phi`` for matrix
    intertwiners; for closed forms, the sampled residual of
    ``phi(T#(y)) - T(phi(y))`` on the dual cell (pass below 1e-10)."""
    probe = claimed_digits(system, tw) if digit_probe is None else list(digit_probe)
    results = []
    if tw.kind == "matrix":
        a_phi = tw.matrix
        for d in probe:
            a = system.branch_matrix(d)
            results.append(CommutationResult(system.format_digit(d), a_phi @ a.T == a @ a_phi))
        return results
    rng = np.random.default_rng(seed)
    for d in probe:
        ys = _sample_cell(system, d, samples, rng, dual=True)
        a = system.branch_matrix(d)
        lhs = tw.apply(act_many(a.T, ys)[0])
        xs = tw.apply(ys)
        ds, st = system.digits_batch(xs)
        ok = np.array([s == OK for s in st], dtype=bool)
        # T acts by the branch of phi(y)'s own digit
        rhs = np.full_like(xs, np.nan)
        for dd in {e for e, s in zip(ds, st) if s == OK}:
            rows = np.array([e == dd for e in ds], dtype=bool) & ok
            rhs[rows] = act_many(system.branch_matrix(dd), xs[rows])[0]
        res = float(np.max(np.abs(lhs[ok] - rhs[ok]))) if ok.any() else math.inf
        results.append(CommutationResult(system.format_digit(d), res < 1e-10, res))
    return results


# -- cell mapping ----------------------------------------------------------------


@dataclass(frozen=True)
class CellMapping:
    digit: str
    forward_in: int
    forward_total: int
    inverse_in: int
    inverse_total: int

    @property
    def passed(self) -> bool:
        return (
            self.forward_total > 0
            and self.forward_in == self.forward_total
            and self.inverse_in == self.inverse_total
        )

    @property
    def forward_fraction(self) -> float:
        return self.forward_in / self.forward_total if self.forward_total else 0.0


def verify_cell_mapping(
    system: FibredSystem,
    tw: Intertwiner,
    digit,
    samples: int = 10_000,
    seed: int = 0,
) -> CellMapping:
    """Push dual-cell samples through phi and count hits in B(d); pull cell
    samples back through phi^-1 and count hits in B#(d).  Images that land
    within the boundary tolerance, or on the singular set, are excluded."""
    rng = np.random.default_rng(seed)
    ys = _sample_cell(system, digit, samples, rng, dual=True)
    xs = tw.apply(ys)
    ds, st = system.digits_batch(xs)
    f_in = sum(1 for e, s in zip(ds, st) if s == OK and e == digit)
    f_tot = sum(1 for s in st if s != 3)

    xs = _sample_cell(system, digit, samples, rng, dual=False)
    ys = tw.apply_inverse(xs)
    ds, st = system.dual_digits_batch(ys)
    i_in = sum(1 for e, s in zip(ds, st) if s == OK and e == digit)
    i_tot = sum(1 for s in st if s != 3)
    return CellMapping(system.format_digit(digit), f_in, f_tot, i_in, i_tot)


# -- search ----------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    matrix: IntMatrix
    digits_passed: int
    digits_probed: int
    cell_fraction: float

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.tolist(),
            "commutes_on": f"{self.digits_passed}/{self.digits_probed}",
            "cell_fraction": self.cell_fraction,
        }


def _symmetric_batch(size: int, values: np.ndarray, prefix: tuple[int, ...]) -> np.ndarray:
    """All symmetric matrices whose upper triangle (row-major) starts with
    ``prefix`` and continues over ``values``."""
    iu = np.triu_indices(size)
    free = len(iu[0]) - len(prefix)
    grid = np.array(list(itertools.product(values, repeat=free)), dtype=np.int64).reshape(-1, free)
    upper = np.hstack([np.tile(np.array(prefix, dtype=np.int64), (grid.shape[0], 1)), grid])
    mats = np.zeros((upper.shape[0], size, size), dtype=np.int64)
    mats[:, iu[0], iu[1]] = upper
    mats[:, iu[1], iu[0]] = upper
    return mats


def search_intertwiner(
    system: FibredSystem,
    entry_bound: int = 1,
    digit_probe: Sequence | None = None,
    sample_budget: int = 2_000,
    workers: int = 1,
    seed: int = 0,
) -> list[Candidate]:
    """Exhaustive search over symmetric integer matrices with entries in
    [-entry_bound, entry_bound].  Survivors commute exactly with every probed
    digit and are nonsingular; they are normalized (gcd, sign), deduplicated
    and ranked by the sampled cell-mapping fraction.  An empty list means no
    intertwiner exists within the bound."""
    if digit_probe is None:
        d = system.selfdual_digits
        if d is None or d == "all":
            digit_probe = system.alphabet(5)
        else:
            digit_probe = sorted(d)
    probe = list(digit_probe)
    size = system.n + 1
    if size > 5 or entry_bound > 3:
        raise ValueError("search is limited to matrices of side <= 5 and entries bounded by 3")
    branches = [np.array(system.branch_matrix(d).rows, dtype=np.int64) for d in probe]
    values = np.arange(-entry_bound, entry_bound + 1)
    n_upper = size * (size + 1) // 2
    n_prefix = max(0, n_upper - 6)
    prefixes = list(itertools.product(values.tolist(), repeat=n_prefix))

    def scan(prefix) -> set[IntMatrix]:
        mats = _symmetric_batch(size, values, prefix)
        keep = np.ones(mats.shape[0], dtype=bool)
        for b in branches:
            lhs = mats @ b.T
            rhs = b @ mats
            keep &= np.all(lhs == rhs, axis=(1, 2))
            if not keep.any():
                return set()
        found = set()
        for m in mats[keep]:
            im = IntMatrix(m.tolist())
            if im.det != 0:
                found.add(primitive(im))
        return found

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(scan, prefixes))
    else:
        parts = [scan(p) for p in prefixes]
    found = set().union(*parts) if parts else set()

    out = []
    for m in sorted(found, key=lambda a: a.rows):
        tw = Intertwiner(system.name, system.n, "matrix", tuple(probe), m, "search candidate")
        hits = total = 0
        for d in probe:
            cm = verify_cell_mapping(system, tw, d, samples=sample_budget, seed=seed)
            hits += cm.forward_in + cm.inverse_in
            total += cm.forward_total + cm.inverse_total
        out.append(Candidate(m, len(probe), len(probe), hits / total if total else 0.0))
    out.sort(key=lambda c: (-c.cell_fraction, c.matrix.max_abs(), c.matrix.rows))
    return out


# -- permutations -------------------------------------------------------------------


def reversal_matrix(m: int) -> IntMatrix:
    return IntMatrix([[int(i + j == m - 1) for j in range(m)] for i in range(m)])


def involution_criterion_check(m: int) -> bool:
    """Brute force over S_m: the permutations whose permutation matrix P
    satisfies ``B P^t == P B`` (B the reversal matrix) are exactly w0 Inv(S_m)."""
    b = reversal_matrix(m)
    hits = {s for s in all_permutations(m) if b @ s.matrix().T == s.matrix() @ b}
    return hits == set(w0_coset(m))


def telephone(m: int) -> int:
    """Involution count by the recurrence I(m) = I(m-1) + (m-1) I(m-2)."""
    a, b = 1, 1
    for k in range(2, m + 1):
        a, b = b, b + (k - 1) * a
    return b


# -- reports ---------------------------------------------------------------------------


@dataclass
class DualityReport:
    system: str
    n: int
    intertwiner: Intertwiner
    commutation: list[CommutationResult]
    cells: list[CellMapping]

    @property
    def verdict(self) -> str:
        ok = all(c.passed for c in self.commutation) and all(c.passed for c in self.cells)
        return "pass" if ok else "fail"

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "n": self.n,
            "intertwiner": self.intertwiner.to_dict(),
            "commutation": [
                {"digit": c.digit, "passed": c.passed, "residual": c.residual} for c in self.commutation
            ],
            "cell_mapping": [
                {
                    "digit": c.digit,
                    "forward": [c.forward_in, c.forward_total],
                    "inverse": [c.inverse_in, c.inverse_total],
                    "passed": c.passed,
                }
                for c in self.cells
            ],
            "verdict": self.verdict,
        }

    def to_markdown(self) -> str:
        cells = {c.digit: c for c in self.cells}
        lines = [
            f"### {self.system} (n={self.n}): {self.verdict}",
            "",
            "| digit | commutation | cell mapping % |",
            "|---|---|---|",
        ]
        for c in self.commutation:
            cm = cells.get(c.digit)
            pct = "-" if cm is None else f"{100 * cm.forward_fraction:.2f}"
            lines.append(f"| {c.digit} | {'pass' if c.passed else 'FAIL'} | {pct} |")
        return "\n".join(lines) + "\n"


def dual_check(
    system: FibredSystem,
    tw: Intertwiner | None = None,
    digit_probe: Sequence | None = None,
    samples: int = 10_000,
    cell_bound: int = 10,
    seed: int = 0,
) -> DualityReport:
    """Exact commutation on the probe plus sampled cell mapping on the first
    ``cell_bound + 1`` probed digits."""
    tw = tw or known_intertwiner(system.name, system.n)
    probe = claimed_digits(system, tw) if digit_probe is None else list(digit_probe)
    comm = verify_commutation(system, tw, probe, seed=seed)
    cells = [verify_cell_mapping(system, tw, d, samples, seed) for d in probe[: cell_bound + 1]]
    return DualityReport(system.name, system.n, tw, comm, cells)


def system_for(tw: Intertwiner) -> FibredSystem:
    return registry(tw.system, tw.n)
