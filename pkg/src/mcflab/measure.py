"""Duality kernel, invariant densities and Monte Carlo cylinder measures.

For a full system with dual domain B#, the invariant density is
``h(x) = integral over B# of K(x, y) dy`` with
``K(x, y) = (1 + <x, y>)^-(n+1)``.  Over a box this has a closed form (a
corner sum); over a simplex S it is ``vol(S) / prod_v (1 + <v, y>)``.
Measures are unnormalized throughout.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import montecarlo
from .errors import DivergentIntegral, NonFullSystem, SingularPoint
from .projlin import IntMatrix, act_exact, act_many, jacobian_many
from .systems import Box, FibredSystem, Simplex, dualize
from .systems.base import DualSystem
from .systems.domains import sample_simplex, simplex_volume

__all__ = [
    "MeasureEstimate",
    "SymmetryVerdict",
    "cylinder_measure",
    "density",
    "density_many",
    "kernel",
    "kernel_box_integral",
    "kernel_duality_residual",
    "polar_measure",
    "symmetry_test",
]

EPS_AXIS = 1e-9
METHODS = ("change-of-variables", "direct-polytope")


def resolve_method(system: FibredSystem, method: str | None) -> str:
    """``auto`` picks direct-polytope on simplicial domains (lower variance)
    and change-of-variables otherwise."""
    if method in (None, "auto"):
        return "direct-polytope" if isinstance(system.domain, Simplex) else "change-of-variables"
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from auto, {', '.join(METHODS)}")
    return method


def kernel(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    return (1.0 + sum(a * b for a, b in zip(x, y))) ** (-(n + 1))


def kernel_many(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    xs, ys = np.atleast_2d(xs), np.atleast_2d(ys)
    return (1.0 + np.sum(xs * ys, axis=1)) ** (-(xs.shape[1] + 1))


def _as_box(box) -> Box:
    if isinstance(box, Box):
        return box
    lower, upper = zip(*box)
    return Box(lower, upper)


def kernel_box_integral_many(xs: np.ndarray, box: Box, eps_axis: float = EPS_AXIS) -> np.ndarray:
    """Row-wise integral of K(x, .) over ``box``; +inf where it diverges.

    Finite axes with ``x_i < eps_axis`` are integrated as if ``x_i = 0``,
    which contributes the width of the axis and leaves the exponent alone.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    m, n = xs.shape
    lo = np.array(box.lower)
    hi = np.array(box.upper)
    infinite = ~np.isfinite(hi)
    degenerate = (xs < eps_axis) & ~infinite
    divergent = np.any((xs <= 0) & infinite, axis=1)
    xe = np.where(degenerate, 0.0, xs)
    active = n - degenerate.sum(axis=1)
    power = n + 1 - active

    total = np.zeros(m)
    for corner in itertools.product((False, True), repeat=n):
        up = np.array(corner)
        if np.any(up & infinite):
            continue  # (1 + inf)^-p = 0
        use = ~np.any(degenerate & up, axis=1)
        c = np.where(up, hi, lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            term = (1.0 + xe @ c) ** (-power)
        total += np.where(use, term, 0.0) * (-1) ** int(up.sum())

    ratio = np.array([math.factorial(n - a) / math.factorial(n) for a in range(n + 1)])[active]
    scale = np.prod(np.where(degenerate, 1.0, np.where(divergent[:, None], 1.0, xs)), axis=1)
    widths = np.prod(np.where(degenerate, np.where(infinite, 1.0, hi - lo), 1.0), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = ratio * widths * total / scale
    out[divergent] = np.inf
    return out


def kernel_box_integral(x: Sequence[float], box) -> float:
    """Integral of K(x, y) over a box (upper bounds may be infinite)."""
    box = _as_box(box)
    val = float(kernel_box_integral_many(np.array([x], dtype=float), box)[0])
    if math.isinf(val):
        raise DivergentIntegral(f"the kernel integral diverges at x={tuple(x)}: x_i = 0 on an infinite axis")
    return val


def simplex_kernel_integral_many(ys: np.ndarray, simplex: Simplex) -> np.ndarray:
    """Row-wise integral of K(., y) over a simplex: vol / prod_v (1 + <v, y>)."""
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    verts = np.array([[float(c) for c in v] for v in simplex.vertices])
    return float(simplex.volume) / np.prod(1.0 + ys @ verts.T, axis=1)


def _density_fn(system: FibredSystem):
    if not system.is_full:
        raise NonFullSystem(f"{system.name} is not full; its density is not the kernel integral over the dual domain")
    dual = system.dual_domain
    if isinstance(dual, Box):
        return lambda xs: kernel_box_integral_many(xs, dual)
    return lambda xs: simplex_kernel_integral_many(xs, dual)


def density_many(system: FibredSystem, xs: np.ndarray) -> np.ndarray:
    return _density_fn(system)(xs)


def density(system: FibredSystem, x: Sequence[float]) -> float:
    """Unnormalized invariant density of a full system at ``x``."""
    val = float(density_many(system, np.array([x], dtype=float))[0])
    if math.isinf(val):
        raise DivergentIntegral(f"the density of {system.name} is infinite at {tuple(x)}")
    return val


# -- integrability -------------------------------------------------------------


def _singular_axes(system: FibredSystem) -> tuple[int, ...]:
    dual = system.dual_domain
    return dual.infinite_axes if isinstance(dual, Box) else ()


def is_divergent(system: FibredSystem, v: IntMatrix) -> bool:
    """Power-counting test for the density integral over the cylinder V(domain).

    The density of a box-dual system blows up like ``1 / prod x_i`` over the
    infinite axes.  With the cylinder's homogeneous vertex matrix M = V W,
    the integral diverges iff some set S of vertices has at least
    ``n + 1 - |S|`` singular coordinates vanishing on all of S.
    """
    if isinstance(system, DualSystem):
        return False  # handled through the base system by the caller
    axes = _singular_axes(system)
    if not axes:
        return False
    dom = system.domain
    n = system.n
    cols = [[Fraction(1), *v] for v in dom.vertices]
    zero = [[sum(Fraction(a) * c for a, c in zip(v.rows[i + 1], col)) == 0 for col in cols] for i in axes]
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n + 1), size):
            vanish = sum(1 for row in zero if all(row[k] for k in subset))
            if vanish >= n + 1 - size:
                return True
    return False


# -- Monte Carlo ----------------------------------------------------------------


@dataclass(frozen=True)
class MeasureEstimate:
    value: float
    stderr: float
    samples: int
    seed: int
    method: str
    system: str = ""
    digits: tuple = ()

    @property
    def relative_stderr(self) -> float:
        return self.stderr / self.value if self.value else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d["digits"] = list(self.digits)
        return d


def _change_of_variables(system: FibredSystem, v: IntMatrix):
    dens = _density_fn(system)
    dom = system.domain

    def integrand(rng, m):
        xs, w = dom.sample(rng, m)
        ys, den = act_many(v, xs)
        g = dens(ys) * jacobian_many(v, xs, den) * w
        g[~np.isfinite(g)] = 0.0  # singular set, measure zero
        return g

    return integrand


def _direct_polytope(system: FibredSystem, v: IntMatrix):
    dom = system.domain
    if not isinstance(dom, Simplex):
        raise ValueError(f"direct-polytope needs a bounded simplicial domain; {system.name} has a {dom.kind}")
    dens = _density_fn(system)
    verts = [act_exact(v, p) for p in dom.vertices]
    vol = float(simplex_volume(verts))
    vf = np.array([[float(c) for c in p] for p in verts])

    def integrand(rng, m):
        g = dens(sample_simplex(vf, rng, m)) * vol
        g[~np.isfinite(g)] = 0.0
        return g

    return integrand


def cylinder_measure(
    system: FibredSystem,
    digits: Sequence,
    samples: int = montecarlo.DEFAULT_SAMPLES,
    seed: int | None = None,
    method: str = "auto",
    workers: int = 1,
) -> MeasureEstimate:
    """Monte Carlo estimate of the invariant measure of a cylinder.

    An empty digit string measures the whole domain.
    """
    if seed is None:
        seed = montecarlo.default_seed()
    method = resolve_method(system, method)
    if not system.is_full:
        raise NonFullSystem(f"{system.name} is not full; cylinder measures are not available")
    digits = tuple(digits)
    spec = system.cylinder(digits)
    if isinstance(system, DualSystem):
        base = system.base
        divergent = is_divergent(base, base.cylinder(digits[::-1], check=False).map)
    else:
        divergent = is_divergent(system, spec.map)
    if divergent:
        raise DivergentIntegral(
            f"the closure of {system.name} cylinder {[system.format_digit(d) for d in digits]} "
            "meets the singular set of the density; its measure is infinite"
        )
    if method == "change-of-variables":
        integrand = _change_of_variables(system, spec.map)
    else:
        integrand = _direct_polytope(system, spec.map)
    mom = montecarlo.run(integrand, samples, seed, workers=workers)
    return MeasureEstimate(
        value=mom.mean,
        stderr=mom.stderr,
        samples=samples,
        seed=seed,
        method=method,
        system=system.name,
        digits=tuple(system.format_digit(d) for d in digits),
    )


def polar_measure(system: FibredSystem, digits: Sequence, **params) -> MeasureEstimate:
    """The measure of the reversed cylinder."""
    return cylinder_measure(system, tuple(digits)[::-1], **params)


@dataclass(frozen=True)
class SymmetryVerdict:
    forward: MeasureEstimate
    reversed: MeasureEstimate
    z: float
    verdict: str
    warning: bool
    z_crit: float

    def to_dict(self) -> dict:
        return {
            "forward": self.forward.to_dict(),
            "reversed": self.reversed.to_dict(),
            "z": self.z,
            "verdict": self.verdict,
            "warning": self.warning,
            "z_crit": self.z_crit,
        }


def z_score(a: MeasureEstimate, b: MeasureEstimate) -> float:
    se = math.hypot(a.stderr, b.stderr)
    diff = abs(a.value - b.value)
    if se == 0:
        return 0.0 if diff == 0 else math.inf
    return diff / se


# seed tag for the reversed estimate; keeps the two estimates independent
REVERSED_STREAM = 1


def symmetry_test(
    system: FibredSystem,
    digits: Sequence,
    samples: int = montecarlo.DEFAULT_SAMPLES,
    seed: int | None = None,
    method: str = "auto",
    z_crit: float = 5.0,
    workers: int = 1,
) -> SymmetryVerdict:
    """Compare a cylinder with its reversal. ``violated`` iff z > z_crit;
    a z between 3 and z_crit is reported as consistent with a warning."""
    if seed is None:
        seed = montecarlo.default_seed()
    digits = tuple(digits)
    fwd = cylinder_measure(system, digits, samples, seed, method, workers)
    rev = cylinder_measure(system, digits[::-1], samples, montecarlo.derive_seed(seed, REVERSED_STREAM), method, workers)
    z = z_score(fwd, rev)
    return SymmetryVerdict(fwd, rev, z, "violated" if z > z_crit else "consistent", 3.0 < z <= z_crit, z_crit)


# -- kernel identity --------------------------------------------------------------


def kernel_duality_residuals(
    system: FibredSystem, digits: Sequence, xs: np.ndarray, ys: np.ndarray, relative: bool = False
) -> np.ndarray:
    """Row-wise |K(Vx, y) w(V; x) - K(x, V# y) w(V#; y)| with V the cylinder map
    of ``digits`` and V# the dual cylinder map of the reversed string.
    ``relative`` divides by the left-hand side."""
    digits = tuple(digits)
    v = system.cylinder(digits, check=False).map
    vd = dualize(system).cylinder(digits[::-1], check=False).map
    vx, den_x = act_many(v, xs)
    vy, den_y = act_many(vd, ys)
    lhs = kernel_many(vx, ys) * jacobian_many(v, xs, den_x)
    rhs = kernel_many(xs, vy) * jacobian_many(vd, ys, den_y)
    res = np.abs(lhs - rhs)
    return res / lhs if relative else res


def kernel_duality_residual(system: FibredSystem, digits: Sequence, x: Sequence[float], y: Sequence[float]) -> float:
    val = float(kernel_duality_residuals(system, digits, np.array([x], float), np.array([y], float))[0])
    if math.isnan(val):
        raise SingularPoint(f"a cylinder map sends x={tuple(x)} or y={tuple(y)} to infinity")
    return val
