import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from mcflab import measure
from mcflab.errors import DivergentIntegral, NonFullSystem, SingularPoint
from mcflab.measure import (
    cylinder_measure,
    density,
    kernel,
    kernel_box_integral,
    kernel_duality_residual,
    kernel_duality_residuals,
    polar_measure,
    symmetry_test,
)
from mcflab.permutations import parse_cycles
from mcflab.systems import Box, dualize, registry

N = 200_000


def test_kernel_examples():
    assert kernel((0.0, 0.0), (3.0, 5.0)) == 1.0
    assert kernel((1.0,), (1.0,)) == pytest.approx(0.25)
    assert kernel((1.0, 1.0), (1.0, 1.0)) == pytest.approx(1 / 27)


def test_box_integral_examples():
    assert kernel_box_integral((1.0,), [(0, 1)]) == pytest.approx(0.5)
    for x in (0.1, 0.37, 0.9):
        assert kernel_box_integral((x,), [(0, 1)]) == pytest.approx(1 / (1 + x), rel=1e-13)
    assert kernel_box_integral((0.5, 0.5), [(0, math.inf), (0, 1)]) == pytest.approx(2 / 3)


def test_box_integral_divergence():
    with pytest.raises(DivergentIntegral):
        kernel_box_integral((0.0, 0.5), [(0, math.inf), (0, 1)])
    # a vanishing coordinate on a finite axis just contributes the width
    assert kernel_box_integral((0.5, 0.0), [(0, math.inf), (0, 1)]) == pytest.approx(1.0)


@given(
    st.lists(st.floats(0.05, 3.0), min_size=2, max_size=2),
    st.lists(st.sampled_from([1.0, 2.0, math.inf]), min_size=2, max_size=2),
)
@settings(max_examples=25, deadline=None)
def test_corner_sum_matches_quadrature(x, upper):
    box = Box([0, 0], upper)
    val = kernel_box_integral(x, box)
    quad, _ = integrate.dblquad(
        lambda b, a: (1 + x[0] * a + x[1] * b) ** -3, 0, upper[0], 0, upper[1], epsabs=1e-12, epsrel=1e-10
    )
    assert val == pytest.approx(quad, rel=1e-7)


def test_density_examples():
    assert density(registry("gauss", 1), (0.5,)) == pytest.approx(2 / 3)
    assert density(registry("gs", 2), (0.5, 0.5)) == pytest.approx(2 / 3)
    assert density(registry("poincare", 2), (0.5, 0.25)) == pytest.approx(4.0)


def test_density_matches_closed_forms(rng):
    gs = registry("gs", 3)
    xs, _ = gs.domain.sample(rng, 50)
    # 1 / (x1 ... x_{n-1} (1 + x_n)), up to a constant
    ratio = measure.density_many(gs, xs) * xs[:, 0] * xs[:, 1] * (1 + xs[:, 2])
    assert np.ptp(ratio) < 1e-12 * ratio.mean()
    p = registry("poincare", 3)
    xs, _ = p.domain.sample(rng, 50)
    ratio = measure.density_many(p, xs) * np.prod(xs, axis=1)
    assert np.ptp(ratio) < 1e-12 * ratio.mean()


def test_density_needs_full_system():
    with pytest.raises(NonFullSystem):
        density(registry("selmer", 2, restricted=False), (0.5, 0.2))
    with pytest.raises(NonFullSystem):
        cylinder_measure(registry("selmer", 2, restricted=False), [1], 1000)


@pytest.mark.parametrize("a", [1, 2])
def test_gauss_cylinder_measures(a):
    est = cylinder_measure(registry("gauss", 1), [a], N, seed=3)
    target = math.log((1 + 1 / a) / (1 + 1 / (a + 1)))
    assert abs(est.value - target) < 4 * est.stderr


def test_whole_domain_and_first_cell():
    gs = registry("gs", 2)
    total = cylinder_measure(gs, [], N, seed=1)
    first = cylinder_measure(gs, [0], N, seed=1)
    assert math.isfinite(total.value) and 0 < first.value < total.value


def test_methods_agree():
    for name, n, digits in [("gs", 2, [1, 0]), ("selmer", 3, [2, 3]), ("poincare", 2, ["(123)", "e"])]:
        s = registry(name, n)
        digits = [s.parse_digit(d) if isinstance(d, str) else d for d in digits]
        a = cylinder_measure(s, digits, N, seed=5, method="change-of-variables")
        b = cylinder_measure(s, digits, N, seed=6, method="direct-polytope")
        assert abs(a.value - b.value) < 4 * math.hypot(a.stderr, b.stderr)


def test_reproducible_and_worker_independent():
    s = registry("gs", 3)
    a = cylinder_measure(s, [1, 2], 300_000, seed=9)
    b = cylinder_measure(s, [1, 2], 300_000, seed=9, workers=4)
    assert (a.value, a.stderr) == (b.value, b.stderr)
    c = cylinder_measure(s, [1, 2], 300_000, seed=10)
    assert c.value != a.value


def test_divergent_cylinders_are_reported():
    # the Poincare density ~ 1 / (x1 x2) is not integrable near x2 = 0
    p = registry("poincare", 2)
    with pytest.raises(DivergentIntegral):
        cylinder_measure(p, [], 1000)
    for text in ("e", "(12)", "(23)"):
        with pytest.raises(DivergentIntegral):
            cylinder_measure(p, [p.parse_digit(text)], 1000)
    for text in ("(13)", "(123)", "(132)"):
        assert math.isfinite(cylinder_measure(p, [p.parse_digit(text)], 20_000).value)
    assert not measure.is_divergent(registry("gs", 2), registry("gs", 2).cylinder([]).map)


def test_polar_measure():
    g = registry("gauss", 1)
    fw = cylinder_measure(g, [1, 3, 1], N, seed=2)
    assert polar_measure(g, [1, 3, 1], samples=N, seed=2) == fw
    a = cylinder_measure(g, [1, 2], N, seed=2)
    b = polar_measure(g, [1, 2], samples=N, seed=7)
    assert abs(a.value - b.value) < 3 * math.hypot(a.stderr, b.stderr)


def test_symmetry_examples():
    assert symmetry_test(registry("gs", 2), [1, 2], N).verdict == "consistent"
    assert symmetry_test(registry("selmer", 2), [1, 2, 2], N).verdict == "consistent"
    p = registry("poincare", 2)
    v = symmetry_test(p, [parse_cycles("(12)", 3), parse_cycles("(123)", 3)], N)
    assert v.verdict == "violated" and v.z > 5


def test_kernel_duality_examples(rng):
    g = registry("gauss", 1)
    assert kernel_duality_residual(g, [], (0.3,), (0.7,)) == 0.0
    assert abs(kernel_duality_residual(g, [3], (0.3,), (0.7,))) < 1e-12
    gs = registry("gs", 3)
    worst = 0.0
    for _ in range(20):
        digits = list(rng.integers(0, 6, size=3))
        xs = rng.uniform(0, 1, (50, 3))
        ys = rng.uniform(0, 3, (50, 3))
        worst = max(worst, float(np.nanmax(np.abs(kernel_duality_residuals(gs, digits, xs, ys)))))
    assert worst < 1e-10


def test_kernel_duality_singular():
    with pytest.raises(SingularPoint):
        kernel_duality_residual(registry("gauss", 1), [2], (0.3,), (-2.0,))


def test_dual_measures_exist():
    gd = dualize(registry("gs", 2))
    est = cylinder_measure(gd, [2], 50_000, seed=4)
    assert est.value > 0 and math.isfinite(est.relative_stderr)
