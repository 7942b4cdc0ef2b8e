from fractions import Fraction
from xml.etree import ElementTree

import pytest

from mcflab.errors import UnsupportedDimension
from mcflab.figures import area, clip, partition
from mcflab.systems import dualize, registry

SVG = "{http://www.w3.org/2000/svg}"


def labels(fig):
    return sorted(c.label for c in fig.cells)


def test_clip_and_area():
    square = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(1), Fraction(1)), (Fraction(0), Fraction(1))]
    assert area(square) == 1
    half = clip(square, (Fraction(1), Fraction(-1), Fraction(-1)))  # 1 - x - y >= 0
    assert area(half) == Fraction(1, 2)
    assert clip(square, (Fraction(-3), Fraction(1), Fraction(1))) == []


def test_gs_first_level():
    fig = partition(registry("gs", 2), 1)
    assert labels(fig) == ["0", "1", "2"]
    assert len(fig.tail) >= 3 and fig.tail_label == "≥3"
    assert fig.tiling_error() < 1e-3


def test_selmer_second_level():
    fig = partition(registry("selmer", 2), 2)
    assert labels(fig) == ["11", "12", "21", "22"]


def test_selmer_unrestricted_first_level():
    fig = partition(registry("selmer", 2, restricted=False), 1)
    assert labels(fig) == ["0", "1", "2"]
    assert fig.tiling_error() < 1e-3


def test_poincare_first_level():
    fig = partition(registry("poincare", 2), 1)
    assert labels(fig) == sorted(["e", "(12)", "(23)", "(123)", "(13)", "(132)"])
    assert fig.tiling_error() == 0


@pytest.mark.parametrize("name", ["gs", "selmer", "brun", "poincare", "flipflop", "brun-mult"])
def test_first_level_tiles_the_domain(name):
    fig = partition(registry(name, 2), 1, bound=3)
    assert fig.tiling_error() < 1e-3


def test_dual_figures_clip_at_frame():
    fig = partition(dualize(registry("gs", 2)), 1, bound=2, frame=3)
    assert fig.cells and max(p[0] for p in fig.domain) == 3
    assert fig.tiling_error() < 1e-3


def test_svg_is_well_formed():
    fig = partition(registry("poincare", 2), 1)
    root = ElementTree.fromstring(fig.svg())
    assert root.tag == SVG + "svg" and root.get("version") == "1.1"
    cells = [p for p in root.iter(SVG + "polygon") if p.get("class") == "cell"]
    assert sorted(p.get("data-label") for p in cells) == labels(fig)


def test_planar_only():
    with pytest.raises(UnsupportedDimension):
        partition(registry("gs", 3), 1)
    with pytest.raises(ValueError):
        partition(registry("gs", 2), 4)
