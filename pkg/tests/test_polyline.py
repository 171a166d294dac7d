from __future__ import annotations

import itertools

import pytest

from dmsx.curves import CurveWalk, dual_arcs
from dmsx.errors import InternalCheckFailure
from dmsx.harness import sample_extensions
from dmsx.intersect import interior_count, self_intersections
from dmsx.polyline import draw, interior_crossings

from conftest import orbit_of, surf_of


@pytest.mark.parametrize("name", ["disk_a(2)", "disk_a(3)", "annulus(1,1)", "annulus(2,1)"])
def test_polyline_agrees_with_strip_model(name):
    surf = surf_of(name)
    curves = list(orbit_of(name, 1))
    partners = sample_extensions(surf, curves, 10, 0)
    for a, b in itertools.product(curves, curves + partners):
        assert interior_crossings(surf, a, b) == interior_count(surf, a, b)
        assert interior_crossings(surf, b, a) == interior_count(surf, b, a)


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(1,1)"])
def test_polyline_between_partners_never_miscounts(name):
    """Two self-crossing curves may admit no consistent order of points along
    an arc; the drawing then refuses instead of returning a count."""
    surf = surf_of(name)
    partners = sample_extensions(surf, list(orbit_of(name, 1)), 30, 0)
    for a, b in itertools.product(partners, partners):
        try:
            n = interior_crossings(surf, a, b)
        except InternalCheckFailure:
            assert self_intersections(surf, a) and self_intersections(surf, b)
            continue
        assert n == interior_count(surf, a, b)


def test_disjoint_duals_do_not_meet(disk3):
    d = dual_arcs(disk3)
    assert interior_crossings(disk3, d[0], d[2]) == 0


def test_full_turn_meets_its_partner_twice(disk2):
    """A strand winding once around a decoration against a curve through the
    same polygon: the slight spiral keeps the two crossings apart."""
    loop = CurveWalk(0, 0, ((0, 1), (0, 0)), (2,))
    through = CurveWalk(0, 2, ((0, 1), (1, 1)), (1,))
    assert interior_crossings(disk2, loop, through) == interior_count(disk2, loop, through)


def test_drawing_is_exact(disk2):
    a, b = dual_arcs(disk2)
    lines = draw(disk2, a, b)
    for polylines in lines.values():
        for _, pts in polylines:
            assert all(type(x).__name__ == "Fraction" for p in pts for x in p)
