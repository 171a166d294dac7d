from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmsx.algebra import enumerate_arrows
from dmsx.errors import (
    BadParameters,
    DegreeSumViolation,
    MultipleBoundarySides,
    NotASurface,
    SlideDegenerate,
    UnknownArc,
)
from dmsx.surface import (
    BOUNDARY,
    ArcSide,
    Polygon,
    SurfaceSpec,
    all_seeds,
    annulus,
    compile_surface,
    disk_a,
    regrade_arc,
    seed_surface,
    self_folded_annulus,
    slide,
    torus1,
    validate_surface,
)


def arrow_table(spec):
    s = compile_surface(spec)
    return sorted(
        (s.arc_ids[a.source], s.arc_ids[a.target], tuple(a.degree), a.loop) for a in enumerate_arrows(spec)
    )


def with_degrees(spec: SurfaceSpec, k: int, degs) -> SurfaceSpec:
    polys = list(spec.polygons)
    polys[k] = Polygon(polys[k].sides, tuple(degs))
    return SurfaceSpec(spec.arcs, tuple(polys), spec.name)


@pytest.mark.parametrize("spec", all_seeds(), ids=lambda s: s.name)
def test_seeds_validate(spec):
    rep = validate_surface(spec)
    assert rep.decorations == rep.polygons == rep.open_marked_points == rep.closed_marked_points
    chi = rep.open_marked_points - (rep.arcs + rep.polygons) + rep.polygons
    assert chi == 2 - 2 * rep.genus - rep.boundary_components


def test_disk_a1():
    rep = validate_surface(disk_a(1))
    assert (rep.genus, rep.boundary_components, rep.decorations) == (0, 1, 2)
    assert rep.arcs == 1
    assert all(p.corner_degrees == (1,) for p in disk_a(1).polygons)


def test_disk_a2_middle_polygon():
    spec = disk_a(2)
    assert len(spec.polygons) == 3
    assert spec.polygons[1].corner_degrees == (1, 1)


def test_degree_sum_rule():
    spec = disk_a(2)
    with pytest.raises(DegreeSumViolation):
        validate_surface(with_degrees(spec, 1, (2, 1)))
    assert validate_surface(with_degrees(spec, 1, (2, 0))).genus == 0


def test_annulus11_counts():
    rep = validate_surface(annulus(1, 1))
    assert (rep.arcs, rep.polygons, rep.genus, rep.boundary_components) == (2, 2, 0, 2)


def test_torus_counts():
    for m in (1, 2):
        rep = validate_surface(torus1(m))
        assert (rep.genus, rep.boundary_components, rep.decorations) == (1, 1, m)


def test_self_folded_warning():
    rep = validate_surface(self_folded_annulus())
    assert rep.self_folded == ["a"]
    assert any("self-folded" in w for w in rep.warnings)
    # hand count: 2 marked points, 2 arcs + 2 boundary segments, 2 polygons
    assert (rep.genus, rep.boundary_components) == (0, 2)
    assert not rep.to_dict()["no_self_folded"]


def test_two_boundary_sides_rejected():
    bad = Polygon((ArcSide(1, False), BOUNDARY, BOUNDARY), (1,))
    spec = SurfaceSpec((1,), (bad, Polygon((ArcSide(1, True), BOUNDARY), (1,))))
    with pytest.raises(MultipleBoundarySides):
        validate_surface(spec)


def test_arc_used_once_rejected():
    spec = SurfaceSpec((1, 2), (Polygon((ArcSide(1, False), ArcSide(2, False), BOUNDARY), (1, 1)),))
    with pytest.raises(NotASurface):
        validate_surface(spec)


def test_inconsistent_orientation_rejected():
    spec = SurfaceSpec(
        (1,),
        (Polygon((ArcSide(1, False), BOUNDARY), (1,)), Polygon((ArcSide(1, False), BOUNDARY), (1,))),
    )
    with pytest.raises(NotASurface):
        validate_surface(spec)


def test_unknown_arc_rejected():
    spec = SurfaceSpec((1,), (Polygon((ArcSide(7, False), BOUNDARY), (1,)),))
    with pytest.raises(UnknownArc):
        validate_surface(spec)


def test_seed_names():
    assert seed_surface("disk_a2") == disk_a(2)
    assert seed_surface("seed:annulus(2,1)") == annulus(2, 1)
    with pytest.raises(BadParameters):
        seed_surface("sphere")
    with pytest.raises(BadParameters):
        disk_a(0)


@pytest.mark.parametrize("spec", all_seeds(), ids=lambda s: s.name)
def test_json_round_trip(spec):
    text = spec.to_json()
    again = SurfaceSpec.from_json(text)
    assert again == spec
    assert again.to_json() == text


def test_regrade_example():
    before = arrow_table(disk_a(2))
    after = arrow_table(regrade_arc(disk_a(2), 1, 1))
    assert (1, 2, (1, 0), False) in before and (2, 1, (1, -1), False) in before
    assert (1, 2, (0, 0), False) in after and (2, 1, (2, -1), False) in after
    pair = [d for s, t, d, loop in after if not loop]
    assert (pair[0][0] + pair[1][0], pair[0][1] + pair[1][1]) == (2, -1)


def test_regrade_zero_is_identity():
    assert regrade_arc(disk_a(3), 2, 0) == disk_a(3)


@given(st.integers(-3, 3), st.sampled_from([1, 2, 3]))
def test_regrade_inverse(k, arc):
    spec = disk_a(3)
    back = regrade_arc(regrade_arc(spec, arc, k), arc, -k)
    assert back == spec


def test_regrade_unknown_arc():
    with pytest.raises(UnknownArc):
        regrade_arc(disk_a(2), 9, 1)


def test_slide_keeps_arrow_count():
    new, sd = slide(disk_a(2), 1, "tail")
    validate_surface(new)
    assert len(arrow_table(new)) == len(arrow_table(disk_a(2)))
    assert new != disk_a(2)


def test_slide_round_trip_restores_degrees():
    spec = disk_a(2)
    once, _ = slide(spec, 1, "tail")
    twice, _ = slide(once, 2, "head")
    assert arrow_table(twice) == arrow_table(spec)


def test_slide_degenerate():
    with pytest.raises(SlideDegenerate):
        slide(disk_a(2), 1, "head")
    with pytest.raises(SlideDegenerate):
        slide(self_folded_annulus(), "a", "head")
