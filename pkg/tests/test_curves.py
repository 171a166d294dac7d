from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmsx.bigraded_poly import ONE, XX, ZERO, BiDegree
from dmsx.curves import (
    ClosedArc,
    CurveWalk,
    braid_twist,
    check_walk,
    chis,
    classify,
    curve_from_dict,
    curve_from_json,
    curve_to_dict,
    curve_to_json,
    decompose,
    dual_arc,
    dual_arcs,
    extend,
    grading_offset,
    invert_curve,
    is_admissible,
    loop_crosses_itself,
    normalize,
    same_underlying,
    shift_curve,
    twist_dual,
    zero_level,
)
from dmsx.errors import BadAttachment, EndpointMismatch, InvalidWalk, NotAClosedArc
from dmsx.harness import intersection_number
from dmsx.intersect import q_int_open

from conftest import orbit_of, surf_of

SIDE_DEG = BiDegree(1, -1)


@st.composite
def walks(draw, name: str = "disk_a(3)", max_len: int = 6):
    """Syntactically valid walks, possibly with null or long segments."""
    surf = surf_of(name)
    start = draw(st.integers(0, surf.n_polys - 1))
    pd = surf.polys[start]
    r = draw(st.integers(0, pd.m - 1))
    passages, sweeps = [], []
    P, rank = start, r
    for k in range(draw(st.integers(1, max_len))):
        if k:
            m = surf.polys[P].m
            t = draw(st.integers(-2 * m, 2 * m))
            sweeps.append(t)
            rank = (rank + t) % m
        arc = surf.polys[P].arcs[rank]
        slot = 0 if surf.side(arc, 0) != (P, rank) else 1
        passages.append((arc, slot))
        P, rank = surf.side(arc, slot)
    chi0 = draw(st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    return CurveWalk(start, P, tuple(passages), tuple(sweeps), chi0)


def test_dual_arcs_are_closed_arcs():
    for name in ("disk_a(1)", "disk_a(3)", "annulus(1,1)", "annulus(2,1)"):
        surf = surf_of(name)
        for c in dual_arcs(surf):
            assert classify(surf, c) == "closed arc"
            assert chis(surf, c) == [ZERO]


def test_disk_a2_duals_share_middle_decoration(disk2):
    d0, d1 = dual_arcs(disk2)
    assert {d0.start, d0.end} & {d1.start, d1.end} == {1}


def test_normalize_removes_bigon(disk2):
    c = CurveWalk(0, 2, ((0, 1), (1, 1), (1, 0), (1, 1)), (1, 0, 0), (2, 1))
    n = normalize(disk2, c)
    assert n == CurveWalk(0, 2, ((0, 1), (1, 1)), (1,), (2, 1))


def test_normalize_keeps_reduced_curve(disk3):
    for c in orbit_of("disk_a(3)", 2):
        assert normalize(disk3, c) == c


@given(walks())
def test_normalize_idempotent(c):
    surf = surf_of("disk_a(3)")
    try:
        n = normalize(surf, c)
    except InvalidWalk:
        return
    assert all(t != 0 for t in n.sweeps)
    assert normalize(surf, n) == n


@given(walks())
def test_invert_is_involution(c):
    surf = surf_of("disk_a(3)")
    assert invert_curve(invert_curve(c, surf), surf) == c


@given(walks())
def test_inverse_keeps_indices(c):
    surf = surf_of("disk_a(3)")
    assert chis(surf, invert_curve(c, surf)) == chis(surf, c)[::-1]


def test_invalid_walk_rejected(disk2):
    with pytest.raises(InvalidWalk):
        check_walk(disk2, CurveWalk(0, 1, ((0, 1), (1, 1)), (1,)))


@given(st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_shift(d):
    surf = surf_of("disk_a(3)")
    c = orbit_of("disk_a(3)", 1)[-1]
    assert shift_curve(c, ZERO) == c
    shifted = shift_curve(c, d)
    assert [x + d for x in chis(surf, c)] == chis(surf, shifted)
    assert grading_offset(surf, c, shifted) == d


def test_inadmissible_examples(disk2):
    loop = CurveWalk(0, 1, ((0, 1), (1, 1), (1, 0)), (-1, 1))
    assert loop_crosses_itself(disk2, loop, 1)
    assert not is_admissible(disk2, loop)
    assert classify(disk2, loop) == "inadmissible"
    wound = CurveWalk(0, 1, ((0, 1), (0, 0), (0, 1)), (-2, 1))
    assert classify(disk2, wound) == "inadmissible"


def test_admissible_full_turn(disk2):
    a = invert_curve(dual_arc(disk2, 0), disk2)
    (eta,) = extend(disk2, a, a)
    assert eta.start == eta.end == 0
    assert eta.sweeps == (2,)
    assert not loop_crosses_itself(disk2, eta, 0)
    assert classify(disk2, eta) == "admissible closed curve"


def test_extend_adjacent_duals(disk2):
    a = invert_curve(dual_arc(disk2, 0), disk2)
    b = dual_arc(disk2, 1)
    (eta,) = extend(disk2, a, b)
    assert eta.passages == ((0, 1), (1, 1))
    assert classify(disk2, eta) == "closed arc"
    # grading inherited from b on its crossing
    assert chis(disk2, eta)[1] == b.chi0


def test_extend_can_split(disk3):
    a = CurveWalk(0, 2, ((0, 1), (1, 1)), (1,))
    b = CurveWalk(0, 3, ((0, 1), (1, 1), (2, 1)), (-1, 1))
    parts = extend(disk3, a, b)
    assert len(parts) == 2
    assert all(classify(disk3, p) == "closed arc" for p in parts)


def test_extend_needs_common_start(disk2):
    with pytest.raises(EndpointMismatch):
        extend(disk2, dual_arc(disk2, 0), dual_arc(disk2, 1))


def decompositions(name: str):
    surf = surf_of(name)
    for eta in orbit_of(name, 2):
        for at in range(1, len(eta.passages)):
            try:
                alpha, beta = decompose(surf, eta, at)
            except BadAttachment:
                continue
            yield surf, eta, alpha, beta


def test_decompose_additive_and_reconstructs():
    n = 0
    for surf, eta, alpha, beta in decompositions("disk_a(3)"):
        for i in range(surf.n_arcs):
            assert q_int_open(surf, i, alpha) + q_int_open(surf, i, beta) == q_int_open(surf, i, eta)
        assert [normalize(surf, x) for x in extend(surf, alpha, beta)] == [eta]
        n += 1
    assert n >= 10


def test_decompose_half_intersection():
    n = 0
    for surf, eta, alpha, beta in decompositions("disk_a(3)"):
        if alpha.start in (eta.start, eta.end):
            continue
        assert classify(surf, alpha) == classify(surf, beta) == "closed arc"
        assert intersection_number(surf, alpha, beta) == 0.5
        n += 1
    assert n >= 5


def test_decompose_bad_attachment(disk3):
    eta = orbit_of("disk_a(3)", 1)[-1]
    with pytest.raises(BadAttachment):
        decompose(disk3, eta, 0)


@pytest.mark.parametrize("eps", [1, -1])
def test_twist_of_own_dual_is_a_shift(disk3, eps):
    for i in range(disk3.n_arcs):
        s = dual_arc(disk3, i)
        img = twist_dual(disk3, i, eps, s)
        assert same_underlying(disk3, img, s)
        assert grading_offset(disk3, s, img) == SIDE_DEG * eps


def test_twist_half_intersection_gives_closed_arc(disk3):
    d = dual_arcs(disk3)
    img = braid_twist(disk3, 0, 1, d[1])
    assert classify(disk3, img) == "closed arc"
    assert img.passages == ((0, 1), (1, 1))


def test_twist_fixes_disjoint_curve(disk3):
    d = dual_arcs(disk3)
    assert braid_twist(disk3, 0, 1, d[2]) == d[2]
    assert braid_twist(disk3, 2, -1, d[0]) == d[0]


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(2,1)"])
def test_twist_inverse(name):
    surf = surf_of(name)
    curves = orbit_of(name, 1)
    for i in range(surf.n_arcs):
        for c in curves:
            assert twist_dual(surf, i, -1, twist_dual(surf, i, 1, c)) == c


def test_twist_along_orbit_arc_is_conjugate(disk3):
    d = dual_arcs(disk3)
    alpha = ClosedArc(braid_twist(disk3, 0, 1, d[1]), 1, ((0, 1),))
    for c in orbit_of("disk_a(3)", 1):
        img = braid_twist(disk3, alpha, 1, c)
        assert braid_twist(disk3, alpha, -1, img) == c


def test_twist_needs_closed_arc(disk2):
    a = invert_curve(dual_arc(disk2, 0), disk2)
    (loop,) = extend(disk2, a, a)
    with pytest.raises(NotAClosedArc):
        braid_twist(disk2, ClosedArc(loop, 0, ()), 1, dual_arc(disk2, 1))
    with pytest.raises(ValueError):
        braid_twist(disk2, 0, 2, dual_arc(disk2, 1))


def test_zero_level(disk3):
    for s in dual_arcs(disk3):
        assert zero_level(disk3, s)
        assert not zero_level(disk3, shift_curve(s, XX))
        assert zero_level(disk3, shift_curve(s, ONE))


@given(walks())
def test_json_round_trip(c):
    surf = surf_of("disk_a(3)")
    assert curve_from_dict(surf, curve_to_dict(surf, c)) == c
    assert curve_from_json(surf, curve_to_json(surf, c)) == c


def test_json_rejects_unknown_arc(disk2):
    with pytest.raises(InvalidWalk):
        curve_from_dict(disk2, {"start": 0, "end": 1, "passages": [{"arc": 9, "slot": 1}]})
