from __future__ import annotations

from collections import Counter

import pytest

from dmsx.algebra import (
    apply_d,
    build_differential,
    build_ext,
    check_associativity,
    check_d_squared,
    d_squared_all_zero,
    enumerate_arrows,
    render_algebra,
    zero_part,
)
from dmsx.bigraded_poly import ONE, ZERO, BiDegree
from dmsx.surface import all_seeds, compile_surface, disk_a

SEEDS = all_seeds()
IDS = [s.name for s in SEEDS]


def rotation_oracle(spec):
    """Arrow multiset read straight off the corner degrees.

    Every polygon contributes one arrow per start side and sweep below a
    full turn; every arc contributes exactly one loop.  The cut corner runs
    from the last arc side before the boundary back to the first one after it.
    """
    surf = compile_surface(spec)
    out = Counter()
    for pd in surf.polys:
        m = pd.m
        for r in range(m):
            for t in range(1, m):
                z = sum(pd.f[(r + k) % m] for k in range(t)) - (t - 1)
                x = -sum(1 for k in range(t) if (r + k) % m == m - 1)
                out[(pd.arcs[r], pd.arcs[(r + t) % m], (z, x))] += 1
    for i in range(surf.n_arcs):
        out[(i, i, (1, -1))] += 1
    return out


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_arrows_match_rotation_oracle(spec):
    got = Counter((a.source, a.target, tuple(a.degree)) for a in enumerate_arrows(spec))
    assert got == rotation_oracle(spec)


def test_disk_a1_single_loop():
    arrows = enumerate_arrows(disk_a(1))
    assert len(arrows) == 1
    assert arrows[0].loop and arrows[0].degree == BiDegree(1, -1)
    assert "1-X" in render_algebra(build_differential(disk_a(1)))


def test_disk_a2_arrows():
    table = sorted((a.source, a.target, tuple(a.degree), a.loop) for a in enumerate_arrows(disk_a(2)))
    assert table == [
        (0, 0, (1, -1), True),
        (0, 1, (1, 0), False),
        (1, 0, (1, -1), False),
        (1, 1, (1, -1), True),
    ]


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_one_loop_per_arc(spec):
    loops = [a for a in enumerate_arrows(spec) if a.loop]
    assert sorted(a.source for a in loops) == list(range(len(spec.arcs)))
    assert all(a.degree == BiDegree(1, -1) and a.source == a.target for a in loops)


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_pairing(spec):
    """Non-loop arrows pair off with degrees summing to 2-X."""
    arrows = [a for a in enumerate_arrows(spec) if not a.loop]
    assert len(arrows) % 2 == 0
    pool = Counter((a.source, a.target, tuple(a.degree)) for a in arrows)
    for (s, t, (z, x)), k in pool.items():
        assert pool[(t, s, (2 - z, -1 - x))] == k


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_d_squared_zero(spec):
    dga = build_differential(spec)
    check_d_squared(dga)
    assert d_squared_all_zero(dga)


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_d_is_homogeneous(spec):
    dga = build_differential(spec)
    for b, terms in dga.d.items():
        for path in terms:
            total = sum((dga.arrows[x].degree for x in path), ZERO)
            assert total == dga.arrows[b].degree + ONE


def test_disk_a2_differential():
    dga = build_differential(disk_a(2))
    by = {(a.source, a.target, a.loop): a.id for a in dga.arrows}
    b, bstar = by[(0, 1, False)], by[(1, 0, False)]
    assert dga.d[by[(0, 0, True)]] == {(b, bstar): -1}
    assert dga.d[by[(1, 1, True)]] == {(bstar, b): -1}
    assert dga.d[b] == {} and dga.d[bstar] == {}
    assert apply_d(dga, dga.d[by[(0, 0, True)]]) == {}


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_ext_associative(spec):
    check_associativity(build_ext(spec))


def test_ext_disk_a2_hom_spaces():
    ext = build_ext(disk_a(2))
    (e12,) = ext.hom_basis(0, 1)
    (e21,) = ext.hom_basis(1, 0)
    assert ext.basis[e12].degree == BiDegree(0, 0)
    assert ext.basis[e21].degree == BiDegree(0, 1)
    for v in (0, 1):
        degs = sorted(tuple(ext.basis[e].degree) for e in ext.hom_basis(v, v))
        assert degs == [(0, 0), (0, 1)]


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_identities_are_units(spec):
    ext = build_ext(spec)
    for e in ext.basis:
        assert ext.compose(ext.identity(e.source), e.index) == e.index
        assert ext.compose(e.index, ext.identity(e.target)) == e.index


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_ext_degrees_add(spec):
    ext = build_ext(spec)
    for e1 in ext.basis:
        for e2 in ext.basis:
            r = ext.compose(e1.index, e2.index)
            if r is not None:
                assert ext.basis[r].degree == e1.degree + e2.degree


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_pi_degree_rule(spec):
    ext = build_ext(spec)
    for e in ext.basis:
        if e.is_identity:
            assert e.degree == ZERO
        else:
            assert e.degree == ONE - ext.arrows[e.arrow].degree


def test_zero_part_examples():
    z = zero_part(disk_a(2))
    assert [(a.source, a.target, tuple(a.degree)) for a in z.arrows] == [(0, 1, (1, 0))]
    assert zero_part(disk_a(1)).arrows == []


@pytest.mark.parametrize("spec", SEEDS, ids=IDS)
def test_zero_part_keeps_one_of_each_pair(spec):
    z = zero_part(spec)
    assert all(not a.loop and a.degree.x == 0 for a in z.arrows)
    n_pairs = sum(1 for a in enumerate_arrows(spec) if not a.loop) // 2
    assert len(z.arrows) == n_pairs
