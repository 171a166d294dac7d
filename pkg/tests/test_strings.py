from __future__ import annotations

from collections import defaultdict

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmsx.algebra import build_ext
from dmsx.bigraded_poly import ONE, XX, ZERO, BiDegree, BiLaurent, bl_involute, bl_mul
from dmsx.curves import dual_arc, dual_arcs, extend, invert_curve, shift_curve
from dmsx.errors import NotClosed, NotSpherical
from dmsx.harness import verify_compositions
from dmsx.intersect import q_int_open
from dmsx.strings import (
    Morphism,
    angle_morphism,
    compose,
    cone_of,
    differential,
    direct_sum,
    fingerprint,
    hom_complex,
    homotopic_to_multiple,
    inverse_spherical_twist,
    is_closed,
    is_null_homotopic,
    is_spherical,
    lagrangian_check,
    minimize,
    qdim_hom,
    simple,
    spherical_twist,
    string_of_curve,
)
from dmsx.surface import all_seeds, compile_surface, seed_surface

from conftest import MAIN_SEEDS, ext_of, orbit_of, surf_of

SPHERE = BiLaurent({ZERO: 1, XX: 1})


def strings(name: str, depth: int = 1):
    surf, ext = surf_of(name), ext_of(name)
    return [string_of_curve(surf, ext, c) for c in orbit_of(name, depth)]


def identity(X):
    return Morphism(X, X, ZERO, {(u, u): {k: 1} for u, (k, _) in enumerate(X.slots)})


@pytest.mark.parametrize("spec", all_seeds(), ids=lambda s: s.name)
def test_dual_strings_are_simples(spec):
    surf = compile_surface(spec)
    ext = build_ext(surf)
    for i in range(surf.n_arcs):
        X = string_of_curve(surf, ext, dual_arc(surf, i))
        assert X.slots == [(i, ZERO)] and X.delta == {}
        assert fingerprint(X) == tuple(BiLaurent({ZERO: 1}) if j == i else BiLaurent() for j in range(surf.n_arcs))


@pytest.mark.parametrize("spec", all_seeds(), ids=lambda s: s.name)
def test_simples_are_spherical(spec):
    surf = compile_surface(spec)
    ext = build_ext(surf)
    for i in range(surf.n_arcs):
        q = qdim_hom(simple(ext, i), simple(ext, i))
        if surf.self_folded(i):
            # the extra loop doubles the endomorphisms
            assert q == SPHERE + SPHERE
        else:
            assert q == SPHERE


def test_disk_a2_simple_homs():
    ext = ext_of("disk_a(2)")
    s1, s2 = simple(ext, 0), simple(ext, 1)
    assert qdim_hom(s1, s2) == BiLaurent({ZERO: 1})
    assert qdim_hom(s2, s1) == BiLaurent({XX: 1})


@given(st.builds(BiDegree, st.integers(-3, 3), st.integers(-3, 3)), st.integers(0, 20), st.integers(0, 20))
def test_hom_shift_convention(d, i, j):
    xs = strings("disk_a(3)")
    X, Y = xs[i % len(xs)], xs[j % len(xs)]
    assert qdim_hom(X, Y.shift(d)) == qdim_hom(X, Y).shift(-d)
    assert qdim_hom(X.shift(d), Y) == qdim_hom(X, Y).shift(d)


def test_string_of_shifted_curve(disk3):
    ext = ext_of("disk_a(3)")
    d = BiDegree(2, -1)
    for c in orbit_of("disk_a(3)"):
        X = string_of_curve(disk3, ext, c)
        Y = string_of_curve(disk3, ext, shift_curve(c, d))
        assert Y.slots == X.shift(d).slots and Y.delta == X.delta


def test_string_of_extension(disk2):
    ext = ext_of("disk_a(2)")
    a = invert_curve(dual_arc(disk2, 0), disk2)
    (eta,) = extend(disk2, a, dual_arc(disk2, 1))
    X = string_of_curve(disk2, ext, eta)
    assert [k for k, _ in X.slots] == [0, 1]
    assert len(X.delta) == 1
    assert X.d_squared_zero()


@pytest.mark.parametrize("name", MAIN_SEEDS)
def test_fingerprint_matches_open_arcs(name):
    surf, ext = surf_of(name), ext_of(name)
    for c in orbit_of(name, 2):
        fp = fingerprint(string_of_curve(surf, ext, c))
        assert fp == tuple(q_int_open(surf, i, c) for i in range(surf.n_arcs))


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(1,1)"])
def test_serre_duality(name):
    xs = strings(name)
    for X in xs:
        for Y in xs:
            assert qdim_hom(X, Y) == bl_mul(BiLaurent({XX: 1}), bl_involute(qdim_hom(Y, X)))


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(2,1)"])
def test_euler_characteristic_per_slice(name):
    xs = strings(name)
    for X in xs[:6]:
        for Y in xs[:6]:
            rep = hom_complex(X, Y)
            chain, coh = defaultdict(int), defaultdict(int)
            for d, n in rep.chain_dims.items():
                chain[d.x] += (-1) ** d.z * n
            for d, n in rep.cohomology.items():
                coh[d.x] += (-1) ** d.z * n
            assert {k: v for k, v in chain.items() if v} == {k: v for k, v in coh.items() if v}


def test_cone_of_identity_vanishes():
    for X in strings("disk_a(3)"):
        C = cone_of(identity(X))
        assert minimize(C).slots == []


def test_cone_needs_closed_morphism(disk3):
    ext = ext_of("disk_a(3)")
    c = orbit_of("disk_a(3)")[-1]
    X = string_of_curve(disk3, ext, c)
    ((u, v), comb), = X.delta.items()
    (e,) = comb
    # a lone component along the differential is never closed here
    f = Morphism(X, X, ext.basis[e].degree + X.slots[u][1] - X.slots[v][1], {(u, v): {e: 1}})
    if not is_closed(f):
        with pytest.raises(NotClosed):
            cone_of(f)


def test_minimize_keeps_minimal_strings():
    for X in strings("annulus(2,1)"):
        M = minimize(X)
        assert M.slots == X.slots and M.delta == X.delta


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(2,1)"])
def test_minimize_preserves_homs(name):
    surf, ext = surf_of(name), ext_of(name)
    curves = orbit_of(name)
    probes = strings(name)[:4]
    for s in curves[:6]:
        for t in curves[:6]:
            if s.start != t.start:
                continue
            C = cone_of(angle_morphism(surf, ext, s, t))
            M = minimize(C)
            assert M.d_squared_zero()
            for P in probes:
                assert qdim_hom(P, M) == qdim_hom(P, C)
                assert qdim_hom(M, P) == qdim_hom(C, P)


def test_twist_fixes_orthogonal_object(disk3):
    ext = ext_of("disk_a(3)")
    s1, s3 = simple(ext, 0), simple(ext, 2)
    assert qdim_hom(s1, s3) == BiLaurent()
    T = spherical_twist(s1, s3)
    assert T.slots == s3.slots and T.delta == {}
    T = inverse_spherical_twist(s1, s3)
    assert T.slots == s3.slots


def test_twist_needs_spherical_object(disk2):
    ext = ext_of("disk_a(2)")
    M = direct_sum([simple(ext, 0), simple(ext, 1)])
    assert not is_spherical(M)
    with pytest.raises(NotSpherical):
        spherical_twist(M, simple(ext, 0))
    with pytest.raises(NotSpherical):
        inverse_spherical_twist(M, simple(ext, 0))


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(2,1)"])
def test_reduced_twist_matches_full_complex(name):
    xs = strings(name)
    probes = xs[:3]
    for M in xs[:4]:
        for X in xs[:6]:
            for twist in (spherical_twist, inverse_spherical_twist):
                a = twist(M, X)
                b = twist(M, X, full_complex=True)
                assert fingerprint(a) == fingerprint(b)
                for P in probes:
                    assert qdim_hom(P, a) == qdim_hom(P, b)


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(1,1)"])
def test_twist_then_inverse(name):
    xs = strings(name)
    for M in xs[:4]:
        for X in xs:
            assert fingerprint(inverse_spherical_twist(M, spherical_twist(M, X))) == fingerprint(X)
            assert fingerprint(spherical_twist(M, inverse_spherical_twist(M, X))) == fingerprint(X)


def test_self_angle_is_full_turn(disk3):
    ext = ext_of("disk_a(3)")
    for c in orbit_of("disk_a(3)"):
        for s in (c, invert_curve(c, disk3)):
            f = angle_morphism(disk3, ext, s, s)
            assert f.degree == XX
            assert is_closed(f) and not is_null_homotopic(f)
            assert not homotopic_to_multiple(identity(f.src), f)


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(1,1)"])
def test_angle_morphisms_are_closed_and_nonzero(name):
    surf, ext = surf_of(name), ext_of(name)
    curves = orbit_of(name)
    oriented = list(curves) + [invert_curve(c, surf) for c in curves]
    for s in oriented:
        for t in oriented:
            if s.start == t.start:
                f = angle_morphism(surf, ext, s, t)
                assert is_closed(f) and not is_null_homotopic(f)
                assert differential(f).is_zero()


@pytest.mark.parametrize("name", MAIN_SEEDS)
def test_composition_calculus(name):
    rep = verify_compositions(seed_surface(name))
    assert rep.ok, rep.render()
    for check in ("clockwise", "counterclockwise", "mixed_endpoints"):
        assert rep.checks[check][0] > 0


def test_composition_law_by_hand(disk2):
    """At the middle decoration of disk_a(2) the three germs compose as the
    clockwise order dictates."""
    ext = ext_of("disk_a(2)")
    a = invert_curve(dual_arc(disk2, 0), disk2)
    b = dual_arc(disk2, 1)
    f_ab, f_ba = angle_morphism(disk2, ext, a, b), angle_morphism(disk2, ext, b, a)
    loop = angle_morphism(disk2, ext, a, a)
    assert f_ab.degree + f_ba.degree == loop.degree
    assert homotopic_to_multiple(compose(f_ab, f_ba), loop)


def test_lagrangian_reports(disk3):
    ext = ext_of("disk_a(3)")
    for s in dual_arcs(disk3):
        rep = lagrangian_check(disk3, ext, s)
        assert rep.zero_level and rep.q0_only
    rep = lagrangian_check(disk3, ext, shift_curve(dual_arc(disk3, 0), XX))
    assert not rep.zero_level
    assert rep.offending == [(0, XX)]
