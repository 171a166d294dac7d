from __future__ import annotations

import json

import pytest

from dmsx.curves import curve_to_dict, dual_arc
from dmsx.harness import (
    OrbitSpec,
    VerificationReport,
    canonical,
    enumerate_closed_arcs,
    generators,
    replay,
    sample_extensions,
    verify_main_theorem,
    verify_slide,
)
from dmsx.strings import fingerprint, qdim_hom, string_of_curve
from dmsx.surface import compile_surface, seed_surface

from conftest import MAIN_SEEDS, ext_of, surf_of


@pytest.mark.parametrize("name", MAIN_SEEDS + ("annulus_sf",))
def test_depth_zero_is_the_dual_arcs(name):
    surf = surf_of(name)
    orb = enumerate_closed_arcs(surf, OrbitSpec(depth=0))
    expected = [canonical(surf, dual_arc(surf, i)) for i in generators(surf)]
    assert orb.curves == expected
    assert all(not arc.psi for arc in orb.arcs)


def test_torus_has_no_generators():
    surf = surf_of("torus1(1)")
    assert generators(surf) == []
    assert enumerate_closed_arcs(surf, OrbitSpec(depth=3)).curves == []


def test_orbit_grows_with_depth():
    surf = surf_of("disk_a(3)")
    sizes = [len(enumerate_closed_arcs(surf, OrbitSpec(depth=d)).curves) for d in range(4)]
    assert sizes[0] == 3
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    prev = set(enumerate_closed_arcs(surf, OrbitSpec(depth=1)).curves)
    assert prev <= set(enumerate_closed_arcs(surf, OrbitSpec(depth=2)).curves)


def test_orbit_truncation_is_reported():
    orb = enumerate_closed_arcs(surf_of("disk_a(3)"), OrbitSpec(depth=3, max_curves=10))
    assert orb.truncated and len(orb.curves) == 10


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        OrbitSpec(depth=-1)


@pytest.mark.parametrize("name", ["disk_a(3)", "annulus(2,1)"])
def test_distinct_curves_have_distinct_signatures(name):
    """The string functor is injective on the orbit: fingerprints together with
    hom dimensions against the simples tell all closed arcs apart."""
    surf, ext = surf_of(name), ext_of(name)
    curves = enumerate_closed_arcs(surf, OrbitSpec(depth=2)).curves
    xs = [string_of_curve(surf, ext, c) for c in curves]
    sigs = set()
    for X in xs:
        sigs.add((fingerprint(X), tuple(qdim_hom(Y, X) for Y in xs[:8])))
    assert len(sigs) == len(curves)


def test_extension_partners_are_deterministic():
    surf = surf_of("annulus(1,1)")
    curves = enumerate_closed_arcs(surf, OrbitSpec(depth=1)).curves
    a = sample_extensions(surf, curves, 10, seed=3)
    b = sample_extensions(surf, curves, 10, seed=3)
    assert a == b and len(a) == 10


def test_main_theorem_is_deterministic():
    spec = seed_surface("disk_a(2)")
    r1 = verify_main_theorem(spec, OrbitSpec(depth=1), extension_partners=5)
    r2 = verify_main_theorem(spec, OrbitSpec(depth=1), extension_partners=5)
    assert r1.ok
    assert json.dumps(r1.to_dict()) == json.dumps(r2.to_dict())


def test_parallel_matches_serial():
    spec = seed_surface("disk_a(3)")
    serial = verify_main_theorem(spec, OrbitSpec(depth=1), extension_partners=5, jobs=1)
    parallel = verify_main_theorem(spec, OrbitSpec(depth=1), extension_partners=5, jobs=2)
    assert serial.to_dict()["checks"] == parallel.to_dict()["checks"]


def test_slide_campaign_passes():
    rep = verify_slide(seed_surface("disk_a(3)"), OrbitSpec(depth=1), n_pairs=5)
    assert rep.ok, rep.render()


def _sphericity_artifact(name: str) -> dict:
    spec = seed_surface(name)
    surf = compile_surface(spec)
    return {
        "check": "sphericity",
        "surface": spec.to_dict(),
        "curves": [curve_to_dict(surf, dual_arc(surf, 0))],
        "values": [],
    }


def test_replay_reports_a_real_failure():
    # the dual of a self-folded arc is not spherical, so this artifact still fails
    assert replay(_sphericity_artifact("annulus_sf")) is True


def test_replay_clears_a_passing_case():
    assert replay(_sphericity_artifact("disk_a(2)")) is False


def test_replay_rejects_unknown_checks():
    art = _sphericity_artifact("disk_a(2)")
    art["check"] = "nonsense"
    with pytest.raises(ValueError):
        replay(art)


def test_report_merge_and_failure_cap():
    a = VerificationReport("x", "s", max_failures=2)
    b = VerificationReport("y", "s")
    a.record("c", True)
    for _ in range(3):
        b.record("c", False, lambda: {"values": []})
    b.record("d", True)
    a.merge(b)
    assert a.checks == {"c": [1, 3], "d": [1, 0]}
    assert len(a.failures) == 2 and not a.ok
    assert "FAIL" in a.render()
