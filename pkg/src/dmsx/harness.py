"""Orbit enumeration and verification campaigns.

Every check is exact.  A campaign returns a :class:`VerificationReport`
with pass/fail counts per check and, for each failure, an artifact that
:func:`replay` recomputes from scratch.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from joblib import Parallel, delayed

from .algebra import build_ext
from .bigraded_poly import ONE, XX, ZERO, BiLaurent, bl_involute, bl_mul, bl_sum
from .curves import (
    ClosedArc,
    CurveWalk,
    braid_twist,
    classify,
    curve_from_dict,
    curve_to_dict,
    dual_arc,
    extend,
    invert_curve,
    is_closed_arc,
    transport_curve,
    twist_dual,
    zero_level,
)
from .errors import DmsxError, SlideDegenerate
from .intersect import crossings, interior_count, q_int, q_int_open
from .polyline import interior_crossings
from .strings import (
    angle_morphism,
    compose,
    cone_homotopy,
    cone_inclusion,
    cone_of,
    differential,
    Morphism,
    fingerprint,
    homotopic_to_multiple,
    inverse_spherical_twist,
    is_null_homotopic,
    lagrangian_check,
    minimize,
    qdim_hom,
    spherical_twist,
    string_of_curve,
)
from .surface import Surface, SurfaceSpec, compile_surface, slide

SERRE = BiLaurent({XX: 1})
SPHERE = BiLaurent({ZERO: 1, XX: 1})


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class OrbitSpec:
    depth: int = 2
    seed: int = 0
    max_curves: int = 5000

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("orbit depth must be non-negative")


@dataclass
class Orbit:
    arcs: list[ClosedArc]
    truncated: bool = False

    @property
    def curves(self) -> list[CurveWalk]:
        return [a.curve for a in self.arcs]


def canonical(surf: Surface, c: CurveWalk) -> CurveWalk:
    """Orientation fixed by the smaller geometric key, first bi-index (0,0)."""
    inv = invert_curve(c, surf)
    geo = min((c, inv), key=lambda w: (w.start, w.end, w.passages, w.sweeps))
    return CurveWalk(geo.start, geo.end, geo.passages, geo.sweeps, ZERO)


def generators(surf: Surface) -> list[int]:
    """Arcs whose dual arcs are closed arcs (the braid twist generators)."""
    return [i for i in range(surf.n_arcs) if not surf.self_folded(i)]


def enumerate_closed_arcs(spec: SurfaceSpec | Surface, orbit: OrbitSpec = OrbitSpec()) -> Orbit:
    """Closed arcs reachable from dual arcs by braid words of length <= depth."""
    surf = compile_surface(spec)
    gens = generators(surf)
    seen: dict[CurveWalk, ClosedArc] = {}
    level: list[ClosedArc] = []
    for i in gens:
        c = canonical(surf, dual_arc(surf, i))
        if c not in seen:
            seen[c] = ClosedArc(c, i, ())
            level.append(seen[c])
    truncated = False
    for _ in range(orbit.depth):
        nxt: list[ClosedArc] = []
        for arc in level:
            for i in gens:
                for e in (1, -1):
                    img = canonical(surf, twist_dual(surf, i, e, arc.curve))
                    if img in seen:
                        continue
                    if len(seen) >= orbit.max_curves:
                        truncated = True
                        continue
                    seen[img] = ClosedArc(img, arc.base, ((i, e),) + arc.psi)
                    nxt.append(seen[img])
        level = nxt
    return Orbit(list(seen.values()), truncated)


# ---------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    name: str
    surface: str
    checks: dict[str, list[int]] = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)
    timing: float = 0.0
    notes: list[str] = field(default_factory=list)
    max_failures: int = 50

    def record(self, check: str, ok: bool, artifact: Callable[[], dict] | None = None) -> None:
        cnt = self.checks.setdefault(check, [0, 0])
        cnt[0 if ok else 1] += 1
        if not ok and artifact is not None and len(self.failures) < self.max_failures:
            art = artifact()
            art["check"] = check
            self.failures.append(art)

    def merge(self, other: "VerificationReport") -> None:
        for k, (p, f) in other.checks.items():
            cnt = self.checks.setdefault(k, [0, 0])
            cnt[0] += p
            cnt[1] += f
        room = self.max_failures - len(self.failures)
        self.failures.extend(other.failures[:max(room, 0)])
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return all(f == 0 for _, f in self.checks.values())

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "name": self.name,
            "surface": self.surface,
            "ok": self.ok,
            "checks": {k: {"pass": p, "fail": f} for k, (p, f) in sorted(self.checks.items())},
            "failures": self.failures,
            "notes": self.notes,
        }
        if timing:
            out["timing_seconds"] = round(self.timing, 3)
        return out

    def render(self) -> str:
        lines = [f"{self.name} on {self.surface}: {'PASS' if self.ok else 'FAIL'}"]
        for k, (p, f) in sorted(self.checks.items()):
            lines.append(f"  {k}: {p} passed, {f} failed")
        for n in self.notes:
            lines.append(f"  note: {n}")
        for art in self.failures[:5]:
            lines.append(f"  failure {art['check']}: {art.get('values')}")
        return "\n".join(lines)


def _artifact(spec: SurfaceSpec, surf: Surface, curves: Sequence[CurveWalk], values: Sequence) -> dict:
    return {
        "surface": spec.to_dict(),
        "curves": [curve_to_dict(surf, c) for c in curves],
        "values": [str(v) for v in values],
    }


# ---------------------------------------------------------------------------
# pair checks


def _sum_rules_hold(surf: Surface, a: CurveWalk, b: CurveWalk) -> tuple[bool, int]:
    xs = crossings(surf, a, b, check=False)
    good = all(
        c.index + c.index_rev == (ONE if c.kind == "interior" else XX) for c in xs
    )
    return good, len(xs)


def _support_ok(p: BiLaurent) -> bool:
    return all(d.x in (0, 1) for d in p)


def _pair_checks(spec, surf, ext, a, b, Xa, Xb, rep: VerificationReport, prefix: str = "") -> None:
    qi = q_int(surf, a, b)
    qd = qdim_hom(Xa, Xb)
    rep.record(prefix + "main_identity", qi == qd, lambda: _artifact(spec, surf, (a, b), (qi, qd)))
    good, _ = _sum_rules_hold(surf, a, b)
    rep.record(prefix + "sum_rules", good, lambda: _artifact(spec, surf, (a, b), ()))
    qi_rev = q_int(surf, b, a)
    qd_rev = qdim_hom(Xb, Xa)
    serre_hom = qd == _times(SERRE, bl_involute(qd_rev))
    rep.record(prefix + "serre_hom", serre_hom, lambda: _artifact(spec, surf, (a, b), (qd, qd_rev)))
    serre_int = qi == _times(SERRE, bl_involute(qi_rev))
    rep.record(prefix + "serre_int", serre_int, lambda: _artifact(spec, surf, (a, b), (qi, qi_rev)))
    n1 = interior_count(surf, a, b)
    n2 = interior_crossings(surf, a, b)
    rep.record(prefix + "oracle", n1 == n2, lambda: _artifact(spec, surf, (a, b), (n1, n2)))
    if zero_level(surf, a) and zero_level(surf, b):
        rep.record(prefix + "lagrangian", qi == qd and _support_ok(qi), lambda: _artifact(spec, surf, (a, b), (qi,)))


def _times(p: BiLaurent, q: BiLaurent) -> BiLaurent:
    return bl_mul(p, q)


def _curve_checks(spec, surf, ext, c, X, rep: VerificationReport) -> None:
    qd = qdim_hom(X, X)
    rep.record("sphericity", qd == SPHERE, lambda: _artifact(spec, surf, (c,), (qd,)))
    fp = fingerprint(X)
    op = tuple(q_int_open(surf, i, c) for i in range(surf.n_arcs))
    rep.record("fingerprint", fp == op, lambda: _artifact(spec, surf, (c,), (fp, op)))
    if zero_level(surf, c):
        lr = lagrangian_check(surf, ext, c)
        rep.record("lagrangian_strings", lr.zero_level and lr.q0_only, lambda: _artifact(spec, surf, (c,), ()))


def _chunk(spec_dict: dict, curves: list[dict], partners: list[dict], pairs: list[tuple[int, int, bool]], singles: list[int]) -> VerificationReport:
    spec = SurfaceSpec.from_dict(spec_dict)
    surf = compile_surface(spec)
    ext = build_ext(surf)
    cs = [curve_from_dict(surf, d) for d in curves]
    ps = [curve_from_dict(surf, d) for d in partners]
    cache: dict = {}

    def X(key, c):
        if key not in cache:
            cache[key] = string_of_curve(surf, ext, c)
        return cache[key]

    rep = VerificationReport("chunk", spec.name)
    for i in singles:
        _curve_checks(spec, surf, ext, cs[i], X(("c", i), cs[i]), rep)
    for i, j, is_partner in pairs:
        a = cs[i]
        if is_partner:
            b = ps[j]
            _pair_checks(spec, surf, ext, a, b, X(("c", i), a), X(("p", j), b), rep, prefix="ext_")
        else:
            b = cs[j]
            _pair_checks(spec, surf, ext, a, b, X(("c", i), a), X(("c", j), b), rep)
    return rep


def _run_chunks(spec: SurfaceSpec, curves, partners, pairs, singles, jobs: int, n_chunks: int) -> VerificationReport:
    surf = compile_surface(spec)
    cd = [curve_to_dict(surf, c) for c in curves]
    pd = [curve_to_dict(surf, c) for c in partners]
    k = max(1, n_chunks)
    pair_parts = [pairs[i::k] for i in range(k)]
    single_parts = [singles[i::k] for i in range(k)]
    tasks = [(spec.to_dict(), cd, pd, pp, sp) for pp, sp in zip(pair_parts, single_parts) if pp or sp]
    if jobs == 1:
        reps = [_chunk(*t) for t in tasks]
    else:
        reps = Parallel(n_jobs=jobs)(delayed(_chunk)(*t) for t in tasks)
    total = VerificationReport("main", spec.name)
    for r in reps:
        total.merge(r)
    return total


def sample_extensions(surf: Surface, curves: Sequence[CurveWalk], count: int, seed: int) -> list[CurveWalk]:
    """Admissible closed curves built by extending pairs of orbit curves."""
    rng = random.Random(seed)
    oriented = []
    for c in curves:
        oriented.append(c)
        oriented.append(invert_curve(c, surf))
    by_start: dict[int, list[CurveWalk]] = {}
    for c in oriented:
        by_start.setdefault(c.start, []).append(c)
    pairs = [(s, t) for grp in by_start.values() for s in grp for t in grp if s != t]
    rng.shuffle(pairs)
    out: list[CurveWalk] = []
    seen = set()
    for s, t in pairs:
        if len(out) >= count:
            break
        for eta in extend(surf, s, t):
            if classify(surf, eta) != "admissible closed curve":
                continue
            key = canonical(surf, eta)
            if key in seen:
                continue
            seen.add(key)
            out.append(eta)
    return out


def verify_main_theorem(
    spec: SurfaceSpec,
    orbit: OrbitSpec = OrbitSpec(),
    extension_partners: int = 50,
    jobs: int = 1,
) -> VerificationReport:
    """Main identity plus sphericity, sum rules, Serre duality, fingerprints,
    oracle agreement and the zero-level restriction on an orbit."""
    t0 = time.perf_counter()
    surf = compile_surface(spec)
    orb = enumerate_closed_arcs(surf, orbit)
    curves = orb.curves
    partners = sample_extensions(surf, curves, extension_partners, orbit.seed) if extension_partners else []
    pairs = [(i, j, False) for i in range(len(curves)) for j in range(len(curves))]
    pairs += [(i, j, True) for i in range(len(curves)) for j in range(len(partners))]
    singles = list(range(len(curves)))
    rep = _run_chunks(spec, curves, partners, pairs, singles, jobs, n_chunks=max(1, 4 * jobs))
    rep.name = "main theorem"
    rep.notes.append(f"{len(curves)} closed arcs at depth {orbit.depth}, {len(partners)} extension partners")
    if orb.truncated:
        rep.notes.append(f"orbit truncated at {orbit.max_curves} curves")
    rep.timing = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# twists


def intersection_number(surf: Surface, a: CurveWalk, b: CurveWalk) -> float:
    """Int on the decorated surface: q_int at q = 1, halved."""
    return q_int(surf, a, b).at_one() / 2


def verify_twist_compat(
    spec: SurfaceSpec,
    orbit: OrbitSpec = OrbitSpec(),
    samples: int = 100,
    relation_curves: int = 20,
) -> VerificationReport:
    """Spherical twists against braid twists, twist invariance of q_int,
    inverse twists and the braid relations."""
    t0 = time.perf_counter()
    surf = compile_surface(spec)
    ext = build_ext(surf)
    orb = enumerate_closed_arcs(surf, orbit)
    arcs = orb.arcs
    rng = random.Random(orbit.seed)
    pairs = [(a, b) for a in arcs for b in arcs]
    rng.shuffle(pairs)
    pairs = pairs[:samples]
    rep = VerificationReport("twist compatibility", spec.name)
    strings: dict = {}

    def X(c):
        if c not in strings:
            strings[c] = string_of_curve(surf, ext, c)
        return strings[c]

    for alpha, beta in pairs:
        Xa, Xb = X(alpha.curve), X(beta.curve)
        for eps, twist in ((1, spherical_twist), (-1, inverse_spherical_twist)):
            img = braid_twist(surf, alpha, eps, beta.curve)
            f1 = fingerprint(twist(Xa, Xb))
            f2 = fingerprint(X(img))
            rep.record(
                "twist_fingerprint",
                f1 == f2,
                lambda: _artifact(spec, surf, (alpha.curve, beta.curve), (eps, f1, f2)),
            )
        back = braid_twist(surf, alpha, -1, braid_twist(surf, alpha, 1, beta.curve))
        rep.record("twist_inverse", back == beta.curve, lambda: _artifact(spec, surf, (alpha.curve, beta.curve), ()))
        fb = fingerprint(inverse_spherical_twist(Xa, spherical_twist(Xa, Xb)))
        rep.record("spherical_inverse", fb == fingerprint(Xb), lambda: _artifact(spec, surf, (alpha.curve, beta.curve), ()))
        gamma = arcs[rng.randrange(len(arcs))].curve
        q1 = q_int(surf, beta.curve, gamma)
        q2 = q_int(surf, braid_twist(surf, alpha, 1, beta.curve), braid_twist(surf, alpha, 1, gamma))
        rep.record("twist_qint", q1 == q2, lambda: _artifact(spec, surf, (alpha.curve, beta.curve, gamma), (q1, q2)))
    _braid_relations(spec, surf, ext, orb, rep, relation_curves, rng)
    rep.notes.append(f"{len(arcs)} closed arcs, {len(pairs)} sampled twist pairs")
    rep.timing = time.perf_counter() - t0
    return rep


def _braid_relations(spec, surf, ext, orb: Orbit, rep, n_test: int, rng) -> None:
    gens = generators(surf)
    duals = {i: ClosedArc(canonical(surf, dual_arc(surf, i)), i, ()) for i in gens}
    tests = list(orb.curves)
    rng.shuffle(tests)
    tests = tests[:n_test]
    probes = [string_of_curve(surf, ext, c) for c in tests[:3]]
    for i in gens:
        for j in gens:
            if i >= j:
                continue
            a, b = duals[i], duals[j]
            it = intersection_number(surf, a.curve, b.curve)
            if it == 0.5:
                lhs = ((i, 1), (j, 1), (i, 1))
                rhs = ((j, 1), (i, 1), (j, 1))
                kind = "braid_relation"
            elif it == 0:
                lhs = ((i, 1), (j, 1))
                rhs = ((j, 1), (i, 1))
                kind = "commutation"
            else:
                continue
            word = lhs + tuple((g, -e) for g, e in reversed(rhs))
            for c in tests:
                img = c
                for g, e in reversed(word):
                    img = twist_dual(surf, g, e, img)
                rep.record(kind, img == c, lambda: _artifact(spec, surf, (a.curve, b.curve, c), (word,)))
            Ma = string_of_curve(surf, ext, a.curve)
            Mb = string_of_curve(surf, ext, b.curve)
            M = {i: Ma, j: Mb}
            for P in probes:
                sides = []
                for w in (lhs, rhs):
                    Y = P
                    for g, _ in reversed(w):
                        Y = spherical_twist(M[g], Y)
                    sides.append(fingerprint(Y))
                rep.record(kind + "_fingerprint", sides[0] == sides[1], lambda: _artifact(spec, surf, (a.curve, b.curve), sides))


# ---------------------------------------------------------------------------
# cones


def shared_start_pairs(surf: Surface, curves: Sequence[CurveWalk]) -> list[tuple[CurveWalk, CurveWalk]]:
    oriented = []
    for c in curves:
        oriented.append(c)
        oriented.append(invert_curve(c, surf))
    return [(s, t) for s in oriented for t in oriented if s.start == t.start]


def verify_cones(spec: SurfaceSpec, orbit: OrbitSpec = OrbitSpec(depth=1), samples: int = 50) -> VerificationReport:
    """Cones of angle morphisms against extensions, and triangle compositions."""
    t0 = time.perf_counter()
    surf = compile_surface(spec)
    ext = build_ext(surf)
    orb = enumerate_closed_arcs(surf, orbit)
    pairs = shared_start_pairs(surf, orb.curves)
    random.Random(orbit.seed).shuffle(pairs)
    pairs = pairs[:samples]
    rep = VerificationReport("cone realization", spec.name)
    n = surf.n_arcs
    for s, t in pairs:
        f = angle_morphism(surf, ext, s, t)
        rep.record("angle_nonzero", not is_null_homotopic(f), lambda: _artifact(spec, surf, (s, t), ()))
        C = cone_of(f)
        parts = [fingerprint(string_of_curve(surf, ext, e)) for e in extend(surf, s, t)]
        want = tuple(bl_sum(p[i] for p in parts) for i in range(n))
        got = fingerprint(minimize(C))
        rep.record("cone_fingerprint", got == want, lambda: _artifact(spec, surf, (s, t), (got, want)))
        inc = cone_inclusion(f, C)
        h = cone_homotopy(f, C)
        lhs = compose(f, inc)
        dh = differential(h)
        rep.record("triangle_composition", lhs.comps == dh.comps, lambda: _artifact(spec, surf, (s, t), ()))
    rep.notes.append(f"{len(pairs)} shared-start pairs")
    rep.timing = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# composition calculus


def _reversed_source(g: Morphism, X) -> Morphism:
    """``g`` out of the string of an inverted curve, read out of the string of
    the curve itself: the same slots in reverse order."""
    n = len(X.slots)
    return Morphism(X, g.tgt, g.degree, {(n - 1 - u, v): comb for (u, v), comb in g.comps.items()})


def _extension_germs(surf: Surface, a: CurveWalk, b: CurveWalk) -> list[CurveWalk]:
    """Pieces of the extension of ``a`` by ``b``, oriented to start at the end of ``b``."""
    out: list[CurveWalk] = []
    for e in extend(surf, a, b):
        for g in (invert_curve(e, surf), e):
            if g.start == b.end and g not in out:
                out.append(g)
    return out


def verify_compositions(
    spec: SurfaceSpec,
    orbit: OrbitSpec = OrbitSpec(depth=1),
    per_decoration: int = 8,
) -> VerificationReport:
    """Angle morphisms composed at one endpoint and at two different endpoints.

    Triples at a common start are sorted by degree: when the two degrees add
    up to the degree of the direct angle the composite must be a non-zero
    multiple of it up to homotopy, and when they add up to one more full turn
    it must be null-homotopic.  A morphism ``a -> b`` followed by one out of
    the inverse of ``b`` into ``c`` must compose to zero when, at the far end
    of ``b``, the inverse of the extension of ``a`` by ``b`` sits clockwise
    between the inverse of ``b`` and ``c``.  That is the configuration through
    which the vanishing factors.
    """
    t0 = time.perf_counter()
    surf = compile_surface(spec)
    ext = build_ext(surf)
    curves = enumerate_closed_arcs(surf, orbit).curves
    oriented = list(curves) + [invert_curve(c, surf) for c in curves]
    by_start: dict[int, list[CurveWalk]] = {}
    for c in oriented:
        by_start.setdefault(c.start, []).append(c)
    rep = VerificationReport("composition calculus", spec.name)
    angles: dict = {}

    def phi(s, t):
        if (s, t) not in angles:
            angles[(s, t)] = angle_morphism(surf, ext, s, t)
        return angles[(s, t)]

    unsorted = 0
    for grp in by_start.values():
        grp = grp[:per_decoration]
        for a in grp:
            for b in grp:
                for c in grp:
                    if len({a, b, c}) < 3:
                        continue
                    f12, f23, f13 = phi(a, b), phi(b, c), phi(a, c)
                    comp = compose(f12, f23)
                    total = f12.degree + f23.degree
                    if total == f13.degree:
                        ok = homotopic_to_multiple(comp, f13)
                        rep.record("clockwise", ok, lambda: _artifact(spec, surf, (a, b, c), ()))
                    elif total == f13.degree + XX:
                        ok = is_null_homotopic(comp)
                        rep.record("counterclockwise", ok, lambda: _artifact(spec, surf, (a, b, c), ()))
                    else:
                        unsorted += 1
    skipped = 0
    for a in oriented:
        for b in by_start.get(a.start, []):
            if b == a:
                continue
            bb = invert_curve(b, surf)
            etas = _extension_germs(surf, a, b)
            for c in by_start.get(bb.start, []):
                if c in (bb, b):
                    continue
                between = any(
                    e not in (bb, c) and phi(bb, e).degree + phi(e, c).degree == phi(bb, c).degree
                    for e in etas
                )
                if not between:
                    skipped += 1
                    continue
                f = phi(a, b)
                g = _reversed_source(phi(bb, c), f.tgt)
                ok = is_null_homotopic(compose(f, g))
                rep.record("mixed_endpoints", ok, lambda: _artifact(spec, surf, (a, b, c), ()))
    if unsorted:
        rep.notes.append(f"{unsorted} triples with no clockwise order by degree")
    rep.notes.append(f"{skipped} mixed triples skipped: extension not between the two germs")
    rep.timing = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# slides


def first_slide(spec: SurfaceSpec):
    for arc in spec.arcs:
        for end in ("head", "tail"):
            try:
                return slide(spec, arc, end)
            except SlideDegenerate:
                continue
    return None


def verify_slide(spec: SurfaceSpec, orbit: OrbitSpec = OrbitSpec(depth=1), n_pairs: int = 20) -> VerificationReport:
    """q_int of fixed curve pairs before and after a slide, and the main
    identity on the slid arc system."""
    t0 = time.perf_counter()
    rep = VerificationReport("slide invariance", spec.name)
    res = first_slide(spec)
    if res is None:
        rep.notes.append("no slide available")
        return rep
    new, sd = res
    surf = compile_surface(spec)
    nsurf = compile_surface(new)
    next_ = build_ext(nsurf)
    curves = enumerate_closed_arcs(surf, orbit).curves
    pairs = [(a, b) for a in curves for b in curves][:n_pairs]
    for a, b in pairs:
        ta, tb = transport_curve(sd, a), transport_curve(sd, b)
        q1, q2 = q_int(surf, a, b), q_int(nsurf, ta, tb)
        rep.record("slide_qint", q1 == q2, lambda: _artifact(spec, surf, (a, b), (q1, q2)))
        qd = qdim_hom(string_of_curve(nsurf, next_, ta), string_of_curve(nsurf, next_, tb))
        rep.record("slide_main_identity", q2 == qd, lambda: _artifact(new, nsurf, (ta, tb), (q2, qd)))
    rep.notes.append(f"slid arc {sd.old.arcs[sd.gamma]!r}; {len(pairs)} pairs")
    rep.timing = time.perf_counter() - t0
    return rep


# ---------------------------------------------------------------------------
# replay


def replay(artifact: dict) -> bool:
    """Recompute a failure artifact; True if it still fails."""
    spec = SurfaceSpec.from_dict(artifact["surface"])
    surf = compile_surface(spec)
    ext = build_ext(surf)
    cs = [curve_from_dict(surf, d) for d in artifact["curves"]]
    check = artifact["check"].removeprefix("ext_")
    if check == "main_identity":
        a, b = cs
        return q_int(surf, a, b) != qdim_hom(string_of_curve(surf, ext, a), string_of_curve(surf, ext, b))
    if check == "sphericity":
        X = string_of_curve(surf, ext, cs[0])
        return qdim_hom(X, X) != SPHERE
    if check == "oracle":
        a, b = cs
        return interior_count(surf, a, b) != interior_crossings(surf, a, b)
    if check == "fingerprint":
        c = cs[0]
        return fingerprint(string_of_curve(surf, ext, c)) != tuple(q_int_open(surf, i, c) for i in range(surf.n_arcs))
    if check == "sum_rules":
        return not _sum_rules_hold(surf, *cs)[0]
    rep = VerificationReport("replay", spec.name)
    if check in ("serre_hom", "serre_int", "lagrangian"):
        a, b = cs
        _pair_checks(spec, surf, ext, a, b, string_of_curve(surf, ext, a), string_of_curve(surf, ext, b), rep)
        return rep.checks.get(check, [0, 0])[1] > 0
    raise ValueError(f"no replay for check {artifact['check']!r}")
