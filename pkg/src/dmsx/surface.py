"""Combinatorial graded surfaces: polygons glued along arcs.

Each polygon lists its sides in clockwise order.  Exactly one side is the
boundary side (it carries the decoration's closed marked point); all other
sides are occurrences of arcs.  The integer corner degrees encode the grading.

Internally every polygon is re-indexed by *ranks*: the arc sides are numbered
``0..m-1`` clockwise, starting with the side that follows the boundary side.
The elementary corner from rank ``m-1`` back to rank ``0`` sweeps past the
boundary side; it is the cut sector and carries an extra ``-X``.

For unrolled ranks ``R = w*m + r`` the phase is
``phase(R) = (n[r], w)`` with ``n[0] = 0`` and ``n[r+1] = n[r] + 1 - f[r]``.
The clockwise rotation from copy ``R1`` to copy ``R2`` (``0 < R2-R1 <= m``)
has degree ``(1, 0) + phase(R1) - phase(R2)``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from networkx.utils import UnionFind

from .bigraded_poly import BiDegree
from .errors import (
    BadParameters,
    DegreeSumViolation,
    MultipleBoundarySides,
    NotASurface,
    SlideDegenerate,
    UnknownArc,
)

BOUNDARY = "boundary"


@dataclass(frozen=True)
class ArcSide:
    """One occurrence of an arc as a polygon side."""

    arc: Any
    flip: bool = False


@dataclass(frozen=True)
class Polygon:
    """Clockwise side list plus one corner degree per arc-to-arc corner.

    ``corner_degrees[k]`` belongs to the corner running from the ``k``-th arc
    side (in list order, skipping the boundary side) to the next arc side.
    """

    sides: tuple
    corner_degrees: tuple[int, ...]


@dataclass(frozen=True)
class SurfaceSpec:
    arcs: tuple
    polygons: tuple[Polygon, ...]
    name: str = ""

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        polys = []
        for p in self.polygons:
            sides = [
                BOUNDARY if s == BOUNDARY else {"arc": s.arc, "flip": s.flip}
                for s in p.sides
            ]
            polys.append({"sides": sides, "corner_degrees": list(p.corner_degrees)})
        return {"arcs": list(self.arcs), "polygons": polys, "name": self.name}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "SurfaceSpec":
        try:
            arcs = tuple(data["arcs"])
            polys = []
            for p in data["polygons"]:
                sides = []
                for s in p["sides"]:
                    if s == BOUNDARY:
                        sides.append(BOUNDARY)
                    else:
                        sides.append(ArcSide(s["arc"], bool(s.get("flip", False))))
                polys.append(Polygon(tuple(sides), tuple(int(c) for c in p["corner_degrees"])))
        except (KeyError, TypeError) as exc:
            raise NotASurface(f"malformed surface description: {exc}") from exc
        return cls(arcs, tuple(polys), str(data.get("name", "")))

    @classmethod
    def from_json(cls, text: str) -> "SurfaceSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class PolyData:
    """Rank-indexed view of one polygon."""

    m: int
    arcs: tuple[int, ...]  # arc index at each rank
    flips: tuple[bool, ...]
    f: tuple[int, ...]  # f[r]: corner from rank r to rank r+1 (mod m)
    n: tuple[int, ...]  # phase, n[0] = 0
    json_index: tuple[int, ...]  # position in the side list of each rank
    boundary_index: int

    def phase(self, R: int) -> BiDegree:
        w, r = divmod(R, self.m)
        return BiDegree(self.n[r], w)


@dataclass
class ValidationReport:
    name: str
    genus: int
    boundary_components: int
    open_marked_points: int
    closed_marked_points: int
    decorations: int
    arcs: int
    polygons: int
    self_folded: list = field(default_factory=list)
    multiply_shared: list = field(default_factory=list)

    @property
    def warnings(self) -> list[str]:
        out = [f"self-folded arc {a!r}" for a in self.self_folded]
        out += [f"polygons {p} and {q} share more than one arc" for p, q in self.multiply_shared]
        return out

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "genus": self.genus,
            "boundary_components": self.boundary_components,
            "M": self.open_marked_points,
            "Y": self.closed_marked_points,
            "Delta": self.decorations,
            "arcs": self.arcs,
            "polygons": self.polygons,
            "no_self_folded": not self.self_folded,
            "share_at_most_one_arc": not self.multiply_shared,
            "warnings": self.warnings,
        }

    def render(self) -> str:
        d = self.to_dict()
        lines = [f"surface {self.name or '<unnamed>'}: valid"]
        lines.append(f"  genus {self.genus}, boundary components {self.boundary_components}")
        lines.append(f"  |M| = |Y| = |Delta| = {self.decorations}, arcs {self.arcs}, polygons {self.polygons}")
        lines.append(f"  no self-folded arcs: {d['no_self_folded']}")
        lines.append(f"  polygons share at most one arc: {d['share_at_most_one_arc']}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines)


class Surface:
    """A validated surface together with its rank tables.

    ``occ[i]`` lists the two occurrences of arc ``i`` as ``(polygon, rank)``;
    the occurrence index (0 or 1) is the order of appearance in the SurfaceSpec.
    """

    def __init__(self, spec: SurfaceSpec):
        self.spec = spec
        self.report = _validate(spec)
        self.arc_ids = tuple(spec.arcs)
        self.arc_index = {a: i for i, a in enumerate(spec.arcs)}
        self.polys: list[PolyData] = []
        occ: list[list[tuple[int, int]]] = [[] for _ in spec.arcs]
        for pi, poly in enumerate(spec.polygons):
            pd = _poly_data(poly, self.arc_index)
            self.polys.append(pd)
        # occurrence order = order of appearance in the side lists
        for pi, poly in enumerate(spec.polygons):
            pd = self.polys[pi]
            by_json = {j: r for r, j in enumerate(pd.json_index)}
            for j, s in enumerate(poly.sides):
                if s != BOUNDARY:
                    occ[self.arc_index[s.arc]].append((pi, by_json[j]))
        self.occ: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = tuple(
            (o[0], o[1]) for o in occ
        )
        self.slot_of = {}
        for i, pair in enumerate(self.occ):
            for k, pr in enumerate(pair):
                self.slot_of[pr] = (i, k)

    @property
    def n_arcs(self) -> int:
        return len(self.arc_ids)

    @property
    def n_polys(self) -> int:
        return len(self.polys)

    def side(self, arc: int, slot: int) -> tuple[int, int]:
        """(polygon, rank) of the given occurrence of an arc."""
        return self.occ[arc][slot]

    def other_side(self, arc: int, slot: int) -> tuple[int, int]:
        return self.occ[arc][1 - slot]

    def phase(self, poly: int, R: int) -> BiDegree:
        return self.polys[poly].phase(R)

    def rotation_degree(self, poly: int, R1: int, R2: int) -> BiDegree:
        """Degree of the clockwise rotation from copy R1 to copy R2 (as an arrow)."""
        p = self.polys[poly]
        return BiDegree(1, 0) + p.phase(R1) - p.phase(R2)

    def self_folded(self, arc: int) -> bool:
        return self.occ[arc][0][0] == self.occ[arc][1][0]

    def __repr__(self) -> str:
        return f"Surface({self.spec.name!r}, arcs={self.n_arcs}, polygons={self.n_polys})"


def _poly_data(poly: Polygon, arc_index: dict) -> PolyData:
    sides = poly.sides
    b = [j for j, s in enumerate(sides) if s == BOUNDARY][0]
    L = len(sides)
    m = L - 1
    json_index = tuple((b + 1 + r) % L for r in range(m))
    rank_of_json = {j: r for r, j in enumerate(json_index)}
    arc_json = [j for j in range(L) if j != b]
    f = [0] * m
    for k, j in enumerate(arc_json):
        f[rank_of_json[j]] = poly.corner_degrees[k]
    n = [0] * m
    for r in range(m - 1):
        n[r + 1] = n[r] + 1 - f[r]
    return PolyData(
        m=m,
        arcs=tuple(arc_index[sides[j].arc] for j in json_index),
        flips=tuple(sides[j].flip for j in json_index),
        f=tuple(f),
        n=tuple(n),
        json_index=json_index,
        boundary_index=b,
    )


def _validate(spec: SurfaceSpec) -> ValidationReport:
    if len(set(spec.arcs)) != len(spec.arcs):
        raise NotASurface("duplicate arc identifiers")
    if not spec.polygons:
        raise NotASurface("no polygons")
    arcset = set(spec.arcs)
    seen: dict[Any, list[tuple[int, int, bool]]] = {a: [] for a in spec.arcs}
    for pi, poly in enumerate(spec.polygons):
        nb = sum(1 for s in poly.sides if s == BOUNDARY)
        if nb != 1:
            raise MultipleBoundarySides(f"polygon {pi} has {nb} boundary sides, expected exactly 1")
        m = len(poly.sides) - 1
        if len(poly.corner_degrees) != m:
            raise NotASurface(f"polygon {pi} has {m} arc sides but {len(poly.corner_degrees)} corner degrees")
        if sum(poly.corner_degrees) != m:
            raise DegreeSumViolation(
                f"polygon {pi}: corner degrees sum to {sum(poly.corner_degrees)}, expected {m}"
            )
        for j, s in enumerate(poly.sides):
            if s == BOUNDARY:
                continue
            if not isinstance(s, ArcSide):
                raise NotASurface(f"polygon {pi} side {j} is neither an arc side nor the boundary")
            if s.arc not in arcset:
                raise UnknownArc(f"polygon {pi} refers to unknown arc {s.arc!r}")
            seen[s.arc].append((pi, j, s.flip))
    for a, occs in seen.items():
        if len(occs) != 2:
            raise NotASurface(f"arc {a!r} occurs {len(occs)} times, expected 2")
        if occs[0][2] == occs[1][2]:
            raise NotASurface(f"arc {a!r} is glued with inconsistent orientation")

    # vertices: corner j of a polygon is the start of side j (clockwise)
    uf = UnionFind()
    polys_uf = UnionFind()
    for pi, poly in enumerate(spec.polygons):
        polys_uf[pi]
        for j in range(len(poly.sides)):
            uf[(pi, j)]

    def ends(pi: int, j: int, flip: bool):
        L = len(spec.polygons[pi].sides)
        a, b = (pi, j), (pi, (j + 1) % L)
        return (b, a) if flip else (a, b)

    for a, ((p0, j0, f0), (p1, j1, f1)) in seen.items():
        t0, h0 = ends(p0, j0, f0)
        t1, h1 = ends(p1, j1, f1)
        uf.union(t0, t1)
        uf.union(h0, h1)
        polys_uf.union(p0, p1)
    if len(list(polys_uf.to_sets())) != 1:
        raise NotASurface("polygon complex is disconnected")
    vertex_of = {}
    for k, cls in enumerate(uf.to_sets()):
        for c in cls:
            vertex_of[c] = k
    V = len(set(vertex_of.values()))
    degree = [0] * V
    bd = UnionFind()
    for v in range(V):
        bd[v]
    for pi, poly in enumerate(spec.polygons):
        j = poly.sides.index(BOUNDARY)
        L = len(poly.sides)
        u, v = vertex_of[(pi, j)], vertex_of[(pi, (j + 1) % L)]
        degree[u] += 1
        degree[v] += 1
        bd.union(u, v)
    if any(d != 2 for d in degree):
        raise NotASurface("some marked point is not a boundary point with exactly two boundary segments")
    F = len(spec.polygons)
    E = len(spec.arcs) + F
    chi = V - E + F
    b = len(list(bd.to_sets()))
    twice_g = 2 - b - chi
    if twice_g < 0 or twice_g % 2:
        raise NotASurface(f"inconsistent Euler characteristic {chi} with {b} boundary components")
    if not (V == F):
        raise NotASurface(f"|M| = {V} differs from |Y| = |Delta| = {F}")
    self_folded = [a for a, occs in seen.items() if occs[0][0] == occs[1][0]]
    shared: dict[tuple[int, int], int] = {}
    for a, occs in seen.items():
        p, q = sorted((occs[0][0], occs[1][0]))
        if p != q:
            shared[(p, q)] = shared.get((p, q), 0) + 1
    multiply = sorted(k for k, c in shared.items() if c > 1)
    return ValidationReport(
        name=spec.name,
        genus=twice_g // 2,
        boundary_components=b,
        open_marked_points=V,
        closed_marked_points=F,
        decorations=F,
        arcs=len(spec.arcs),
        polygons=F,
        self_folded=self_folded,
        multiply_shared=multiply,
    )


def validate_surface(spec: SurfaceSpec) -> ValidationReport:
    """Check every structural invariant; raise on the first violation."""
    return _validate(spec)


def compile_surface(spec: SurfaceSpec | Surface) -> Surface:
    if isinstance(spec, Surface):
        return spec
    return Surface(spec)


# ---------------------------------------------------------------------------
# construction helpers


def _polygon_from_ranks(arcs: Sequence, flips: Sequence[bool], n: Sequence[int]) -> Polygon:
    """Build a polygon listing arc sides in rank order then the boundary side."""
    m = len(arcs)
    f = []
    for r in range(m):
        nxt = n[r + 1] if r + 1 < m else n[0]
        f.append(1 - (nxt - n[r]))
    sides = tuple(ArcSide(a, fl) for a, fl in zip(arcs, flips)) + (BOUNDARY,)
    return Polygon(sides, tuple(f))


def _set_rank_degrees(poly: Polygon, f_by_rank: Sequence[int]) -> Polygon:
    sides = poly.sides
    b = sides.index(BOUNDARY)
    L = len(sides)
    arc_json = [j for j in range(L) if j != b]
    degs = [f_by_rank[(j - b - 1) % L] for j in arc_json]
    return Polygon(sides, tuple(degs))


def regrade_arc(spec: SurfaceSpec, arc: Any, k: int) -> SurfaceSpec:
    """Shift the grading of one arc by ``k``.

    Every arrow into the arc gains ``(k, 0)`` and every arrow out of it loses
    ``(k, 0)``.
    """
    if arc not in spec.arcs:
        raise UnknownArc(f"unknown arc {arc!r}")
    if k == 0:
        return spec
    surf = compile_surface(spec)
    i = surf.arc_index[arc]
    polys = list(spec.polygons)
    for pi, poly in enumerate(spec.polygons):
        pd = surf.polys[pi]
        f = list(pd.f)
        touched = False
        for r in range(pd.m):
            if pd.arcs[r] == i:
                f[(r - 1) % pd.m] += k
                f[r] -= k
                touched = True
        if touched:
            polys[pi] = _set_rank_degrees(poly, f)
    return SurfaceSpec(spec.arcs, tuple(polys), spec.name)


@dataclass(frozen=True)
class SlideData:
    """Bookkeeping needed to transport curves across one slide.

    The slid arc keeps its identifier.  ``P`` is the polygon on the right of
    the arc when walking towards the chosen end; ``delta`` is the arc side of
    ``P`` that follows the slid arc clockwise.  After the slide, ``P`` loses
    both sides and gains the new diagonal, while ``Q`` (the other polygon of
    the slid arc) trades the slid arc for ``delta`` followed by the diagonal.
    """

    old: SurfaceSpec
    new: SurfaceSpec
    gamma: int
    delta: int
    P: int
    Q: int
    r: int  # rank of the slid arc in P (old)
    k: int  # rank of the slid arc in Q (old)

    def transport(self, curve):
        """Rewrite a curve of the old arc system in the new one."""
        from .curves import transport_curve

        return transport_curve(self, curve)


def slide(spec: SurfaceSpec, arc: Any, end: str = "head") -> tuple[SurfaceSpec, SlideData]:
    """Replace ``arc`` by the diagonal obtained by sliding its chosen end.

    ``end`` is ``"head"`` or ``"tail"``, relative to the orientation fixed by
    the ``flip`` flags (an unflipped side runs from tail to head clockwise).
    The new arc inherits the old arc's phase in both polygons, which keeps
    the degrees of every arrow between surviving arcs unchanged.
    """
    if arc not in spec.arcs:
        raise UnknownArc(f"unknown arc {arc!r}")
    if end not in ("head", "tail"):
        raise SlideDegenerate(f"end must be 'head' or 'tail', got {end!r}")
    surf = compile_surface(spec)
    g = surf.arc_index[arc]
    if surf.self_folded(g):
        raise SlideDegenerate("cannot slide a self-folded arc")
    want_flip = end == "tail"
    (p0, r0), (p1, r1) = surf.occ[g]
    if surf.polys[p0].flips[r0] == want_flip:
        (P, r), (Q, k) = (p0, r0), (p1, r1)
    else:
        (P, r), (Q, k) = (p1, r1), (p0, r0)
    pd, qd = surf.polys[P], surf.polys[Q]
    if r + 1 >= pd.m:
        raise SlideDegenerate("the side after the arc is the boundary side; nothing to slide along")
    d = pd.arcs[r + 1]
    ids = surf.arc_ids
    # P': drop rank r+1, the new diagonal keeps the slot and phase of the arc
    p_arcs = [ids[a] for a in pd.arcs]
    p_flips = list(pd.flips)
    p_n = list(pd.n)
    del p_arcs[r + 1], p_flips[r + 1], p_n[r + 1]
    # Q': replace the arc by (delta, diagonal)
    q_arcs = [ids[a] for a in qd.arcs]
    q_flips = list(qd.flips)
    q_n = list(qd.n)
    n_delta = qd.n[k] + pd.n[r + 1] - pd.n[r] - 1
    q_arcs[k:k + 1] = [ids[d], ids[g]]
    q_flips[k:k + 1] = [pd.flips[r + 1], qd.flips[k]]
    q_n[k:k + 1] = [n_delta, qd.n[k]]
    base = q_n[0]
    q_n = [v - base for v in q_n]
    base = p_n[0]
    p_n = [v - base for v in p_n]
    polys = list(spec.polygons)
    polys[P] = _polygon_from_ranks(p_arcs, p_flips, p_n)
    polys[Q] = _polygon_from_ranks(q_arcs, q_flips, q_n)
    new = SurfaceSpec(spec.arcs, tuple(polys), spec.name)
    validate_surface(new)
    return new, SlideData(spec, new, g, d, P, Q, r, k)


# ---------------------------------------------------------------------------
# seeds


def disk_a(n: int) -> SurfaceSpec:
    """Disk with ``n+1`` marked points cut into a chain of polygons."""
    if n < 1:
        raise BadParameters("disk_a(n) needs n >= 1")
    arcs = tuple(range(1, n + 1))
    polys = [Polygon((ArcSide(1, False), BOUNDARY), (1,))]
    for k in range(1, n):
        polys.append(Polygon((ArcSide(k, True), ArcSide(k + 1, False), BOUNDARY), (1, 1)))
    polys.append(Polygon((ArcSide(n, True), BOUNDARY), (1,)))
    return SurfaceSpec(arcs, tuple(polys), f"disk_a({n})")


def annulus(p: int, q: int) -> SurfaceSpec:
    """Annulus with ``p`` outer and ``q`` inner marked points.

    All ``p+q`` arcs run between the two boundary circles and cut the annulus
    into triangles; the outer-boundary triangles come first.
    """
    if p < 1 or q < 1:
        raise BadParameters("annulus(p, q) needs p, q >= 1")
    N = p + q
    arcs = tuple(range(1, N + 1))
    polys = []
    for t in range(N):
        a, b = t + 1, (t + 1) % N + 1
        if t < p:
            polys.append(Polygon((ArcSide(a, True), ArcSide(b, False), BOUNDARY), (1, 1)))
        else:
            polys.append(Polygon((ArcSide(b, False), ArcSide(a, True), BOUNDARY), (1, 1)))
    return SurfaceSpec(arcs, tuple(polys), f"annulus({p},{q})")


def torus1(m: int) -> SurfaceSpec:
    """Once-holed torus with ``m`` open marked points on its boundary.

    A square polygon carries the two handle arcs; each further marked point
    adds one arc cutting off a boundary digon.
    """
    if m < 1:
        raise BadParameters("torus1(m) needs m >= 1")
    arcs = ["a", "b"] + [f"c{k}" for k in range(1, m)]
    main = [ArcSide("a", False), ArcSide("b", False), ArcSide("a", True), ArcSide("b", True)]
    main += [ArcSide(f"c{k}", False) for k in range(1, m)]
    polys = [Polygon(tuple(main) + (BOUNDARY,), tuple([1] * len(main)))]
    for k in range(1, m):
        polys.append(Polygon((ArcSide(f"c{k}", True), BOUNDARY), (1,)))
    return SurfaceSpec(tuple(arcs), tuple(polys), f"torus1({m})")


def self_folded_annulus() -> SurfaceSpec:
    """Annulus with one marked point per boundary circle and a self-folded arc.

    Arc ``a`` joins the two circles and appears twice in the big polygon;
    arc ``b`` encircles the inner boundary circle.
    """
    big = Polygon((ArcSide("a", False), ArcSide("b", False), ArcSide("a", True), BOUNDARY), (1, 1, 1))
    small = Polygon((ArcSide("b", True), BOUNDARY), (1,))
    return SurfaceSpec(("a", "b"), (big, small), "annulus_sf")


_SEED_PATTERNS = [
    (re.compile(r"disk_a\(?(\d+)\)?$"), lambda g: disk_a(int(g[0]))),
    (re.compile(r"annulus[(_]?(\d+)[,_](\d+)\)?$"), lambda g: annulus(int(g[0]), int(g[1]))),
    (re.compile(r"annulus(\d)(\d)$"), lambda g: annulus(int(g[0]), int(g[1]))),
    (re.compile(r"torus1[(_]?(\d+)\)?$"), lambda g: torus1(int(g[0]))),
    (re.compile(r"annulus_sf$"), lambda g: self_folded_annulus()),
]

SEED_NAMES = ("disk_a(n)", "annulus(p,q)", "torus1(m)", "annulus_sf")


def seed_surface(name: str) -> SurfaceSpec:
    """Look up a seed surface, e.g. ``disk_a2``, ``disk_a(3)``, ``annulus(1,1)``."""
    key = name.replace(" ", "")
    if key.startswith("seed:"):
        key = key[5:]
    for pat, build in _SEED_PATTERNS:
        mt = pat.match(key)
        if mt:
            return build(mt.groups())
    raise BadParameters(f"unknown seed surface {name!r}; known families: {', '.join(SEED_NAMES)}")


def load_surface(ref: str) -> SurfaceSpec:
    """Accept ``seed:<name>`` or a path to a surface JSON file."""
    if ref.startswith("seed:"):
        return seed_surface(ref)
    with open(ref, encoding="utf-8") as fh:
        return SurfaceSpec.from_json(fh.read())


def all_seeds() -> list[SurfaceSpec]:
    return [disk_a(1), disk_a(2), disk_a(3), annulus(1, 1), annulus(2, 1), torus1(1), torus1(2), self_folded_annulus()]


def iter_arc_ids(spec: SurfaceSpec) -> Iterable:
    return iter(spec.arcs)
