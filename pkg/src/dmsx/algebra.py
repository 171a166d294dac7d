"""The graded quiver with differential and its Ext algebra.

Arrows are clockwise rotations inside a polygon from one arc side to another
(sweep ``1 <= t <= m``).  A full turn returning to the same side is the loop
at that arc; the two full turns around an arc (one in each incident polygon)
are identified, so every arc carries exactly one loop.

The Ext algebra has one basis element per vertex (identity) and one per
arrow.  Composition concatenates rotations in the same polygon as long as the
total sweep stays within one full turn.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .bigraded_poly import ONE, ZERO, BiDegree, format_degree
from .errors import AssociativityFailure, DSquareNonzero, InternalCheckFailure
from .surface import Surface, SurfaceSpec, compile_surface


@dataclass(frozen=True)
class ArrowClass:
    """A class of positive rotations; ``witnesses`` lists ``(polygon, start rank, sweep)``."""

    id: int
    source: int
    target: int
    degree: BiDegree
    loop: bool
    witnesses: tuple[tuple[int, int, int], ...]

    @property
    def poly(self) -> int:
        return self.witnesses[0][0]

    @property
    def start(self) -> int:
        return self.witnesses[0][1]

    @property
    def sweep(self) -> int:
        return self.witnesses[0][2]

    @property
    def pi_degree(self) -> BiDegree:
        return ONE - self.degree


Path = tuple[int, ...]


@dataclass
class QuiverDGA:
    """Vertices are arc indices; ``d`` maps an arrow id to ``{path: coeff}``."""

    surface: Surface
    arrows: list[ArrowClass]
    d: dict[int, dict[Path, int]]
    vertices: tuple[int, ...] = ()

    def arrow(self, i: int) -> ArrowClass:
        return self.arrows[i]


def enumerate_arrows(spec: SurfaceSpec | Surface) -> list[ArrowClass]:
    """All arrow classes; loops first come once per arc."""
    surf = compile_surface(spec)
    out: list[ArrowClass] = []
    for a in range(surf.n_arcs):
        wit = []
        for (p, r) in surf.occ[a]:
            wit.append((p, r, surf.polys[p].m))
        deg = surf.rotation_degree(wit[0][0], wit[0][1], wit[0][1] + wit[0][2])
        out.append(ArrowClass(len(out), a, a, deg, True, tuple(wit)))
    for p, pd in enumerate(surf.polys):
        for x in range(pd.m):
            for t in range(1, pd.m):
                y = (x + t) % pd.m
                deg = surf.rotation_degree(p, x, x + t)
                out.append(ArrowClass(len(out), pd.arcs[x], pd.arcs[y], deg, False, ((p, x, t),)))
    return out


def _arrow_lookup(surf: Surface, arrows: Iterable[ArrowClass]) -> dict:
    """Map ``(polygon, start rank, sweep)`` to the arrow id (loops: every witness)."""
    table = {}
    for ar in arrows:
        for w in ar.witnesses:
            table[w] = ar.id
    return table


def build_differential(spec: SurfaceSpec | Surface, check: bool = True) -> QuiverDGA:
    """d(b) = sum over splittings of the rotation of (-1)^{|b1|} b1 b2."""
    surf = compile_surface(spec)
    arrows = enumerate_arrows(surf)
    look = _arrow_lookup(surf, arrows)
    d: dict[int, dict[Path, int]] = {}
    for ar in arrows:
        terms: dict[Path, int] = {}
        for (p, x, t) in ar.witnesses:
            m = surf.polys[p].m
            for s in range(1, t):
                b1 = look[(p, x, s)]
                b2 = look[(p, (x + s) % m, t - s)]
                sign = -1 if arrows[b1].degree.z % 2 else 1
                key = (b1, b2)
                terms[key] = terms.get(key, 0) + sign
        d[ar.id] = {k: v for k, v in terms.items() if v}
    dga = QuiverDGA(surf, arrows, d, tuple(range(surf.n_arcs)))
    if check:
        check_homogeneity(dga)
        check_d_squared(dga)
    return dga


def check_homogeneity(dga: QuiverDGA) -> None:
    for b, terms in dga.d.items():
        for path in terms:
            total = sum((dga.arrows[a].degree for a in path), ZERO)
            if total != dga.arrows[b].degree + ONE:
                raise InternalCheckFailure(f"d is not homogeneous on arrow {b}")
            for a1, a2 in zip(path, path[1:]):
                if dga.arrows[a1].target != dga.arrows[a2].source:
                    raise InternalCheckFailure(f"non-composable path in d({b})")


def apply_d(dga: QuiverDGA, chain: dict[Path, int]) -> dict[Path, int]:
    """Extend d to paths by the Leibniz rule (sign (-1)^{|prefix|} in z)."""
    out: dict[Path, int] = {}
    for path, c in chain.items():
        prefix_deg = 0
        for k, a in enumerate(path):
            sign = -1 if prefix_deg % 2 else 1
            for sub, c2 in dga.d.get(a, {}).items():
                new = path[:k] + sub + path[k + 1:]
                out[new] = out.get(new, 0) + sign * c * c2
            prefix_deg += dga.arrows[a].degree.z
    return {k: v for k, v in out.items() if v}


def check_d_squared(dga: QuiverDGA) -> None:
    for b in dga.d:
        dd = apply_d(dga, dga.d[b])
        if dd:
            raise DSquareNonzero(f"d^2 of arrow {b} is {dd}")


def d_squared_all_zero(dga: QuiverDGA) -> bool:
    return all(not apply_d(dga, dga.d[b]) for b in dga.d)


def zero_part(dga: QuiverDGA | SurfaceSpec | Surface) -> QuiverDGA:
    """Restrict to arrows whose degree has no X part."""
    if not isinstance(dga, QuiverDGA):
        dga = build_differential(dga)
    keep = [a for a in dga.arrows if a.degree.x == 0]
    ids = {a.id for a in keep}
    d = {}
    for a in keep:
        terms = {path: c for path, c in dga.d[a.id].items() if all(x in ids for x in path)}
        # homogeneity forces every path of d(a) to have X part 0; an arrow
        # of positive X degree would need a partner of negative X degree.
        if len(terms) != len(dga.d[a.id]):
            raise InternalCheckFailure(f"d of zero-part arrow {a.id} leaves the zero part")
        d[a.id] = terms
    return QuiverDGA(dga.surface, keep, d, dga.vertices)


# ---------------------------------------------------------------------------
# Ext algebra


@dataclass(frozen=True)
class ExtBasisElement:
    index: int
    source: int
    target: int
    degree: BiDegree  # pi-degree
    arrow: int | None  # None for identities

    @property
    def is_identity(self) -> bool:
        return self.arrow is None


@dataclass
class ExtAlgebra:
    surface: Surface
    basis: list[ExtBasisElement]
    arrows: list[ArrowClass]
    _mult: dict[tuple[int, int], int] = field(default_factory=dict)
    _from: dict[int, list[int]] = field(default_factory=dict)
    _hom: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    _by_witness: dict = field(default_factory=dict)

    def identity(self, v: int) -> int:
        return v

    def compose(self, first: int, second: int) -> int | None:
        """Index of ``second o first`` (first applied first), or None for zero."""
        return self._mult.get((first, second))

    def hom_basis(self, u: int, v: int) -> list[int]:
        """Basis elements in Hom(S_u, S_v)."""
        return self._hom.get((u, v), [])

    def rotation(self, poly: int, start: int, sweep: int) -> int:
        """Basis element for the rotation (polygon, start rank, sweep) with 1 <= sweep <= m."""
        return self._by_witness[(poly, start % self.surface.polys[poly].m, sweep)]

    def describe(self, i: int) -> str:
        e = self.basis[i]
        ids = self.surface.arc_ids
        if e.is_identity:
            return f"id_{ids[e.source]}"
        ar = self.arrows[e.arrow]
        kind = "loop" if ar.loop else "pi"
        return f"{kind}[{ids[e.source]}->{ids[e.target]}; P{ar.poly} r{ar.start} t{ar.sweep}]"


def build_ext(spec: SurfaceSpec | Surface, check: bool = True) -> ExtAlgebra:
    surf = compile_surface(spec)
    arrows = enumerate_arrows(surf)
    basis = [ExtBasisElement(v, v, v, ZERO, None) for v in range(surf.n_arcs)]
    for ar in arrows:
        basis.append(ExtBasisElement(len(basis), ar.source, ar.target, ar.pi_degree, ar.id))
    ext = ExtAlgebra(surf, basis, arrows)
    off = surf.n_arcs
    for ar in arrows:
        for w in ar.witnesses:
            ext._by_witness[w] = off + ar.id
    for e in basis:
        ext._hom.setdefault((e.source, e.target), []).append(e.index)
    mult = ext._mult
    for e in basis:
        # identities
        mult[(e.source, e.index)] = e.index
        mult[(e.index, e.target)] = e.index
    for a1 in arrows:
        if a1.loop:
            continue
        p, x, t1 = a1.witnesses[0]
        m = surf.polys[p].m
        for t2 in range(1, m - t1 + 1):
            y = (x + t1) % m
            second = ext._by_witness.get((p, y, t2))
            if second is None:
                continue
            if ext.arrows[second - off].loop:
                continue
            res = ext._by_witness[(p, x, t1 + t2)]
            mult[(off + a1.id, second)] = res
    if check:
        check_associativity(ext)
        for (i, j), k in mult.items():
            if basis[i].degree + basis[j].degree != basis[k].degree:
                raise InternalCheckFailure("Ext composition is not degree additive")
    return ext


def check_associativity(ext: ExtAlgebra) -> None:
    """(c o b) o a == c o (b o a) on all composable basis triples."""
    n = len(ext.basis)
    by_source: dict[int, list[int]] = {}
    for e in ext.basis:
        by_source.setdefault(e.source, []).append(e.index)
    for a in range(n):
        for b in by_source.get(ext.basis[a].target, []):
            ab = ext.compose(a, b)
            for c in by_source.get(ext.basis[b].target, []):
                bc = ext.compose(b, c)
                left = None if ab is None else ext.compose(ab, c)
                right = None if bc is None else ext.compose(a, bc)
                if left != right:
                    raise AssociativityFailure(f"basis triple {(a, b, c)} is not associative")


def render_algebra(dga: QuiverDGA, zero: QuiverDGA | None = None) -> str:
    surf = dga.surface
    ids = surf.arc_ids
    lines = [f"vertices: {', '.join(str(i) for i in ids)}", "arrows:"]

    def name(a: ArrowClass) -> str:
        if a.loop:
            return f"loop_{ids[a.source]}"
        p, x, t = a.witnesses[0]
        return f"b{a.id}"

    for a in dga.arrows:
        p, x, t = a.witnesses[0]
        kind = "loop " if a.loop else ""
        lines.append(
            f"  {kind}{name(a)}: {ids[a.source]} -> {ids[a.target]}  degree {format_degree(a.degree)}"
            f"  (polygon {p}, rank {x}, sweep {t})"
        )
    lines.append("differential:")
    for a in dga.arrows:
        terms = dga.d.get(a.id, {})
        if not terms:
            continue
        parts = []
        for path, c in sorted(terms.items()):
            word = "*".join(name(dga.arrows[x]) for x in path)
            parts.append(("+ " if c > 0 else "- ") + (f"{abs(c)}*" if abs(c) != 1 else "") + word)
        body = " ".join(parts).lstrip("+ ")
        if body.startswith("- "):
            body = "-" + body[2:]
        lines.append(f"  d({name(a)}) = {body}")
    if zero is not None:
        lines.append("zero part:")
        if not zero.arrows:
            lines.append("  (no arrows)")
        for a in zero.arrows:
            lines.append(f"  {name(a)}: {ids[a.source]} -> {ids[a.target]}  degree {format_degree(a.degree)}")
    return "\n".join(lines)


def algebra_to_dict(dga: QuiverDGA, zero: QuiverDGA) -> dict:
    ids = dga.surface.arc_ids
    return {
        "vertices": list(ids),
        "arrows": [
            {
                "id": a.id,
                "source": ids[a.source],
                "target": ids[a.target],
                "degree": [a.degree.z, a.degree.x],
                "loop": a.loop,
                "witnesses": [list(w) for w in a.witnesses],
            }
            for a in dga.arrows
        ],
        "differential": {
            str(a): [[list(p), c] for p, c in sorted(t.items())] for a, t in dga.d.items() if t
        },
        "zero_part": [a.id for a in zero.arrows],
    }
