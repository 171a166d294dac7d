"""Exact polyline drawing of two curves, used as an oracle for interior crossings.

Each polygon is drawn as a punctured disk: the decoration sits at the
origin and the boundary is the square of half-size 1, split clockwise into
one unit per arc side plus one unit for the boundary side.  A strand that
turns by an unrolled angle is drawn radially inwards, along a slowly
shrinking square, and radially out again; longer strands go deeper.  A
strand ending at the decoration is a straight segment to the origin.

Points on an arc are ordered by comparing the continuations of the two
strands in the direction of travel of the first curve, then backwards, and
finally by pushing the second curve to the right of the first.  The order
on each arc is a linear extension of these pairwise relations.  When a curve
crosses itself, the placement of crossings inside shared runs may have to
change before such an extension exists; failing all placements raises
:class:`InternalCheckFailure`.

Crossings are the distinct intersection points of a strand of one curve
with a strand of the other, away from the origin.  Everything is exact
rational arithmetic.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .curves import CurveWalk, check_walk
from .errors import InternalCheckFailure
from .surface import Surface

Point = tuple[Fraction, Fraction]

RAY_KEY = (1, 0)


def _step_key(offset: int | None) -> tuple[int, int]:
    """Order of exits as seen from the entry side, ascending along the side."""
    if offset is None:
        return RAY_KEY
    if offset < 0:
        return (0, -offset)
    return (2, -offset)


def _continuation(c: CurveWalk, j: int, forward: bool) -> Iterator[tuple[int, int]]:
    n = len(c.passages)
    idx = j
    if forward:
        while True:
            if idx >= n - 1:
                yield RAY_KEY
                return
            yield _step_key(c.sweeps[idx])
            idx += 1
    else:
        while True:
            if idx <= 0:
                yield RAY_KEY
                return
            yield _step_key(-c.sweeps[idx - 1])
            idx -= 1


def _lex(a: Iterator, b: Iterator) -> int:
    for ka, kb in zip(a, b):
        if ka != kb:
            return -1 if ka < kb else 1
        if ka == RAY_KEY:
            return 0
    return 0


def _compare(sigma: CurveWalk, j: int, tau: CurveWalk, k: int, rule: int = 0) -> int:
    """-1 if sigma's point comes first on the arc, in the coordinate of the
    polygon that sigma enters at passage j.

    ``rule`` picks where a crossing inside a shared run is placed: the
    continuations are compared first in the direction of travel of sigma
    (rule 0), against it (rule 1), along tau (rule 2) or against tau (3).
    Every rule is consistent along a run, so each gives a drawing without
    bigons between the two curves.
    """
    same = tau.passages[k][1] == sigma.passages[j][1]
    s_first = {0: True, 1: False, 2: same, 3: not same}[rule]
    for s_fwd in (s_first, not s_first):
        t_fwd = s_fwd if same else not s_fwd
        r = _lex(_continuation(sigma, j, s_fwd), _continuation(tau, k, t_fwd))
        if r:
            return r if s_fwd else -r
    # identical strands: the second curve runs on the right of the first
    return 1


def _linear_order(pts, succ, indeg):
    heap = [p for p in pts if indeg[p] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        p = heapq.heappop(heap)
        order.append(p)
        for q in succ[p]:
            indeg[q] -= 1
            if indeg[q] == 0:
                heapq.heappush(heap, q)
    return order if len(order) == len(pts) else None


def _arc_positions(surf: Surface, curves: tuple[CurveWalk, CurveWalk]) -> dict[tuple[int, int], Fraction]:
    """Position in (0,1) of every passage point, in the coordinate of side(arc, 0)."""
    for rule in range(4):
        pos = _arc_positions_rule(curves, rule)
        if pos is not None:
            return pos
    raise InternalCheckFailure("no consistent order of points on the arcs")


def _arc_positions_rule(curves, rule: int):
    sigma, tau = curves
    on_arc: dict[int, list[tuple[int, int]]] = {}
    for label, c in enumerate(curves):
        for j, (a, _) in enumerate(c.passages):
            on_arc.setdefault(a, []).append((label, j))
    pos: dict[tuple[int, int], Fraction] = {}
    for a, pts in on_arc.items():
        succ: dict = {p: [] for p in pts}
        indeg = {p: 0 for p in pts}
        s_pts = [p for p in pts if p[0] == 0]
        t_pts = [p for p in pts if p[0] == 1]
        for p in s_pts:
            slot = sigma.passages[p[1]][1]
            for q in t_pts:
                r = _compare(sigma, p[1], tau, q[1], rule)
                if slot == 1:
                    r = -r
                lo, hi = (p, q) if r < 0 else (q, p)
                succ[lo].append(hi)
                indeg[hi] += 1
        order = _linear_order(pts, succ, indeg)
        if order is None:
            return None
        n = len(order)
        for i, p in enumerate(order):
            pos[p] = Fraction(i + 1, n + 1)
    return pos


@dataclass(frozen=True)
class Strand:
    label: int
    poly: int
    lo: Fraction
    hi: Fraction | None  # None for a strand ending at the decoration


def _angle(m: int, R: int, x: Fraction) -> Fraction:
    w, r = divmod(R, m)
    return Fraction(w * (m + 1) + r) + x


def _strands(surf: Surface, c: CurveWalk, label: int, pos) -> list[Strand]:
    out = []
    n = len(c.passages)

    def coord(j: int, poly_side: tuple[int, int]) -> Fraction:
        a, _ = c.passages[j]
        x = pos[(label, j)]
        return x if surf.side(a, 0) == poly_side else 1 - x

    P0, rx = surf.other_side(*c.passages[0])
    out.append(Strand(label, P0, _angle(surf.polys[P0].m, rx, coord(0, (P0, rx))), None))
    for j in range(n):
        P, re = surf.side(*c.passages[j])
        m = surf.polys[P].m
        a0 = _angle(m, re, coord(j, (P, re)))
        if j == n - 1:
            out.append(Strand(label, P, a0, None))
            continue
        t = c.sweeps[j]
        nxt = surf.other_side(*c.passages[j + 1])
        a1 = _angle(m, re + t, coord(j + 1, nxt))
        if nxt[0] != P or (re + t) % m != nxt[1]:
            raise InternalCheckFailure("walk does not match the surface")
        out.append(Strand(label, P, min(a0, a1), max(a0, a1)))
    return out


def _square(turn: int, theta: Fraction, rho: Fraction) -> Point:
    """Point at angle ``theta`` (turn = one full turn) on the square of half-size rho."""
    s = (theta % turn) / turn * 4
    q = int(s)
    f = s - q
    # clockwise from the top-left corner
    if q == 0:
        x, y = -1 + 2 * f, Fraction(1)
    elif q == 1:
        x, y = Fraction(1), 1 - 2 * f
    elif q == 2:
        x, y = 1 - 2 * f, Fraction(-1)
    else:
        x, y = Fraction(-1), -1 + 2 * f
    return (x * rho, y * rho)


def _polyline(turn: int, st: Strand, rho: Fraction | None, band: Fraction) -> list[Point]:
    """Radial in, spiral inwards by ``band`` along the turn, radial out.

    The slight spiral keeps a strand that turns more than once from meeting
    another strand twice at the same point.
    """
    if st.hi is None:
        return [_square(turn, st.lo, Fraction(1)), (Fraction(0), Fraction(0))]
    span = st.hi - st.lo

    def r(theta: Fraction) -> Fraction:
        return rho - band * (theta - st.lo) / span

    pts = [_square(turn, st.lo, Fraction(1)), _square(turn, st.lo, rho)]
    quarter = Fraction(turn, 4)
    k = int(st.lo // quarter) + 1
    while k * quarter < st.hi:
        pts.append(_square(turn, k * quarter, r(k * quarter)))
        k += 1
    end = rho - band
    pts.append(_square(turn, st.hi, end))
    pts.append(_square(turn, st.hi, Fraction(1)))
    return pts


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_intersection(p1: Point, p2: Point, q1: Point, q2: Point) -> Point | None:
    d = (p2[0] - p1[0]) * (q2[1] - q1[1]) - (p2[1] - p1[1]) * (q2[0] - q1[0])
    if d == 0:
        if _cross(p1, p2, q1) != 0:
            return None
        # collinear: project on the dominant axis of p and intersect intervals
        ax = 0 if p1[0] != p2[0] else 1
        lo = max(min(p1[ax], p2[ax]), min(q1[ax], q2[ax]))
        hi = min(max(p1[ax], p2[ax]), max(q1[ax], q2[ax]))
        if lo > hi:
            return None
        if lo < hi:
            raise InternalCheckFailure("overlapping segments in the polyline drawing")
        for pt in (q1, q2):
            if pt[ax] == lo:
                return pt
        return None
    t = ((q1[0] - p1[0]) * (q2[1] - q1[1]) - (q1[1] - p1[1]) * (q2[0] - q1[0])) / d
    u = ((q1[0] - p1[0]) * (p2[1] - p1[1]) - (q1[1] - p1[1]) * (p2[0] - p1[0])) / d
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1]))
    return None


def _bbox(pts: list[Point]):
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return min(xs), max(xs), min(ys), max(ys)


def _meet(a: list[Point], b: list[Point]) -> set[Point]:
    out: set[Point] = set()
    for i in range(len(a) - 1):
        for j in range(len(b) - 1):
            p = _seg_intersection(a[i], a[i + 1], b[j], b[j + 1])
            if p is not None:
                out.add(p)
    out.discard((Fraction(0), Fraction(0)))
    return out


def draw(surf: Surface, sigma: CurveWalk, tau: CurveWalk) -> dict[int, list[tuple[int, list[Point]]]]:
    """Polylines per polygon, tagged with the curve label (0 for sigma, 1 for tau)."""
    check_walk(surf, sigma)
    check_walk(surf, tau)
    pos = _arc_positions(surf, (sigma, tau))
    strands = _strands(surf, sigma, 0, pos) + _strands(surf, tau, 1, pos)
    by_poly: dict[int, list[Strand]] = {}
    for st in strands:
        by_poly.setdefault(st.poly, []).append(st)
    out: dict[int, list] = {}
    for P, sts in by_poly.items():
        turn = surf.polys[P].m + 1
        finite = sorted((s for s in sts if s.hi is not None), key=lambda s: (s.hi - s.lo, s.lo, s.label))
        step = Fraction(1, len(finite) + 2)
        depth = {id(s): (len(finite) + 1 - i) * step for i, s in enumerate(finite)}
        out[P] = [(s.label, _polyline(turn, s, depth.get(id(s)), step / 3)) for s in sts]
    return out


def interior_crossings(surf: Surface, sigma: CurveWalk, tau: CurveWalk) -> int:
    """Number of interior crossings of the two curves in the exact drawing."""
    total = 0
    for lines in draw(surf, sigma, tau).values():
        a = [(pl, _bbox(pl)) for lab, pl in lines if lab == 0]
        b = [(pl, _bbox(pl)) for lab, pl in lines if lab == 1]
        for pa, ba in a:
            for pb, bb in b:
                if ba[1] < bb[0] or bb[1] < ba[0] or ba[3] < bb[2] or bb[3] < ba[2]:
                    continue
                total += len(_meet(pa, pb))
    return total
