"""Double graded curves as walks through the polygon complex.

A :class:`CurveWalk` starts at the decoration of one polygon, crosses a
sequence of arcs and ends at a decoration.  Passage ``(arc, slot)`` means the
curve crosses ``arc`` and enters the polygon holding occurrence ``slot`` of
it.  Each inner segment carries its clockwise sweep ``t`` (in side steps
around the decoration; negative means counterclockwise).  ``chi0`` is the
bi-index at the first passage; the remaining ones follow from the phases:

* positive segment:  ``chi' = chi - (1,0) - phase(entry) + phase(exit)``
* negative segment:  ``chi' = chi + (1,0) + phase(exit) - phase(entry)``

Geometric operations (reduction, braid twists, extension, slides) are done on
a *path* form: a list of pieces ``("S", polygon, a, b)`` (a segment inside a
polygon between angular positions ``a`` and ``b``; ``None`` is the
decoration) and ``("C", arc, slot, tag)`` (a crossing; ``tag`` optionally
carries a known bi-index).  Angular positions are unrolled around the
decoration: rank ``r`` on sheet ``w`` sits at ``w*m + r``; the cut between
sheets lies at ``w*m - 1/2``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .bigraded_poly import ONE, ZERO, BiDegree, as_degree
from .errors import (
    BadAttachment,
    EndpointMismatch,
    InternalCheckFailure,
    InvalidWalk,
    NotAClosedArc,
)
from .surface import SlideData, Surface, compile_surface


@dataclass(frozen=True)
class CurveWalk:
    start: int
    end: int
    passages: tuple[tuple[int, int], ...]
    sweeps: tuple[int, ...]
    chi0: BiDegree = ZERO

    def __post_init__(self):
        object.__setattr__(self, "chi0", as_degree(self.chi0))
        object.__setattr__(self, "passages", tuple((int(a), int(s)) for a, s in self.passages))
        object.__setattr__(self, "sweeps", tuple(int(t) for t in self.sweeps))

    def __len__(self) -> int:
        return len(self.passages)

    def key(self) -> tuple:
        return (self.start, self.end, self.passages, self.sweeps, tuple(self.chi0))

    def __lt__(self, other: "CurveWalk") -> bool:
        return self.key() < other.key()


# ---------------------------------------------------------------------------
# serialization


def curve_to_dict(surf: Surface, c: CurveWalk) -> dict:
    ids = surf.arc_ids
    return {
        "start": c.start,
        "end": c.end,
        "passages": [{"arc": ids[a], "slot": s} for a, s in c.passages],
        "sweeps": list(c.sweeps),
        "chi0": [c.chi0.z, c.chi0.x],
    }


def curve_to_json(surf: Surface, c: CurveWalk) -> str:
    return json.dumps(curve_to_dict(surf, c))


def curve_from_dict(surf: Surface, data: dict) -> CurveWalk:
    try:
        passages = []
        for p in data["passages"]:
            if p["arc"] not in surf.arc_index:
                raise InvalidWalk(f"unknown arc {p['arc']!r}")
            passages.append((surf.arc_index[p["arc"]], int(p["slot"])))
        c = CurveWalk(
            int(data["start"]),
            int(data["end"]),
            tuple(passages),
            tuple(int(t) for t in data.get("sweeps", [])),
            tuple(data.get("chi0", [0, 0])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidWalk(f"malformed curve description: {exc}") from exc
    check_walk(surf, c)
    return c


def curve_from_json(surf: Surface, text: str) -> CurveWalk:
    return curve_from_dict(surf, json.loads(text))


# ---------------------------------------------------------------------------
# geometry of a walk


@dataclass(frozen=True)
class Segment:
    """One segment in canonical coordinates.

    ``entry``/``exit`` are unrolled ranks (``None`` for the decoration).
    Inner segments put the entry on sheet 0; the first segment puts its exit
    on sheet 0.  ``chi_in``/``chi_out`` are the bi-indices at the adjacent
    passages (``None`` at a decoration).
    """

    poly: int
    entry: int | None
    exit: int | None
    chi_in: BiDegree | None
    chi_out: BiDegree | None

    @property
    def sweep(self) -> int | None:
        if self.entry is None or self.exit is None:
            return None
        return self.exit - self.entry


def check_walk(surf: Surface, c: CurveWalk) -> None:
    """Raise :class:`InvalidWalk` unless the walk is syntactically consistent."""
    n = len(c.passages)
    if n == 0:
        raise InvalidWalk("a curve must cross at least one arc")
    if len(c.sweeps) != n - 1:
        raise InvalidWalk(f"expected {n - 1} sweeps, got {len(c.sweeps)}")
    if not (0 <= c.start < surf.n_polys and 0 <= c.end < surf.n_polys):
        raise InvalidWalk("endpoint polygon out of range")
    for a, s in c.passages:
        if not (0 <= a < surf.n_arcs) or s not in (0, 1):
            raise InvalidWalk(f"bad passage {(a, s)}")
    a0, s0 = c.passages[0]
    if surf.other_side(a0, s0)[0] != c.start:
        raise InvalidWalk("first passage does not leave the start polygon")
    a1, s1 = c.passages[-1]
    if surf.side(a1, s1)[0] != c.end:
        raise InvalidWalk("last passage does not enter the end polygon")
    for j in range(n - 1):
        P, re = surf.side(*c.passages[j])
        Px, rx = surf.other_side(*c.passages[j + 1])
        if P != Px:
            raise InvalidWalk(f"passages {j} and {j + 1} are not sides of a common polygon")
        m = surf.polys[P].m
        if (c.sweeps[j] - (rx - re)) % m:
            raise InvalidWalk(f"sweep {c.sweeps[j]} of segment {j + 1} does not reach the exit side")


def step_chi(surf: Surface, poly: int, entry: int, exit_: int, chi: BiDegree) -> BiDegree:
    """Propagate a bi-index along one inner segment."""
    pd = surf.polys[poly]
    dphi = pd.phase(exit_) - pd.phase(entry)
    t = exit_ - entry
    if t > 0:
        return chi - ONE + dphi
    if t < 0:
        return chi + ONE + dphi
    return chi


def chis(surf: Surface, c: CurveWalk) -> list[BiDegree]:
    out = [c.chi0]
    for j, t in enumerate(c.sweeps):
        P, re = surf.side(*c.passages[j])
        out.append(step_chi(surf, P, re, re + t, out[-1]))
    return out


def segments(surf: Surface, c: CurveWalk) -> list[Segment]:
    """Segments ``0..n`` (``n`` = number of passages) with their bi-indices."""
    ch = chis(surf, c)
    n = len(c.passages)
    segs = []
    _, rx = surf.other_side(*c.passages[0])
    segs.append(Segment(c.start, None, rx, None, ch[0]))
    for j in range(1, n):
        P, re = surf.side(*c.passages[j - 1])
        segs.append(Segment(P, re, re + c.sweeps[j - 1], ch[j - 1], ch[j]))
    P, re = surf.side(*c.passages[-1])
    segs.append(Segment(P, re, None, ch[-1], None))
    return segs


# ---------------------------------------------------------------------------
# elementary operations


def invert_curve(c: CurveWalk, surf: Surface | None = None) -> CurveWalk:
    """Reverse the orientation; bi-indices at crossings are unchanged."""
    if surf is None:
        raise TypeError("invert_curve needs the surface to carry the bi-indices over")
    last = chis(surf, c)[-1]
    return CurveWalk(
        c.end,
        c.start,
        tuple((a, 1 - s) for a, s in reversed(c.passages)),
        tuple(-t for t in reversed(c.sweeps)),
        last,
    )


def shift_curve(c: CurveWalk, d) -> CurveWalk:
    """Grading shift: every bi-index gains ``d`` so the string object shifts by ``d``."""
    return replace(c, chi0=c.chi0 + as_degree(d))


def dual_arc(surf: Surface, i: int) -> CurveWalk:
    """The curve crossing only arc ``i``, once, with bi-index 0."""
    P0 = surf.side(i, 0)[0]
    P1 = surf.side(i, 1)[0]
    return CurveWalk(P0, P1, ((i, 1),), (), ZERO)


def dual_arcs(surf: Surface) -> list[CurveWalk]:
    return [dual_arc(surf, i) for i in range(surf.n_arcs)]


def zero_level(surf: Surface, c: CurveWalk) -> bool:
    """True iff every bi-index has vanishing X part."""
    return all(x.x == 0 for x in chis(surf, c))


# ---------------------------------------------------------------------------
# path form


def _m(surf: Surface, P: int) -> int:
    return surf.polys[P].m


def walk_to_path(surf: Surface, c: CurveWalk, tag: bool = False) -> list[tuple]:
    ch = chis(surf, c) if tag else [None] * len(c.passages)
    out: list[tuple] = []
    _, rx = surf.other_side(*c.passages[0])
    out.append(("S", c.start, None, Fraction(rx)))
    for j, (a, s) in enumerate(c.passages):
        out.append(("C", a, s, ch[j]))
        P, re = surf.side(a, s)
        if j + 1 < len(c.passages):
            out.append(("S", P, Fraction(re), Fraction(re + c.sweeps[j])))
        else:
            out.append(("S", P, Fraction(re), None))
    return out


def invert_path(path: Sequence[tuple]) -> list[tuple]:
    out = []
    for pc in reversed(path):
        if pc[0] == "S":
            out.append(("S", pc[1], pc[3], pc[2]))
        else:
            out.append(("C", pc[1], 1 - pc[2], pc[3]))
    return out


def _merge(surf: Surface, s1: tuple, s2: tuple) -> tuple:
    _, P, a1, b1 = s1
    _, P2, a2, b2 = s2
    if P != P2:
        raise InternalCheckFailure("merging segments of different polygons")
    m = _m(surf, P)
    if b1 is None or a2 is None:
        raise InternalCheckFailure("merging through a decoration")
    if (b1 - a2) % m:
        raise InternalCheckFailure(f"segments do not meet: {s1} {s2}")
    if b2 is None:
        return ("S", P, a1, None)
    b = b1 + (b2 - a2)
    if a1 is None:
        b = b % m
    return ("S", P, a1, b)


def reduce_path(surf: Surface, path: Iterable[tuple], allow_tag_loss: bool = False) -> list[tuple]:
    """Merge adjacent segments and cancel crossings undone by a null segment.

    Cancelling a crossing that carries a bi-index tag is an error unless
    ``allow_tag_loss`` is set.
    """
    st: list[tuple] = []
    for pc in path:
        if pc[0] == "S":
            if st and st[-1][0] == "S":
                st[-1] = _merge(surf, st[-1], pc)
            else:
                st.append(pc)
        else:
            if (
                len(st) >= 2
                and st[-1][0] == "S"
                and st[-1][2] is not None
                and st[-1][2] == st[-1][3]
                and st[-2][0] == "C"
            ):
                prev = st[-2]
                if prev[1] != pc[1] or prev[2] != 1 - pc[2]:
                    raise InternalCheckFailure("null segment between unrelated crossings")
                if not allow_tag_loss and (prev[3] is not None or pc[3] is not None):
                    raise InternalCheckFailure("a tagged crossing was cancelled")
                st.pop()
                st.pop()
                continue
            st.append(pc)
    return st


def path_to_walk(
    surf: Surface, path: Sequence[tuple], chi_fallback: BiDegree | None = None
) -> CurveWalk:
    """Convert a reduced path back to a walk; bi-indices come from the tags."""
    if len(path) < 3 or path[0][0] != "S" or path[-1][0] != "S":
        raise InvalidWalk("path does not describe a curve between decorations")
    start = path[0][1]
    end = path[-1][1]
    passages = []
    sweeps = []
    tags = []
    for k, pc in enumerate(path):
        if pc[0] == "C":
            passages.append((pc[1], pc[2]))
            tags.append(pc[3])
        elif 0 < k < len(path) - 1:
            a, b = pc[2], pc[3]
            t = b - a
            if t.denominator != 1 or a.denominator != 1:
                raise InternalCheckFailure(f"segment between non-side points: {pc}")
            sweeps.append(int(t))
    c = CurveWalk(start, end, tuple(passages), tuple(sweeps), ZERO)
    check_walk(surf, c)
    ch = chis(surf, c)
    known = [(j, t) for j, t in enumerate(tags) if t is not None]
    if known:
        j0, t0 = known[0]
        shift = t0 - ch[j0]
        for j, t in known:
            if ch[j] + shift != t:
                raise InternalCheckFailure("inconsistent bi-indices after a geometric operation")
        return CurveWalk(start, end, c.passages, c.sweeps, shift)
    if chi_fallback is None:
        raise InternalCheckFailure("no bi-index information survived")
    return CurveWalk(start, end, c.passages, c.sweeps, chi_fallback)


def normalize(surf: Surface, c: CurveWalk) -> CurveWalk:
    """Free reduction to minimal position with respect to the arcs.

    Null segments (sweep 0) are cancelled together with their two crossings.
    The bi-index of the first surviving crossing is kept from the input.
    """
    check_walk(surf, c)
    if all(t != 0 for t in c.sweeps):
        return c
    ch = chis(surf, c)
    path = walk_to_path(surf, c, tag=False)
    # remember the input chain to recover the grading
    tagged = []
    k = 0
    for pc in path:
        if pc[0] == "C":
            tagged.append(("C", pc[1], pc[2], None, k))
            k += 1
        else:
            tagged.append(pc)
    st: list[tuple] = []
    for pc in tagged:
        if pc[0] == "S":
            if st and st[-1][0] == "S":
                st[-1] = _merge(surf, st[-1], pc)
            else:
                st.append(pc)
        else:
            if len(st) >= 2 and st[-1][0] == "S" and st[-1][2] is not None and st[-1][2] == st[-1][3]:
                st.pop()
                st.pop()
                continue
            st.append(pc)
    crosses = [pc for pc in st if pc[0] == "C"]
    if not crosses:
        raise InvalidWalk("the curve is null-homotopic")
    first = crosses[0][4]
    clean = [pc if pc[0] == "S" else ("C", pc[1], pc[2], None) for pc in st]
    return path_to_walk(surf, clean, chi_fallback=ch[first])


def is_normalized(c: CurveWalk) -> bool:
    return all(t != 0 for t in c.sweeps)


def canonical_shift(surf: Surface, c: CurveWalk) -> CurveWalk:
    return replace(c, chi0=ZERO)


def canonical_form(surf: Surface, c: CurveWalk) -> CurveWalk:
    """Orientation-independent representative (used for deduplication)."""
    inv = invert_curve(c, surf)
    return min(c, inv, key=lambda w: w.key())


def same_underlying(surf: Surface, a: CurveWalk, b: CurveWalk) -> bool:
    ka = canonical_form(surf, replace(a, chi0=ZERO))
    kb = canonical_form(surf, replace(b, chi0=ZERO))
    ka2 = replace(ka, chi0=ZERO)
    kb2 = replace(kb, chi0=ZERO)
    return ka2.key()[:4] == kb2.key()[:4]


def grading_offset(surf: Surface, a: CurveWalk, b: CurveWalk) -> BiDegree | None:
    """``d`` with ``b == a[d]`` as graded curves (any orientation), else None."""
    for bb in (b, invert_curve(b, surf)):
        if (a.start, a.end, a.passages, a.sweeps) == (bb.start, bb.end, bb.passages, bb.sweeps):
            return bb.chi0 - a.chi0
    return None


# ---------------------------------------------------------------------------
# classification


def max_winding(surf: Surface, c: CurveWalk) -> int:
    """Largest |sweep| / m over the inner segments (as a fraction)."""
    best = Fraction(0)
    for j, t in enumerate(c.sweeps):
        P, _ = surf.side(*c.passages[j])
        best = max(best, Fraction(abs(t), surf.polys[P].m))
    return best


def _exit_key(t: int | None) -> tuple[int, int]:
    # order of exits seen from an entry side, ascending along that side
    if t is None:
        return (1, 0)
    return (0, -t) if t < 0 else (2, -t)


def _outer_branches_order(c: CurveWalk, j: int) -> int:
    """Compare the two branches leaving the loop at inner segment ``j``.

    Both branches enter the polygon on the far side of the arc shared by
    passages ``j`` and ``j + 1``.  Returns -1 when the branch through passage
    ``j`` comes first along that side, 1 when it comes second, 0 on a tie.
    """
    n = len(c.passages)
    back, fwd = j, j + 1
    while True:
        kb = _exit_key(-c.sweeps[back - 1]) if back > 0 else _exit_key(None)
        kf = _exit_key(c.sweeps[fwd]) if fwd < n - 1 else _exit_key(None)
        if kb != kf:
            return -1 if kb < kf else 1
        if kb == _exit_key(None):
            return 0
        back -= 1
        fwd += 1


def loop_crosses_itself(surf: Surface, c: CurveWalk, j: int) -> bool:
    """Whether inner segment ``j``, a full turn around its decoration, must
    cross itself when the curve is in minimal position.

    The entry and exit points of the loop lie on the same arc; their order is
    forced by the rest of the curve.  A clockwise loop is embedded when its
    exit point lies anticlockwise of its entry point, and the other way round
    for an anticlockwise loop.
    """
    P, _ = surf.side(*c.passages[j])
    t = c.sweeps[j]
    if abs(t) != surf.polys[P].m or c.passages[j][0] != c.passages[j + 1][0]:
        return False
    r = _outer_branches_order(c, j)
    if r == 0:
        return False
    # r < 0: entry before exit on the far side, so exit before entry here
    return (r < 0) != (t > 0)


def is_admissible(surf: Surface, c: CurveWalk) -> bool:
    """No inner segment cuts out a once-decorated monogon."""
    for j, t in enumerate(c.sweeps):
        P, _ = surf.side(*c.passages[j])
        if abs(t) > surf.polys[P].m or loop_crosses_itself(surf, c, j):
            return False
    return True


def classify(surf: Surface, c: CurveWalk) -> str:
    """One of ``closed arc``, ``admissible closed curve``, ``inadmissible``."""
    from .intersect import self_intersections

    if not is_admissible(surf, c):
        return "inadmissible"
    if c.start != c.end and self_intersections(surf, c) == 0:
        return "closed arc"
    return "admissible closed curve"


def is_closed_arc(surf: Surface, c: CurveWalk) -> bool:
    return classify(surf, c) == "closed arc"


# ---------------------------------------------------------------------------
# extension and decomposition


def _first_exit(surf: Surface, c: CurveWalk) -> int:
    return surf.other_side(*c.passages[0])[1]


def extend(surf: Surface, sigma: CurveWalk, tau: CurveWalk) -> list[CurveWalk]:
    """The extension of ``sigma`` by ``tau`` at their common start.

    The result runs along ``sigma`` backwards, turns clockwise around the
    shared decoration and continues along ``tau``; its grading is inherited
    from ``tau``.  A once-decorated monogon left after reduction is resolved
    by splitting the curve at that decoration, so one or two curves come back.
    """
    if sigma.start != tau.start:
        raise EndpointMismatch("extension needs curves with a common starting decoration")
    from .intersect import germ_order

    P = sigma.start
    m = surf.polys[P].m
    rs, rt = _first_exit(surf, sigma), _first_exit(surf, tau)
    if rs != rt:
        t = (rt - rs) % m
    else:
        t = 0 if sigma != tau and germ_order(surf, sigma, tau) < 0 else m
    # sigma's crossings carry the bi-indices they have in the cone,
    # chi + (1,0) - nu, so both halves of the result are graded and checked.
    nu = surf.phase(P, rs + t) - surf.phase(P, rs) + sigma.chi0 - tau.chi0
    sbar = [
        pc if pc[0] == "S" or pc[3] is None else ("C", pc[1], pc[2], pc[3] + ONE - nu)
        for pc in invert_path(walk_to_path(surf, sigma, tag=True))
    ]
    tpath = walk_to_path(surf, tau, tag=True)
    junction = ("S", P, Fraction(rs), Fraction(rs + t))
    # sbar ends with ("S", P, rs, None) and tau starts with ("S", P, None, rt);
    # both decorated ends are replaced by the junction turn.
    path = sbar[:-1] + [("S", P, sbar[-1][2], Fraction(rs)), junction] + [("S", P, Fraction(rt), Fraction(rt))] + tpath[1:]
    red = reduce_path(surf, path, allow_tag_loss=True)
    return _split_windings(surf, red, tau)


def _monogon_segments(surf: Surface, path: list[tuple]) -> set[int]:
    """Path indices of full-turn segments that must cross themselves."""
    if not any(x[0] == "C" for x in path):
        return set()
    skeleton = path_to_walk(surf, [pc if pc[0] == "S" else pc[:3] + (None,) for pc in path], chi_fallback=ZERO)
    return {2 * j + 2 for j in range(len(skeleton.sweeps)) if loop_crosses_itself(surf, skeleton, j)}


def _split_windings(surf: Surface, path: list[tuple], tau: CurveWalk) -> list[CurveWalk]:
    """Split a reduced path where it cuts out a once-decorated monogon.

    The loop is pulled through its decoration: the curve is cut at the first
    segment winding more than once, or at the first full turn that has to
    cross itself.
    """
    monogons = None
    for k, pc in enumerate(path):
        if pc[0] != "S" or pc[2] is None or pc[3] is None:
            continue
        m = surf.polys[pc[1]].m
        if abs(pc[3] - pc[2]) == m and monogons is None:
            monogons = _monogon_segments(surf, path)
        if abs(pc[3] - pc[2]) > m or (abs(pc[3] - pc[2]) == m and k in monogons):
            left = path[:k] + [("S", pc[1], pc[2], None)]
            right = [("S", pc[1], None, pc[3] % m)] + path[k + 1:]
            out = []
            for part in (left, right):
                if not any(x[0] == "C" for x in part):
                    continue
                out.extend(_split_windings(surf, part, tau))
            return out
    if not any(x[0] == "C" for x in path):
        return []
    return [path_to_walk(surf, path, chi_fallback=None if any(x[0] == "C" and x[3] is not None for x in path) else tau.chi0)]


def decompose(surf: Surface, eta: CurveWalk, attach: int) -> tuple[CurveWalk, CurveWalk]:
    """Split ``eta`` through the decoration of the polygon of inner segment ``attach``.

    ``attach`` indexes the inner segments (1..n-1).  The segment must turn
    clockwise.  Returns ``(alpha, beta)`` starting at that decoration with
    ``extend(alpha, beta) == [eta]`` after normalization.
    """
    n = len(eta.passages)
    if not (1 <= attach <= n - 1):
        raise BadAttachment(f"attach index must be in 1..{n - 1}")
    t = eta.sweeps[attach - 1]
    P, _ = surf.side(*eta.passages[attach - 1])
    if not (0 < t <= surf.polys[P].m):
        raise BadAttachment("the chosen segment must turn clockwise by at most one full turn")
    ch = chis(surf, eta)
    head = CurveWalk(eta.start, P, eta.passages[:attach], eta.sweeps[: attach - 1], eta.chi0)
    alpha = invert_curve(head, surf)
    beta = CurveWalk(P, eta.end, eta.passages[attach:], eta.sweeps[attach:], ch[attach])
    return alpha, beta


# ---------------------------------------------------------------------------
# braid twists along dual arcs


class _TwistFrame:
    """Local data for the half twist along the dual arc of a non-self-folded arc.

    Base points: O1 in the polygon P holding occurrence ``slot_p`` of the
    arc, next to the corner A where that side starts; O2 in the other polygon
    P' next to the same corner.  Generators: ``a`` (clockwise loop around the
    decoration of P at O1), ``b`` (same for P' at O2), ``g`` (O1 -> O2 across
    the arc near A).
    """

    def __init__(self, surf: Surface, i: int):
        if surf.self_folded(i):
            raise NotAClosedArc("the dual arc of a self-folded arc is not a closed arc")
        self.surf = surf
        self.i = i
        (self.P, self.ru), (self.Pp, self.rup) = surf.occ[i]
        self.slot_p = 0
        self.m = surf.polys[self.P].m
        self.mp = surf.polys[self.Pp].m
        self.th1 = Fraction(self.ru) - Fraction(1, 4)
        self.th2 = Fraction(self.rup) + Fraction(1, 4)

    # words are lists of (letter, power) with letters "a", "b", "g"
    def anchor(self, pt) -> list:
        """Word of the base path from O1 to a point avoiding the dual arc."""
        kind, poly, r = pt
        if kind == "Z":
            return [] if poly == self.P else [("g", 1)]
        if poly == self.P:
            return [] if r < self.ru else [("a", -1)]
        return [("g", 1)] if r > self.rup else [("g", 1), ("b", 1)]

    def ref(self, poly: int, ang) -> tuple:
        """Cut-avoiding segment from the base point of ``poly`` to ``ang``."""
        if poly == self.P:
            base, m = self.th1, self.m
        else:
            base, m = self.th2, self.mp
        if ang is None:
            return ("S", poly, base, None)
        # put the target on the sheet of the base point (the cut is at -1/2)
        w = (ang + Fraction(1, 2)) // m
        return ("S", poly, base, ang - w * m)

    def letter_path(self, letter: str, power: int) -> list[tuple]:
        out = []
        if letter == "a":
            return [("S", self.P, self.th1, self.th1 + power * self.m)]
        if letter == "b":
            return [("S", self.Pp, self.th2, self.th2 + power * self.mp)]
        # g crosses the arc from P into P'
        fwd = [
            ("S", self.P, self.th1, Fraction(self.ru)),
            ("C", self.i, 1 - self.slot_p, None),
            ("S", self.Pp, Fraction(self.rup), self.th2),
        ]
        if power == 1:
            return fwd
        return invert_path(fwd)

    def word_of_path(self, pieces: Sequence[tuple]) -> list:
        """Letters of a path inside P u P' between two anchored points."""
        word = []
        for pc in pieces:
            if pc[0] == "C":
                if pc[1] != self.i:
                    raise InternalCheckFailure("strand crosses a foreign arc")
                entering_pp = self.surf.side(pc[1], pc[2])[0] == self.Pp and pc[2] != self.slot_p
                word.append(("g", 1 if entering_pp else -1))
            else:
                _, poly, a, b = pc
                if a is None or b is None:
                    continue
                m = self.m if poly == self.P else self.mp
                wa = (a + Fraction(1, 2)) // m
                wb = (b + Fraction(1, 2)) // m
                if wb != wa:
                    word.append(("a" if poly == self.P else "b", int(wb - wa)))
        return word

    def image_word(self, word: list, eps: int) -> list:
        if eps == 1:
            sub = {
                "a": [("a", -1), ("g", 1), ("b", 1), ("g", -1), ("a", 1)],
                "b": [("g", -1), ("a", 1), ("g", 1)],
            }
        else:
            sub = {
                "a": [("g", 1), ("b", 1), ("g", -1)],
                "b": [("b", 1), ("g", -1), ("a", 1), ("g", 1), ("b", -1)],
            }
        out = []
        for letter, p in word:
            if letter == "g":
                out.append((letter, p))
                continue
            img = sub[letter]
            if p > 0:
                out.extend(img * p)
            else:
                out.extend(_inv_word(img) * (-p))
        return out

    def anchor_image(self, pt, eps: int) -> tuple[list, tuple]:
        kind, poly, r = pt
        if kind != "Z":
            return self.anchor(pt), pt
        Z1, Z2 = ("Z", self.P, None), ("Z", self.Pp, None)
        if eps == 1:
            return ([("a", -1), ("g", 1)], Z2) if poly == self.P else ([], Z1)
        return ([("g", 1)], Z2) if poly == self.P else ([("g", 1), ("b", 1), ("g", -1)], Z1)


def _inv_word(w: list) -> list:
    return [(l, -p) for l, p in reversed(w)]


def _free_reduce(w: list) -> list:
    st: list = []
    for l, p in w:
        if p == 0:
            continue
        if st and st[-1][0] == l and l != "g":
            q = st[-1][1] + p
            st.pop()
            if q:
                st.append((l, q))
        elif st and st[-1][0] == "g" and l == "g" and st[-1][1] == -p:
            st.pop()
        else:
            st.append((l, p))
    return st


def _twist_path(frame: _TwistFrame, path: list[tuple], eps: int) -> list[tuple]:
    """Apply the half twist to a path given in piece form."""
    surf = frame.surf
    region = (frame.P, frame.Pp)
    out: list[tuple] = []
    k = 0
    N = len(path)
    while k < N:
        pc = path[k]
        if pc[0] == "C" or pc[1] not in region:
            out.append(pc)
            k += 1
            continue
        # maximal strand inside P u P' joined by crossings of arc i
        j = k
        while j + 2 < N and path[j + 1][0] == "C" and path[j + 1][1] == frame.i:
            j += 2
        strand = path[k : j + 1]
        first, last = strand[0], strand[-1]
        if first[2] is None:
            s_pt = ("Z", first[1], None)
        else:
            s_pt = ("X", first[1], int(first[2]) % surf.polys[first[1]].m)
        if last[3] is None:
            e_pt = ("Z", last[1], None)
        else:
            e_pt = ("X", last[1], int(last[3]) % surf.polys[last[1]].m)
        loop = frame.anchor(s_pt) + frame.word_of_path(
            [frame.ref(first[1], first[2]) if first[2] is not None else ("S", first[1], None, None)]
            + strand
            + ([_rev(frame.ref(last[1], last[3]))] if last[3] is not None else [])
        ) + _inv_word(frame.anchor(e_pt))
        wa, tgt_s = frame.anchor_image(s_pt, eps)
        wb, tgt_e = frame.anchor_image(e_pt, eps)
        word = _free_reduce(_inv_word(wa) + frame.image_word(_free_reduce(loop), eps) + wb)
        pieces: list[tuple] = []
        if tgt_s[0] == "Z":
            pieces.append(("S", tgt_s[1], None, frame.th1 if tgt_s[1] == frame.P else frame.th2))
        else:
            pieces.append(_rev(frame.ref(tgt_s[1], first[2])))
        for l, p in word:
            pieces.extend(frame.letter_path(l, p) if l != "g" else frame.letter_path("g", p))
        if tgt_e[0] == "Z":
            pieces.append(("S", tgt_e[1], frame.th1 if tgt_e[1] == frame.P else frame.th2, None))
        else:
            pieces.append(frame.ref(tgt_e[1], last[3]))
        out.extend(pieces)
        k = j + 1
    return out


def _rev(seg: tuple) -> tuple:
    return ("S", seg[1], seg[3], seg[2])


_SHIFT_CACHE: dict = {}


def _self_twist_shift(surf: Surface, i: int, eps: int) -> BiDegree:
    """Grading shift d with B(s_i) = s_i[d], measured through a probe curve."""
    key = (id(surf), i, eps)
    if key in _SHIFT_CACHE:
        return _SHIFT_CACHE[key][1]
    from .intersect import q_int

    s = dual_arc(surf, i)
    decs = {s.start, s.end}
    probe = None
    for j in range(surf.n_arcs):
        if j == i:
            continue
        dj = dual_arc(surf, j)
        if {dj.start, dj.end} & decs:
            probe = dj
            break
    if probe is None:
        d = BiDegree(1, -1) if eps == 1 else BiDegree(-1, 1)
    else:
        frame = _TwistFrame(surf, i)
        bp = path_to_walk(surf, reduce_path(surf, _twist_path(frame, walk_to_path(surf, probe, tag=True), eps)))
        target = q_int(surf, s, probe)
        got = q_int(surf, s, bp)
        # B(s) = s[d]: q_int(s[d], Bp) = q^d q_int(s, Bp) must equal q_int(s, p)
        d = _monomial_ratio(target, got)
    _SHIFT_CACHE[key] = (surf, d)
    return d


def _monomial_ratio(num, den) -> BiDegree:
    if not num or not den or len(num) != len(den):
        raise InternalCheckFailure("cannot measure the twist shift")
    dn = list(num)[0]
    dd = list(den)[0]
    d = dn - dd
    if den.shift(d) != num:
        raise InternalCheckFailure("probe polynomials are not related by a monomial")
    return d


def twist_dual(surf: Surface, i: int, eps: int, curve: CurveWalk) -> CurveWalk:
    """Image of ``curve`` under the half twist along the dual arc of arc ``i``.

    ``eps = +1`` is the counterclockwise half twist, ``-1`` its inverse.
    """
    frame = _TwistFrame(surf, i)
    path = walk_to_path(surf, curve, tag=True)
    foreign = [pc for pc in path if pc[0] == "C" and pc[1] != i]
    new = reduce_path(surf, _twist_path(frame, _strip_tags_of(path, i), eps))
    if foreign:
        return path_to_walk(surf, new)
    # the curve lives in P u P' and is the dual arc up to grading
    d = _self_twist_shift(surf, i, eps)
    w = path_to_walk(surf, new, chi_fallback=ZERO)
    s = dual_arc(surf, i)
    off = grading_offset(surf, s, curve)
    if off is None:
        raise InternalCheckFailure("untagged curve is not the dual arc")
    woff = grading_offset(surf, s, w)
    if woff is None:
        raise InternalCheckFailure("twist of the dual arc is not the dual arc")
    return shift_curve(w, off + d - woff)


def _strip_tags_of(path: list[tuple], i: int) -> list[tuple]:
    return [("C", pc[1], pc[2], None) if pc[0] == "C" and pc[1] == i else pc for pc in path]


@dataclass(frozen=True)
class ClosedArc:
    """A closed arc with a braid word ``psi`` such that it equals psi(s_base)."""

    curve: CurveWalk
    base: int
    psi: tuple[tuple[int, int], ...] = ()


def apply_word(surf: Surface, word: Sequence[tuple[int, int]], curve: CurveWalk) -> CurveWalk:
    """Apply ``B_{w_1}^{e_1} o ... o B_{w_k}^{e_k}`` (rightmost first)."""
    c = curve
    for i, e in reversed(list(word)):
        c = twist_dual(surf, i, e, c)
    return c


def braid_twist(surf: Surface, alpha: ClosedArc | int, eps: int, curve: CurveWalk) -> CurveWalk:
    """Image of ``curve`` under ``B_alpha^eps``.

    ``alpha`` is either an arc index (twist along its dual arc) or a
    :class:`ClosedArc` carrying a braid word ``psi`` with
    ``alpha = psi(s_base)``, in which case ``B_alpha = psi B_base psi^-1``.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    if isinstance(alpha, int):
        return twist_dual(surf, alpha, eps, curve)
    if not is_closed_arc(surf, alpha.curve):
        raise NotAClosedArc("braid twists are defined along closed arcs only")
    inv = [(i, -e) for i, e in reversed(alpha.psi)]
    c = apply_word(surf, inv, curve)
    c = twist_dual(surf, alpha.base, eps, c)
    return apply_word(surf, alpha.psi, c)


# ---------------------------------------------------------------------------
# transport across a slide


def transport_curve(sd: SlideData, curve: CurveWalk) -> CurveWalk:
    """Rewrite a curve of the old arc system in the slid one.

    The old polygon P splits into P' (new) and the triangle T bounded by the
    slid arc, the arc ``delta`` and the new diagonal; T joins Q.  Crossings
    of surviving arcs keep their bi-indices.
    """
    old = compile_surface(sd.old)
    new = compile_surface(sd.new)
    P, Q, r, k, g, d = sd.P, sd.Q, sd.r, sd.k, sd.gamma, sd.delta
    mP, mQ = old.polys[P].m, old.polys[Q].m
    mPn, mQn = new.polys[P].m, new.polys[Q].m
    half = Fraction(1, 2)
    tpos = {"delta": Fraction(0), "gamma": half, "diag": Fraction(1)}

    def side_map(poly: int, rank: int) -> tuple[int, int]:
        if poly == P:
            if rank < r:
                return P, rank
            if rank == r + 1:
                return Q, k
            return P, rank - 1
        if poly == Q:
            return (Q, rank) if rank < k else (Q, rank + 1)
        return poly, rank

    def new_slot(arc: int, old_slot: int) -> int:
        poly, rank = side_map(*old.side(arc, old_slot))
        a2, s2 = new.slot_of[(poly, rank)]
        assert a2 == arc
        return s2

    diag_into_Q = new.slot_of[(Q, k + 1)][1]
    diag_into_P = 1 - diag_into_Q

    def q_angle(a):
        if a is None:
            return None
        w, rho = divmod(a, mQ)
        if rho < k:
            nr = Fraction(rho)
        elif rho == k:
            nr = k + half
        else:
            nr = Fraction(rho + 1)
        return w * mQn + nr

    def p_angle(a):
        w, rho = divmod(a, mP)
        nr = rho if rho < r else rho - 1
        return w * mPn + nr, rho in (r, r + 1), w

    def t_name(rho):
        return "gamma" if rho == r else "delta"

    path = walk_to_path(old, curve, tag=True)
    out: list[tuple] = []
    for pc in path:
        if pc[0] == "C":
            arc, slot, tag = pc[1], pc[2], pc[3]
            if arc == g:
                continue  # virtual inside the merged polygon
            out.append(("C", arc, new_slot(arc, slot), tag))
            continue
        _, poly, a, b = pc
        if poly == Q:
            out.append(("S", Q, q_angle(a), q_angle(b)))
            continue
        if poly != P:
            out.append(pc)
            continue
        # segment in the old polygon P
        ia = ib = False
        if a is not None:
            na, ia, wa = p_angle(int(a))
        if b is not None:
            nb, ib, wb = p_angle(int(b))
        pieces: list[tuple] = []
        if a is not None and ia:
            name = t_name(int(a) % mP)
        if a is not None and b is not None and ia and ib and wa == wb:
            na_, nb_ = t_name(int(a) % mP), t_name(int(b) % mP)
            pieces.append(("S", Q, k + tpos[na_], k + tpos[nb_]))
        else:
            if a is not None and ia:
                pieces.append(("S", Q, k + tpos[name], k + tpos["diag"]))
                pieces.append(("C", g, diag_into_P, None))
                start = Fraction(wa * mPn + r)
            else:
                start = None if a is None else Fraction(na)
            if b is not None and ib:
                end = Fraction(wb * mPn + r)
                pieces.append(("S", P, start, end))
                pieces.append(("C", g, diag_into_Q, None))
                pieces.append(("S", Q, k + tpos["diag"], k + tpos[t_name(int(b) % mP)]))
            else:
                pieces.append(("S", P, start, None if b is None else Fraction(nb)))
        out.extend(pieces)
    red = reduce_path(new, out)
    tagged = any(pc[0] == "C" and pc[3] is not None for pc in red)
    if tagged:
        return path_to_walk(new, red)
    # only the slid arc was crossed: its bi-index carries over to the diagonal
    ch = chis(old, curve)
    return path_to_walk(new, red, chi_fallback=ch[0])
