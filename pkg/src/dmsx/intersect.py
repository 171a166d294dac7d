"""Crossings of curve pairs in minimal position and their bi-indices.

Each polygon minus its decoration is unrolled into a strip: positions along
the boundary increase clockwise, arc side ``r`` on sheet ``w`` sits at
``w*m + r`` and the decoration is a cusp at infinity.  A segment of a curve
is then an interval of positions (or a ray to the cusp for the first and
last segments), and two strands cross iff their ends interleave.

Strands sharing a side belong to a *run* of parallel segments.  The order of
the two curves along a run is read off at the run's backward divergence and
carried forward; a crossing is needed iff the forward divergence demands the
opposite order, and it is placed in the forward tile.

Bi-indices: for a strand with lower end at position ``L`` (bi-index ``chi``
there) put ``kappa = chi - phase(L)``.  For two crossing strands, with
``left`` the one whose lower end is smaller,
``ind(left, right) = kappa_left - kappa_right`` and
``ind(right, left) = (1,0) + kappa_right - kappa_left``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .bigraded_poly import (
    INTERIOR_FACTOR,
    ONE,
    XX,
    ZERO,
    ZERO_POLY,
    BiDegree,
    BiLaurent,
    bl_add,
    bl_mul,
)
from .curves import CurveWalk, chis, invert_curve, same_underlying, segments
from .errors import InternalCheckFailure, NotReduced
from .surface import Surface

Q4 = Fraction(1, 4)


@dataclass(frozen=True)
class Crossing:
    kind: str  # "interior" or "decoration"
    poly: int
    index: BiDegree  # ind(sigma, tau)
    index_rev: BiDegree  # ind(tau, sigma)
    detail: tuple = ()

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "polygon": self.poly,
            "index": [self.index.z, self.index.x],
            "index_reverse": [self.index_rev.z, self.index_rev.x],
        }


@dataclass(frozen=True)
class _Strand:
    poly: int
    lo: int
    hi: int | None  # None: ray from lo to the cusp
    kappa: BiDegree
    seg: int


def _strands(surf: Surface, c: CurveWalk) -> list[_Strand]:
    out = []
    for j, s in enumerate(segments(surf, c)):
        pd = surf.polys[s.poly]
        if s.entry is None:
            p, chi = s.exit, s.chi_out
            out.append(_Strand(s.poly, p, None, chi - pd.phase(p), j))
        elif s.exit is None:
            p, chi = s.entry, s.chi_in
            out.append(_Strand(s.poly, p, None, chi - pd.phase(p), j))
        else:
            if s.entry < s.exit:
                lo, hi, chi = s.entry, s.exit, s.chi_in
            else:
                lo, hi, chi = s.exit, s.entry, s.chi_out
            out.append(_Strand(s.poly, lo, hi, chi - pd.phase(lo), j))
    return out


def _pair_index(lo_a, kap_a, lo_b, kap_b) -> tuple[BiDegree, BiDegree]:
    """(ind(a,b), ind(b,a)) for two crossing strands with lower ends lo_a, lo_b."""
    if lo_a < lo_b:
        return kap_a - kap_b, ONE + kap_b - kap_a
    return ONE + kap_a - kap_b, kap_b - kap_a


def _tile_crossings(surf: Surface, S: _Strand, T: _Strand) -> Iterator[tuple[int, BiDegree, BiDegree]]:
    """Crossings of S with all lifts of T whose ends avoid S's ends."""
    m = surf.polys[S.poly].m
    sx = XX
    if S.hi is None and T.hi is None:
        return
    if S.hi is None:
        S, T, swapped = T, S, True
    else:
        swapped = False
    # S is an interval now
    if T.hi is None:
        kmin = -((T.lo - S.lo) // m) - 1
        kmax = (S.hi - T.lo) // m + 1
        for k in range(kmin, kmax + 1):
            p = T.lo + m * k
            if S.lo < p < S.hi:
                kt = T.kappa - sx * k
                a, b = _pair_index(S.lo, S.kappa, p, kt)
                yield (k, b, a) if swapped else (k, a, b)
        return
    kmin = (S.lo - T.hi) // m - 1
    kmax = (S.hi - T.lo) // m + 1
    for k in range(kmin, kmax + 1):
        lo2, hi2 = T.lo + m * k, T.hi + m * k
        if len({S.lo, S.hi, lo2, hi2}) < 4:
            continue
        if S.lo < lo2 < S.hi < hi2 or lo2 < S.lo < hi2 < S.hi:
            kt = T.kappa - sx * k
            a, b = _pair_index(S.lo, S.kappa, lo2, kt)
            yield (k, b, a) if swapped else (k, a, b)


# ---------------------------------------------------------------------------
# runs of parallel segments


def _fwd(c: CurveWalk, a: int) -> int | None:
    """Offset of the segment after passage ``a`` (None: ray to the end)."""
    return c.sweeps[a] if a + 1 < len(c.passages) else None


def _bwd(c: CurveWalk, a: int) -> int | None:
    return -c.sweeps[a - 1] if a >= 1 else None


def _aligned(c: CurveWalk, b: int, d: int) -> tuple[int | None, int | None]:
    """(backward, forward) offsets of ``c`` at passage ``b`` seen along direction d."""
    if d == 1:
        return _bwd(c, b), _fwd(c, b)
    return _fwd(c, b), _bwd(c, b)


def _key(off: int | None) -> tuple:
    if off is None:
        return (1, 0)
    return (0, -off) if off < 0 else (2, -off)


def _order(s_off, t_off) -> int:
    """+1 if sigma must sit above tau at the shared side for no crossing in the tile."""
    ks, kt = _key(s_off), _key(t_off)
    if ks == kt:
        raise InternalCheckFailure("order requested for parallel strands")
    return 1 if ks > kt else -1


@dataclass(frozen=True)
class _Run:
    a0: int
    b0: int
    d: int
    length: int
    back: tuple  # (sigma offset, tau offset) at the backward end
    fwd: tuple

    @property
    def back_cusp(self) -> bool:
        return self.back == (None, None)

    @property
    def fwd_cusp(self) -> bool:
        return self.fwd == (None, None)


def _runs(sigma: CurveWalk, tau: CurveWalk) -> list[_Run]:
    out = []
    n, nt = len(sigma.passages), len(tau.passages)
    for a in range(n):
        for b in range(nt):
            arc_s, slot_s = sigma.passages[a]
            arc_t, slot_t = tau.passages[b]
            if arc_s != arc_t:
                continue
            d = 1 if slot_s == slot_t else -1
            sb = _bwd(sigma, a)
            tb, _ = _aligned(tau, b, d)
            if sb is not None and sb == tb:
                continue  # not the first pair of its run
            length = 1
            aa, bb = a, b
            while True:
                sf = _fwd(sigma, aa)
                _, tf = _aligned(tau, bb, d)
                if sf is not None and sf == tf:
                    aa, bb = aa + 1, bb + d
                    length += 1
                    continue
                break
            out.append(_Run(a, b, d, length, (sb, tb), (sf, tf)))
    return out


def _run_crossing(surf: Surface, sigma: CurveWalk, tau: CurveWalk, run: _Run, ch_s, ch_t):
    if run.back_cusp or run.fwd_cusp:
        return None
    sgn_back = _order(*run.back)
    sgn_fwd = _order(*run.fwd)
    if sgn_back != sgn_fwd:
        return None
    # crossing in the forward tile; sigma sits at s/4 above the shared side
    s = -sgn_back
    a = run.a0 + run.length - 1
    b = run.b0 + run.d * (run.length - 1)
    poly, p = surf.side(*sigma.passages[a])
    pd = surf.polys[poly]
    so, to = run.fwd

    chi_s = ch_s[a]
    chi_t = ch_t[b]
    # kappa needs the bi-index at the lower end; compute both ways
    ks = _kappa(pd, p, so, chi_s)
    kt = _kappa(pd, p, to, chi_t)
    ls = p + s * Q4 if (so is None or so > 0) else p + so
    lt = p - s * Q4 if (to is None or to > 0) else p + to
    hs = None if so is None else (p + so if so > 0 else p + s * Q4)
    ht = None if to is None else (p + to if to > 0 else p - s * Q4)
    if not _interleave(ls, hs, lt, ht):
        raise InternalCheckFailure("run crossing does not realize in its tile")
    ind, rev = _pair_index(ls, ks, lt, kt)
    return Crossing("interior", poly, ind, rev, ("run", run.a0, run.b0, run.d))


def _kappa(pd, p: int, off: int | None, chi_p: BiDegree) -> BiDegree:
    """kappa of a strand leaving side ``p`` with offset ``off`` (chi at p)."""
    if off is None or off > 0:
        return chi_p - pd.phase(p)
    # lower end is p+off; chi there via the propagation rule (negative segment
    # seen from its lower end is a positive one): chi_lo - phase(lo) = chi_p - phase(p) + (1,0)
    return chi_p - pd.phase(p) + ONE


def _interleave(l1, h1, l2, h2) -> bool:
    if h1 is None and h2 is None:
        return False
    if h1 is None:
        return l2 < l1 < h2
    if h2 is None:
        return l1 < l2 < h1
    return l1 < l2 < h1 < h2 or l2 < l1 < h2 < h1


# ---------------------------------------------------------------------------
# decoration crossings


def _ends(surf: Surface, c: CurveWalk):
    """(polygon, oriented curve starting there, is_start) for both ends."""
    return [(c.start, c, True), (c.end, invert_curve(c, surf), False)]


def germ_order(surf: Surface, sigma: CurveWalk, tau: CurveWalk, sigma_is_start: bool = True) -> int:
    """-1 if sigma leaves the shared start clockwise-before tau, else +1.

    Both curves start at the same decoration and exit through the same side.
    """
    run = _runs_from_start(sigma, tau)
    if run.fwd_cusp:
        return -1 if sigma_is_start else 1
    return -1 if _order(*run.fwd) == 1 else 1


def _runs_from_start(sigma: CurveWalk, tau: CurveWalk) -> _Run:
    if sigma.passages[0] != tau.passages[0]:
        raise InternalCheckFailure("curves do not share their first passage")
    length, aa = 1, 0
    while True:
        sf, tf = _fwd(sigma, aa), _fwd(tau, aa)
        if sf is not None and sf == tf and sigma.passages[aa + 1] == tau.passages[aa + 1]:
            aa += 1
            length += 1
            continue
        return _Run(0, 0, 1, length, (None, None), (sf, tf))


def decoration_index(surf: Surface, s: CurveWalk, t: CurveWalk, s_is_start: bool = True) -> BiDegree:
    """ind(s, t) at a shared start (both oriented to start there)."""
    P = s.start
    pd = surf.polys[P]
    m = pd.m
    ra = surf.other_side(*s.passages[0])[1]
    rb = surf.other_side(*t.passages[0])[1]
    if ra != rb:
        Rb = rb if rb > ra else rb + m
    else:
        Rb = ra if germ_order(surf, s, t, s_is_start) < 0 else ra + m
    return pd.phase(Rb) - pd.phase(ra) + s.chi0 - t.chi0


# ---------------------------------------------------------------------------
# public API


def crossings(surf: Surface, sigma: CurveWalk, tau: CurveWalk, check: bool = True) -> list[Crossing]:
    """All crossings of ``sigma`` and ``tau`` with both bi-indices."""
    for c in (sigma, tau):
        if any(t == 0 for t in c.sweeps):
            raise NotReduced("curves must be normalized before intersecting")
    out: list[Crossing] = []
    ss, ts = _strands(surf, sigma), _strands(surf, tau)
    for S in ss:
        for T in ts:
            if S.poly != T.poly:
                continue
            for k, a, b in _tile_crossings(surf, S, T):
                out.append(Crossing("interior", S.poly, a, b, ("tile", S.seg, T.seg, k)))
    ch_s, ch_t = chis(surf, sigma), chis(surf, tau)
    for run in _runs(sigma, tau):
        x = _run_crossing(surf, sigma, tau, run, ch_s, ch_t)
        if x is not None:
            out.append(x)
    for P, so, s_start in _ends(surf, sigma):
        for Q, to, t_start in _ends(surf, tau):
            if P != Q:
                continue
            ind = decoration_index(surf, so, to, s_start)
            rev = decoration_index(surf, to, so, not s_start)
            out.append(Crossing("decoration", P, ind, rev, ("ends", s_start, t_start)))
    if check:
        for x in out:
            want = ONE if x.kind == "interior" else XX
            if x.index + x.index_rev != want:
                raise InternalCheckFailure(f"index sum rule fails at {x}")
    return out


def interior_count(surf: Surface, sigma: CurveWalk, tau: CurveWalk) -> int:
    return sum(1 for x in crossings(surf, sigma, tau, check=False) if x.kind == "interior")


def q_int(surf: Surface, sigma: CurveWalk, tau: CurveWalk, self_crossings: bool = False) -> BiLaurent:
    """Graded q-intersection: decoration terms plus (1 + q^(X-1)) times interior terms.

    When both curves have the same underlying curve, interior crossings are
    self-crossings of that curve; they are left out unless ``self_crossings``
    is set, in which case each one contributes twice, as two crossings of
    the curve with a pushed-off copy.
    """
    dec: dict = {}
    inner: dict = {}
    skip_inner = not self_crossings and same_underlying(surf, sigma, tau)
    for x in crossings(surf, sigma, tau):
        if skip_inner and x.kind == "interior":
            continue
        tgt = dec if x.kind == "decoration" else inner
        tgt[x.index] = tgt.get(x.index, 0) + 1
    return bl_add(BiLaurent(dec), bl_mul(INTERIOR_FACTOR, BiLaurent(inner)))


def q_int_open(surf: Surface, i: int, tau: CurveWalk, shift: BiDegree = ZERO) -> BiLaurent:
    """q-intersection of the lift of arc ``i`` (shifted by ``shift``) with ``tau``."""
    ch = chis(surf, tau)
    terms: dict = {}
    for j, (a, _) in enumerate(tau.passages):
        if a == i:
            d = shift - ch[j]
            terms[d] = terms.get(d, 0) + 1
    return BiLaurent(terms)


def self_intersections(surf: Surface, c: CurveWalk) -> int:
    """Number of interior self-crossings of one curve."""
    total = 0
    st = _strands(surf, c)
    for i, S in enumerate(st):
        for j, T in enumerate(st):
            if S.poly != T.poly:
                continue
            for k, _, _ in _tile_crossings(surf, S, T):
                if i == j and k == 0:
                    continue
                total += 1
    ch = chis(surf, c)
    for run in _runs(c, c):
        if run.d == 1 and run.a0 == run.b0:
            continue
        if _run_crossing(surf, c, c, run, ch, ch) is not None:
            total += 1
    if total % 2:
        raise InternalCheckFailure("odd self-crossing count")
    return total // 2
