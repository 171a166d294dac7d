"""Twisted complexes over the Ext algebra: strings, Hom complexes, cones, twists.

A twisted complex is a list of slots ``(vertex, chi)`` standing for the
shifted simples ``S_vertex[chi]`` and a matrix ``delta`` whose entry
``(u, v)`` is a combination of Ext basis elements in ``Hom(S_ku, S_kv)`` of
degree ``(1,0) + chi_v - chi_u``.

A Hom basis element ``(u, v, e)`` from slot ``u`` of X to slot ``v`` of Y
has bi-degree ``deg(e) + chi_u - chi_v``, so that
``qdim(X, Y[d]) = q^-d qdim(X, Y)``.  The differential is
``D f = delta_Y f - (-1)^{|f|_z} f delta_X`` with plain composition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import ExtAlgebra, build_ext
from .bigraded_poly import ONE, XX, ZERO, BiDegree, BiLaurent, as_degree
from .curves import CurveWalk, chis, check_walk
from .errors import (
    DSquareNonzero,
    EndpointMismatch,
    InternalCheckFailure,
    NotClosed,
    NotNormalized,
    NotSpherical,
)
from .surface import Surface

Comb = dict  # ext basis index -> coefficient


def _sgn(d: BiDegree) -> int:
    return -1 if d.z % 2 else 1


def _add_into(target: dict, key, comb: Comb, scale=1) -> None:
    cur = target.setdefault(key, {})
    for e, c in comb.items():
        v = cur.get(e, 0) + scale * c
        if v:
            cur[e] = v
        else:
            cur.pop(e, None)
    if not cur:
        target.pop(key, None)


def _compose_comb(ext: ExtAlgebra, first: Comb, second: Comb) -> Comb:
    """``second o first`` on combinations."""
    out: Comb = {}
    for e1, c1 in first.items():
        for e2, c2 in second.items():
            r = ext.compose(e1, e2)
            if r is None:
                continue
            v = out.get(r, 0) + c1 * c2
            if v:
                out[r] = v
            else:
                out.pop(r, None)
    return out


@dataclass
class TwistedComplex:
    ext: ExtAlgebra
    slots: list[tuple[int, BiDegree]]
    delta: dict[tuple[int, int], Comb] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.slots)

    def out_of(self, u: int):
        return [(v, c) for (a, v), c in self.delta.items() if a == u]

    def check(self) -> None:
        """Degree homogeneity and delta squared = 0."""
        basis = self.ext.basis
        for (u, v), comb in self.delta.items():
            ku, cu = self.slots[u]
            kv, cv = self.slots[v]
            want = ONE + cv - cu
            for e in comb:
                b = basis[e]
                if (b.source, b.target) != (ku, kv) or b.degree != want:
                    raise InternalCheckFailure(f"delta component {u}->{v} is not homogeneous")
        if not self.d_squared_zero():
            raise DSquareNonzero("twisted differential does not square to zero")

    def d_squared_zero(self) -> bool:
        sq: dict = {}
        outs: dict[int, list] = {}
        for (a, b), c in self.delta.items():
            outs.setdefault(a, []).append((b, c))
        for (u, v), c1 in self.delta.items():
            for w, c2 in outs.get(v, []):
                _add_into(sq, (u, w), _compose_comb(self.ext, c1, c2))
        return not sq

    def shift(self, d) -> "TwistedComplex":
        d = as_degree(d)
        return TwistedComplex(self.ext, [(k, c + d) for k, c in self.slots], dict(self.delta))

    def to_dict(self) -> dict:
        ids = self.ext.surface.arc_ids
        return {
            "slots": [{"vertex": ids[k], "shift": [c.z, c.x]} for k, c in self.slots],
            "delta": [
                {
                    "from": u,
                    "to": v,
                    "terms": [[self.ext.describe(e), str(c)] for e, c in sorted(comb.items())],
                }
                for (u, v), comb in sorted(self.delta.items())
            ],
        }

    def render(self) -> str:
        from .bigraded_poly import format_degree

        ids = self.ext.surface.arc_ids
        lines = ["slots:"]
        for i, (k, c) in enumerate(self.slots):
            lines.append(f"  {i}: S_{ids[k]}[{format_degree(c)}]")
        lines.append("delta:")
        for (u, v), comb in sorted(self.delta.items()):
            terms = " + ".join(f"{c}*{self.ext.describe(e)}" for e, c in sorted(comb.items()))
            lines.append(f"  {u} -> {v}: {terms}")
        return "\n".join(lines)


def direct_sum(parts: Sequence[TwistedComplex]) -> TwistedComplex:
    ext = parts[0].ext
    slots: list = []
    delta: dict = {}
    for p in parts:
        off = len(slots)
        slots.extend(p.slots)
        for (u, v), c in p.delta.items():
            delta[(u + off, v + off)] = dict(c)
    return TwistedComplex(ext, slots, delta)


def simple(ext: ExtAlgebra, i: int, shift=ZERO) -> TwistedComplex:
    return TwistedComplex(ext, [(i, as_degree(shift))], {})


# ---------------------------------------------------------------------------
# strings


def string_of_curve(surf: Surface, ext: ExtAlgebra, c: CurveWalk) -> TwistedComplex:
    """The string object of a normalized curve: one slot per crossing."""
    check_walk(surf, c)
    ch = chis(surf, c)
    slots = [(a, ch[j]) for j, (a, _) in enumerate(c.passages)]
    delta: dict = {}
    for j, t in enumerate(c.sweeps):
        P, re = surf.side(*c.passages[j])
        m = surf.polys[P].m
        if t == 0 or abs(t) > m:
            raise NotNormalized(f"segment {j + 1} has sweep {t}")
        if t > 0:
            delta[(j, j + 1)] = {ext.rotation(P, re, t): 1}
        else:
            delta[(j + 1, j)] = {ext.rotation(P, re + t, -t): 1}
    X = TwistedComplex(ext, slots, delta)
    X.check()
    return X


def fingerprint(X: TwistedComplex) -> tuple[BiLaurent, ...]:
    """Per arc i: q-dimension of Hom from the i-th projective detector, sum of q^-chi."""
    n = X.ext.surface.n_arcs
    acc: list[dict] = [dict() for _ in range(n)]
    for k, c in X.slots:
        acc[k][-c] = acc[k].get(-c, 0) + 1
    return tuple(BiLaurent(a) for a in acc)


# ---------------------------------------------------------------------------
# Hom complexes


@dataclass
class Morphism:
    src: TwistedComplex
    tgt: TwistedComplex
    degree: BiDegree
    comps: dict[tuple[int, int], Comb] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.comps


def hom_degree(ext: ExtAlgebra, X: TwistedComplex, Y: TwistedComplex, u: int, v: int, e: int) -> BiDegree:
    return ext.basis[e].degree + X.slots[u][1] - Y.slots[v][1]


def differential(f: Morphism) -> Morphism:
    """D f = delta_Y f - (-1)^{|f|_z} f delta_X."""
    X, Y = f.src, f.tgt
    ext = X.ext
    out: dict = {}
    youts: dict[int, list] = {}
    for (a, b), c in Y.delta.items():
        youts.setdefault(a, []).append((b, c))
    xins: dict[int, list] = {}
    for (a, b), c in X.delta.items():
        xins.setdefault(b, []).append((a, c))
    s = -_sgn(f.degree)
    for (u, v), comb in f.comps.items():
        for w, cy in youts.get(v, []):
            _add_into(out, (u, w), _compose_comb(ext, comb, cy))
        for u2, cx in xins.get(u, []):
            _add_into(out, (u2, v), _compose_comb(ext, cx, comb), s)
    return Morphism(X, Y, f.degree + ONE, out)


def compose(f: Morphism, g: Morphism) -> Morphism:
    """``g o f``."""
    ext = f.src.ext
    out: dict = {}
    gouts: dict[int, list] = {}
    for (a, b), c in g.comps.items():
        gouts.setdefault(a, []).append((b, c))
    for (u, v), c1 in f.comps.items():
        for w, c2 in gouts.get(v, []):
            _add_into(out, (u, w), _compose_comb(ext, c1, c2))
    return Morphism(f.src, g.tgt, f.degree + g.degree, out)


def hom_basis(X: TwistedComplex, Y: TwistedComplex) -> dict[BiDegree, list[tuple[int, int, int]]]:
    ext = X.ext
    out: dict[BiDegree, list] = {}
    for u, (ku, cu) in enumerate(X.slots):
        for v, (kv, cv) in enumerate(Y.slots):
            for e in ext.hom_basis(ku, kv):
                d = ext.basis[e].degree + cu - cv
                out.setdefault(d, []).append((u, v, e))
    return out


def _rank(rows: list[dict]) -> int:
    """Rank over the rationals of a sparse matrix given as a list of row dicts."""
    pivots: dict = {}
    rank = 0
    for row in rows:
        r = {k: Fraction(v) for k, v in row.items() if v}
        while r:
            col = min(r)
            if col in pivots:
                prow = pivots[col]
                factor = r[col] / prow[col]
                for k, v in prow.items():
                    nv = r.get(k, 0) - factor * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            else:
                pivots[col] = r
                rank += 1
                break
    return rank


def _d_matrix(X, Y, basis_d, index_next) -> list[dict]:
    rows = []
    for (u, v, e) in basis_d:
        f = Morphism(X, Y, ZERO, {(u, v): {e: 1}})
        f.degree = hom_degree(X.ext, X, Y, u, v, e)
        df = differential(f)
        row = {}
        for (a, b), comb in df.comps.items():
            for e2, c in comb.items():
                row[index_next[(a, b, e2)]] = c
        rows.append(row)
    return rows


@dataclass
class HomReport:
    chain_dims: dict[BiDegree, int]
    cohomology: dict[BiDegree, int]

    @property
    def qdim(self) -> BiLaurent:
        return BiLaurent(self.cohomology)


def hom_complex(X: TwistedComplex, Y: TwistedComplex) -> HomReport:
    basis = hom_basis(X, Y)
    ranks: dict[BiDegree, int] = {}
    for d, elems in basis.items():
        nxt = basis.get(d + ONE, [])
        if not nxt:
            ranks[d] = 0
            continue
        idx = {b: i for i, b in enumerate(nxt)}
        ranks[d] = _rank(_d_matrix(X, Y, elems, idx))
    coh = {}
    for d, elems in basis.items():
        h = len(elems) - ranks[d] - ranks.get(d - ONE, 0)
        if h < 0:
            raise InternalCheckFailure("negative cohomology dimension")
        if h:
            coh[d] = h
    return HomReport({d: len(e) for d, e in basis.items()}, coh)


def _reduce(row: dict, combo: dict, pivots: dict) -> None:
    """Reduce ``row`` in place against ``pivots``, tracking the combination."""
    while row:
        col = min(row)
        if col not in pivots:
            return
        prow, pcombo = pivots[col]
        factor = row[col] / prow[col]
        for target, source in ((row, prow), (combo, pcombo)):
            for k, v in source.items():
                nv = target.get(k, 0) - factor * v
                if nv:
                    target[k] = nv
                else:
                    target.pop(k, None)


def cohomology_basis(X: TwistedComplex, Y: TwistedComplex) -> list[tuple[BiDegree, dict]]:
    """Cocycles of the Hom complex whose classes form a basis of cohomology.

    Each entry is ``(degree, {(u, v, e): coefficient})``; degrees are listed
    in ascending ``(x, z)`` order.
    """
    basis = hom_basis(X, Y)
    out: list[tuple[BiDegree, dict]] = []
    for d in sorted(basis, key=lambda b: (b.x, b.z)):
        elems = basis[d]
        nxt = basis.get(d + ONE, [])
        idx = {b: i for i, b in enumerate(nxt)}
        rows = _d_matrix(X, Y, elems, idx) if nxt else [{} for _ in elems]
        pivots: dict = {}
        kernel = []
        for i, row in enumerate(rows):
            r = {k: Fraction(v) for k, v in row.items() if v}
            combo = {i: Fraction(1)}
            _reduce(r, combo, pivots)
            if r:
                pivots[min(r)] = (r, combo)
            else:
                kernel.append(combo)
        prev = basis.get(d - ONE, [])
        here = {b: i for i, b in enumerate(elems)}
        span: dict = {}
        for row in (_d_matrix(X, Y, prev, here) if prev else []):
            r = {k: Fraction(v) for k, v in row.items() if v}
            _reduce(r, {}, span)
            if r:
                span[min(r)] = (r, {})
        for combo in kernel:
            r = dict(combo)
            _reduce(r, {}, span)
            if r:
                span[min(r)] = (r, {})
                out.append((d, {elems[i]: _norm(c) for i, c in combo.items()}))
    return out


def qdim_hom(X: TwistedComplex, Y: TwistedComplex) -> BiLaurent:
    return hom_complex(X, Y).qdim


def is_closed(f: Morphism) -> bool:
    return differential(f).is_zero()


def is_null_homotopic(f: Morphism) -> bool:
    """True iff f = D h for some h of degree deg f - (1,0)."""
    X, Y = f.src, f.tgt
    basis = hom_basis(X, Y)
    prev = basis.get(f.degree - ONE, [])
    cur = basis.get(f.degree, [])
    idx = {b: i for i, b in enumerate(cur)}
    rows = _d_matrix(X, Y, prev, idx)
    return _rank(rows + [_hom_row(idx, f)]) == _rank(rows)


def _hom_row(idx: dict, f: Morphism) -> dict:
    row = {}
    for (u, v), comb in f.comps.items():
        for e, c in comb.items():
            row[idx[(u, v, e)]] = c
    return row


def homotopic_to_multiple(f: Morphism, h: Morphism) -> bool:
    """True iff ``f`` is homotopic to ``c * h`` for some non-zero rational c.

    Both morphisms must share source, target and degree, and ``f`` must not
    be null-homotopic.
    """
    if f.degree != h.degree:
        return False
    X, Y = f.src, f.tgt
    basis = hom_basis(X, Y)
    prev = basis.get(f.degree - ONE, [])
    idx = {b: i for i, b in enumerate(basis.get(f.degree, []))}
    rows = _d_matrix(X, Y, prev, idx)
    base = _rank(rows)
    fr, hr = _hom_row(idx, f), _hom_row(idx, h)
    if _rank(rows + [fr]) == base:
        return False
    return _rank(rows + [hr, fr]) == _rank(rows + [hr])


# ---------------------------------------------------------------------------
# cones and minimization


def cone_of(f: Morphism) -> TwistedComplex:
    """Cone of a closed morphism of degree nu: X[(1,0) - nu] + Y."""
    if not is_closed(f):
        raise NotClosed("cone of a morphism that is not closed")
    X, Y = f.src, f.tgt
    nu = f.degree
    s = -_sgn(nu)
    n = len(X.slots)
    slots = [(k, c + ONE - nu) for k, c in X.slots] + list(Y.slots)
    delta: dict = {}
    for (u, v), comb in X.delta.items():
        delta[(u, v)] = {e: s * c for e, c in comb.items()}
    for (u, v), comb in Y.delta.items():
        delta[(u + n, v + n)] = dict(comb)
    for (u, v), comb in f.comps.items():
        _add_into(delta, (u, v + n), comb)
    C = TwistedComplex(X.ext, slots, delta)
    C.check()
    return C


def cone_inclusion(f: Morphism, C: TwistedComplex) -> Morphism:
    """The inclusion Y -> Cone(f) (degree 0)."""
    n = len(f.src.slots)
    comps = {(v, v + n): {f.tgt.slots[v][0]: 1} for v in range(len(f.tgt.slots))}
    return Morphism(f.tgt, C, ZERO, comps)


def cone_homotopy(f: Morphism, C: TwistedComplex) -> Morphism:
    """Identity components X -> X-part of the cone; D of it is inclusion o f."""
    comps = {(u, u): {f.src.slots[u][0]: 1} for u in range(len(f.src.slots))}
    return Morphism(f.src, C, f.degree - ONE, comps)


def minimize(X: TwistedComplex) -> TwistedComplex:
    """Gaussian elimination of invertible (identity) components of delta.

    A component ``u -> v`` that is a non-zero multiple ``c`` of the identity
    is removed together with both slots; every path ``x -> v``, ``u -> y``
    leaves the correction ``-(1/c) * (x -> v then u -> y)`` on ``x -> y``.
    """
    ext = X.ext
    slots = list(X.slots)
    out: dict[int, dict[int, dict]] = {}
    inc: dict[int, set[int]] = {}
    for (u, v), comb in X.delta.items():
        if comb:
            out.setdefault(u, {})[v] = dict(comb)
            inc.setdefault(v, set()).add(u)

    def is_iso(u: int, v: int) -> bool:
        comb = out.get(u, {}).get(v)
        return bool(comb) and slots[u][0] == slots[v][0] and comb.get(slots[u][0], 0) != 0

    work = sorted((u, v) for u in out for v in out[u] if is_iso(u, v))
    work.reverse()
    dead: set[int] = set()
    while work:
        u, v = work.pop()
        if u in dead or v in dead or not is_iso(u, v):
            continue
        c0 = out[u][v][slots[u][0]]
        inv = c0 if c0 in (1, -1) else Fraction(1) / Fraction(c0)
        ins_v = [(x, out[x][v]) for x in sorted(inc.get(v, ())) if x not in (u, v)]
        outs_u = [(y, c) for y, c in sorted(out.get(u, {}).items()) if y not in (u, v)]
        for x, cxv in ins_v:
            for y, cuy in outs_u:
                corr = _compose_comb(ext, cxv, cuy)
                if not corr:
                    continue
                row = out.setdefault(x, {})
                target = row.setdefault(y, {})
                for e, c in corr.items():
                    val = target.get(e, 0) - inv * c
                    if val:
                        target[e] = val
                    else:
                        target.pop(e, None)
                if target:
                    inc.setdefault(y, set()).add(x)
                    if is_iso(x, y):
                        work.append((x, y))
                else:
                    del row[y]
                    inc.get(y, set()).discard(x)
        for w in (u, v):
            dead.add(w)
            for y in out.pop(w, {}):
                inc.get(y, set()).discard(w)
            for x in inc.pop(w, set()):
                out.get(x, {}).pop(w, None)
    alive = [a for a in range(len(slots)) if a not in dead]
    remap = {a: i for i, a in enumerate(alive)}
    delta = {
        (remap[a], remap[b]): {e: _norm(c) for e, c in comb.items()}
        for a, row in out.items()
        for b, comb in row.items()
        if comb
    }
    res = TwistedComplex(ext, [slots[a] for a in alive], delta)
    res.check()
    return res


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


# ---------------------------------------------------------------------------
# spherical twists


def is_spherical(M: TwistedComplex) -> bool:
    return qdim_hom(M, M) == BiLaurent({ZERO: 1, XX: 1})


def _hom_elements(X, Y):
    basis = hom_basis(X, Y)
    elems = []
    for d in sorted(basis, key=lambda b: (b.x, b.z)):
        for b in basis[d]:
            elems.append((d, b))
    return elems


def _copies(M: TwistedComplex, degrees: Sequence[BiDegree], sign: int) -> tuple[list, dict]:
    """Slots and internal differentials of copies ``M[sign * d]``."""
    slots: list = []
    delta: dict = {}
    nM = len(M.slots)
    for i, d in enumerate(degrees):
        off = i * nM
        slots.extend((k, c + d * sign) for k, c in M.slots)
        sg = _sgn(d)
        for (u, v), comb in M.delta.items():
            delta[(u + off, v + off)] = {e: sg * c for e, c in comb.items()}
    return slots, delta


def _full_hom(X: TwistedComplex, Y: TwistedComplex) -> tuple[list, list]:
    """Basis elements of the Hom complex, each as a one-term cochain."""
    elems = _hom_elements(X, Y)
    return [d for d, _ in elems], [{b: 1} for _, b in elems]


def _cohomology_hom(X: TwistedComplex, Y: TwistedComplex) -> tuple[list, list]:
    coh = cohomology_basis(X, Y)
    return [d for d, _ in coh], [vec for _, vec in coh]


def spherical_twist(M: TwistedComplex, X: TwistedComplex, full_complex: bool = False) -> TwistedComplex:
    """Cone of the evaluation Hom(M, X) (x) M -> X, minimized.

    By default Hom(M, X) is replaced by its cohomology, with one copy of
    ``M`` per class and the evaluation given by a cocycle representative.
    A complex of vector spaces is homotopy equivalent to its cohomology, so
    this is the same object up to homotopy; ``full_complex=True`` uses the
    whole Hom complex instead, with its differential between the copies.
    """
    if not is_spherical(M):
        raise NotSpherical("twisting object is not spherical")
    ext = M.ext
    nM = len(M.slots)
    degrees, vecs = (_full_hom if full_complex else _cohomology_hom)(M, X)
    slots, delta = _copies(M, degrees, -1)
    if full_complex:
        pos = {next(iter(v)): i for i, v in enumerate(vecs)}
        for i, (d, vec) in enumerate(zip(degrees, vecs)):
            (u, v, e), = vec
            df = differential(Morphism(M, X, d, {(u, v): {e: 1}}))
            for (a, b2), comb in df.comps.items():
                for e2, c in comb.items():
                    j = pos[(a, b2, e2)]
                    for w in range(nM):
                        _add_into(delta, (i * nM + w, j * nM + w), {M.slots[w][0]: c})
    T = TwistedComplex(ext, slots, delta)
    T.check()
    ev: dict = {}
    for i, vec in enumerate(vecs):
        for (u, v, e), c in vec.items():
            _add_into(ev, (i * nM + u, v), {e: c})
    return minimize(cone_of(Morphism(T, X, ZERO, ev)))


def inverse_spherical_twist(M: TwistedComplex, X: TwistedComplex, full_complex: bool = False) -> TwistedComplex:
    """Cocone of the coevaluation X -> Hom(X, M)^* (x) M, minimized.

    ``full_complex`` has the same meaning as for :func:`spherical_twist`.
    """
    if not is_spherical(M):
        raise NotSpherical("twisting object is not spherical")
    ext = M.ext
    nM = len(M.slots)
    degrees, vecs = (_full_hom if full_complex else _cohomology_hom)(X, M)
    slots, delta = _copies(M, degrees, 1)
    if full_complex:
        pos = {next(iter(v)): i for i, v in enumerate(vecs)}
        for i, (d, vec) in enumerate(zip(degrees, vecs)):
            (u, v, e), = vec
            df = differential(Morphism(X, M, d, {(u, v): {e: 1}}))
            for (a, b2), comb in df.comps.items():
                for e2, c in comb.items():
                    j = pos[(a, b2, e2)]
                    # component copy j -> copy i with coefficient -(-1)^{|h_i|} D_{i,j}
                    for w in range(nM):
                        _add_into(delta, (j * nM + w, i * nM + w), {M.slots[w][0]: -_sgn(d) * c})
    U = TwistedComplex(ext, slots, delta)
    U.check()
    co: dict = {}
    for i, vec in enumerate(vecs):
        for (u, v, e), c in vec.items():
            _add_into(co, (u, i * nM + v), {e: c})
    return minimize(cone_of(Morphism(X, U, ZERO, co)).shift(-ONE))


# ---------------------------------------------------------------------------
# angle morphisms


def angle_morphism(surf: Surface, ext: ExtAlgebra, sigma: CurveWalk, tau: CurveWalk) -> Morphism:
    """The morphism X_sigma -> X_tau given by the clockwise angle at the common start."""
    from .intersect import _fwd, _runs_from_start, decoration_index, germ_order

    if sigma.start != tau.start:
        raise EndpointMismatch("angle morphism needs a common starting decoration")
    X = string_of_curve(surf, ext, sigma)
    Y = string_of_curve(surf, ext, tau)
    nu = decoration_index(surf, sigma, tau, True)
    P = sigma.start
    m = surf.polys[P].m
    ra = surf.other_side(*sigma.passages[0])[1]
    rb = surf.other_side(*tau.passages[0])[1]
    same = sigma == tau
    if ra != rb or same or germ_order(surf, sigma, tau) > 0:
        t = (rb - ra) % m or m
        e = ext.rotation(P, ra, t)
        deg = ext.basis[e].degree + X.slots[0][1] - Y.slots[0][1]
        if same:
            # the full turn, not the identity: degree X
            nu = deg
        elif deg != nu:
            raise InternalCheckFailure("angle component disagrees with the decoration index")
        f = Morphism(X, Y, nu, {(0, 0): {e: 1}})
    else:
        run = _runs_from_start(sigma, tau)
        sg = _sgn(nu)
        comps = {}
        eps = 1
        for j in range(run.length):
            comps[(j, j)] = {sigma.passages[j][0]: eps}
            eps *= sg
        f = Morphism(X, Y, nu, comps)
        so, to = run.fwd
        L = run.length
        if so is not None and to is not None and so < to:
            Q, p = surf.side(*sigma.passages[L - 1])
            t = to - so
            if 1 <= t <= surf.polys[Q].m:
                e = ext.rotation(Q, p + so, t)
                for c in (1, -1):
                    g = Morphism(X, Y, nu, {**comps, (L, L): {e: c}})
                    if is_closed(g):
                        f = g
                        break
    if not is_closed(f):
        raise InternalCheckFailure("angle morphism is not closed")
    return f


# ---------------------------------------------------------------------------
# zero level


@dataclass
class LagrangianReport:
    zero_level: bool
    offending: list
    q0_only: bool

    def to_dict(self) -> dict:
        return {
            "zero_level": self.zero_level,
            "offending": [[j, d.z, d.x] for j, d in self.offending],
            "zero_part_only": self.q0_only,
        }


def lagrangian_check(surf: Surface, ext: ExtAlgebra, c: CurveWalk) -> LagrangianReport:
    """Zero-sheet check: all bi-indices in Z and all string data from the zero part."""
    ch = chis(surf, c)
    bad = [(j, d) for j, d in enumerate(ch) if d.x != 0]
    X = string_of_curve(surf, ext, c)
    q0 = all(ext.basis[e].degree.x == 0 for comb in X.delta.values() for e in comb)
    if not bad and not q0:
        raise InternalCheckFailure("zero-level curve uses data outside the zero part")
    return LagrangianReport(not bad, bad, q0)
