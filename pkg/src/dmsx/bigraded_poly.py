"""Exact Laurent polynomials in q with exponents in Z + Z*X.

A bi-degree ``z + x*X`` is stored as the pair ``(z, x)``.  Polynomials are
immutable mappings from bi-degrees to non-zero integer coefficients.
"""
from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

_LIMIT = 2**62


class ExponentOverflow(ArithmeticError):
    """Raised when an exponent leaves the signed 63-bit range."""


def _check(v: int) -> int:
    if not -_LIMIT < v < _LIMIT:
        raise ExponentOverflow(f"exponent {v} out of range")
    return v


class BiDegree(NamedTuple):
    """An element ``z + x*X`` of the bi-degree group."""

    z: int = 0
    x: int = 0

    def __add__(self, other: object) -> "BiDegree":  # type: ignore[override]
        if not isinstance(other, tuple):
            return NotImplemented
        return BiDegree(_check(self.z + other[0]), _check(self.x + other[1]))

    def __radd__(self, other: object) -> "BiDegree":
        return self.__add__(other)

    def __sub__(self, other: tuple) -> "BiDegree":
        return BiDegree(_check(self.z - other[0]), _check(self.x - other[1]))

    def __neg__(self) -> "BiDegree":
        return BiDegree(-self.z, -self.x)

    def __mul__(self, k: object) -> "BiDegree":  # type: ignore[override]
        if not isinstance(k, int):
            return NotImplemented
        return BiDegree(_check(self.z * k), _check(self.x * k))

    def render(self) -> str:
        return format_degree(self)


ZERO = BiDegree(0, 0)
ONE = BiDegree(1, 0)
XX = BiDegree(0, 1)

DegreeLike = Union[BiDegree, tuple]


def as_degree(d: DegreeLike) -> BiDegree:
    if isinstance(d, BiDegree):
        return d
    z, x = d
    return BiDegree(_check(int(z)), _check(int(x)))


def format_degree(d: DegreeLike) -> str:
    """Render a bi-degree, e.g. ``1-X``, ``X-1``, ``2*X+3``, ``-X`` or ``0``.

    A positive X part is written first; otherwise the integer part leads.
    """
    z, x = d
    if x == 0:
        return str(z)
    xs = "X" if abs(x) == 1 else f"{abs(x)}*X"
    if x > 0:
        if z == 0:
            return xs
        return f"{xs}{z:+d}"
    if z == 0:
        return f"-{xs}"
    return f"{z}-{xs}"


def _format_exponent(d: BiDegree) -> str:
    s = format_degree(d)
    if d.x == 0 or s == "X":
        return s
    return f"({s})"


class BiLaurent(Mapping[BiDegree, int]):
    """Immutable element of Z[q^{Z+Z*X}] in canonical form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[DegreeLike, int] | Iterable[tuple[DegreeLike, int]] = ()):
        acc: dict[BiDegree, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for d, c in items:
            d = as_degree(d)
            acc[d] = acc.get(d, 0) + int(c)
        self._terms = {d: c for d, c in acc.items() if c != 0}
        self._hash: int | None = None

    @classmethod
    def monomial(cls, d: DegreeLike, c: int = 1) -> "BiLaurent":
        return cls({as_degree(d): c})

    def __getitem__(self, d: DegreeLike) -> int:
        return self._terms.get(as_degree(d), 0)

    def __iter__(self) -> Iterator[BiDegree]:
        return iter(sorted(self._terms, key=lambda d: (d.x, d.z)))

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BiLaurent):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({} if other == 0 else {ZERO: other})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "BiLaurent") -> "BiLaurent":
        return bl_add(self, other)

    def __sub__(self, other: "BiLaurent") -> "BiLaurent":
        return bl_add(self, bl_scale(other, -1))

    def __mul__(self, other: "BiLaurent") -> "BiLaurent":
        return bl_mul(self, other)

    def __neg__(self) -> "BiLaurent":
        return bl_scale(self, -1)

    def __repr__(self) -> str:
        return f"BiLaurent({render(self)!r})"

    def __str__(self) -> str:
        return render(self)

    def shift(self, d: DegreeLike) -> "BiLaurent":
        """Multiply by the monomial q^d."""
        d = as_degree(d)
        return BiLaurent({e + d: c for e, c in self._terms.items()})

    def at_one(self) -> int:
        """Specialisation q = 1 (sum of coefficients)."""
        return sum(self._terms.values())

    def to_json(self) -> list[list[int]]:
        return [[d.z, d.x, self._terms[d]] for d in self]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> "BiLaurent":
        return cls({(z, x): c for z, x, c in data})


def bl_add(a: BiLaurent, b: BiLaurent) -> BiLaurent:
    """Coefficientwise sum."""
    out = dict(a._terms)
    for d, c in b._terms.items():
        out[d] = out.get(d, 0) + c
    return BiLaurent(out)


def bl_scale(a: BiLaurent, k: int) -> BiLaurent:
    return BiLaurent({d: k * c for d, c in a._terms.items()})


def bl_mul(a: BiLaurent, b: BiLaurent) -> BiLaurent:
    """Convolution product; exponents add."""
    out: dict[BiDegree, int] = {}
    for d1, c1 in a._terms.items():
        for d2, c2 in b._terms.items():
            d = d1 + d2
            out[d] = out.get(d, 0) + c1 * c2
    return BiLaurent(out)


def bl_involute(a: BiLaurent) -> BiLaurent:
    """Replace every exponent d by -d."""
    return BiLaurent({-d: c for d, c in a._terms.items()})


def bl_sum(polys: Iterable[BiLaurent]) -> BiLaurent:
    out: dict[BiDegree, int] = {}
    for p in polys:
        for d, c in p._terms.items():
            out[d] = out.get(d, 0) + c
    return BiLaurent(out)


ZERO_POLY = BiLaurent()
UNIT = BiLaurent.monomial(ZERO)
INTERIOR_FACTOR = BiLaurent({ZERO: 1, (-1, 1): 1})


def render(a: BiLaurent) -> str:
    """Canonical text form, terms sorted by (x, z)."""
    if not a:
        return "0"
    parts: list[str] = []
    for d in a:
        c = a[d]
        if d == ZERO:
            body = str(abs(c))
        else:
            mono = f"q^{_format_exponent(d)}"
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def parse_degree(text: str) -> BiDegree:
    """Inverse of :func:`format_degree` (also accepts any order of the parts)."""
    s = text.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s:
        raise ValueError("empty degree")
    z = x = 0
    for tok in re.findall(r"[+-]?[^+-]+", s):
        if tok.endswith("X"):
            coeff = tok[:-1].rstrip("*")
            x += int(coeff + "1") if coeff in ("", "+", "-") else int(coeff)
        else:
            z += int(tok)
    if re.sub(r"[+-]?[^+-]+", "", s):
        raise ValueError(f"bad degree {text!r}")
    return BiDegree(z, x)


def parse(text: str) -> BiLaurent:
    """Parse the canonical text form produced by :func:`render`."""
    s = text.strip()
    if s == "0":
        return ZERO_POLY
    pieces = re.split(r"\s+([+-])\s+", s)
    terms: dict[BiDegree, int] = {}
    signs = ["+"] + pieces[1::2]
    for sign, tok in zip(signs, pieces[0::2]):
        k = -1 if sign == "-" else 1
        if tok.startswith("-"):
            k, tok = -k, tok[1:]
        if "q^" in tok:
            coeff_s, _, exp_s = tok.partition("q^")
            coeff_s = coeff_s.rstrip("*")
            coeff = int(coeff_s) if coeff_s else 1
            d = parse_degree(exp_s)
        else:
            coeff, d = int(tok), ZERO
        terms[d] = terms.get(d, 0) + k * coeff
    return BiLaurent(terms)
