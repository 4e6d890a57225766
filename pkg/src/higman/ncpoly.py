"""Sparse non-commutative polynomials over Z/p^n and truncated integer series.

A monomial is a tuple of variable indices (``()`` is the monomial 1); a
polynomial is a mapping monomial -> coefficient with no zero coefficients.
Group words are sequences of ``(generator, exponent)`` pairs.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .zmod import Modulus, Residue

Monomial = tuple
Word = Sequence[tuple]


class PolyError(ValueError):
    pass


class ContextMismatch(PolyError):
    pass


class NotInvertibleForm(PolyError):
    pass


class PolyParseError(PolyError):
    pass


def lex_key(m: Monomial):
    return m


def deglex_key(m: Monomial):
    """Canonical monomial order: degree first, then lexicographic."""
    return (len(m), m)


class PolyRing:
    """The free algebra Z/p^n<x_0, ..., x_{nvars-1}>."""

    def __init__(self, p: int, n: int, nvars: int):
        if nvars < 1:
            raise PolyError("need at least one variable")
        self.modulus = Modulus(p, n)
        self.p = p
        self.n = n
        self.pn = self.modulus.pn
        self.nvars = nvars

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.modulus == other.modulus
            and self.nvars == other.nvars
        )

    def __hash__(self):
        return hash((self.p, self.n, self.nvars))

    def __repr__(self):
        return f"PolyRing(p={self.p}, n={self.n}, nvars={self.nvars})"

    def __call__(self, obj) -> Poly:
        if isinstance(obj, Poly):
            if obj.ring != self:
                raise ContextMismatch(f"{obj.ring} vs {self}")
            return obj
        if isinstance(obj, str):
            return parse_poly(self, obj)
        if isinstance(obj, (int, Residue)):
            return self.const(obj)
        if isinstance(obj, Mapping):
            return self.from_terms(obj.items())
        raise TypeError(f"cannot build a polynomial from {type(obj).__name__}")

    def from_terms(self, items: Iterable[tuple]) -> Poly:
        acc: dict = {}
        pn = self.pn
        for m, c in items:
            m = tuple(m)
            for v in m:
                if not 0 <= v < self.nvars:
                    raise PolyError(f"variable x{v} out of range")
            acc[m] = (acc.get(m, 0) + int(c)) % pn
        return Poly._raw(self, {m: c for m, c in acc.items() if c})

    def zero(self) -> Poly:
        return Poly._raw(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, c) -> Poly:
        c = int(c) % self.pn
        return Poly._raw(self, {(): c} if c else {})

    def var(self, i: int) -> Poly:
        return self.monomial((i,))

    def monomial(self, m: Monomial, c=1) -> Poly:
        return self.from_terms([(m, c)])

    def gen_unit(self, i: int) -> Poly:
        return gen_unit(self, i)

    def residue(self, value) -> Residue:
        return Residue(int(value), self.modulus)


class Poly:
    """Immutable element of a :class:`PolyRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping | None = None):
        built = ring.from_terms((terms or {}).items())
        self.ring = ring
        self.terms = built.terms
        self._hash = None

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> Poly:
        # trusted path: terms already reduced and pruned
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        obj._hash = None
        return obj

    def _check(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ContextMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, (int, Residue)):
            if isinstance(other, Residue) and other.modulus != self.ring.modulus:
                raise ContextMismatch(f"{self.ring.modulus} vs {other.modulus}")
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        pn = self.ring.pn
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = (acc.get(m, 0) + c) % pn
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return Poly._raw(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        pn = self.ring.pn
        return Poly._raw(self.ring, {m: pn - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Residue)):
            return self.scale(other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        pn = self.ring.pn
        acc: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 + m2
                acc[m] = (acc.get(m, 0) + c1 * c2) % pn
        return Poly._raw(self.ring, {m: c for m, c in acc.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Residue)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise PolyError("negative powers need unit_inverse")
        result, base = self.ring.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, a) -> Poly:
        if isinstance(a, Residue) and a.modulus != self.ring.modulus:
            raise ContextMismatch(f"{self.ring.modulus} vs {a.modulus}")
        a = int(a)
        pn = self.ring.pn
        acc = {}
        for m, c in self.terms.items():
            v = c * a % pn
            if v:
                acc[m] = v
        return Poly._raw(self.ring, acc)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        for m in sorted(self.terms, key=deglex_key):
            yield m, self.terms[m]

    def coeff(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def constant(self) -> int:
        return self.terms.get((), 0)

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    def substitute(self, perm: Sequence[int]) -> Poly:
        """Rename variables: x_i -> x_{perm[i]}."""
        return self.ring.from_terms(
            (tuple(perm[v] for v in m), c) for m, c in self.terms.items()
        )

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"


def poly_arith(f: Poly, g, op: str) -> Poly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


# -- text grammar -----------------------------------------------------------

_TERM = re.compile(r"([+-])?([^+-]+)")
_VAR = re.compile(r"x(\d+)$")


def _parse_mono(ring: PolyRing, text: str, src: str) -> Monomial:
    letters = []
    for part in text.split("."):
        match = _VAR.match(part)
        if not match:
            raise PolyParseError(f"bad variable {part!r} in {src!r}")
        v = int(match.group(1))
        if v >= ring.nvars:
            raise PolyParseError(f"x{v} outside x0..x{ring.nvars - 1}")
        letters.append(v)
    return tuple(letters)


def parse_poly(ring: PolyRing, text: str) -> Poly:
    """Parse e.g. ``"4*x0.x1 + x1 - 6*x1.x1 + 3"``."""
    src = text
    text = "".join(text.split())
    if not text:
        raise PolyParseError("empty polynomial")
    pos, items = 0, []
    for match in _TERM.finditer(text):
        if match.start() != pos:
            raise PolyParseError(f"cannot parse {src!r}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        if match.group(1) is None and match.start() != 0:
            raise PolyParseError(f"missing operator in {src!r}")
        body = match.group(2)
        if "*" in body:
            coeff, mono = body.split("*", 1)
            if not coeff.isdigit():
                raise PolyParseError(f"bad coefficient {coeff!r} in {src!r}")
            items.append((_parse_mono(ring, mono, src), sign * int(coeff)))
        elif body.isdigit():
            items.append(((), sign * int(body)))
        else:
            items.append((_parse_mono(ring, body, src), sign))
    if pos != len(text):
        raise PolyParseError(f"trailing input in {src!r}")
    return ring.from_terms(items)


def format_mono(m: Monomial) -> str:
    return ".".join(f"x{v}" for v in m)


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m in sorted(f.terms, key=lex_key):
        c = f.terms[m]
        if not m:
            parts.append(str(c))
        elif c == 1:
            parts.append(format_mono(m))
        else:
            parts.append(f"{c}*{format_mono(m)}")
    return " + ".join(parts)


# -- the units 1 + p*q -------------------------------------------------------

def gen_unit(ring: PolyRing, i: int) -> Poly:
    if not 0 <= i < ring.nvars:
        raise PolyError(f"generator index {i} out of range")
    return ring.from_terms([((), 1), ((i,), ring.p)])


def _check_unit_form(u: Poly) -> None:
    p = u.ring.p
    if u.constant() != 1:
        raise NotInvertibleForm("constant term must be 1")
    for m, c in u.terms.items():
        if m and c % p:
            raise NotInvertibleForm(f"coefficient {c} of {format_mono(m)} not divisible by p")


def unit_inverse(u: Poly) -> Poly:
    """Inverse of 1 + p*q as the finite series sum_{j<n} (-p*q)^j."""
    _check_unit_form(u)
    ring = u.ring
    neg = ring.one() - u
    result, power = ring.one(), ring.one()
    for _ in range(ring.n - 1):
        power = power * neg
        if not power:
            break
        result = result + power
    return result


def unit_pow(u: Poly, e) -> Poly:
    """u**e for an exponent taken modulo p^n (u**(p^n) == 1)."""
    _check_unit_form(u)
    if isinstance(e, Residue):
        if e.modulus != u.ring.modulus:
            raise ContextMismatch(f"{u.ring.modulus} vs {e.modulus}")
        e = e.value
    return u ** (int(e) % u.ring.pn)


def word_expand(ring: PolyRing, word: Word) -> Poly:
    """Image of a group word under a_i -> 1 + p*x_i.

    Negative integer exponents go through :func:`unit_inverse`; residue
    exponents are taken as their canonical representative.
    """
    result = ring.one()
    for i, e in word:
        u = gen_unit(ring, i)
        if isinstance(e, Residue):
            e = e.value
        if e < 0:
            u, e = unit_inverse(u), -e
        result = result * unit_pow(u, e)
    return result


# -- group words ---------------------------------------------------------------

def word_inverse(word: Word) -> list:
    return [(i, -e) for i, e in reversed(word)]


def commutator(w: Word, v: Word) -> list:
    """[w, v] = w^-1 v^-1 w v."""
    return word_inverse(w) + word_inverse(v) + list(w) + list(v)


def word_power(w: Word, e: int) -> list:
    if e < 0:
        return list(word_inverse(w)) * (-e)
    return list(w) * e


def left_normed(gens: Sequence[int]) -> list:
    """[[...[a_g0, a_g1], ...], a_gd] for a sequence of generator indices."""
    w = [(gens[0], 1)]
    for g in gens[1:]:
        w = commutator(w, [(g, 1)])
    return w


# -- integer series truncated at a degree cap ----------------------------------

class IntPoly:
    """Element of Z<x> truncated above degree ``cap``; exact integers."""

    __slots__ = ("terms", "cap")

    def __init__(self, terms: Mapping, cap: int):
        self.cap = cap
        self.terms = {tuple(m): int(c) for m, c in terms.items() if c and len(m) <= cap}

    @classmethod
    def one(cls, cap: int) -> IntPoly:
        return cls({(): 1}, cap)

    def __mul__(self, other: IntPoly) -> IntPoly:
        cap = min(self.cap, other.cap)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            room = cap - len(m1)
            if room < 0:
                continue
            for m2, c2 in other.terms.items():
                if len(m2) <= room:
                    m = m1 + m2
                    acc[m] = acc.get(m, 0) + c1 * c2
        return IntPoly(acc, cap)

    def __sub__(self, other: IntPoly) -> IntPoly:
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, 0) - c
        return IntPoly(acc, min(self.cap, other.cap))

    def __eq__(self, other):
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.cap == other.cap and self.terms == other.terms

    def low_degree(self) -> int:
        """Smallest degree of a non-constant term (cap+1 if none)."""
        return min((len(m) for m in self.terms if m), default=self.cap + 1)

    def homogeneous(self, d: int) -> dict:
        return {m: c for m, c in self.terms.items() if len(m) == d}

    def __repr__(self):
        body = " + ".join(
            f"{c}*{format_mono(m) or '1'}"
            for m, c in sorted(self.terms.items(), key=lambda t: deglex_key(t[0]))
        )
        return f"IntPoly({body or '0'}; cap={self.cap})"


def _series_letter(i: int, e: int, scale: int, cap: int) -> IntPoly:
    base = IntPoly({(): 1, (i,): scale}, cap)
    if e < 0:
        # (1 + s*x)^-1 = sum_j (-s*x)^j
        base = IntPoly({(i,) * j: (-scale) ** j for j in range(cap + 1)}, cap)
        e = -e
    result = IntPoly.one(cap)
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def magnus_expand(word: Word, cap: int, scale: int = 1) -> IntPoly:
    """Expansion under a_i -> 1 + scale*x_i, truncated above degree ``cap``."""
    if cap < 1:
        raise PolyError("degree cap must be at least 1")
    result = IntPoly.one(cap)
    for i, e in word:
        result = result * _series_letter(i, int(e), scale, cap)
    return result


def p_class(word: Word, p: int, nmax: int) -> int:
    """Largest n <= nmax with w - 1 in p^n Z<x> under a_i -> 1 + p*x_i.

    Terms of degree >= n carry p^n automatically, so the expansion is only
    needed up to degree nmax.
    """
    series = magnus_expand(word, nmax, scale=p)
    level = 1
    for n in range(2, nmax + 1):
        pn = p**n
        if all(c % pn == 0 for m, c in series.terms.items() if m and len(m) < n):
            level = n
        else:
            break
    return level

