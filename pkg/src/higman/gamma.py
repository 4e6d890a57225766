"""The finite group generated by the units 1 + p*x_i modulo the relator ideal.

Elements are identified with their normal-form polynomials, which is a
complete invariant because normal forms are unique.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .ncpoly import Poly, PolyRing, format_poly, unit_inverse
from .rewrite import Context, RuleSystem
from .zmod import Residue


class CapExceeded(RuntimeError):
    pass


class GammaElement:
    __slots__ = ("group", "poly")

    def __init__(self, group: GammaGroup, poly: Poly):
        self.group = group
        self.poly = poly

    def __eq__(self, other):
        return isinstance(other, GammaElement) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __mul__(self, other: GammaElement) -> GammaElement:
        return self.group.mul(self, other)

    def __pow__(self, e) -> GammaElement:
        return self.group.pow(self, e)

    def inverse(self) -> GammaElement:
        return self.group.inv(self)

    def is_identity(self) -> bool:
        return self.poly.terms == {(): 1}

    def __str__(self):
        return format_poly(self.poly)

    def __repr__(self):
        return f"GammaElement({format_poly(self.poly)!r})"


class GammaGroup:
    """Group arithmetic on normal forms for a (p, n, k) context.

    ``reducer`` is any object with a ``reduce_cached``-style method mapping
    polynomials to normal forms; a :class:`RuleSystem` by default, or
    ``None`` for the relator-free group inside the free algebra.
    """

    def __init__(self, ctx: Context | None = None, rules: RuleSystem | None = None,
                 ring: PolyRing | None = None):
        if rules is not None:
            ctx = rules.ctx
        self.ctx = ctx
        self.rules = rules if rules is not None else (RuleSystem(ctx) if ctx else None)
        self.ring = ring if ring is not None else ctx.ring
        self.p = self.ring.p
        self.pn = self.ring.pn

    @classmethod
    def free(cls, p: int, n: int, nvars: int = 2) -> GammaGroup:
        """The relator-free group <1 + p*y_i> inside Z/p^n<y>."""
        group = cls.__new__(cls)
        group.ctx = None
        group.rules = None
        group.ring = PolyRing(p, n, nvars)
        group.p, group.pn = p, group.ring.pn
        return group

    def _nf(self, f: Poly) -> Poly:
        return f if self.rules is None else self.rules.reduce_cached(f)

    def element(self, f) -> GammaElement:
        f = self._nf(self.ring(f))
        if f.constant() != 1 % self.pn or any(c % self.p for m, c in f.terms.items() if m):
            raise ValueError(f"{format_poly(f)} is not of the form 1 + p*(...)")
        return GammaElement(self, f)

    def identity(self) -> GammaElement:
        return GammaElement(self, self.ring.one())

    def generator(self, i: int) -> GammaElement:
        return GammaElement(self, self._nf(self.ring.gen_unit(i)))

    def generators(self) -> list:
        return [self.generator(i) for i in range(self.ring.nvars)]

    def mul(self, a: GammaElement, b: GammaElement) -> GammaElement:
        return GammaElement(self, self._nf(a.poly * b.poly))

    def inv(self, a: GammaElement) -> GammaElement:
        return GammaElement(self, self._nf(unit_inverse(a.poly)))

    def pow(self, a: GammaElement, e) -> GammaElement:
        if isinstance(e, Residue):
            e = e.value
        e = int(e) % self.pn
        result, base = self.identity(), a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def order(self, a: GammaElement) -> int:
        order = 1
        while not a.is_identity():
            a = self.pow(a, self.p)
            order *= self.p
        return order

    def enumerate(self, gens: Sequence[GammaElement], cap: int = 10**6) -> set:
        """Breadth-first closure of ``gens`` under right multiplication."""
        seen = {self.identity()}
        frontier = deque(seen)
        while frontier:
            x = frontier.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded(f"subgroup has more than {cap} elements")
                    frontier.append(y)
        return seen

    def rotate(self, a: GammaElement, shift: int = 1) -> GammaElement:
        m = self.ring.nvars
        perm = [(i + shift) % m for i in range(m)]
        return GammaElement(self, self._nf(a.poly.substitute(perm)))


def g_generator(group: GammaGroup, i: int) -> GammaElement:
    return group.generator(i)


def g_mul(a: GammaElement, b: GammaElement) -> GammaElement:
    return a.group.mul(a, b)


def g_inv(a: GammaElement) -> GammaElement:
    return a.group.inv(a)


def g_pow(a: GammaElement, e) -> GammaElement:
    return a.group.pow(a, e)


def g_order(a: GammaElement) -> int:
    return a.group.order(a)


def check_relators(group: GammaGroup) -> bool:
    """a_{i+1} a_i == a_i a_{i+1}^k for every relator index i."""
    ctx = group.ctx
    a = group.generators()
    m = ctx.nvars
    for i in ctx.indices():
        j = (i + 1) % m
        if group.mul(a[j], a[i]) != group.mul(a[i], group.pow(a[j], ctx.k)):
            return False
    return True


def zs_check(group: GammaGroup, cap: int = 10**6, keep_factors: bool = False) -> dict:
    """Check that <a0, a2> x <a1, a3> -> Gamma, (s, t) -> s*t is a bijection."""
    a = group.generators()
    even = group.enumerate([a[0], a[2]], cap)
    odd = group.enumerate([a[1], a[3]], cap)
    full = group.enumerate(a, cap)
    factors: dict = {}
    for s in even:
        for t in odd:
            factors.setdefault(group.mul(s, t), (s, t))
    injective = len(factors) == len(even) * len(odd)
    surjective = set(factors) == full
    report = {
        "sizeS": len(even),
        "sizeT": len(odd),
        "sizeG": len(full),
        "intersection_trivial": even & odd == {group.identity()},
        "unique_factorization": injective and surjective,
    }
    if keep_factors:
        report["factors"] = factors
    return report


def zs_factor(factors: dict, x: GammaElement) -> tuple:
    """(s, t) with x = s*t, looked up in the map built by :func:`zs_check`."""
    return factors[x]


def jacobson_check(group: GammaGroup, cap: int = 10**6, size_s: int | None = None) -> dict:
    """Compare |<1+p*y0, 1+p*y1>| in the free algebra with |<a0, a2>| in Gamma."""
    free = GammaGroup.free(group.p, group.ring.n, 2)
    free_size = len(free.enumerate(free.generators(), cap))
    if size_s is None:
        a = group.generators()
        size_s = len(group.enumerate([a[0], a[2]], cap))
    return {"free_size": free_size, "sizeS": size_s, "equal": free_size == size_s}


def rotation_check(group: GammaGroup, elements: Iterable[GammaElement]) -> dict:
    """x_i -> x_{i+1} permutes the enumerated group with order 4."""
    elements = set(elements)
    image = {x: group.rotate(x) for x in elements}
    closed = set(image.values()) == elements
    period = 0
    for shift in (1, 2, 4):
        if all(group.rotate(x, shift) == x for x in elements):
            period = shift
            break
    return {"permutation": closed, "order": period}
