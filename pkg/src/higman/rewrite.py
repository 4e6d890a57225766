"""Relator polynomials of the Higman quotients and their rewriting system.

With a_i = 1 + p*x_i, each relation a_{i+1} a_i = a_i a_{i+1}^k becomes

    g_i = x_{i+1} x_i - x_i x_{i+1} + (1 + p*x_i) * Q0(x_{i+1})

after dividing by p^2.  Orienting every g_i so that an odd-indexed letter
followed by an even-indexed letter is rewritten gives a terminating,
confluent system whose terminal monomials are (even word)(odd word).
The mirrored orientation (``direction="right"``) yields (odd word)(even word).
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable

from .ncpoly import IntPoly, Monomial, Poly, PolyRing, format_mono, format_poly
from .zmod import KExp, Modulus, vp_int


class RewriteError(Exception):
    pass


class ShapeMismatch(RewriteError):
    pass


class SiteInvalid(RewriteError):
    pass


class IterationCapExceeded(RewriteError):
    pass


@dataclass(frozen=True)
class Context:
    """Validated parameters (p, n, k) and the number of variables (2 or 4)."""

    p: int
    n: int
    k: int
    nvars: int = 4
    modulus: Modulus = field(init=False, repr=False, compare=False)
    kexp: KExp = field(init=False, repr=False, compare=False)
    ring: PolyRing = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.nvars not in (2, 4):
            raise ValueError("nvars must be 2 (single relator) or 4 (Higman)")
        modulus = Modulus(self.p, self.n)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "kexp", KExp(self.k, modulus))
        object.__setattr__(self, "ring", PolyRing(self.p, self.n, self.nvars))

    @property
    def pn(self) -> int:
        return self.modulus.pn

    @property
    def experimental(self) -> bool:
        """p = 2: descent of the termination measure is not guaranteed."""
        return self.p == 2

    def indices(self) -> range:
        return range(self.nvars if self.nvars == 4 else 1)


def q0_int_coeffs(k: int, p: int) -> dict:
    """Exact integer coefficients of Q0: {degree j: coefficient}."""
    if (k - 1) % p:
        raise ValueError(f"p={p} does not divide k-1={k - 1}")
    coeffs = {1: -((k - 1) // p)}
    for j in range(2, k + 1):
        coeffs[j] = -comb(k, j) * p ** (j - 2)
    return coeffs


def build_q0(k: int, p: int, n: int) -> Poly:
    """Q0 as a polynomial in one variable y = x0, reduced mod p^n."""
    ring = PolyRing(p, n, 1)
    return ring.from_terms(((0,) * j, c) for j, c in q0_int_coeffs(k, p).items())


def _q0_in(ring: PolyRing, k: int, var: int) -> Poly:
    return ring.from_terms(((var,) * j, c) for j, c in q0_int_coeffs(k, ring.p).items())


@dataclass(frozen=True)
class RelatorSet:
    ctx: Context
    g: tuple
    q0: Poly
    alpha: tuple

    def pairs(self) -> list:
        """(i, i+1) variable pairs of each relator."""
        m = self.ctx.nvars
        return [(i, (i + 1) % m) for i in self.ctx.indices()]


def _raw_difference(ctx: Context, i: int, j: int) -> IntPoly:
    """a_j a_i - a_i a_j^k over the integers, a = 1 + p*x."""
    cap = ctx.k + 1
    p = ctx.p
    ai = IntPoly({(): 1, (i,): p}, cap)
    aj = IntPoly({(): 1, (j,): p}, cap)
    ajk = IntPoly.one(cap)
    for _ in range(ctx.k):
        ajk = ajk * aj
    return aj * ai - ai * ajk


def build_relators(ctx: Context) -> RelatorSet:
    ring, p = ctx.ring, ctx.p
    gs, alphas = [], []
    for i in ctx.indices():
        j = (i + 1) % ctx.nvars
        diff = _raw_difference(ctx, i, j)
        alpha = min(vp_int(c, p, 10**6) for c in diff.terms.values())
        lead = diff.terms.get((j, i), 0)
        if alpha != 2 or lead != p * p:
            raise ShapeMismatch(f"g_{i}: alpha={alpha}, x{j}x{i} coefficient {lead}")
        g = ring.from_terms((m, c // (p * p)) for m, c in diff.terms.items())
        expected = (
            ring.monomial((j, i))
            - ring.monomial((i, j))
            + (ring.one() + ring.monomial((i,), p)) * _q0_in(ring, ctx.k, j)
        )
        if g != expected:
            raise ShapeMismatch(f"g_{i} does not have the x_i*Q0(x_(i+1)) shape")
        gs.append(g)
        alphas.append(alpha)
    return RelatorSet(ctx, tuple(gs), build_q0(ctx.k, p, ctx.n), tuple(alphas))


@dataclass(frozen=True)
class RewriteRule:
    lhs: tuple
    rhs: Poly
    relator: int

    def __str__(self):
        return f"{format_mono(self.lhs)} -> {format_poly(self.rhs)}"


def _is_odd(v: int) -> bool:
    return v & 1 == 1


def build_rules(rel: RelatorSet, direction: str = "left") -> list:
    """Orient each g_i; left: odd.even -> ..., right: even.odd -> ...."""
    if direction not in ("left", "right"):
        raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")
    ring = rel.ctx.ring
    rules = []
    for (i, j), g in zip(rel.pairs(), rel.g):
        a = (j, i)  # g = a - b + tail
        b = (i, j)
        tail = g - ring.monomial(a) + ring.monomial(b)
        a_first_odd = _is_odd(j) and not _is_odd(i)
        take_a = a_first_odd == (direction == "left")
        if take_a:
            lhs, rhs = a, ring.monomial(b) - tail
        else:
            lhs, rhs = b, ring.monomial(a) + tail
        diff = ring.monomial(lhs) - rhs
        if diff != g and diff != -g:
            raise ShapeMismatch(f"rule for g_{i} is not a rearrangement of g_{i}")
        rules.append(RewriteRule(lhs, rhs, i))
    lhss = [r.lhs for r in rules]
    if len(set(lhss)) != len(lhss):
        raise ShapeMismatch("duplicate rule left-hand sides")
    return rules


@dataclass(frozen=True)
class TermMeasure:
    torder: int
    nodd: int
    defect: int

    def astuple(self) -> tuple:
        return (self.torder, self.nodd, self.defect)

    def __lt__(self, other):
        return self.astuple() < other.astuple()

    def __le__(self, other):
        return self.astuple() <= other.astuple()


@dataclass
class Stats:
    steps: int = 0
    violations: int = 0
    examples: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"steps": self.steps, "violations": self.violations}


class _IndexedSet:
    """Set with O(1) add/remove and uniform random choice."""

    def __init__(self):
        self.items: list = []
        self.where: dict = {}

    def add(self, x):
        if x not in self.where:
            self.where[x] = len(self.items)
            self.items.append(x)

    def discard(self, x):
        idx = self.where.pop(x, None)
        if idx is None:
            return
        last = self.items.pop()
        if idx < len(self.items):
            self.items[idx] = last
            self.where[last] = idx

    def __bool__(self):
        return bool(self.items)

    def choice(self, rng: random.Random):
        return self.items[rng.randrange(len(self.items))]


class RuleSystem:
    """The fixed rewriting system on Z/p^n<x>; immutable apart from counters.

    ``stats`` counts every one-step rewrite performed and every rewrite in
    which a produced term failed to have a strictly smaller
    :class:`TermMeasure` than the rewritten term.
    """

    def __init__(self, ctx: Context, direction: str = "left", rules: list | None = None,
                 max_steps: int = 10**7):
        self.ctx = ctx
        self.ring = ctx.ring
        self.direction = direction
        self.relators = build_relators(ctx)
        self.rules = rules if rules is not None else build_rules(self.relators, direction)
        self._rhs = {r.lhs: [(m, c) for m, c in r.rhs.terms.items()] for r in self.rules}
        self.max_steps = max_steps
        self.stats = Stats()
        self.trace: list | None = None
        self._memo: dict = {}

    @classmethod
    def corrupted(cls, ctx: Context) -> RuleSystem:
        """Negative control: the first rule has the sign of its Q0 part flipped."""
        good = build_rules(build_relators(ctx))
        first = good[0]
        ring = ctx.ring
        swapped = ring.monomial((first.lhs[1], first.lhs[0]))
        bad = RewriteRule(first.lhs, swapped + swapped - first.rhs, first.relator)
        return cls(ctx, rules=[bad] + good[1:])

    # -- structure -------------------------------------------------------------

    def is_redex(self, a: int, b: int) -> bool:
        if self.direction == "left":
            return (a & 1) == 1 and (b & 1) == 0
        return (a & 1) == 0 and (b & 1) == 1

    def redexes(self, m: Monomial) -> list:
        return [i for i in range(len(m) - 1) if self.is_redex(m[i], m[i + 1])]

    def leftmost_redex(self, m: Monomial) -> int:
        for i in range(len(m) - 1):
            if self.is_redex(m[i], m[i + 1]):
                return i
        return -1

    def is_terminal_monomial(self, m: Monomial) -> bool:
        return self.leftmost_redex(m) < 0

    def is_terminal(self, f: Poly) -> bool:
        return all(self.is_terminal_monomial(m) for m in f.terms)

    def measure(self, m: Monomial, c: int = 1) -> TermMeasure:
        n, p = self.ctx.n, self.ctx.p
        torder = n - vp_int(c % self.ctx.pn, p, n)
        if self.ctx.nvars == 2:
            count = sum(1 for v in m if v == 0)
        else:
            count = sum(1 for v in m if v & 1)
        first = 1 if self.direction == "left" else 0
        defect = seen = 0
        for v in m:
            if (v & 1) == first:
                seen += 1
            else:
                defect += seen
        return TermMeasure(torder, count, defect)

    # -- single steps ------------------------------------------------------------

    def _expand(self, m: Monomial, pos: int, c: int) -> list:
        pn = self.ctx.pn
        rhs = self._rhs.get((m[pos], m[pos + 1]))
        if rhs is None:
            raise SiteInvalid(f"no rule for {format_mono(m[pos:pos + 2])}")
        pre, post = m[:pos], m[pos + 2:]
        out = []
        for rm, rc in rhs:
            v = c * rc % pn
            if v:
                out.append((pre + rm + post, v))
        self.stats.steps += 1
        if self.stats.steps > self.max_steps:
            raise IterationCapExceeded(f"more than {self.max_steps} rewrite steps")
        before = self.measure(m, c)
        if self.trace is not None:
            self.trace.append(before.astuple())
        for m2, c2 in out:
            if not self.measure(m2, c2) < before:
                self.stats.violations += 1
                if len(self.stats.examples) < 10:
                    self.stats.examples.append((m, c, pos, m2, c2))
                break
        return out

    def one_step(self, f: Poly, m: Monomial, pos: int) -> Poly:
        m = tuple(m)
        c = f.terms.get(m)
        if c is None:
            raise SiteInvalid(f"{format_mono(m) or '1'} does not occur")
        if not (0 <= pos < len(m) - 1) or not self.is_redex(m[pos], m[pos + 1]):
            raise SiteInvalid(f"no redex at position {pos} of {format_mono(m)}")
        terms = dict(f.terms)
        del terms[m]
        pn = self.ctx.pn
        for m2, c2 in self._expand(m, pos, c):
            v = (terms.get(m2, 0) + c2) % pn
            if v:
                terms[m2] = v
            else:
                terms.pop(m2, None)
        return Poly._raw(self.ring, terms)

    def sites(self, f: Poly) -> list:
        """All (monomial, position) redex sites, in canonical order."""
        out = []
        for m in sorted(f.terms, key=lambda m: (len(m), m)):
            out.extend((m, i) for i in self.redexes(m))
        return out

    # -- normal forms ------------------------------------------------------------

    def normal_form(self, f: Poly, strategy: str = "canonical",
                    rng: random.Random | None = None) -> Poly:
        """Terminal reduct of ``f``.

        ``canonical``: leftmost redex of the deg-lex largest non-terminal
        monomial.  ``random``: a uniformly random redex site each step.
        ``cached``: linear reduction through memoized monomial normal forms.
        """
        f = self.ring(f)
        if strategy == "canonical":
            return Poly._raw(self.ring, self._reduce_canonical(dict(f.terms)))
        if strategy == "random":
            return Poly._raw(self.ring, self._reduce_random(dict(f.terms), rng or random.Random(0)))
        if strategy == "cached":
            return self.reduce_cached(f)
        raise ValueError(f"unknown strategy {strategy!r}")

    def _accumulate(self, terms: dict, items: Iterable, on_new: Callable) -> None:
        pn = self.ctx.pn
        for m2, c2 in items:
            old = terms.get(m2)
            v = ((old or 0) + c2) % pn
            if v:
                terms[m2] = v
                if old is None:
                    on_new(m2)
            elif old is not None:
                del terms[m2]

    def _reduce_canonical(self, terms: dict) -> dict:
        heap = []

        def push(m):
            if not self.is_terminal_monomial(m):
                heapq.heappush(heap, ((-len(m), tuple(-v for v in m)), m))

        for m in terms:
            push(m)
        while heap:
            _, m = heapq.heappop(heap)
            c = terms.get(m)
            if c is None:
                continue
            del terms[m]
            self._accumulate(terms, self._expand(m, self.leftmost_redex(m), c), push)
        return terms

    def _reduce_random(self, terms: dict, rng: random.Random) -> dict:
        pending = _IndexedSet()

        def track(m):
            if not self.is_terminal_monomial(m):
                pending.add(m)

        for m in terms:
            track(m)
        while pending:
            m = pending.choice(rng)
            if m not in terms:
                pending.discard(m)
                continue
            c = terms.pop(m)
            pending.discard(m)
            pos = rng.choice(self.redexes(m))
            self._accumulate(terms, self._expand(m, pos, c), track)
        return terms

    def _nf_scaled(self, m: Monomial, v: int) -> dict:
        """Normal form of p^v * m as a term dict."""
        key = (m, v)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        pos = self.leftmost_redex(m)
        if pos < 0:
            result = {m: self.ctx.p**v % self.ctx.pn}
        else:
            result = {}
            self._add_scaled(result, self._expand(m, pos, self.ctx.p**v), 1)
        self._memo[key] = result
        return result

    def _add_scaled(self, acc: dict, items: Iterable, scale: int) -> None:
        p, n, pn = self.ctx.p, self.ctx.n, self.ctx.pn
        for m, c in items:
            e = vp_int(c, p, n)
            unit = c // p**e
            for m2, c2 in self._nf_scaled(m, e).items():
                val = (acc.get(m2, 0) + scale * unit * c2) % pn
                if val:
                    acc[m2] = val
                else:
                    acc.pop(m2, None)

    def reduce_cached(self, f: Poly) -> Poly:
        acc: dict = {}
        self._add_scaled(acc, f.terms.items(), 1)
        return Poly._raw(self.ring, acc)

    def ideal_member(self, f: Poly) -> bool:
        return not self.normal_form(f)

    # -- confluence ----------------------------------------------------------------

    def check_confluence(self, degree_cap: int = 4, samples: int = 0, sample_degree: int = 8,
                         seed: int = 0, strategies_per_sample: int = 1) -> dict:
        """Joinability of all first-step site pairs plus randomized strategies.

        Exhaustive over monomials of degree 1..degree_cap: every pair of
        distinct redex sites is stepped and both results are normalized.
        Then ``samples`` random monomials of degree <= ``sample_degree`` are
        normalized under random site selection and compared with the
        canonical normal form.
        """
        ring = self.ring
        failures = []
        words = pairs = 0
        for d in range(1, degree_cap + 1):
            for m in itertools.product(range(self.ctx.nvars), repeat=d):
                words += 1
                f = ring.monomial(m)
                sites = self.redexes(m)
                for s1, s2 in itertools.combinations(sites, 2):
                    pairs += 1
                    nf1 = self.normal_form(self.one_step(f, m, s1))
                    nf2 = self.normal_form(self.one_step(f, m, s2))
                    if nf1 != nf2:
                        failures.append({"input": format_mono(m), "site_pair": [s1, s2],
                                         "nf1": format_poly(nf1), "nf2": format_poly(nf2)})
        rng = random.Random(seed)
        for _ in range(samples):
            d = rng.randint(1, sample_degree)
            m = tuple(rng.randrange(self.ctx.nvars) for _ in range(d))
            f = ring.monomial(m)
            base = self.normal_form(f)
            for _ in range(strategies_per_sample):
                other = self.normal_form(f, "random", random.Random(rng.getrandbits(32)))
                if other != base:
                    failures.append({"input": format_mono(m), "site_pair": "random",
                                     "nf1": format_poly(base), "nf2": format_poly(other)})
        return {"words": words, "site_pairs": pairs, "samples": samples,
                "failures": failures, "confluent": not failures}


def normal_form(rules: RuleSystem, f: Poly) -> Poly:
    return rules.normal_form(f)


def is_terminal(rules: RuleSystem, f: Poly) -> bool:
    return rules.is_terminal(f)


def ideal_member(rules: RuleSystem, f: Poly) -> bool:
    return rules.ideal_member(f)
