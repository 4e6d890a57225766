"""Words a_0^e ... with exponents in Z/p^n, in (even word)(odd word) form.

Odd letters are moved to the right of even letters with

    a1^m a0^r = a0^r a1^(m k^r)        a1^m a2^r = a2^(r k^-m) a1^m
    a3^m a2^r = a2^r a3^(m k^r)        a3^m a0^r = a0^(r k^-m) a3^m

which are consequences of a_{i+1} a_i = a_i a_{i+1}^k.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rewrite import Context

Letter = tuple  # (generator, exponent)


class WordParseError(ValueError):
    pass


@dataclass(frozen=True)
class HTildeElement:
    even: tuple = ()
    odd: tuple = ()

    def letters(self) -> tuple:
        return self.even + self.odd

    def is_identity(self) -> bool:
        return not self.even and not self.odd

    def __str__(self):
        return format_word(self.letters())


def _merge(letters: Iterable[Letter], pn: int) -> tuple:
    """Merge adjacent equal generators, dropping zero blocks (with cascade)."""
    out: list = []
    for g, e in letters:
        e %= pn
        if not e:
            continue
        if out and out[-1][0] == g:
            total = (out[-1][1] + e) % pn
            if total:
                out[-1] = (g, total)
            else:
                out.pop()
        else:
            out.append((g, e))
    return tuple(out)


class HTilde:
    """Normal-form arithmetic in (Z/p^n * Z/p^n) bowtie (Z/p^n * Z/p^n)."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self.pn = ctx.pn
        self.kexp = ctx.kexp

    def identity(self) -> HTildeElement:
        return HTildeElement()

    def letter(self, g: int, e: int) -> HTildeElement:
        if not 0 <= g < 4:
            raise ValueError(f"generator a{g} out of range")
        block = _merge([(g, int(e))], self.pn)
        return HTildeElement(block, ()) if g % 2 == 0 else HTildeElement((), block)

    def push(self, letter: Letter, even: Sequence[Letter]) -> tuple:
        """Move odd ``letter`` from the left of ``even`` to its right."""
        g, m = letter
        if g % 2 == 0:
            raise ValueError("only odd letters are pushed")
        pn, kexp = self.pn, self.kexp
        m %= pn
        out = []
        for h, r in even:
            if h == g - 1:
                m = m * kexp.pow_int(r) % pn
            else:
                r = r * kexp.inv_pow_int(m) % pn
            out.append((h, r))
        return tuple(out), (g, m)

    def mul(self, x: HTildeElement, y: HTildeElement) -> HTildeElement:
        even = y.even
        moved = []
        for letter in reversed(x.odd):
            even, letter = self.push(letter, even)
            moved.append(letter)
        moved.reverse()
        return HTildeElement(_merge(x.even + even, self.pn), _merge(moved + list(y.odd), self.pn))

    def normalize(self, raw: Iterable[Letter]) -> HTildeElement:
        result = self.identity()
        for g, e in raw:
            result = self.mul(result, self.letter(g, e))
        return result

    def inv(self, x: HTildeElement) -> HTildeElement:
        return self.normalize((g, -e) for g, e in reversed(x.letters()))

    def pow(self, x: HTildeElement, e: int) -> HTildeElement:
        if e < 0:
            x, e = self.inv(x), -e
        result = self.identity()
        while e:
            if e & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            e >>= 1
        return result

    def parse(self, text: str) -> HTildeElement:
        return self.normalize(parse_word(text))

    def hom_to_gamma(self, x: HTildeElement, group):
        """Image in Gamma_I under a_i -> 1 + p*x_i."""
        gens = group.generators()
        result = group.identity()
        for g, e in x.letters():
            result = group.mul(result, group.pow(gens[g], e))
        return result


def push(h: HTilde, letter: Letter, even: Sequence[Letter]) -> tuple:
    return h.push(letter, even)


def h_normalize(h: HTilde, raw: Iterable[Letter]) -> HTildeElement:
    return h.normalize(raw)


def h_mul(h: HTilde, x: HTildeElement, y: HTildeElement) -> HTildeElement:
    return h.mul(x, y)


def h_inv(h: HTilde, x: HTildeElement) -> HTildeElement:
    return h.inv(x)


def hom_to_gamma(h: HTilde, x: HTildeElement, group):
    return h.hom_to_gamma(x, group)


def relation_words(k: int) -> list:
    """The four defining relations as (lhs, rhs) raw words."""
    return [([((i + 1) % 4, 1), (i, 1)], [(i, 1), ((i + 1) % 4, k)]) for i in range(4)]


_TOKEN = re.compile(r"a(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> list:
    """Parse ``"a1^3, a0^-1, a2^5"``; ``"1"`` or an empty string is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return []
    out = []
    for token in text.split(","):
        token = "".join(token.split())
        match = _TOKEN.match(token)
        if not match:
            raise WordParseError(f"bad token {token!r}")
        g = int(match.group(1))
        if g > 3:
            raise WordParseError(f"generator a{g} out of range")
        out.append((g, int(match.group(2) or 1)))
    return out


def format_word(letters: Sequence[Letter]) -> str:
    if not letters:
        return "1"
    return ", ".join(f"a{g}^{e}" for g, e in letters)
