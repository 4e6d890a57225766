"""Exact arithmetic in Z/p^n and the exponential r -> k^r.

Residues are stored canonically in ``[0, p^n)``.  All objects here are
immutable; the heavier modules work on bare ``int`` values reduced by
``Modulus.pn`` and only use :class:`Residue` at API boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class ZmodError(ValueError):
    pass


class NotAUnit(ZmodError):
    pass


class ModulusMismatch(ZmodError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Modulus:
    p: int
    n: int
    pn: int = field(init=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ZmodError(f"p={self.p} is not prime")
        if not isinstance(self.n, int) or self.n < 1:
            raise ZmodError(f"n={self.n} must be a positive integer")
        object.__setattr__(self, "pn", self.p**self.n)

    def __call__(self, value: int) -> Residue:
        return Residue(value, self)

    def __str__(self):
        return f"{self.p}^{self.n}"

    def residues(self):
        return [Residue(v, self) for v in range(self.pn)]


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: Modulus

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.modulus.pn)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value + v, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value - v, self.modulus)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(v - self.value, self.modulus)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return Residue(self.value * v, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"Residue({self.value} mod {self.modulus})"

    def inverse(self) -> Residue:
        return res_inv(self)

    def is_unit(self) -> bool:
        return self.value % self.modulus.p != 0


def res_arith(a: Residue, b: Residue, op: str) -> Residue:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"{a.modulus} vs {b.modulus}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def inv_mod(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    r0, r1 = a % m, m
    s0, s1 = 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise NotAUnit(f"{a} is not invertible mod {m}")
    return s0 % m


def res_inv(a: Residue) -> Residue:
    if a.modulus.pn == 1:
        return a
    if a.value % a.modulus.p == 0:
        raise NotAUnit(f"{a.value} is divisible by p={a.modulus.p}")
    return Residue(inv_mod(a.value, a.modulus.pn), a.modulus)


def vp_int(value: int, p: int, cap: int) -> int:
    """p-adic valuation of ``value`` clipped to ``cap``; zero has valuation ``cap``."""
    if value == 0:
        return cap
    e = 0
    while e < cap and value % p == 0:
        value //= p
        e += 1
    return e


def vp(a: Residue) -> int:
    return vp_int(a.value, a.modulus.p, a.modulus.n)


@dataclass(frozen=True)
class KExp:
    """The map r -> k^r on Z/p^n; well defined because p | k-1."""

    k: int
    modulus: Modulus
    order: int = field(init=False, compare=False)

    def __post_init__(self):
        p = self.modulus.p
        if self.k < 2:
            raise ZmodError(f"k={self.k} must be at least 2")
        if (self.k - 1) % p:
            raise ZmodError(f"p={p} does not divide k-1={self.k - 1}")
        object.__setattr__(self, "order", _mult_order(self.k, self.modulus))

    def __call__(self, r) -> Residue:
        return kpow(self, r)

    def pow_int(self, r: int) -> int:
        return pow(self.k, int(r) % self.order, self.modulus.pn)

    def inv_pow_int(self, r: int) -> int:
        return pow(self.k, (-int(r)) % self.order, self.modulus.pn)


def _mult_order(k: int, mod: Modulus) -> int:
    # k = 1 mod p, so the order is a power of p dividing p^(n-1)
    order, x = 1, k % mod.pn
    while x != 1 % mod.pn:
        x = pow(x, mod.p, mod.pn)
        order *= mod.p
    return order


def korder(ke: KExp) -> int:
    return ke.order


def kpow(ke: KExp, r) -> Residue:
    if isinstance(r, Residue) and r.modulus != ke.modulus:
        raise ModulusMismatch(f"{r.modulus} vs {ke.modulus}")
    return Residue(ke.pow_int(int(r)), ke.modulus)
