"""Dirichlet characters on small moduli.

A character is stored as exponents on a fixed set of generators of
(Z/qZ)^*, built prime-power by prime-power through the CRT, so every value
is an exact root of unity ``e^{2 pi i r}`` with rational ``r``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from mpmath import iv

from .numerics import ComplexBox, DomainError

__all__ = [
    "DirichletCharacter",
    "enumerate_primitive",
    "enumerate_characters",
    "primitive_count",
    "gauss_sum",
    "parity_and_order",
    "factorize",
    "unit_phase",
]


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def _primitive_root(p: int) -> int:
    phi = p - 1
    primes = [r for r, _ in factorize(phi)]
    for g in range(2, p):
        if all(pow(g, phi // r, p) != 1 for r in primes):
            return g
    return 1


def _primitive_root_prime_power(p: int, e: int) -> int:
    g = _primitive_root(p)
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class _Component:
    """One cyclic factor: generator ``gen`` of order ``order`` modulo ``pe``."""

    pe: int
    gen: int
    order: int
    p: int
    e: int
    kind: str  # "odd", "minus1" or "five"


@lru_cache(maxsize=None)
def _structure(q: int) -> tuple[tuple[_Component, ...], dict[int, tuple[int, ...]]]:
    """Cyclic components of (Z/qZ)^* and the discrete-log table of every unit."""
    comps: list[_Component] = []
    for p, e in factorize(q):
        pe = p ** e
        if p == 2:
            if e == 1:
                continue
            comps.append(_Component(pe, pe - 1, 2, 2, e, "minus1"))
            if e >= 3:
                comps.append(_Component(pe, 5, pe // 4, 2, e, "five"))
        else:
            comps.append(_Component(pe, _primitive_root_prime_power(p, e), pe // p * (p - 1), p, e, "odd"))

    local_logs: list[dict[int, int]] = []
    for c in comps:
        table: dict[int, int] = {}
        if c.kind == "minus1":
            # n = (+-1) * 5^k mod 2^e
            for n in range(1, c.pe, 2):
                table[n] = 0 if n % 4 == 1 else 1
        elif c.kind == "five":
            x = 1
            for k in range(c.order):
                table[x] = k
                table[(-x) % c.pe] = k
                x = x * 5 % c.pe
        else:
            x = 1
            for k in range(c.order):
                table[x] = k
                x = x * c.gen % c.pe
        local_logs.append(table)

    dlog: dict[int, tuple[int, ...]] = {}
    for n in range(1, q + 1):
        if math.gcd(n, q) != 1:
            continue
        dlog[n % q] = tuple(t[n % c.pe] for c, t in zip(comps, local_logs))
    return tuple(comps), dlog


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod ``modulus`` given by generator exponents.

    ``exponents[i]`` is ``a_i`` with ``chi(g_i) = e^{2 pi i a_i / order_i}``.
    """

    modulus: int
    exponents: tuple[int, ...]
    _orders: tuple[int, ...] = field(repr=False, compare=False, default=())

    def __post_init__(self) -> None:
        comps, _ = _structure(self.modulus)
        orders = tuple(c.order for c in comps)
        if len(self.exponents) != len(orders):
            raise ValueError("exponent tuple does not match the group structure")
        object.__setattr__(self, "exponents", tuple(a % o for a, o in zip(self.exponents, orders)))
        object.__setattr__(self, "_orders", orders)

    # exact values -------------------------------------------------------
    def exponent(self, n: int) -> Fraction | None:
        """``r`` with ``chi(n) = e^{2 pi i r}``, ``0 <= r < 1``; ``None`` if ``chi(n) = 0``."""
        if self.modulus == 1:
            return Fraction(0)
        _, dlog = _structure(self.modulus)
        logs = dlog.get(n % self.modulus)
        if logs is None:
            return None
        r = sum((Fraction(a * k, o) for a, k, o in zip(self.exponents, logs, self._orders)), Fraction(0))
        return r - math.floor(r)

    @cached_property
    def value_exponents(self) -> dict[int, Fraction]:
        q = self.modulus
        if q == 1:
            return {0: Fraction(0)}
        return {n: self.exponent(n) for n in range(q) if math.gcd(n, q) == 1}

    def __call__(self, n: int) -> complex:
        r = self.exponent(n)
        if r is None:
            return 0j
        return _exact_root_of_unity(r)

    @cached_property
    def values(self) -> np.ndarray:
        """``chi(n)`` for ``n = 0..q-1`` as complex128 (exact for real characters)."""
        return np.array([self(n) for n in range(self.modulus)], dtype=complex)

    # structure ----------------------------------------------------------
    @property
    def parity(self) -> int:
        if self.modulus <= 2:
            return 0
        r = self.exponent(self.modulus - 1)
        return 0 if r == 0 else 1

    @cached_property
    def order(self) -> int:
        k = 1
        for a, o in zip(self.exponents, self._orders):
            k = math.lcm(k, o // math.gcd(a, o))
        return k

    @property
    def is_trivial(self) -> bool:
        return all(a == 0 for a in self.exponents)

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @cached_property
    def is_primitive(self) -> bool:
        comps, _ = _structure(self.modulus)
        if self.modulus % 4 == 2:
            return False
        for a, c in zip(self.exponents, comps):
            if c.kind == "odd" and ((c.e == 1 and a == 0) or (c.e >= 2 and a % c.p == 0)):
                return False
            if c.kind == "minus1" and c.e == 2 and a == 0:
                return False
            if c.kind == "five" and a % 2 == 0:
                return False
        return True

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-a for a in self.exponents))

    @property
    def label(self) -> str:
        return f"{self.modulus}:" + ".".join(map(str, self.exponents))

    @classmethod
    def from_label(cls, label: str) -> "DirichletCharacter":
        q, _, ex = label.partition(":")
        exps = tuple(int(x) for x in ex.split(".")) if ex else ()
        return cls(int(q), exps)

    def value_box(self, n: int) -> ComplexBox:
        r = self.exponent(n)
        if r is None:
            return ComplexBox.of(0)
        return ComplexBox.from_iv(unit_phase(r))

    def __repr__(self) -> str:
        return f"DirichletCharacter({self.label})"


def _exact_root_of_unity(r: Fraction) -> complex:
    if (4 * r).denominator == 1:
        return {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j,
                Fraction(3, 4): -1j}[r]
    th = 2 * math.pi * float(r)
    return complex(math.cos(th), math.sin(th))


def unit_phase(r: Fraction):
    """``e^{2 pi i r}`` as an ``iv.mpc``; exact when ``4r`` is an integer."""
    r = r - math.floor(r)
    if (4 * r).denominator == 1:
        re, im = {Fraction(0): (1, 0), Fraction(1, 4): (0, 1),
                  Fraction(1, 2): (-1, 0), Fraction(3, 4): (0, -1)}[r]
        return iv.mpc(re, im)
    th = 2 * iv.pi * iv.mpf(r.numerator) / r.denominator
    return iv.mpc(iv.cos(th), iv.sin(th))


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q, ordered lexicographically by exponent tuple."""
    if q < 1:
        raise ValueError("modulus must be positive")
    comps, _ = _structure(q)
    return [DirichletCharacter(q, ex) for ex in itertools.product(*(range(c.order) for c in comps))]


def enumerate_primitive(q: int) -> list[DirichletCharacter]:
    """Exactly the primitive characters mod q in canonical order."""
    if q < 1:
        raise ValueError("modulus must be positive")
    return [c for c in enumerate_characters(q) if c.is_primitive]


def primitive_count(q: int) -> int:
    """Number of primitive characters mod q from the local factor counts."""
    n = 1
    for p, e in factorize(q):
        if p == 2:
            n *= {1: 0, 2: 1}.get(e, 2 ** (e - 2))
        elif e == 1:
            n *= p - 2
        else:
            n *= p ** (e - 2) * (p - 1) ** 2
    return n


def gauss_sum(chi: DirichletCharacter) -> ComplexBox:
    """Enclosure of ``sum_{j=1}^q chi(j) e^{2 pi i j / q}``."""
    if not chi.is_primitive:
        raise DomainError("Gauss sum modulus identity needs a primitive character")
    q = chi.modulus
    acc = iv.mpc(0, 0)
    for j in range(1, q + 1):
        r = chi.exponent(j)
        if r is None:
            continue
        acc = acc + unit_phase(r + Fraction(j, q))
    return ComplexBox.from_iv(acc)


def parity_and_order(chi: DirichletCharacter) -> tuple[int, int]:
    return chi.parity, chi.order
