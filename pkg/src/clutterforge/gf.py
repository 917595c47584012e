"""
Arithmetic in GF(q) for prime powers q <= 32.

An element is a plain int in [0, q). The int with base-p digits
(c_0, ..., c_{k-1}) stands for the polynomial c_0 + c_1 x + ... + c_{k-1} x^(k-1)
reduced modulo the fixed irreducible polynomial in MODULI. All arithmetic is
table lookup.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from clutterforge.errors import (
    DivisionByZero,
    NotPrimePower,
    Unsupported,
    VerificationFailed,
)

logger = logging.getLogger(__name__)

FieldElement = int

MAX_ORDER = 32

# coefficients listed from the constant term up; prime fields use x
MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),  # x^2 + x + 1
    8: (1, 1, 0, 1),  # x^3 + x + 1
    9: (2, 2, 1),  # x^2 + 2x + 2
    16: (1, 1, 0, 0, 1),  # x^4 + x + 1
    25: (2, 4, 1),  # x^2 + 4x + 2
    27: (1, 2, 0, 1),  # x^3 + 2x + 1
    32: (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1
}

GF4_NAMES = ("0", "1", "a", "b")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    k: int
    modulus: tuple[int, ...]
    add_table: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    neg_table: tuple[int, ...] = field(repr=False, compare=False)
    inv_table: tuple[int, ...] = field(repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    def __str__(self) -> str:
        return f"GF({self.q})"


def smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


def _digits(x: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        x, c = divmod(x, p)
        out.append(c)
    return out


def _value(coeffs: list[int], p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def _poly_mod(a: list[int], m: tuple[int, ...] | list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over GF(p)."""
    a = list(a)
    d = len(m) - 1
    for top in range(len(a) - 1, d - 1, -1):
        c = a[top] % p
        if c:
            for i in range(d + 1):
                a[top - d + i] = (a[top - d + i] - c * m[i]) % p
    return [c % p for c in a[:d]] + [0] * max(0, d - len(a))


def is_irreducible(p: int, coeffs: tuple[int, ...]) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    k = len(coeffs) - 1
    if k < 1 or coeffs[-1] != 1:
        return False
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = (*low, 1)
            if not any(_poly_mod(list(coeffs), divisor, p)):
                return False
    return True


def _mulmod(x: int, y: int, p: int, k: int, modulus: tuple[int, ...]) -> int:
    a = _digits(x, p, k)
    b = _digits(y, p, k)
    prod = [0] * (2 * k - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _value(_poly_mod(prod, modulus, p), p)


def _addmod(x: int, y: int, p: int, k: int) -> int:
    a = _digits(x, p, k)
    b = _digits(y, p, k)
    return _value([(s + t) % p for s, t in zip(a, b)], p)


def _check_axioms(f: FieldSpec) -> None:
    q = f.q
    rng = range(q)
    for x in rng:
        if sorted(f.add_table[x]) != list(rng):
            raise VerificationFailed(f"{f}: addition row {x} is not a permutation")
        if x and sorted(f.mul_table[x][1:]) != list(range(1, q)):
            raise VerificationFailed(f"{f}: multiplication row {x} is not a permutation")
    for x, y in product(rng, rng):
        if f.add_table[x][y] != f.add_table[y][x] or f.mul_table[x][y] != f.mul_table[y][x]:
            raise VerificationFailed(f"{f}: not commutative at ({x}, {y})")
    for x, y, z in product(rng, rng, rng):
        add, mul = f.add_table, f.mul_table
        if add[add[x][y]][z] != add[x][add[y][z]]:
            raise VerificationFailed(f"{f}: addition not associative")
        if mul[mul[x][y]][z] != mul[x][mul[y][z]]:
            raise VerificationFailed(f"{f}: multiplication not associative")
        if mul[x][add[y][z]] != add[mul[x][y]][mul[x][z]]:
            raise VerificationFailed(f"{f}: distributivity fails")
    for x in rng:
        acc = 0
        for _ in range(f.p):
            acc = f.add_table[acc][x]
        if acc != 0:
            raise VerificationFailed(f"{f}: characteristic is not {f.p}")
    if not any(multiplicative_order(f, g) == q - 1 for g in f.nonzero):
        raise VerificationFailed(f"{f}: multiplicative group is not cyclic")


@lru_cache(maxsize=None)
def build_field(q: int) -> FieldSpec:
    if q < 2:
        raise NotPrimePower(q)
    p = smallest_prime_factor(q)
    k, rest = 0, q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise NotPrimePower(q)
    if q > MAX_ORDER:
        raise Unsupported(q)

    modulus = MODULI.get(q, (0, 1))
    if not is_irreducible(p, modulus):
        raise VerificationFailed(f"modulus for GF({q}) is reducible")

    rng = range(q)
    add_table = tuple(tuple(_addmod(x, y, p, k) for y in rng) for x in rng)
    mul_table = tuple(tuple(_mulmod(x, y, p, k, modulus) for y in rng) for x in rng)
    neg_table = tuple(add_table[x].index(0) for x in rng)
    inv_table = (0,) + tuple(mul_table[x].index(1) for x in range(1, q))
    f = FieldSpec(p, k, modulus, add_table, mul_table, neg_table, inv_table)
    _check_axioms(f)
    logger.debug("built %s with modulus %s", f, modulus)
    return f


def add(f: FieldSpec, x: FieldElement, y: FieldElement) -> FieldElement:
    return f.add_table[x][y]


def sub(f: FieldSpec, x: FieldElement, y: FieldElement) -> FieldElement:
    return f.add_table[x][f.neg_table[y]]


def mul(f: FieldSpec, x: FieldElement, y: FieldElement) -> FieldElement:
    return f.mul_table[x][y]


def neg(f: FieldSpec, x: FieldElement) -> FieldElement:
    return f.neg_table[x]


def inv(f: FieldSpec, x: FieldElement) -> FieldElement:
    if x == 0:
        raise DivisionByZero(f"{f}: 0 has no inverse")
    return f.inv_table[x]


def div(f: FieldSpec, x: FieldElement, y: FieldElement) -> FieldElement:
    return f.mul_table[x][inv(f, y)]


def power(f: FieldSpec, x: FieldElement, e: int) -> FieldElement:
    if e < 0:
        return power(f, inv(f, x), -e)
    result, base = 1, x
    while e:
        if e & 1:
            result = f.mul_table[result][base]
        base = f.mul_table[base][base]
        e >>= 1
    return result


def frobenius(f: FieldSpec, x: FieldElement) -> FieldElement:
    return power(f, x, f.p)


def multiplicative_order(f: FieldSpec, x: FieldElement) -> int:
    if x == 0:
        raise DivisionByZero(f"{f}: 0 has no multiplicative order")
    acc, n = x, 1
    while acc != 1:
        acc = f.mul_table[acc][x]
        n += 1
    return n


def element_name(f: FieldSpec, x: FieldElement) -> str:
    if f.q == 4:
        return GF4_NAMES[x]
    return str(x)
