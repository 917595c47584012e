from __future__ import annotations

import pytest

from clutterforge import gf
from clutterforge.errors import DivisionByZero, NotPrimePower, Unsupported


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32])
def test_build_field(q: int) -> None:
    f = gf.build_field(q)
    assert f.q == q
    assert f.p**f.k == q
    for x in f.nonzero:
        assert gf.mul(f, x, gf.inv(f, x)) == 1
        assert gf.add(f, x, gf.neg(f, x)) == 0
        assert gf.power(f, x, q - 1) == 1


@pytest.mark.parametrize("q", [-1, 0, 1, 6, 10, 12, 18])
def test_not_prime_power(q: int) -> None:
    with pytest.raises(NotPrimePower):
        gf.build_field(q)


@pytest.mark.parametrize("q", [37, 49, 64])
def test_unsupported(q: int) -> None:
    with pytest.raises(Unsupported):
        gf.build_field(q)


def test_gf4_arithmetic() -> None:
    f = gf.build_field(4)
    a, b = 2, 3
    assert gf.add(f, a, b) == 1
    assert gf.mul(f, a, a) == b
    assert gf.mul(f, a, b) == 1
    assert gf.inv(f, a) == b
    assert [gf.element_name(f, x) for x in f.elements] == ["0", "1", "a", "b"]


def test_characteristic() -> None:
    f = gf.build_field(9)
    for x in f.elements:
        total = 0
        for _ in range(f.p):
            total = gf.add(f, total, x)
        assert total == 0


@pytest.mark.parametrize(
    "p,coeffs,expected",
    [
        (2, (1, 1, 1), True),
        (2, (1, 0, 1), False),
        (2, (1, 1, 0, 1), True),
        (3, (1, 0, 1), True),
        (3, (2, 0, 1), False),
    ],
)
def test_is_irreducible(p: int, coeffs: tuple[int, ...], expected: bool) -> None:
    assert gf.is_irreducible(p, coeffs) == expected


@pytest.mark.parametrize("q", [4, 8, 9])
def test_frobenius_is_additive(q: int) -> None:
    f = gf.build_field(q)
    for x in f.elements:
        for y in f.elements:
            assert gf.frobenius(f, gf.add(f, x, y)) == gf.add(
                f, gf.frobenius(f, x), gf.frobenius(f, y)
            )


def test_division_by_zero() -> None:
    f = gf.build_field(5)
    with pytest.raises(DivisionByZero):
        gf.inv(f, 0)
    with pytest.raises(DivisionByZero):
        gf.div(f, 3, 0)
    assert gf.div(f, 3, 2) == 4
