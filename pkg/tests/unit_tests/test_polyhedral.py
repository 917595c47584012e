from __future__ import annotations

import math
from fractions import Fraction

import pytest

from clutterforge import polyhedral
from clutterforge.clutter import Clutter, MinorSpec, builtin, mult
from clutterforge.config import Budget
from clutterforge.errors import BudgetExceeded, TooLarge, VerificationFailed
from clutterforge.polyhedral import FractionalPoint, Integral
from clutterforge.vspace import Subspace

HALF = Fraction(1, 2)


def test_delta3_extreme_points() -> None:
    points = polyhedral.extreme_points(builtin("Delta3"))
    assert set(points) == {
        (0, 1, 1),
        (1, 0, 1),
        (1, 1, 0),
        (HALF, HALF, HALF),
    }


@pytest.mark.parametrize("name", ["Delta3", "C5sq"])
def test_non_ideal_builtins(name: str) -> None:
    C = builtin(name)
    cert = polyhedral.is_ideal(C)
    assert isinstance(cert, FractionalPoint)
    assert all(v == HALF for v in cert.point)
    polyhedral.check_fractional_point(C, cert.point, cert.tight_members, cert.tight_bounds)


def test_q6_is_ideal(r11: Subspace) -> None:
    assert isinstance(polyhedral.is_ideal(builtin("Q6")), Integral)
    cert = polyhedral.is_ideal(mult(r11))
    assert isinstance(cert, Integral)
    assert cert.extreme_points > 0


def test_extreme_points_budget(ex92: Subspace) -> None:
    with pytest.raises(TooLarge):
        polyhedral.extreme_points(mult(ex92), Budget(max_polyhedral_ground=11))


def test_check_fractional_point_rejects() -> None:
    D = builtin("Delta3")
    with pytest.raises(VerificationFailed):
        polyhedral.check_fractional_point(D, (1, 1, 0), (0,), (2,))
    with pytest.raises(VerificationFailed):
        polyhedral.check_fractional_point(D, (HALF, HALF, 0), (), (2,))
    with pytest.raises(VerificationFailed):
        polyhedral.check_fractional_point(D, (HALF, HALF, HALF), (0, 1), ())
    assert polyhedral.fractional_point(D, (HALF, HALF, HALF)).tight_members == (0, 1, 2)


@pytest.mark.parametrize(
    "name,tau,nu",
    [("Delta3", 2, 1), ("Q6", 2, 1), ("C5sq", 3, 2)],
)
def test_tau_nu_unit_weights(name: str, tau: int, nu: int) -> None:
    C = builtin(name)
    ones = [1] * len(C.ground)
    assert polyhedral.tau(C, ones) == tau
    assert polyhedral.nu(C, ones) == nu
    assert not polyhedral.packs(C)


def test_zero_and_infinite_weights() -> None:
    D = builtin("Delta3")
    # weight 0 deletes, infinite weight contracts
    assert polyhedral.tau(D, [0, 1, 1]) == 1
    assert polyhedral.tau(D, [math.inf, 1, 1]) == 2
    assert polyhedral.tau(D, [math.inf, math.inf, 1]) == math.inf
    assert polyhedral.nu(D, [0, 1, 1]) == 1
    with pytest.raises(ValueError):
        polyhedral.nu(D, [math.inf, 1, 1])
    with pytest.raises(ValueError):
        polyhedral.tau(D, [1, 1])
    with pytest.raises(ValueError):
        polyhedral.tau(D, [-1, 1, 1])


def test_fractional_optimum() -> None:
    D = builtin("Delta3")
    value, packing, _ = polyhedral.nu_star(D, [1, 1, 1])
    assert value == Fraction(3, 2)
    assert packing == (HALF, HALF, HALF)
    opt = polyhedral.tau_star(D, [1, 1, 1])
    assert opt.value == Fraction(3, 2)
    assert opt.point == (HALF, HALF, HALF)


def test_weights_from_minor() -> None:
    Q6 = builtin("Q6")
    assert polyhedral.weights_from_minor(Q6, MinorSpec.of([1], [3])) == (0, 1, 4, 1, 1, 1)


def test_mfmc_check() -> None:
    found = polyhedral.mfmc_check(builtin("Q6"), 1)
    assert found is not None
    assert found.tau > found.nu
    disjoint = Clutter.from_sets((1, 2, 3, 4), [(1, 2), (3, 4)])
    assert polyhedral.mfmc_check(disjoint, 2) is None
    with pytest.raises(BudgetExceeded):
        polyhedral.mfmc_check(builtin("Q6"), 10, budget=Budget(mfmc_weights=100))


def test_mfmc_hints_come_first() -> None:
    found = polyhedral.mfmc_check(builtin("Q6"), 1, hints=[[1] * 6], samples=0)
    assert found is not None
    assert found.w == (1, 1, 1, 1, 1, 1)
    assert (found.tau, found.nu) == (2, 1)


def test_packing_property() -> None:
    assert polyhedral.has_packing_property(builtin("Q6")) == MinorSpec.of()
    disjoint = Clutter.from_sets((1, 2, 3, 4), [(1, 2), (3, 4)])
    assert polyhedral.has_packing_property(disjoint) is None
    with pytest.raises(BudgetExceeded):
        polyhedral.has_packing_property(
            Clutter.from_sets((1, 2, 3), [(1, 2), (2, 3)]),
            Budget(packing_sweep_minors=1),
        )


@pytest.mark.parametrize("name", ["Delta3", "Q6"])
def test_minimally_non_packing(name: str) -> None:
    assert polyhedral.minimally_non_packing(builtin(name))


def test_packing_clutter_is_not_minimally_non_packing() -> None:
    assert not polyhedral.minimally_non_packing(Clutter.from_sets((1, 2), [(1,), (2,)]))
