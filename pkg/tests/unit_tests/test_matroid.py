from __future__ import annotations

from collections.abc import Callable

import pytest

from clutterforge import matroid
from clutterforge.config import Budget
from clutterforge.errors import (
    BadIndex,
    BudgetExceeded,
    OverlapError,
    PreconditionViolated,
    VerificationFailed,
)
from clutterforge.graphs import MultiGraph, cycle_matroid
from clutterforge.matroid import CircuitMatroid, builtin, matroid_of
from clutterforge.vspace import Subspace

THETA = MultiGraph.from_edges([(0, 2), (2, 1), (0, 1), (0, 1)])


def test_matroid_of_sum_zero(r11: Subspace, ex92: Subspace) -> None:
    assert matroid_of(r11) == builtin("A3")
    assert matroid_of(ex92) == builtin("A3")
    assert matroid.rank(matroid_of(ex92)) == 1


@pytest.mark.parametrize(
    "filename,name",
    [("u24_gf4.txt", "U24"), ("k4e_gf4.txt", "MK4e")],
)
def test_matroid_of_instances(
    instance: Callable[[str], Subspace], filename: str, name: str
) -> None:
    M = matroid_of(instance(filename))
    assert M == builtin(name)
    assert M.source == instance(filename)


@pytest.mark.parametrize(
    "size,circuits,error",
    [
        (3, [{0, 1}, {0, 1, 2}], VerificationFailed),
        (4, [{0, 1}, {1, 2}], VerificationFailed),
        (2, [{0, 5}], BadIndex),
        (2, [set()], VerificationFailed),
    ],
)
def test_axioms(size: int, circuits: list[set[int]], error: type[Exception]) -> None:
    with pytest.raises(error):
        CircuitMatroid.from_circuits(size, circuits)


def test_matroid_minor() -> None:
    N = matroid.matroid_minor(builtin("MK4e"), [0], [])
    assert N.circuits == (frozenset({0, 2}), frozenset({1, 3}))
    assert matroid.matroid_minor(builtin("U24"), [], [3]) == builtin("A3")
    with pytest.raises(OverlapError):
        matroid.matroid_minor(builtin("U24"), [1], [1])
    with pytest.raises(BadIndex):
        matroid.matroid_minor(builtin("U24"), [7], [])


def test_realize_minor(instance: Callable[[str], Subspace]) -> None:
    S = instance("u24_gf4.txt")
    T = matroid.realize_minor(S, [], [3])
    assert T.n == 3
    assert matroid_of(T) == matroid.matroid_minor(matroid_of(S), [], [3])


def test_classify() -> None:
    report = matroid.classify(builtin("A3"))
    (comp,) = report.components
    assert comp.kind == "subdivision"
    assert comp.t == 3
    assert comp.describe() == "subdivision of A_3"

    report = matroid.classify(CircuitMatroid.from_circuits(3, [{0, 1}]))
    assert [c.kind for c in report.components] == ["circuit", "coloop"]
    assert report.all_disjoint_circuits

    report = matroid.classify(builtin("MK4e"))
    assert not report.all_structured


def test_series_classes_of_subdivision() -> None:
    M = cycle_matroid(THETA)
    assert matroid.series_classes(M) == [(0, 1), (2,), (3,)]
    (comp,) = matroid.classify(M).components
    assert comp.kind == "subdivision"
    assert comp.series == ((0, 1), (2,), (3,))


def test_realize_round_trips_through_cycle_matroid() -> None:
    M = cycle_matroid(THETA)
    assert cycle_matroid(matroid.realize(M)) == M
    with pytest.raises(PreconditionViolated):
        matroid.realize(builtin("MK4e"))


def test_has_minor() -> None:
    found = matroid.has_minor(builtin("MK4"), "MK4e")
    assert found is not None
    I, J = found
    N = matroid.matroid_minor(builtin("MK4"), I, J)
    assert matroid.is_isomorphic(N, builtin("MK4e")) is not None
    assert matroid.has_minor(builtin("MK4"), "U24") is None
    assert matroid.has_minor(builtin("A3"), "U24") is None
    with pytest.raises(BudgetExceeded):
        matroid.has_minor(builtin("MK4e"), "A3", Budget(max_matroid_ground=4))


def test_a3_from_intersection() -> None:
    I, J = matroid.a3_minor_from_intersection(builtin("MK4e"))
    N = matroid.matroid_minor(builtin("MK4e"), I, J)
    assert N == builtin("A3")
    disjoint = CircuitMatroid.from_circuits(4, [{0, 1}, {2, 3}])
    assert matroid.intersecting_circuits(disjoint) is None
    with pytest.raises(PreconditionViolated):
        matroid.a3_minor_from_intersection(disjoint)
