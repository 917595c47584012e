from __future__ import annotations

import pytest

from clutterforge.config import ENV_VAR, Budget
from clutterforge.errors import ParseError


def test_defaults() -> None:
    assert Budget.from_env({}) == Budget()
    assert Budget.from_env({ENV_VAR: "  "}) == Budget()


def test_multiplier_leaves_fixed_caps() -> None:
    budget = Budget.from_env({ENV_VAR: "2"})
    assert budget.max_points == 2 * Budget().max_points
    assert budget.minor_search_work == 2 * Budget().minor_search_work
    assert budget.max_ground == Budget().max_ground
    assert budget.max_iso_ground == Budget().max_iso_ground


def test_small_multiplier_keeps_caps_positive() -> None:
    budget = Budget().scaled(1e-9)
    assert budget.max_points == 1
    assert budget.subspace_count == 1


def test_named_caps() -> None:
    budget = Budget.from_env({ENV_VAR: "max_points=100, subspace_count=7"})
    assert budget.max_points == 100
    assert budget.subspace_count == 7
    assert budget.max_mult_points == Budget().max_mult_points


@pytest.mark.parametrize(
    "raw",
    ["lots", "0", "-1", "nonsense=3", "max_points=many", "max_points=0"],
)
def test_bad_values(raw: str) -> None:
    with pytest.raises(ParseError):
        Budget.from_env({ENV_VAR: raw})
