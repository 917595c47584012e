from __future__ import annotations

import dataclasses
import logging
import os
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache

from clutterforge.errors import ParseError

logger = logging.getLogger(__name__)

ENV_VAR = "CLUTTERFORGE_BUDGET"

# representational limits; a multiplier never touches these
FIXED_CAPS = frozenset({"max_ground", "max_iso_ground", "max_matroid_ground"})


@dataclass(frozen=True)
class Budget:
    """
    Caps for every enumeration and search in the package.

    Counting caps (points, search work, sweeps) scale with a multiplier;
    the representational caps in FIXED_CAPS only change when set by name.
    """

    max_points: int = 2**20
    max_mult_points: int = 2**16
    max_ground: int = 64
    max_iso_ground: int = 20
    minor_search_work: int = 20_000_000
    max_polyhedral_ground: int = 14
    packing_sweep_minors: int = 3**10
    mfmc_weights: int = 200_000
    matroid_minor_candidates: int = 500_000
    max_matroid_ground: int = 16
    max_graph_minor_edges: int = 14
    subspace_count: int = 100_000

    def scaled(self, factor: float) -> Budget:
        if factor <= 0:
            raise ValueError("budget multiplier must be positive")
        changes = {
            f.name: max(1, int(getattr(self, f.name) * factor))
            for f in dataclasses.fields(self)
            if f.name not in FIXED_CAPS
        }
        return dataclasses.replace(self, **changes)

    def replace(self, **caps: int) -> Budget:
        return dataclasses.replace(self, **caps)

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> Budget:
        env = os.environ if environ is None else environ
        raw = env.get(ENV_VAR, "").strip()
        budget = cls()
        if not raw:
            return budget
        if "=" not in raw:
            try:
                factor = float(raw)
            except ValueError as e:
                raise ParseError(f"{ENV_VAR}: not a number: {raw!r}") from e
            if factor <= 0:
                raise ParseError(f"{ENV_VAR}: multiplier must be positive")
            logger.debug("scaling search budgets by %s", factor)
            return budget.scaled(factor)

        names = {f.name for f in dataclasses.fields(cls)}
        caps: dict[str, int] = {}
        for item in raw.split(","):
            if not item.strip():
                continue
            name, _, value = item.partition("=")
            name = name.strip()
            if name not in names:
                raise ParseError(f"{ENV_VAR}: unknown cap {name!r}")
            try:
                caps[name] = int(float(value))
            except ValueError as e:
                raise ParseError(f"{ENV_VAR}: bad value for {name}: {value!r}") from e
            if caps[name] <= 0:
                raise ParseError(f"{ENV_VAR}: {name} must be positive")
        logger.debug("budget overrides from environment: %s", caps)
        return budget.replace(**caps)


@lru_cache(maxsize=1)
def current_budget() -> Budget:
    return Budget.from_env()


def resolve(budget: Budget | None) -> Budget:
    return current_budget() if budget is None else budget
