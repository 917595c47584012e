"""
Matroids of subspaces, stored as explicit circuit families.

The circuits of Matroid(S) are the minimal nonempty supports of the nonzero
points of S. Everything here works from circuits alone; when a matroid came
from a subspace, `source` keeps that subspace so the vector-space route of a
minor can be compared with the circuit route.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import TYPE_CHECKING

from clutterforge.config import Budget, resolve
from clutterforge.errors import (
    BadIndex,
    BudgetExceeded,
    OverlapError,
    PreconditionViolated,
    VerificationFailed,
)
from clutterforge.vspace import (
    Subspace,
    enumerate_points,
    minimal_supports,
    project,
    span,
)

if TYPE_CHECKING:
    from clutterforge.graphs import MultiGraph

logger = logging.getLogger(__name__)

TARGETS = ("U24", "MK4e", "A3", "MK4")


@dataclass(frozen=True)
class CircuitMatroid:
    size: int
    circuits: tuple[frozenset[int], ...]
    source: Subspace | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_circuits(
        cls,
        size: int,
        circuits: Iterable[Iterable[int]],
        *,
        source: Subspace | None = None,
        validate: bool = True,
        budget: Budget | None = None,
    ) -> CircuitMatroid:
        family = sorted({frozenset(c) for c in circuits}, key=_circuit_key)
        M = cls(size, tuple(family), source)
        if validate and size <= resolve(budget).max_matroid_ground:
            check_axioms(M)
        return M

    def __str__(self) -> str:
        body = " ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in self.circuits)
        return f"matroid on {self.size} elements: {body or '(no circuits)'}"


@dataclass(frozen=True)
class ComponentKind:
    elements: tuple[int, ...]
    kind: str
    t: int | None = None
    series: tuple[tuple[int, ...], ...] = ()

    def describe(self) -> str:
        if self.kind == "subdivision":
            return f"subdivision of A_{self.t}"
        return self.kind


@dataclass(frozen=True)
class StructureReport:
    size: int
    components: tuple[ComponentKind, ...]

    @property
    def all_disjoint_circuits(self) -> bool:
        return all(c.kind in ("coloop", "circuit") for c in self.components)

    @property
    def all_structured(self) -> bool:
        return all(c.kind != "unclassified" for c in self.components)


def _circuit_key(c: frozenset[int]) -> tuple[int, list[int]]:
    return (len(c), sorted(c))


def _mask(s: Iterable[int]) -> int:
    m = 0
    for e in s:
        m |= 1 << e
    return m


def check_axioms(M: CircuitMatroid) -> None:
    masks = [_mask(c) for c in M.circuits]
    for c in M.circuits:
        if not c:
            raise VerificationFailed("the empty set is not a circuit")
        if not all(0 <= e < M.size for e in c):
            raise BadIndex(f"circuit {sorted(c)} leaves the ground set of size {M.size}")
    for a, b in combinations(masks, 2):
        if a & b == a or a & b == b:
            raise VerificationFailed("circuits are not an antichain")
        common = a & b
        union = a | b
        while common:
            bit = common & -common
            common ^= bit
            rest = union & ~bit
            if not any(c & rest == c for c in masks):
                raise VerificationFailed("circuit elimination fails")


def builtin(name: str) -> CircuitMatroid:
    if name == "U24":
        return CircuitMatroid.from_circuits(4, combinations(range(4), 3))
    if name == "A3":
        return CircuitMatroid.from_circuits(3, combinations(range(3), 2))
    if name == "MK4e":
        # K4 with one edge contracted: edge 0 alone, {1,3} and {2,4} parallel
        return CircuitMatroid.from_circuits(
            5, [{1, 3}, {2, 4}, {0, 1, 2}, {0, 1, 4}, {0, 2, 3}, {0, 3, 4}]
        )
    if name == "MK4":
        # edges ab, ac, ad, bc, bd, cd
        return CircuitMatroid.from_circuits(
            6,
            [{0, 1, 3}, {0, 2, 4}, {1, 2, 5}, {3, 4, 5},
             {0, 2, 3, 5}, {0, 1, 4, 5}, {1, 2, 3, 4}],
        )
    raise ValueError(f"unknown matroid {name!r}; expected one of {', '.join(TARGETS)}")


def uniform_parallel(t: int) -> CircuitMatroid:
    """Cycle matroid of A_t: every 2-subset is a circuit."""
    return CircuitMatroid.from_circuits(t, combinations(range(t), 2), validate=False)


def matroid_of(S: Subspace, budget: Budget | None = None) -> CircuitMatroid:
    M = CircuitMatroid.from_circuits(
        S.n, minimal_supports(S, budget), source=S, validate=False
    )
    if rank(M) + S.dimension != S.n:
        raise VerificationFailed(
            f"rank {rank(M)} of Matroid(S) does not complement dim {S.dimension}"
        )
    return M


def is_independent(M: CircuitMatroid, X: Iterable[int]) -> bool:
    s = frozenset(X)
    return not any(c <= s for c in M.circuits)


def rank(M: CircuitMatroid) -> int:
    masks = [_mask(c) for c in M.circuits]
    chosen = 0
    for e in range(M.size):
        trial = chosen | (1 << e)
        if not any(c & trial == c for c in masks):
            chosen = trial
    return bin(chosen).count("1")


def remaining(M: CircuitMatroid, I: Iterable[int], J: Iterable[int]) -> tuple[int, ...]:
    gone = set(I) | set(J)
    return tuple(e for e in range(M.size) if e not in gone)


def matroid_minor(
    M: CircuitMatroid, I: Iterable[int], J: Iterable[int]
) -> CircuitMatroid:
    """
    M \\ I / J with the surviving elements renumbered in increasing order.
    """
    dele, con = frozenset(I), frozenset(J)
    if dele & con:
        raise OverlapError(f"delete and contract sets share {sorted(dele & con)}")
    if any(not 0 <= e < M.size for e in dele | con):
        raise BadIndex(f"minor sets leave the ground set of size {M.size}")
    keep = remaining(M, dele, con)
    index = {e: i for i, e in enumerate(keep)}
    traces = {c - con for c in M.circuits if not c & dele}
    traces.discard(frozenset())
    minimal: list[frozenset[int]] = []
    for c in sorted(traces, key=_circuit_key):
        if not any(m <= c for m in minimal):
            minimal.append(c)
    return CircuitMatroid.from_circuits(
        len(keep), ({index[e] for e in c} for c in minimal), validate=False
    )


def realize_minor(S: Subspace, I: Iterable[int], J: Iterable[int]) -> Subspace:
    """
    The subspace whose matroid is Matroid(S) \\ I / J: keep the points vanishing
    on I, then drop I and J.
    """
    dele, con = frozenset(I), frozenset(J)
    if dele & con:
        raise OverlapError(f"delete and contract sets share {sorted(dele & con)}")
    section = [x for x in enumerate_points(S) if not any(x[i] for i in dele)]
    return project(span(S.field, S.n, section), dele | con)


def components(M: CircuitMatroid) -> list[tuple[int, ...]]:
    parent = list(range(M.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in M.circuits:
        first, *rest = sorted(c)
        for e in rest:
            parent[find(e)] = find(first)
    groups: dict[int, list[int]] = {}
    for e in range(M.size):
        groups.setdefault(find(e), []).append(e)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def series_classes(M: CircuitMatroid) -> list[tuple[int, ...]]:
    comp_of = {e: i for i, comp in enumerate(components(M)) for e in comp}
    signature: dict[tuple[int, frozenset[int]], list[int]] = {}
    for e in range(M.size):
        inside = frozenset(i for i, c in enumerate(M.circuits) if e in c)
        signature.setdefault((comp_of[e], inside), []).append(e)
    return sorted((tuple(g) for g in signature.values()), key=lambda g: g[0])


def _classify_component(M: CircuitMatroid, comp: tuple[int, ...]) -> ComponentKind:
    members = frozenset(comp)
    inside = [c for c in M.circuits if c <= members]
    if not inside:
        return ComponentKind(comp, "coloop")
    if inside == [members]:
        return ComponentKind(comp, "circuit", series=(comp,))
    classes = [cls for cls in series_classes(M) if cls[0] in members]
    t = len(classes)
    outside = [e for e in range(M.size) if e not in members]
    extra = [e for cls in classes for e in cls[1:]]
    core = matroid_minor(M, outside, extra)
    if t >= 3 and core == uniform_parallel(t):
        return ComponentKind(comp, "subdivision", t=t, series=tuple(classes))
    return ComponentKind(comp, "unclassified", series=tuple(classes))


def classify(M: CircuitMatroid) -> StructureReport:
    return StructureReport(M.size, tuple(_classify_component(M, c) for c in components(M)))


def _signature(M: CircuitMatroid) -> tuple[int, list[int]]:
    return (M.size, sorted(len(c) for c in M.circuits))


def is_isomorphic(M1: CircuitMatroid, M2: CircuitMatroid) -> dict[int, int] | None:
    from clutterforge.clutter import Clutter
    from clutterforge.clutter import is_isomorphic as clutters_isomorphic

    if _signature(M1) != _signature(M2):
        return None
    c1 = Clutter.from_sets(range(M1.size), M1.circuits)
    c2 = Clutter.from_sets(range(M2.size), M2.circuits)
    found = clutters_isomorphic(c1, c2)
    if found is None:
        return None
    return {a: b for a, b in found.items() if isinstance(a, int) and isinstance(b, int)}


def has_minor(
    M: CircuitMatroid,
    target: str | CircuitMatroid,
    budget: Budget | None = None,
) -> tuple[frozenset[int], frozenset[int]] | None:
    """
    Exhaustive search for (I, J) with M \\ I / J isomorphic to the target.
    """
    T = builtin(target) if isinstance(target, str) else target
    caps = resolve(budget)
    n, k = M.size, T.size
    if n < k:
        return None
    if n > caps.max_matroid_ground:
        raise BudgetExceeded(f"matroid minor search on {n} elements", caps.max_matroid_ground)
    candidates = comb(n, k) * 2 ** (n - k)
    if candidates > caps.matroid_minor_candidates:
        raise BudgetExceeded(f"matroid minor search ({candidates} candidates)",
                             caps.matroid_minor_candidates)

    want = _signature(T)
    for kept in combinations(range(M.size), k):
        rest = [e for e in range(n) if e not in kept]
        for r in range(len(rest) + 1):
            for J in combinations(rest, r):
                I = [e for e in rest if e not in J]
                N = matroid_minor(M, I, J)
                if _signature(N) == want and is_isomorphic(N, T) is not None:
                    logger.debug("found %s minor: I=%s J=%s", target, I, J)
                    return frozenset(I), frozenset(J)
    return None


def intersecting_circuits(
    M: CircuitMatroid,
) -> tuple[frozenset[int], frozenset[int]] | None:
    for a, b in combinations(M.circuits, 2):
        if a & b:
            return a, b
    return None


def a3_minor_from_intersection(
    M: CircuitMatroid, budget: Budget | None = None
) -> tuple[frozenset[int], frozenset[int]]:
    """An A3 minor, which exists exactly when two circuits meet."""
    if intersecting_circuits(M) is None:
        raise PreconditionViolated("circuits are pairwise disjoint; there is no A3 minor")
    found = has_minor(M, "A3", budget)
    if found is None:
        raise VerificationFailed("two circuits intersect but no A3 minor was found")
    return found


def realize(M: CircuitMatroid, report: StructureReport | None = None) -> MultiGraph:
    """
    A multigraph whose cycle matroid is M, for a matroid whose components are
    all coloops, circuits or subdivisions of A_t. Edge e realizes element e.
    """
    from clutterforge import graphs

    report = classify(M) if report is None else report
    edges: dict[int, tuple[int, int]] = {}
    fresh = 0

    def vertex() -> int:
        nonlocal fresh
        fresh += 1
        return fresh - 1

    for comp in report.components:
        if comp.kind == "coloop":
            (e,) = comp.elements
            edges[e] = (vertex(), vertex())
        elif comp.kind == "circuit":
            ring = [vertex() for _ in comp.elements]
            for i, e in enumerate(comp.elements):
                edges[e] = (ring[i], ring[(i + 1) % len(ring)])
        elif comp.kind == "subdivision":
            u, v = vertex(), vertex()
            for path in comp.series:
                stops = [u] + [vertex() for _ in path[1:]] + [v]
                for i, e in enumerate(path):
                    edges[e] = (stops[i], stops[i + 1])
        else:
            raise PreconditionViolated(
                f"component {comp.elements} is neither a circuit nor a subdivision of A_t"
            )
    return graphs.MultiGraph(fresh, tuple(edges[e] for e in range(M.size)))
