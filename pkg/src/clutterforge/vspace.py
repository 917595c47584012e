"""
Coordinate subspaces of GF(q)^n and the set systems obtained from them.

A Subspace is stored by its reduced row echelon basis, so two subspaces are
equal exactly when their dataclasses compare equal.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from itertools import product as cartesian

from clutterforge import gf
from clutterforge.config import Budget, resolve
from clutterforge.errors import (
    BadIndex,
    DimensionMismatch,
    FieldMismatch,
    NotConnectedComponent,
    TooLarge,
    VerificationFailed,
)
from clutterforge.gf import FieldElement, FieldSpec

logger = logging.getLogger(__name__)

Point = tuple[FieldElement, ...]


@dataclass(frozen=True)
class Subspace:
    field: FieldSpec
    n: int
    basis: tuple[Point, ...]

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return self.q**self.dimension

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, c in enumerate(row) if c) for row in self.basis)

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, tuple) or len(x) != self.n:
            return False
        f = self.field
        residual = list(x)
        for row, p in zip(self.basis, self.pivots):
            c = residual[p]
            if c:
                for i, r in enumerate(row):
                    if r:
                        residual[i] = gf.sub(f, residual[i], gf.mul(f, c, r))
        return not any(residual)

    def __str__(self) -> str:
        rows = ", ".join("(" + ",".join(gf.element_name(self.field, c) for c in r) + ")"
                         for r in self.basis)
        return f"<{rows}> in {self.field}^{self.n}"


@dataclass(frozen=True)
class SetSystem:
    """
    An explicit point set inside U_1 x ... x U_m.

    `coords` holds the original coordinate index of each kept coordinate, so a
    restriction keeps the part labels of the space it came from.
    """

    field: FieldSpec
    boxes: tuple[tuple[FieldElement, ...], ...]
    coords: tuple[int, ...]
    points: tuple[Point, ...]

    @property
    def n(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class SunflowerWitness:
    permutation: tuple[int, ...]
    block_sizes: tuple[int, ...]
    rows: tuple[Point, ...]
    head: tuple[FieldElement, ...]
    tails: tuple[tuple[FieldElement, ...], ...]

    @property
    def r(self) -> int:
        return len(self.rows)

    def displayed(self) -> tuple[Point, ...]:
        """Rows with coordinates in `permutation` order (head block first)."""
        return tuple(tuple(row[c] for c in self.permutation) for row in self.rows)


def support(x: Point) -> frozenset[int]:
    return frozenset(i for i, c in enumerate(x) if c)


def scale(f: FieldSpec, c: FieldElement, x: Point) -> Point:
    return tuple(f.mul_table[c][v] for v in x)


def add_points(f: FieldSpec, x: Point, y: Point) -> Point:
    return tuple(f.add_table[a][b] for a, b in zip(x, y))


def normalize(f: FieldSpec, x: Point) -> Point:
    """Scale x so that its first nonzero entry is 1."""
    lead = next((c for c in x if c), 0)
    return x if lead in (0, 1) else scale(f, gf.inv(f, lead), x)


def rref(f: FieldSpec, rows: Iterable[Sequence[FieldElement]], n: int) -> tuple[Point, ...]:
    m = [list(r) for r in rows]
    pivot_row = 0
    for col in range(n):
        found = next((i for i in range(pivot_row, len(m)) if m[i][col]), None)
        if found is None:
            continue
        m[pivot_row], m[found] = m[found], m[pivot_row]
        lead = gf.inv(f, m[pivot_row][col])
        m[pivot_row] = [f.mul_table[lead][v] for v in m[pivot_row]]
        for i in range(len(m)):
            c = m[i][col]
            if i != pivot_row and c:
                m[i] = [gf.sub(f, a, f.mul_table[c][b]) for a, b in zip(m[i], m[pivot_row])]
        pivot_row += 1
        if pivot_row == len(m):
            break
    return tuple(tuple(r) for r in m[:pivot_row])


def span(f: FieldSpec, n: int, generators: Iterable[Sequence[FieldElement]]) -> Subspace:
    gens = [tuple(g) for g in generators]
    for g in gens:
        if len(g) != n:
            raise DimensionMismatch(f"generator {g} has length {len(g)}, expected {n}")
        if any(not 0 <= c < f.q for c in g):
            raise DimensionMismatch(f"generator {g} has entries outside {f}")
    return Subspace(f, n, rref(f, gens, n))


def sum_zero_space(f: FieldSpec, n: int) -> Subspace:
    """{x : x_1 + ... + x_n = 0}."""
    minus_one = gf.neg(f, 1)
    gens = [tuple(1 if j == i else minus_one if j == n - 1 else 0 for j in range(n))
            for i in range(n - 1)]
    return span(f, n, gens)


def iter_points(S: Subspace) -> Iterator[Point]:
    f = S.field
    zero = (0,) * S.n
    for coeffs in cartesian(range(S.q), repeat=S.dimension):
        x = zero
        for c, row in zip(coeffs, S.basis):
            if c:
                x = add_points(f, x, scale(f, c, row))
        yield x


def enumerate_points(S: Subspace, budget: Budget | None = None) -> list[Point]:
    cap = resolve(budget).max_points
    if S.size > cap:
        raise TooLarge("point enumeration", S.size, cap)
    return sorted(iter_points(S))


def product(S1: Subspace, S2: Subspace) -> Subspace:
    if S1.field != S2.field:
        raise FieldMismatch(f"cannot multiply spaces over {S1.field} and {S2.field}")
    zeros1, zeros2 = (0,) * S1.n, (0,) * S2.n
    rows = [r + zeros2 for r in S1.basis] + [zeros1 + r for r in S2.basis]
    return Subspace(S1.field, S1.n + S2.n, rref(S1.field, rows, S1.n + S2.n))


def _check_coords(S: Subspace | SetSystem, coords: Iterable[int]) -> frozenset[int]:
    out = frozenset(coords)
    bad = [i for i in out if not 0 <= i < S.n]
    if bad:
        raise BadIndex(f"coordinates {sorted(bad)} out of range for n={S.n}")
    return out


def project(S: Subspace, J: Iterable[int]) -> Subspace:
    """Drop the coordinates in J."""
    drop = _check_coords(S, J)
    keep = [i for i in range(S.n) if i not in drop]
    rows = [tuple(row[i] for i in keep) for row in S.basis]
    return Subspace(S.field, len(keep), rref(S.field, rows, len(keep)))


def as_set_system(S: Subspace | SetSystem, budget: Budget | None = None) -> SetSystem:
    if isinstance(S, SetSystem):
        return S
    full = tuple(S.field.elements)
    return SetSystem(S.field, (full,) * S.n, tuple(range(S.n)),
                     tuple(enumerate_points(S, budget)))


def restrict(
    S: Subspace | SetSystem,
    boxes: Sequence[Iterable[FieldElement]],
    budget: Budget | None = None,
) -> SetSystem:
    system = as_set_system(S, budget)
    if len(boxes) != system.n:
        raise DimensionMismatch(f"expected {system.n} boxes, got {len(boxes)}")
    allowed = [frozenset(b) for b in boxes]
    for i, (u, own) in enumerate(zip(allowed, system.boxes)):
        if not u:
            raise DimensionMismatch(f"box {i} is empty")
        if not u <= set(own):
            raise DimensionMismatch(f"box {i} is not inside the ambient box")
    sorted_boxes = tuple(tuple(sorted(u)) for u in allowed)
    points = [x for x in system.points if all(c in u for c, u in zip(x, allowed))]
    if not points:
        return SetSystem(system.field, sorted_boxes, system.coords, ())
    keep = [i for i in range(system.n) if len({x[i] for x in points}) > 1]
    return SetSystem(
        system.field,
        tuple(sorted_boxes[i] for i in keep),
        tuple(system.coords[i] for i in keep),
        tuple(sorted({tuple(x[i] for i in keep) for x in points})),
    )


def relabel(
    S: Subspace | SetSystem,
    maps: Sequence[Mapping[FieldElement, FieldElement]],
    budget: Budget | None = None,
) -> SetSystem:
    """Apply one bijection of the field per coordinate."""
    system = as_set_system(S, budget)
    if len(maps) != system.n:
        raise DimensionMismatch(f"expected {system.n} maps, got {len(maps)}")
    for i, m in enumerate(maps):
        if len({m[v] for v in system.boxes[i]}) != len(system.boxes[i]):
            raise DimensionMismatch(f"map {i} is not injective")
    return SetSystem(
        system.field,
        tuple(tuple(sorted(m[v] for v in box)) for m, box in zip(maps, system.boxes)),
        system.coords,
        tuple(sorted(tuple(m[c] for m, c in zip(maps, x)) for x in system.points)),
    )


def minimal_supports(S: Subspace, budget: Budget | None = None) -> list[frozenset[int]]:
    supports = {support(x) for x in enumerate_points(S, budget)}
    supports.discard(frozenset())
    minimal: list[frozenset[int]] = []
    for s in sorted(supports, key=lambda s: (len(s), sorted(s))):
        if not any(m <= s for m in minimal):
            minimal.append(s)
    return minimal


def point_with_support(
    S: Subspace, target: frozenset[int], budget: Budget | None = None
) -> Point | None:
    for x in enumerate_points(S, budget):
        if support(x) == target:
            return normalize(S.field, x)
    return None


def disjoint_support_basis(
    S: Subspace, budget: Budget | None = None
) -> tuple[Point, ...] | None:
    circuits = minimal_supports(S, budget)
    seen: set[int] = set()
    for c in circuits:
        if seen & c:
            return None
        seen |= c
    rows = []
    for c in sorted(circuits, key=min):
        x = point_with_support(S, c, budget)
        if x is None:
            raise VerificationFailed(f"no point of {S} has support {sorted(c)}")
        rows.append(x)
    if span(S.field, S.n, rows) != S:
        raise VerificationFailed(f"disjoint circuits of {S} do not span it")
    return tuple(rows)


def factor(S: Subspace, budget: Budget | None = None) -> list[tuple[tuple[int, ...], Subspace]]:
    from clutterforge.matroid import components, matroid_of

    out = []
    for comp in components(matroid_of(S, budget)):
        drop = [i for i in range(S.n) if i not in comp]
        out.append((tuple(comp), project(S, drop)))
    return out


def embed(factors: Sequence[tuple[Sequence[int], Subspace]], n: int) -> Subspace:
    """Reassemble factors placed on disjoint coordinate sets of GF(q)^n."""
    if not factors:
        raise DimensionMismatch("no factors to embed")
    f = factors[0][1].field
    rows = []
    for coords, T in factors:
        if T.field != f:
            raise FieldMismatch("factors over different fields")
        if len(coords) != T.n:
            raise DimensionMismatch(f"factor on {len(coords)} coordinates has n={T.n}")
        for row in T.basis:
            full = [0] * n
            for c, v in zip(coords, row):
                full[c] = v
            rows.append(full)
    return span(f, n, rows)


def sunflower_basis(S: Subspace, budget: Budget | None = None) -> SunflowerWitness | None:
    from clutterforge.matroid import components, matroid_of, series_classes

    M = matroid_of(S, budget)
    comps = components(M)
    if len(comps) != 1 or not any(c for c in M.circuits):
        raise NotConnectedComponent(f"matroid of {S} is not a single coloop-free component")

    classes = series_classes(M)
    t = len(classes)
    if t < 3 or S.dimension != t - 1:
        return None
    reps = [c[0] for c in classes]
    core = project(S, [i for i in range(S.n) if i not in reps])
    pairs = {frozenset((i, j)) for i in range(t) for j in range(i + 1, t)}
    if set(minimal_supports(core, budget)) != pairs:
        return None

    f = S.field
    head = classes[0]
    rows = []
    for tail in classes[1:]:
        x = point_with_support(S, frozenset(head) | frozenset(tail), budget)
        if x is None:
            raise VerificationFailed(f"{S}: no point supported on blocks {head} and {tail}")
        rows.append(scale(f, gf.inv(f, x[head[0]]), x))
    heads = {tuple(row[c] for c in head) for row in rows}
    if len(heads) != 1 or span(f, S.n, rows) != S:
        raise VerificationFailed(f"{S}: sunflower reconstruction does not span")

    return SunflowerWitness(
        permutation=tuple(c for cls in classes for c in cls),
        block_sizes=tuple(len(cls) for cls in classes),
        rows=tuple(rows),
        head=heads.pop(),
        tails=tuple(tuple(row[c] for c in tail) for row, tail in zip(rows, classes[1:])),
    )


def scale_to_sum_zero(S: Subspace) -> tuple[FieldElement, ...] | None:
    """
    Diagonal scaling c with S = {(c_1 y_1, ..., c_n y_n) : sum(y) = 0}, or None
    when the matroid of S is not A_n.
    """
    n = S.n
    if n < 2 or S.dimension != n - 1 or S.pivots != tuple(range(n - 1)):
        return None
    last = [row[-1] for row in S.basis]
    if not all(last):
        return None
    f = S.field
    # x_n = sum(s_i x_i) forces c_i = -1 / s_i once c_n = 1
    return tuple(gf.neg(f, gf.inv(f, s)) for s in last) + (1,)
