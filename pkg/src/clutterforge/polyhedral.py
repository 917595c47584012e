"""
Exact polyhedral computations on Q(C) = {x >= 0 : M(C) x >= 1}.

All arithmetic is on ints and Fractions. Weight vectors may carry math.inf
where an operation allows it.
"""

from __future__ import annotations

import logging
import math
import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Union

from clutterforge.clutter import Clutter, Label, MinorSpec, compose, minor
from clutterforge.config import Budget, resolve
from clutterforge.errors import (
    BudgetExceeded,
    PreconditionViolated,
    TooLarge,
    VerificationFailed,
)

logger = logging.getLogger(__name__)

Weight = Union[int, float]


@dataclass(frozen=True)
class Integral:
    extreme_points: int

    def __str__(self) -> str:
        return f"ideal ({self.extreme_points} extreme points, all integral)"


@dataclass(frozen=True)
class FractionalPoint:
    point: tuple[Fraction, ...]
    tight_members: tuple[int, ...]
    tight_bounds: tuple[int, ...]

    def __str__(self) -> str:
        return "fractional extreme point (" + ", ".join(map(str, self.point)) + ")"


IdealnessCertificate = Union[Integral, FractionalPoint]


@dataclass(frozen=True)
class FractionalOptimum:
    """tau* with a primal extreme point and a packing of the same value."""

    value: Fraction
    point: tuple[Fraction, ...]
    packing: tuple[Fraction, ...]


@dataclass(frozen=True)
class MfmcViolation:
    w: tuple[int, ...]
    tau: Weight
    nu: Weight

    def __str__(self) -> str:
        return f"w=({','.join(map(str, self.w))}) tau={self.tau} nu={self.nu}"


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def _popcount(m: int) -> int:
    return bin(m).count("1")


def rank(rows: Iterable[Sequence[Fraction | int]]) -> int:
    m = [[Fraction(v) for v in r] for r in rows]
    if not m:
        return 0
    width = len(m[0])
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, len(m)):
            if m[i][col]:
                factor = m[i][col] / m[r][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def _row(m: int, n: int) -> list[int]:
    return [m >> i & 1 for i in range(n)]


def _tight_sets(C: Clutter, x: Sequence[Fraction]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    members = tuple(j for j, m in enumerate(C.members) if sum(x[i] for i in _bits(m)) == 1)
    bounds = tuple(i for i, v in enumerate(x) if v == 0)
    return members, bounds


def _is_extreme(C: Clutter, x: Sequence[Fraction]) -> bool:
    n = len(C.ground)
    members, bounds = _tight_sets(C, x)
    rows = [_row(C.members[j], n) for j in members]
    rows += [[1 if k == i else 0 for k in range(n)] for i in bounds]
    return rank(rows) == n


def _feasible(C: Clutter, x: Sequence[Fraction]) -> bool:
    return all(v >= 0 for v in x) and all(
        sum(x[i] for i in _bits(m)) >= 1 for m in C.members
    )


def _adjacent(common: int, rays: list[tuple[tuple[int, ...], int]], skip: tuple[int, int]) -> bool:
    for k, (_, tight) in enumerate(rays):
        if k not in skip and tight & common == common:
            return False
    return True


@lru_cache(maxsize=256)
def _vertices(C: Clutter) -> tuple[tuple[Fraction, ...], ...]:
    n = len(C.ground)
    d = n + 1
    if 0 in C.members:
        return ()
    # homogenized cone in (x, t); constraints 0..n are the bounds x_i >= 0, t >= 0
    rays: list[tuple[tuple[int, ...], int]] = []
    everything = (1 << d) - 1
    for i in range(d):
        rays.append((tuple(1 if k == i else 0 for k in range(d)), everything & ~(1 << i)))

    for j, m in enumerate(C.members):
        bit = 1 << (d + j)
        support = _bits(m)

        def value(r: tuple[int, ...]) -> int:
            return sum(r[i] for i in support) - r[n]

        values = [value(r) for r, _ in rays]
        nxt = [(r, tight) for (r, tight), v in zip(rays, values) if v > 0]
        nxt += [(r, tight | bit) for (r, tight), v in zip(rays, values) if v == 0]
        pos = [k for k, v in enumerate(values) if v > 0]
        neg = [k for k, v in enumerate(values) if v < 0]
        for a in pos:
            for b in neg:
                common = rays[a][1] & rays[b][1]
                if _popcount(common) < d - 2 or not _adjacent(common, rays, (a, b)):
                    continue
                va, vb = values[a], values[b]
                combo = [va * y - vb * x for x, y in zip(rays[a][0], rays[b][0])]
                g = math.gcd(*combo)
                nxt.append((tuple(c // g for c in combo), common | bit))
        rays = nxt
        logger.debug("member %d of %d: %d rays", j + 1, len(C.members), len(rays))

    points = {
        tuple(Fraction(r[i], r[n]) for i in range(n)) for r, _ in rays if r[n] > 0
    }
    return tuple(sorted(points))


def extreme_points(C: Clutter, budget: Budget | None = None) -> list[tuple[Fraction, ...]]:
    """
    Extreme points of Q(C) by the double description method on the cone
    {(x, t) >= 0 : M(C) x >= t 1}; every point is re-checked for feasibility
    and for a full-rank tight system.
    """
    cap = resolve(budget).max_polyhedral_ground
    if len(C.ground) > cap:
        raise TooLarge("extreme point enumeration", len(C.ground), cap)
    points = list(_vertices(C))
    for x in points:
        if not _feasible(C, x) or not _is_extreme(C, x):
            raise VerificationFailed(f"computed vertex {x} is not an extreme point of Q(C)")
    return points


def is_ideal(C: Clutter, budget: Budget | None = None) -> IdealnessCertificate:
    points = extreme_points(C, budget)
    for x in points:
        if any(v.denominator != 1 for v in x):
            members, bounds = _tight_sets(C, x)
            return FractionalPoint(x, members, bounds)
    return Integral(len(points))


def check_fractional_point(
    C: Clutter,
    point: Sequence[Fraction],
    tight_members: Iterable[int],
    tight_bounds: Iterable[int],
) -> None:
    """Re-validate a fractional extreme point of Q(C) from scratch."""
    n = len(C.ground)
    x = [Fraction(v) for v in point]
    if len(x) != n:
        raise VerificationFailed(f"point has {len(x)} coordinates, ground has {n}")
    if not _feasible(C, x):
        raise VerificationFailed("point is not in Q(C)")
    if all(v.denominator == 1 for v in x):
        raise VerificationFailed("point is integral")
    rows = []
    for j in tight_members:
        if not 0 <= j < len(C.members) or sum(x[i] for i in _bits(C.members[j])) != 1:
            raise VerificationFailed(f"member {j} is not tight")
        rows.append(_row(C.members[j], n))
    for i in tight_bounds:
        if not 0 <= i < n or x[i] != 0:
            raise VerificationFailed(f"bound {i} is not tight")
        rows.append([1 if k == i else 0 for k in range(n)])
    if rank(rows) != n:
        raise VerificationFailed("tight constraints do not pin down the point")


def fractional_point(C: Clutter, point: Sequence[Fraction]) -> FractionalPoint:
    """Wrap a point of Q(C) with its tight constraints, checking it is a fractional vertex."""
    x = tuple(Fraction(v) for v in point)
    members, bounds = _tight_sets(C, x) if len(x) == len(C.ground) else ((), ())
    check_fractional_point(C, x, members, bounds)
    return FractionalPoint(x, members, bounds)


def _contracted(C: Clutter, w: Sequence[Weight]) -> list[int] | None:
    """Members with the infinite-weight elements removed; None if one empties."""
    never = 0
    for i, v in enumerate(w):
        if v == math.inf:
            never |= 1 << i
    members = [m & ~never for m in C.members]
    if any(m == 0 for m in members):
        return None
    kept: list[int] = []
    for m in sorted(set(members), key=_popcount):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return kept


def _check_weights(C: Clutter, w: Sequence[Weight]) -> None:
    if len(w) != len(C.ground):
        raise ValueError(f"{len(w)} weights for a ground set of {len(C.ground)}")
    if any(v < 0 for v in w):
        raise ValueError("weights must be nonnegative")


def tau(C: Clutter, w: Sequence[Weight]) -> Weight:
    """
    Minimum weight of a cover. An element of infinite weight is never chosen,
    which contracts it; math.inf means no cover exists.
    """
    _check_weights(C, w)
    members = _contracted(C, w)
    if members is None:
        return math.inf
    free = 0
    for i, v in enumerate(w):
        if v == 0:
            free |= 1 << i
    members = [m for m in members if not m & free]
    if not members:
        return 0

    weight = [int(v) if v != math.inf else 0 for v in w]
    # one cheapest element per member is a cover
    best = sum(min(weight[i] for i in _bits(m)) for m in members) + 1

    def lower_bound(uncovered: list[int], banned: int) -> int:
        used = 0
        total = 0
        for m in sorted(uncovered, key=_popcount):
            allowed = m & ~banned
            if allowed & used:
                continue
            used |= allowed
            total += min(weight[i] for i in _bits(allowed))
        return total

    def search(chosen: int, banned: int, cost: int) -> None:
        nonlocal best
        uncovered = [m for m in members if not m & chosen]
        if not uncovered:
            best = min(best, cost)
            return
        if any(not m & ~banned for m in uncovered):
            return
        if cost + lower_bound(uncovered, banned) >= best:
            return
        pivot = min(uncovered, key=lambda m: _popcount(m & ~banned))
        for i in sorted(_bits(pivot & ~banned), key=lambda i: weight[i]):
            search(chosen | 1 << i, banned, cost + weight[i])
            banned |= 1 << i

    search(0, 0, 0)
    return best


def nu(C: Clutter, w: Sequence[Weight], stop_at: Weight | None = None) -> Weight:
    """
    Maximum packing: the most members (with repetition) such that element v
    lies in at most w_v of them. Stops early once `stop_at` is reached.
    """
    _check_weights(C, w)
    if any(v == math.inf for v in w):
        raise ValueError("nu needs finite weights")
    if 0 in C.members:
        return math.inf
    members = list(C.members)
    residual = [int(v) for v in w]
    best = 0
    target = math.inf if stop_at is None else stop_at

    def upper_bound(start: int) -> int:
        # any cover of the remaining members bounds what they can still pack
        covered = 0
        total = 0
        for m in members[start:]:
            if m & covered:
                continue
            i = min(_bits(m), key=lambda i: residual[i])
            covered |= 1 << i
            total += residual[i]
        return total

    def search(start: int, count: int) -> bool:
        nonlocal best
        best = max(best, count)
        if best >= target:
            return True
        if start == len(members) or count + upper_bound(start) <= best:
            return False
        m = members[start]
        elements = _bits(m)
        most = min(residual[i] for i in elements)
        for y in range(most, -1, -1):
            for i in elements:
                residual[i] -= y
            done = search(start + 1, count + y)
            for i in elements:
                residual[i] += y
            if done:
                return True
        return False

    search(0, 0)
    return best


def packs(C: Clutter) -> bool:
    ones = [1] * len(C.ground)
    t = tau(C, ones)
    return nu(C, ones, stop_at=t) == t


def nu_star(
    C: Clutter, w: Sequence[Weight]
) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """
    max 1.y subject to M(C)^T y <= w, y >= 0, by a Fraction simplex with
    Bland's rule. Returns the value, the packing y and the covering x read
    off the final objective row.
    """
    _check_weights(C, w)
    if any(v == math.inf for v in w):
        raise ValueError("nu_star needs finite weights")
    if 0 in C.members:
        raise PreconditionViolated("C has an empty member; the packing LP is unbounded")
    n, r = len(C.ground), len(C.members)
    width = r + n
    tableau = []
    for v in range(n):
        row = [Fraction(C.members[j] >> v & 1) for j in range(r)]
        row += [Fraction(1 if k == v else 0) for k in range(n)]
        tableau.append(row)
    rhs = [Fraction(v) for v in w]
    basis = [r + v for v in range(n)]
    obj = [Fraction(1)] * r + [Fraction(0)] * n
    value = Fraction(0)

    while True:
        entering = next((j for j in range(width) if obj[j] > 0), None)
        if entering is None:
            break
        ratios = [
            (rhs[i] / tableau[i][entering], basis[i], i)
            for i in range(n)
            if tableau[i][entering] > 0
        ]
        if not ratios:
            raise VerificationFailed("packing LP reported unbounded")
        _, _, p = min(ratios)
        lead = tableau[p][entering]
        tableau[p] = [a / lead for a in tableau[p]]
        rhs[p] /= lead
        for i in range(n):
            c = tableau[i][entering]
            if i != p and c:
                tableau[i] = [a - c * b for a, b in zip(tableau[i], tableau[p])]
                rhs[i] -= c * rhs[p]
        c = obj[entering]
        obj = [a - c * b for a, b in zip(obj, tableau[p])]
        value += c * rhs[p]
        basis[p] = entering

    y = [Fraction(0)] * r
    for i, b in enumerate(basis):
        if b < r:
            y[b] = rhs[i]
    x = tuple(-obj[r + v] for v in range(n))
    return value, tuple(y), x


def tau_star(
    C: Clutter, w: Sequence[Weight], budget: Budget | None = None
) -> FractionalOptimum:
    """
    min w.x over Q(C), taken over the extreme points and matched against the
    packing LP.
    """
    _check_weights(C, w)
    if any(v == math.inf for v in w):
        raise ValueError("tau_star needs finite weights")
    points = extreme_points(C, budget)
    if not points:
        raise PreconditionViolated("Q(C) is empty")
    weights = [Fraction(v) for v in w]
    best = min(points, key=lambda x: (sum(a * b for a, b in zip(weights, x)), x))
    value = sum((a * b for a, b in zip(weights, best)), Fraction(0))
    packed, y, _ = nu_star(C, w)
    if packed != value:
        raise VerificationFailed(f"tau* = {value} but nu* = {packed}")
    for v in range(len(C.ground)):
        load = sum((y[j] for j, m in enumerate(C.members) if m >> v & 1), Fraction(0))
        if load > weights[v]:
            raise VerificationFailed(f"packing overloads element {C.ground[v]}")
    return FractionalOptimum(value, best, y)


class _MinorSweep:
    """Breadth-first walk over the distinct minors of one clutter."""

    def __init__(self, budget: Budget | None) -> None:
        self.limit = resolve(budget).packing_sweep_minors
        self.verdicts: dict[tuple[tuple[Label, ...], tuple[int, ...]], bool] = {}

    def first_failure(self, C: Clutter) -> MinorSpec | None:
        queue: deque[tuple[Clutter, list[MinorSpec]]] = deque([(C, [])])
        seen = {(C.ground, C.members)}
        while queue:
            N, chain = queue.popleft()
            if len(seen) > self.limit:
                raise BudgetExceeded("packing property sweep", self.limit)
            key = (N.ground, N.members)
            ok = self.verdicts.get(key)
            if ok is None:
                ok = packs(N)
                self.verdicts[key] = ok
            if not ok:
                return compose(chain)
            if _disjoint(N) or 0 in N.members:
                continue
            for x in N.ground:
                for step in (MinorSpec.of(I=[x]), MinorSpec.of(J=[x])):
                    child = minor(N, step)
                    if (child.ground, child.members) not in seen:
                        seen.add((child.ground, child.members))
                        queue.append((child, chain + [step]))
        return None


def _disjoint(C: Clutter) -> bool:
    seen = 0
    for m in C.members:
        if m & seen:
            return False
        seen |= m
    return True


def has_packing_property(C: Clutter, budget: Budget | None = None) -> MinorSpec | None:
    """A minor that does not pack, or None when every minor packs."""
    return _MinorSweep(budget).first_failure(C)


def minimally_non_packing(C: Clutter, budget: Budget | None = None) -> bool:
    if packs(C):
        return False
    sweep = _MinorSweep(budget)
    for x in C.ground:
        for step in (MinorSpec.of(I=[x]), MinorSpec.of(J=[x])):
            if sweep.first_failure(minor(C, step)) is not None:
                return False
    return True


def weights_from_minor(C: Clutter, spec: MinorSpec) -> tuple[int, ...]:
    """0 on I, 1 on the kept elements, the number of kept elements on J."""
    kept = len(C.ground) - len(spec.I) - len(spec.J)
    return tuple(
        0 if x in spec.I else kept if x in spec.J else 1 for x in C.ground
    )


def _violation(C: Clutter, w: Sequence[int]) -> MfmcViolation | None:
    t = tau(C, w)
    p = nu(C, w, stop_at=t)
    if p != t:
        return MfmcViolation(tuple(w), t, p)
    return None


def mfmc_check(
    C: Clutter,
    W: int,
    hints: Iterable[Sequence[int]] = (),
    samples: int | None = None,
    seed: int = 0,
    budget: Budget | None = None,
) -> MfmcViolation | None:
    """
    Look for w in {0..W}^V with tau(C, w) != nu(C, w), trying `hints` first.
    A None result only means no violation below the bound.
    """
    n = len(C.ground)
    for w in hints:
        found = _violation(C, list(w))
        if found is not None:
            logger.debug("MFMC violation from a hint: %s", found)
            return found
    cap = resolve(budget).mfmc_weights
    if samples is None:
        total = (W + 1) ** n
        if total > cap:
            raise BudgetExceeded(f"MFMC sweep over {total} weight vectors", cap)
        candidates: Iterable[Sequence[int]] = cartesian(range(W + 1), repeat=n)
    else:
        if samples > cap:
            raise BudgetExceeded(f"MFMC sampling of {samples} weight vectors", cap)
        rng = random.Random(seed)
        candidates = ([rng.randint(0, W) for _ in range(n)] for _ in range(samples))
    for w in candidates:
        found = _violation(C, w)
        if found is not None:
            logger.debug("MFMC violation: %s", found)
            return found
    return None
