"""
Clutters over labelled ground sets.

Members are int bitmasks over the positions of `Clutter.ground`; labels are
only consulted at the edges (construction, minor specs, printing). A clutter
built by `mult` labels its elements with GroundElement(part, value).
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Union

from clutterforge.config import Budget, resolve
from clutterforge.errors import (
    BadIndex,
    BudgetExceeded,
    OverlapError,
    TooLarge,
    VerificationFailed,
)
from clutterforge.vspace import (
    Point,
    SetSystem,
    Subspace,
    as_set_system,
)

logger = logging.getLogger(__name__)

BUILTINS = ("Delta3", "Q6", "C5sq", "C5sq_pre")


@dataclass(frozen=True, order=True)
class GroundElement:
    part: int
    value: int

    def __str__(self) -> str:
        return f"{self.part}:{self.value}"


Label = Union[int, str, GroundElement]


@dataclass(frozen=True)
class MinorSpec:
    I: frozenset[Label]
    J: frozenset[Label]

    def __post_init__(self) -> None:
        if self.I & self.J:
            raise OverlapError(
                f"delete and contract sets share {_label_list(self.I & self.J)}"
            )

    @classmethod
    def of(cls, I: Iterable[Label] = (), J: Iterable[Label] = ()) -> MinorSpec:
        return cls(frozenset(I), frozenset(J))

    def __str__(self) -> str:
        return f"I={{{_label_list(self.I)}}} J={{{_label_list(self.J)}}}"


def _label_key(x: Label) -> tuple[int, int, int, str]:
    if isinstance(x, GroundElement):
        return (0, x.part, x.value, "")
    if isinstance(x, int):
        return (1, x, 0, "")
    return (2, 0, 0, x)


def sort_labels(labels: Iterable[Label]) -> list[Label]:
    return sorted(labels, key=_label_key)


def _label_list(labels: Iterable[Label]) -> str:
    return ",".join(str(x) for x in sort_labels(labels))


def _bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _member_key(m: int) -> list[int]:
    return _bits(m)


def _minimal(masks: Iterable[int]) -> list[int]:
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda m: (_popcount(m), m)):
        if not any(k & m == k for k in kept):
            kept.append(m)
    return sorted(kept, key=_member_key)


@dataclass(frozen=True)
class Clutter:
    ground: tuple[Label, ...]
    members: tuple[int, ...]

    @classmethod
    def from_masks(
        cls,
        ground: Iterable[Label],
        masks: Iterable[int],
        budget: Budget | None = None,
    ) -> Clutter:
        labels = tuple(ground)
        cap = resolve(budget).max_ground
        if len(labels) > cap:
            raise TooLarge("clutter ground set", len(labels), cap)
        if len(set(labels)) != len(labels):
            raise ValueError("ground labels are not distinct")
        full = (1 << len(labels)) - 1
        members = list(masks)
        if any(m & ~full for m in members):
            raise BadIndex("member mask reaches past the ground set")
        return cls(labels, tuple(_minimal(members)))

    @classmethod
    def from_sets(
        cls,
        ground: Iterable[Label],
        members: Iterable[Iterable[Label]],
        budget: Budget | None = None,
    ) -> Clutter:
        labels = tuple(ground)
        index = {x: i for i, x in enumerate(labels)}
        masks = []
        for member in members:
            m = 0
            for x in member:
                if x not in index:
                    raise BadIndex(f"member element {x} is not in the ground set")
                m |= 1 << index[x]
            masks.append(m)
        return cls.from_masks(labels, masks, budget)

    @property
    def index(self) -> dict[Label, int]:
        return {x: i for i, x in enumerate(self.ground)}

    def mask_of(self, labels: Iterable[Label]) -> int:
        index = self.index
        m = 0
        for x in labels:
            if x not in index:
                raise BadIndex(f"{x} is not in the ground set")
            m |= 1 << index[x]
        return m

    def labels_of(self, mask: int) -> tuple[Label, ...]:
        return tuple(self.ground[i] for i in _bits(mask))

    def member_sets(self) -> list[tuple[Label, ...]]:
        return [self.labels_of(m) for m in self.members]

    def family(self) -> frozenset[frozenset[Label]]:
        """Members as label sets, independent of ground order."""
        return frozenset(frozenset(self.labels_of(m)) for m in self.members)

    @property
    def parts(self) -> dict[int, list[Label]]:
        out: dict[int, list[Label]] = {}
        for x in self.ground:
            if isinstance(x, GroundElement):
                out.setdefault(x.part, []).append(x)
        return out

    def __len__(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        elements = " ".join(str(x) for x in self.ground)
        rows = "\n".join(" ".join(str(x) for x in s) for s in self.member_sets())
        return f"elements: {elements}\n{rows}".rstrip("\n")


def mult(S: Subspace | SetSystem, budget: Budget | None = None) -> Clutter:
    caps = resolve(budget)
    if isinstance(S, Subspace) and S.size > caps.max_mult_points:
        raise TooLarge("mult(S) members", S.size, caps.max_mult_points)
    system = as_set_system(S, caps)
    if len(system.points) > caps.max_mult_points:
        raise TooLarge("mult(S) members", len(system.points), caps.max_mult_points)
    ground = [
        GroundElement(coord, v)
        for coord, box in zip(system.coords, system.boxes)
        for v in box
    ]
    if len(ground) > caps.max_ground:
        raise TooLarge("mult(S) ground set", len(ground), caps.max_ground)

    offsets = []
    position = 0
    for box in system.boxes:
        offsets.append({v: position + j for j, v in enumerate(box)})
        position += len(box)
    masks = set()
    for x in system.points:
        m = 0
        for where, v in zip(offsets, x):
            m |= 1 << where[v]
        masks.add(m)
    # distinct transversals of equal size already form an antichain
    return Clutter(tuple(ground), tuple(sorted(masks, key=_member_key)))


def _split(C: Clutter, spec: MinorSpec) -> tuple[int, int]:
    index = C.index
    missing = [x for x in spec.I | spec.J if x not in index]
    if missing:
        raise BadIndex(f"minor sets mention {_label_list(missing)}, not in the ground set")
    return C.mask_of(spec.I), C.mask_of(spec.J)


def minor(C: Clutter, spec: MinorSpec) -> Clutter:
    """C \\ I / J: the minimal sets of {m - J : m in C, m disjoint from I}."""
    dele, con = _split(C, spec)
    keep = [i for i in range(len(C.ground)) if not (dele | con) >> i & 1]
    shift = {old: new for new, old in enumerate(keep)}
    traces = set()
    for m in C.members:
        if m & dele:
            continue
        t = 0
        for b in _bits(m & ~con):
            t |= 1 << shift[b]
        traces.add(t)
    return Clutter(tuple(C.ground[i] for i in keep), tuple(_minimal(traces)))


def compose(chain: Sequence[MinorSpec]) -> MinorSpec:
    I: set[Label] = set()
    J: set[Label] = set()
    for spec in chain:
        I |= spec.I
        J |= spec.J
    return MinorSpec.of(I, J)


def replay(C: Clutter, chain: Sequence[MinorSpec]) -> Clutter:
    for spec in chain:
        C = minor(C, spec)
    return C


def relabel(C: Clutter, mapping: Mapping[Label, Label]) -> Clutter:
    ground = tuple(mapping.get(x, x) for x in C.ground)
    if len(set(ground)) != len(ground):
        raise ValueError("relabelling merges two ground elements")
    return Clutter(ground, C.members)


def relabel_spec(spec: MinorSpec, mapping: Mapping[Label, Label]) -> MinorSpec:
    return MinorSpec.of(
        (mapping.get(x, x) for x in spec.I), (mapping.get(x, x) for x in spec.J)
    )


def _shift_label(x: Label, by: int) -> Label:
    if isinstance(x, GroundElement):
        return GroundElement(x.part + by, x.value)
    if isinstance(x, int):
        return x + by
    return f"{x}'"


def product(C1: Clutter, C2: Clutter) -> Clutter:
    """
    {A | B : A in C1, B in C2}. When the ground sets meet, C2 is relabelled:
    parts shift past the last part of C1 and integer labels past the largest
    integer label.
    """
    if set(C1.ground) & set(C2.ground):
        parts = [x.part for x in C1.ground if isinstance(x, GroundElement)]
        ints = [x for x in C1.ground if isinstance(x, int)]
        part_shift = max(parts, default=-1) + 1
        int_shift = max(ints, default=0)
        mapping: dict[Label, Label] = {}
        for x in C2.ground:
            by = part_shift if isinstance(x, GroundElement) else int_shift
            y = _shift_label(x, by)
            while y in C1.ground:
                y = _shift_label(y, by or 1)
            mapping[x] = y
        C2 = relabel(C2, mapping)
        logger.debug("relabelled the second factor of a product")
    n1 = len(C1.ground)
    members = [a | (b << n1) for a in C1.members for b in C2.members]
    return Clutter(C1.ground + C2.ground, tuple(sorted(members, key=_member_key)))


def localization_spec(n: int, v: Point, coords: Sequence[int] | None = None) -> MinorSpec:
    parts = range(n) if coords is None else coords
    return MinorSpec.of(J=(GroundElement(i, x) for i, x in zip(parts, v)))


def localization(S: Subspace, v: Point, budget: Budget | None = None) -> Clutter:
    """local(S, v): contract the element v_i from every part of mult(S)."""
    if len(v) != S.n:
        raise BadIndex(f"point {v} has {len(v)} coordinates, expected {S.n}")
    return minor(mult(S, budget), localization_spec(S.n, v))


def is_multipartite(C: Clutter) -> bool:
    """Every member meets every part exactly once."""
    parts = C.parts
    if not parts or not all(isinstance(x, GroundElement) for x in C.ground):
        return False
    part_masks = [C.mask_of(p) for p in parts.values()]
    return all(_popcount(m & pm) == 1 for m in C.members for pm in part_masks)


def has_pairwise_disjoint_members(C: Clutter) -> bool:
    seen = 0
    for m in C.members:
        if m & seen:
            return False
        seen |= m
    return True


def incidence_matrix(C: Clutter) -> tuple[tuple[int, ...], ...]:
    n = len(C.ground)
    return tuple(tuple(m >> i & 1 for i in range(n)) for m in C.members)


def builtin(name: str) -> Clutter:
    if name == "Delta3":
        return Clutter.from_sets((1, 2, 3), [(1, 2), (2, 3), (3, 1)])
    if name == "Q6":
        return Clutter.from_sets(
            range(1, 7), [(1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]
        )
    if name == "C5sq":
        return Clutter.from_sets(
            range(1, 6), [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]
        )
    if name == "C5sq_pre":
        # columns: b1, b2+s, b3, b1+s, b3'+s, b2', b2'+s of a localization;
        # contracting 6 and 7 leaves C5sq
        return Clutter.from_sets(
            range(1, 8), [(1, 2), (2, 3), (3, 4), (4, 5, 7), (1, 5, 6)]
        )
    raise ValueError(f"unknown clutter {name!r}; expected one of {', '.join(BUILTINS)}")


def _signatures(C: Clutter) -> list[tuple[int, tuple[int, ...]]]:
    sizes = [_popcount(m) for m in C.members]
    out = []
    for i in range(len(C.ground)):
        inside = sorted(s for m, s in zip(C.members, sizes) if m >> i & 1)
        out.append((len(inside), tuple(inside)))
    return out


def is_isomorphic(
    C1: Clutter, C2: Clutter, budget: Budget | None = None
) -> dict[Label, Label] | None:
    """
    A bijection of ground sets mapping the members of C1 onto those of C2, by
    backtracking over elements with matching (degree, member sizes).
    """
    n = len(C1.ground)
    if n != len(C2.ground) or len(C1.members) != len(C2.members):
        return None
    cap = resolve(budget).max_iso_ground
    if n > cap:
        raise TooLarge("isomorphism search", n, cap)
    if sorted(map(_popcount, C1.members)) != sorted(map(_popcount, C2.members)):
        return None
    sig1, sig2 = _signatures(C1), _signatures(C2)
    if sorted(sig1) != sorted(sig2):
        return None

    # members complete early when their elements are assigned together
    order: list[int] = []
    for m in sorted(C1.members, key=lambda m: (-_popcount(m), _bits(m))):
        order.extend(b for b in _bits(m) if b not in order)
    order.extend(i for i in range(n) if i not in order)
    step_of = {e: t for t, e in enumerate(order)}
    closing: list[list[int]] = [[] for _ in range(n)]
    for m in C1.members:
        last = max((step_of[b] for b in _bits(m)), default=-1)
        if last >= 0:
            closing[last].append(m)
    targets = set(C2.members)
    image = [-1] * n
    used = [False] * n

    def assign(t: int) -> bool:
        if t == n:
            return True
        e = order[t]
        for cand in range(n):
            if used[cand] or sig2[cand] != sig1[e]:
                continue
            image[e] = cand
            used[cand] = True
            ok = True
            for m in closing[t]:
                mapped = 0
                for b in _bits(m):
                    mapped |= 1 << image[b]
                if mapped not in targets:
                    ok = False
                    break
            if ok and assign(t + 1):
                return True
            used[cand] = False
        image[e] = -1
        return False

    if 0 in C1.members and 0 not in targets:
        return None
    if not assign(0):
        return None
    return {C1.ground[i]: C2.ground[image[i]] for i in range(n)}


def _placements(T: Clutter) -> list[tuple[frozenset[int], tuple[int, ...]]]:
    """Distinct images of T's members under permutations of its ground."""
    k = len(T.ground)
    seen: dict[frozenset[int], tuple[int, ...]] = {}
    for perm in permutations(range(k)):
        family = frozenset(
            sum(1 << perm[b] for b in _bits(m)) for m in T.members
        )
        seen.setdefault(family, perm)
    return list(seen.items())


class _Work:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.spent = 0

    def charge(self, amount: int) -> None:
        self.spent += amount
        if self.spent > self.limit:
            raise BudgetExceeded("minor search", self.limit)


def _choose_contraction(
    outside: list[int],
    local: list[int],
    family: frozenset[int],
    work: _Work,
) -> int | None:
    """
    A contract set J such that every placed member is the trace of a member
    living in K + J, and no member living in K + J has a trace missing all of
    them.
    """
    good: dict[int, set[int]] = {p: set() for p in family}
    deficient: set[int] = set()
    for out, t in zip(outside, local):
        if t in good:
            good[t].add(out)
        if not any(p & t == p for p in family):
            deficient.add(out)
    if 0 in deficient:
        return None
    bad = _minimal(deficient)
    options = {p: sorted(g, key=_popcount) for p, g in good.items()}
    todo = sorted(family, key=lambda p: len(options[p]))

    def extend(pos: int, J: int) -> int | None:
        work.charge(1)
        if pos == len(todo):
            return J
        choices = options[todo[pos]]
        if any(g & J == g for g in choices):
            return extend(pos + 1, J)
        for g in choices:
            trial = J | g
            if any(d & trial == d for d in bad):
                continue
            found = extend(pos + 1, trial)
            if found is not None:
                return found
        return None

    return extend(0, 0)


def find_minor(
    C: Clutter,
    target: str | Clutter,
    budget: Budget | None = None,
) -> tuple[MinorSpec, dict[Label, Label]] | None:
    """
    Search for (I, J) with C \\ I / J isomorphic to the target.

    For a kept set K the minor is the minimal traces m & K over the members
    with m - K inside J. Each placement of the target on K asks that every
    placed member occurs as such a trace and that no trace misses all of
    them; J is grown from witness members, and I is everything else.
    Absence is exhaustive; running out of work raises BudgetExceeded.
    """
    T = builtin(target) if isinstance(target, str) else target
    n, k = len(C.ground), len(T.ground)
    if k > n or len(T.members) > len(C.members):
        return None
    caps = resolve(budget)
    placements = _placements(T)
    estimate = comb(n, k) * (len(C.members) + len(placements))
    if estimate > caps.minor_search_work:
        raise BudgetExceeded(
            f"minor search for a {k}-element target in {n} elements",
            caps.minor_search_work,
        )
    work = _Work(caps.minor_search_work)
    full = (1 << n) - 1
    wanted = {family: perm for family, perm in placements}

    for kept in combinations(range(n), k):
        work.charge(len(C.members) + len(placements))
        kmask = 0
        for e in kept:
            kmask |= 1 << e
        rest = full & ~kmask
        local = []
        for m in C.members:
            t = 0
            for j, e in enumerate(kept):
                if m >> e & 1:
                    t |= 1 << j
            local.append(t)
        traces = set(local)
        outside = [m & rest for m in C.members]
        for family, perm in wanted.items():
            if not family <= traces:
                continue
            J = _choose_contraction(outside, local, family, work)
            if J is None:
                continue
            spec = MinorSpec.of(C.labels_of(rest & ~J), C.labels_of(J))
            bijection = {C.ground[kept[perm[j]]]: T.ground[j] for j in range(k)}
            _check_minor(C, T, spec, bijection)
            logger.debug("found minor %s after %d steps", spec, work.spent)
            return spec, bijection
    logger.debug("no minor after %d steps", work.spent)
    return None


def _check_minor(
    C: Clutter, T: Clutter, spec: MinorSpec, bijection: Mapping[Label, Label]
) -> None:
    N = relabel(minor(C, spec), bijection)
    if N.family() != T.family() or set(N.ground) != set(T.ground):
        raise VerificationFailed(f"minor {spec} does not replay to the target")


def check_minor_chain(
    C: Clutter,
    chain: Sequence[MinorSpec],
    target: str | Clutter,
    bijection: Mapping[Label, Label] | None = None,
    budget: Budget | None = None,
) -> dict[Label, Label]:
    """
    Replay a chain and confirm the result is the target, returning the
    isomorphism used. Raises VerificationFailed otherwise.
    """
    T = builtin(target) if isinstance(target, str) else target
    N = replay(C, chain)
    if bijection is not None:
        _check_minor(N, T, MinorSpec.of(), bijection)
        return dict(bijection)
    found = is_isomorphic(N, T, budget)
    if found is None:
        raise VerificationFailed(f"chain {' ; '.join(map(str, chain))} does not reach the target")
    return found
