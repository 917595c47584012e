"""
Constructive minor witnesses for mult(S).

Every builder returns a MinorWitness whose chain has been replayed against
mult(S) and matched to its target; a chain that does not replay raises
VerificationFailed.
"""

from __future__ import annotations

import logging
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import product as cartesian

import networkx as nx

from clutterforge import gf
from clutterforge.clutter import (
    Clutter,
    GroundElement,
    Label,
    MinorSpec,
    check_minor_chain,
    localization,
    minor,
    mult,
    relabel,
    relabel_spec,
)
from clutterforge.config import Budget
from clutterforge.errors import (
    PreconditionViolated,
    VerificationFailed,
    WrongField,
    WrongShape,
)
from clutterforge.gf import FieldElement, FieldSpec
from clutterforge.matroid import (
    a3_minor_from_intersection,
    builtin,
    has_minor,
    is_isomorphic,
    matroid_of,
    realize_minor,
)
from clutterforge.vspace import (
    Point,
    Subspace,
    add_points,
    enumerate_points,
    point_with_support,
    scale,
    scale_to_sum_zero,
    span,
    sum_zero_space,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinorWitness:
    target: str
    chain: tuple[MinorSpec, ...]
    bijection: dict[Label, Label]

    def __str__(self) -> str:
        steps = " ; ".join(map(str, self.chain))
        return f"{self.target} minor: {steps}"


def certify(
    C: Clutter, chain: Sequence[MinorSpec], target: str, budget: Budget | None = None
) -> MinorWitness:
    bijection = check_minor_chain(C, chain, target, budget=budget)
    return MinorWitness(target, tuple(chain), bijection)


def _is_power_of_two(f: FieldSpec) -> bool:
    return f.p == 2


def _check_star(a: Point, b: Point, c: Point, i: int, j: int, k: int) -> None:
    if len({a, b, c}) != 3 or len({i, j, k}) != 3:
        raise PreconditionViolated("need three distinct points and three distinct coordinates")
    if not (a[i] == b[i] != c[i] and b[j] == c[j] != a[j] and c[k] == a[k] != b[k]):
        raise PreconditionViolated(
            f"coordinates ({i}, {j}, {k}) do not separate {a}, {b}, {c} as required"
        )


def triple_condition_probe(
    S: Subspace,
    a: Point,
    b: Point,
    c: Point,
    i: int,
    j: int,
    k: int,
    budget: Budget | None = None,
) -> Point | None:
    """
    A point d of S, other than a, b, c, taking values from {a_l, b_l, c_l} in
    every coordinate and agreeing with at least two of c_i, a_j, b_k. When no
    such d exists, mult(S) has a Delta3 minor.
    """
    for x in (a, b, c):
        if x not in S:
            raise PreconditionViolated(f"{x} is not a point of S")
    _check_star(a, b, c, i, j, k)
    boxes = [{a[m], b[m], c[m]} for m in range(S.n)]
    for d in enumerate_points(S, budget):
        if d in (a, b, c) or not all(v in box for v, box in zip(d, boxes)):
            continue
        if (d[i] == c[i]) + (d[j] == a[j]) + (d[k] == b[k]) >= 2:
            return d
    return None


def _box_restriction(
    S: Subspace, a: Point, b: Point, c: Point, keep: Iterable[int]
) -> MinorSpec:
    """Delete the values outside {a_l, b_l, c_l}; contract what is left off `keep`."""
    kept = set(keep)
    I, J = [], []
    for m in range(S.n):
        values = {a[m], b[m], c[m]}
        for v in S.field.elements:
            element = GroundElement(m, v)
            if v not in values:
                I.append(element)
            elif m not in kept:
                J.append(element)
    return MinorSpec.of(I, J)


def delta3_chain_from_triple(
    S: Subspace, a: Point, b: Point, c: Point, i: int, j: int, k: int
) -> list[MinorSpec]:
    _check_star(a, b, c, i, j, k)
    return [
        _box_restriction(S, a, b, c, (i, j, k)),
        MinorSpec.of(J=[GroundElement(i, c[i]), GroundElement(j, a[j]), GroundElement(k, b[k])]),
    ]


def non_disjoint_witness(S: Subspace, budget: Budget | None = None) -> MinorWitness:
    """
    Delta3 or (characteristic 2 only) Q6 for a space with no basis of disjoint
    supports, from two echelon rows that share a non-pivot column.
    """
    f = S.field
    pivots = S.pivots
    pair = None
    for r1 in range(S.dimension):
        for r2 in range(r1 + 1, S.dimension):
            shared = [
                col for col in range(S.n)
                if col not in pivots and S.basis[r1][col] and S.basis[r2][col]
            ]
            if shared:
                pair = (r1, r2, shared[0])
                break
        if pair:
            break
    if pair is None:
        raise PreconditionViolated(f"{S} has a basis of pairwise disjoint supports")
    r1, r2, col = pair
    v1, v2 = S.basis[r1], S.basis[r2]
    a = (0,) * S.n
    b = scale(f, gf.inv(f, v1[col]), v1)
    c = scale(f, gf.inv(f, v2[col]), v2)
    i, j, k = pivots[r2], col, pivots[r1]

    C = mult(S, budget)
    d = triple_condition_probe(S, a, b, c, i, j, k, budget)
    if d is None:
        return certify(C, delta3_chain_from_triple(S, a, b, c, i, j, k), "Delta3", budget)
    if not _is_power_of_two(f):
        raise VerificationFailed(f"{S}: found {d} over odd characteristic")
    logger.debug("triple probe found %s; taking the Q6 projection", d)
    return certify(C, [_box_restriction(S, a, b, c, (i, j, k))], "Q6", budget)


def delta3_witness_u24(S: Subspace, budget: Budget | None = None) -> MinorWitness:
    f = S.field
    if not _is_power_of_two(f):
        raise WrongField(f"the U24 construction needs characteristic 2, not {f}")
    M = matroid_of(S, budget)
    if S.n != 4 or is_isomorphic(M, builtin("U24")) is None:
        raise WrongShape(f"matroid of {S} is not U24")
    (_, _, x, _), (_, _, z, _) = S.basis
    v1, v2 = S.basis
    a = scale(f, gf.neg(f, gf.mul(f, gf.inv(f, x), z)), v1)
    b = v2
    c = add_points(f, a, b)
    chain = delta3_chain_from_triple(S, a, b, c, 2, 1, 0)
    return certify(mult(S, budget), chain, "Delta3", budget)


def delta3_witness_k4e(S: Subspace, budget: Budget | None = None) -> MinorWitness:
    f = S.field
    if not _is_power_of_two(f) or f.q < 4:
        raise WrongField(f"the K4/e construction needs GF(2^k) with k >= 2, not {f}")
    M = matroid_of(S, budget)
    if S.n != 5 or is_isomorphic(M, builtin("MK4e")) is None:
        raise WrongShape(f"matroid of {S} is not M(K4/e)")
    pairs = [sorted(c) for c in M.circuits if len(c) == 2]
    (lone,) = [e for e in range(5) if not any(e in p for p in pairs)]
    # new coordinate -> old; circuits become {0,3,4}, {1,3}, {2,4}
    perm = [lone, pairs[0][1], pairs[1][1], pairs[0][0], pairs[1][0]]
    T = span(f, 5, [tuple(row[perm[m]] for m in range(5)) for row in S.basis])

    def with_support(cols: set[int]) -> Point:
        x = point_with_support(T, frozenset(cols), budget)
        if x is None:
            raise VerificationFailed(f"no point of the permuted space has support {cols}")
        return x

    v1, v2, v3 = with_support({0, 3, 4}), with_support({1, 3}), with_support({2, 4})
    x, y, z = v1[3], v1[4], v2[3]
    if v3[4] == z:
        factor = next(s for s in f.nonzero if gf.mul(f, s, v3[4]) != z)
        v3 = scale(f, factor, v3)
    w = v3[4]
    a_new = scale(f, z, v1)
    b_new = scale(f, w, v1)
    c_new = add_points(f, scale(f, x, v2), scale(f, y, v3))

    def back(p: Point) -> Point:
        out = [0] * 5
        for m in range(5):
            out[perm[m]] = p[m]
        return tuple(out)

    a, b, c = back(a_new), back(b_new), back(c_new)
    chain = delta3_chain_from_triple(S, a, b, c, perm[2], perm[4], perm[3])
    return certify(mult(S, budget), chain, "Delta3", budget)


def subspace_minor_chain(
    S: Subspace,
    I: Iterable[int],
    J: Iterable[int],
    budget: Budget | None = None,
) -> tuple[Subspace, MinorSpec, dict[Label, Label]]:
    """
    The subspace S' with Matroid(S') = Matroid(S) \\ I / J, the minor taking
    mult(S) to mult(S'), and the map from mult(S') labels to mult(S) labels.
    """
    dele, con = frozenset(I), frozenset(J)
    S2 = realize_minor(S, dele, con)
    elements = S.field.elements
    spec = MinorSpec.of(
        [GroundElement(i, v) for i in dele for v in elements if v],
        [GroundElement(i, 0) for i in dele] + [GroundElement(j, v) for j in con for v in elements],
    )
    kept = [m for m in range(S.n) if m not in dele | con]
    mapping: dict[Label, Label] = {
        GroundElement(new, v): GroundElement(old, v)
        for new, old in enumerate(kept)
        for v in elements
    }
    got = minor(mult(S, budget), spec)
    want = relabel(mult(S2, budget), mapping)
    if got.family() != want.family():
        raise VerificationFailed(f"mult of the matroid minor I={sorted(dele)} J={sorted(con)} "
                                 "does not match the clutter minor")
    return S2, spec, mapping


def _lift(
    S: Subspace,
    I: Iterable[int],
    J: Iterable[int],
    inner: MinorWitness,
    budget: Budget | None,
) -> MinorWitness:
    _, spec, mapping = subspace_minor_chain(S, I, J, budget)
    chain = [spec] + [relabel_spec(s, mapping) for s in inner.chain]
    return certify(mult(S, budget), chain, inner.target, budget)


def structural_delta3_witness(
    S: Subspace, budget: Budget | None = None
) -> MinorWitness | None:
    """
    Delta3 through a U24 or M(K4/e) minor of Matroid(S), or None when the
    matroid has neither.
    """
    f = S.field
    if not _is_power_of_two(f) or f.q < 4:
        raise WrongField(f"needs GF(2^k) with k >= 2, not {f}")
    M = matroid_of(S, budget)
    for name, build in (("U24", delta3_witness_u24), ("MK4e", delta3_witness_k4e)):
        found = has_minor(M, name, budget)
        if found is None:
            continue
        I, J = found
        S2 = realize_minor(S, I, J)
        logger.debug("%s minor of Matroid(S): I=%s J=%s", name, sorted(I), sorted(J))
        return _lift(S, I, J, build(S2, budget), budget)
    return None


def _choose(
    f: FieldSpec, banned: set[FieldElement], rng: random.Random | None
) -> FieldElement:
    options = [v for v in f.elements if v not in banned]
    return rng.choice(options) if rng else options[0]


def c5sq_witness(
    S: Subspace,
    alpha: Point | None = None,
    seed: int | None = None,
    budget: Budget | None = None,
) -> MinorWitness:
    """
    C5sq in mult(S) for an A3 space over GF(2^k), k >= 3, built inside the
    localization at alpha. Free choices are the smallest valid values unless
    a seed is given.
    """
    f = S.field
    if not _is_power_of_two(f) or f.q <= 4:
        raise WrongField(f"the C5sq construction needs GF(2^k) with k >= 3, not {f}")
    scaling = scale_to_sum_zero(S) if S.n == 3 else None
    if scaling is None:
        raise WrongShape(f"matroid of {S} is not A3")
    rng = random.Random(seed) if seed is not None else None
    T = sum_zero_space(f, 3)

    def add(*xs: FieldElement) -> FieldElement:
        out = 0
        for x in xs:
            out = gf.add(f, out, x)
        return out

    if alpha is None:
        outside = [x for x in cartesian(f.elements, repeat=3) if x not in T]
        al = rng.choice(sorted(outside)) if rng else min(outside)
    else:
        if len(alpha) != 3:
            raise PreconditionViolated(f"alpha {alpha} needs 3 coordinates")
        al = tuple(gf.div(f, v, s) for v, s in zip(alpha, scaling))
        if al in T:
            raise PreconditionViolated(f"alpha {alpha} lies in S")
    sigma = add(*al)
    a = _choose(f, {al[0], add(al[0], sigma)}, rng)
    b = _choose(f, {al[0], add(al[0], sigma), a, add(a, sigma)}, rng)

    kept = [
        GroundElement(0, a),
        GroundElement(0, add(a, sigma)),
        GroundElement(1, add(a, al[0], al[1], sigma)),
        GroundElement(1, add(b, al[0], al[1])),
        GroundElement(1, add(b, al[0], al[1], sigma)),
        GroundElement(2, add(a, al[0], al[2])),
        GroundElement(2, add(a, b, al[2], sigma)),
    ]
    point = [GroundElement(i, al[i]) for i in range(3)]
    rest = [
        GroundElement(i, v)
        for i in range(3)
        for v in f.elements
        if GroundElement(i, v) not in kept and v != al[i]
    ]
    chain_T = [
        MinorSpec.of(J=point),
        MinorSpec.of(I=rest),
        MinorSpec.of(J=kept[3:5]),
    ]
    mapping: dict[Label, Label] = {
        GroundElement(i, v): GroundElement(i, gf.mul(f, scaling[i], v))
        for i in range(3)
        for v in f.elements
    }
    chain = [relabel_spec(s, mapping) for s in chain_T]
    C = mult(S, budget)
    check_minor_chain(C, chain[:2], "C5sq_pre", budget=budget)
    logger.debug("C5sq construction at alpha=%s with a=%s b=%s", al, a, b)
    return certify(C, chain, "C5sq", budget)


def c5sq_chain(S: Subspace, budget: Budget | None = None) -> MinorWitness:
    """C5sq in mult(S) from an A3 minor of Matroid(S), over GF(2^k), k >= 3."""
    f = S.field
    if not _is_power_of_two(f) or f.q <= 4:
        raise WrongField(f"the C5sq construction needs GF(2^k) with k >= 3, not {f}")
    M = matroid_of(S, budget)
    I, J = a3_minor_from_intersection(M, budget)
    S2 = realize_minor(S, I, J)
    return _lift(S, I, J, c5sq_witness(S2, budget=budget), budget)


@dataclass(frozen=True)
class LocalizationProfile:
    """
    Small members of local(T, alpha) for T = {sum(x) = 0}, the space S is
    scaled to. `components` holds one edge set per component of the graph of
    2-element members.
    """

    scaling: tuple[FieldElement, ...]
    alpha: Point
    sigma: FieldElement
    singletons: tuple[GroundElement, ...]
    components: tuple[frozenset[frozenset[GroundElement]], ...]
    larger: tuple[tuple[Label, ...], ...]


def localization_profile(
    S: Subspace, alpha: Point, budget: Budget | None = None
) -> LocalizationProfile:
    f = S.field
    if not _is_power_of_two(f):
        raise PreconditionViolated(f"localization profiles need characteristic 2, not {f}")
    scaling = scale_to_sum_zero(S)
    if scaling is None:
        raise PreconditionViolated(f"matroid of {S} is not A_{S.n}")
    n = S.n
    al = tuple(gf.div(f, v, s) for v, s in zip(alpha, scaling))
    T = sum_zero_space(f, n)
    sigma = 0
    for v in al:
        sigma = gf.add(f, sigma, v)
    if sigma == 0:
        raise PreconditionViolated(f"alpha {alpha} lies in S")

    L = localization(T, al, budget)
    sets = [frozenset(s) for s in L.member_sets()]
    singletons = sorted(x for s in sets if len(s) == 1 for x in s if isinstance(x, GroundElement))
    expected = sorted(GroundElement(i, gf.add(f, al[i], sigma)) for i in range(n))
    if singletons != expected:
        raise VerificationFailed(f"size-1 members {singletons} differ from {expected}")

    G = nx.Graph()
    for s in sets:
        if len(s) == 2:
            G.add_edge(*sorted(s, key=str))
    components = []
    for nodes in sorted(nx.connected_components(G), key=lambda c: min(map(str, c))):
        first = sorted(x for x in nodes if x.part == 0)
        if len(first) != 2:
            raise VerificationFailed(f"component {sorted(map(str, nodes))} has {len(first)} "
                                     "vertices in the first part")
        beta = [gf.add(f, first[0].value, gf.add(f, al[0], al[i])) for i in range(n)]
        want = {
            frozenset({GroundElement(i, beta[i]), GroundElement(m, gf.add(f, beta[m], sigma))})
            for i in range(n)
            for m in range(n)
            if i != m
        }
        got = {frozenset(e) for e in G.subgraph(nodes).edges()}
        if got != want:
            raise VerificationFailed(
                "a component is not complete bipartite minus a perfect matching"
            )
        components.append(frozenset(got))
    if len(components) != f.q // 2 - 1:
        raise VerificationFailed(f"{len(components)} components of 2-element members, "
                                 f"expected {f.q // 2 - 1}")
    larger = tuple(s for s in L.member_sets() if len(s) >= 3)
    return LocalizationProfile(
        tuple(scaling), al, sigma, tuple(singletons), tuple(components), larger
    )
