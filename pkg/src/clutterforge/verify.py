"""
Verification harness.

Each equivalence has three conditions on a subspace S: a polyhedral one on
mult(S) (idealness, or the max-flow min-cut property), a structural one on S,
and an excluded-minor one on mult(S). They are evaluated independently and
compared. A condition that runs out of budget is UNKNOWN, never a guess.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from itertools import product as cartesian
from typing import Callable

from clutterforge import gf, polyhedral
from clutterforge.clutter import (
    Clutter,
    GroundElement,
    Label,
    MinorSpec,
    builtin,
    compose,
    find_minor,
    has_pairwise_disjoint_members,
    is_isomorphic,
    localization_spec,
    minor,
    mult,
    relabel_spec,
)
from clutterforge.config import Budget, resolve
from clutterforge.errors import (
    BudgetExceeded,
    NoSeriesPair,
    TooLarge,
    VerificationFailed,
    WrongFieldClass,
)
from clutterforge.gf import FieldSpec
from clutterforge.matroid import intersecting_circuits, matroid_of, series_classes
from clutterforge.polyhedral import FractionalPoint, IdealnessCertificate, Integral
from clutterforge.vspace import (
    Subspace,
    disjoint_support_basis,
    factor,
    project,
    sunflower_basis,
)
from clutterforge.witnesses import (
    MinorWitness,
    c5sq_chain,
    certify,
    non_disjoint_witness,
    structural_delta3_witness,
)

logger = logging.getLogger(__name__)


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> Verdict:
        return cls.TRUE if value else cls.FALSE


class Theorem(Enum):
    """The four equivalences, named by the fields they cover."""

    ODD = "odd"
    GF4 = "gf4"
    EVEN = "even"
    MFMC = "mfmc"

    @classmethod
    def parse(cls, text: str) -> Theorem:
        key = text.strip().lower().removeprefix("t")
        if key in THEOREM_ALIASES:
            return THEOREM_ALIASES[key]
        try:
            return cls(text.strip().lower())
        except ValueError:
            names = ", ".join([t.value for t in cls] + list(THEOREM_ALIASES))
            raise ValueError(f"unknown theorem {text!r}; expected one of {names}") from None

    def applies_to(self, q: int) -> bool:
        if self is Theorem.ODD:
            return q % 2 == 1
        if self is Theorem.GF4:
            return q == 4
        if self is Theorem.EVEN:
            return q > 4 and q & (q - 1) == 0
        return True

    @property
    def excluded(self) -> tuple[str, ...]:
        if self is Theorem.EVEN:
            return ("C5sq",)
        if self is Theorem.MFMC:
            return ("Delta3", "Q6")
        return ("Delta3",)

    @property
    def first_condition(self) -> str:
        return "mfmc" if self is Theorem.MFMC else "ideal"


THEOREM_ALIASES = {
    "1.1": Theorem.ODD,
    "1.2": Theorem.GF4,
    "1.3": Theorem.EVEN,
    "1.4": Theorem.MFMC,
}


@dataclass(frozen=True)
class ConditionResult:
    """
    One verdict with the method that produced it. `derived` marks verdicts
    reached by combining other verified facts instead of computing the
    condition directly.
    """

    verdict: Verdict
    method: str
    certificate: object = None
    derived: bool = False

    def __str__(self) -> str:
        tag = " [derived]" if self.derived else ""
        return f"{self.verdict.value.upper()} ({self.method}){tag}"


def unknown(reason: str) -> ConditionResult:
    return ConditionResult(Verdict.UNKNOWN, reason)


@dataclass(frozen=True)
class TheoremReport:
    theorem: Theorem
    instance: str
    polyhedral: ConditionResult
    structure: ConditionResult
    minor_free: ConditionResult

    @property
    def conditions(self) -> dict[str, ConditionResult]:
        return {
            self.theorem.first_condition: self.polyhedral,
            "structure": self.structure,
            "minor_free": self.minor_free,
        }

    @property
    def agreement(self) -> bool | None:
        """None while any condition is UNKNOWN."""
        verdicts = {c.verdict for c in self.conditions.values()}
        if Verdict.UNKNOWN in verdicts:
            known = verdicts - {Verdict.UNKNOWN}
            return False if len(known) > 1 else None
        return len(verdicts) == 1


@dataclass
class SweepSummary:
    total: int = 0
    agreements: int = 0
    disagreements: int = 0
    unknowns: int = 0

    def add(self, report: TheoremReport) -> None:
        self.total += 1
        if report.agreement is None:
            self.unknowns += 1
        elif report.agreement:
            self.agreements += 1
        else:
            self.disagreements += 1

    def __str__(self) -> str:
        return (f"{self.total} subspaces: {self.agreements} agree, "
                f"{self.disagreements} disagree, {self.unknowns} unknown")


def gaussian_binomial(q: int, n: int, k: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(q: int, n: int) -> int:
    return sum(gaussian_binomial(q, n, k) for k in range(n + 1))


def enumerate_subspaces(
    q: int | FieldSpec, n: int, budget: Budget | None = None
) -> Iterator[Subspace]:
    """
    Every subspace of GF(q)^n once, as reduced row echelon bases ordered by
    rank, then pivot columns, then free entries.
    """
    f = gf.build_field(q) if isinstance(q, int) else q
    cap = resolve(budget).subspace_count
    total = subspace_count(f.q, n)
    if total > cap:
        raise BudgetExceeded(f"{total} subspaces of {f}^{n}", cap)
    for r in range(n + 1):
        for pivots in combinations(range(n), r):
            free = [
                (t, c)
                for t, p in enumerate(pivots)
                for c in range(p + 1, n)
                if c not in pivots
            ]
            for values in cartesian(f.elements, repeat=len(free)):
                rows = [[0] * n for _ in pivots]
                for t, p in enumerate(pivots):
                    rows[t][p] = 1
                for (t, c), v in zip(free, values):
                    rows[t][c] = v
                yield Subspace(f, n, tuple(tuple(row) for row in rows))


def _coset_representatives(S: Subspace) -> Iterator[tuple[int, ...]]:
    """One nonzero point per coset of S, zero on the pivot columns."""
    free = [c for c in range(S.n) if c not in S.pivots]
    for values in cartesian(S.field.elements, repeat=len(free)):
        if any(values):
            point = [0] * S.n
            for c, v in zip(free, values):
                point[c] = v
            yield tuple(point)


def is_ideal_mult(S: Subspace, budget: Budget | None = None) -> IdealnessCertificate:
    """
    Idealness of mult(S), one matroid factor and one localization per coset
    at a time. A fractional vertex of a localization is padded with zeros on
    the contracted elements and on the other factors, and re-checked as a
    vertex of Q(mult(S)).
    """
    examined = 0
    for coords, T in factor(S, budget):
        if T.dimension == 0:
            continue
        C = mult(T, budget)
        for alpha in _coset_representatives(T):
            local = minor(C, localization_spec(T.n, alpha))
            found = polyhedral.is_ideal(local, budget)
            if isinstance(found, Integral):
                examined += found.extreme_points
                continue
            logger.debug("fractional vertex of the localization at %s on %s", alpha, coords)
            values = {
                GroundElement(coords[x.part], x.value): v
                for x, v in zip(local.ground, found.point)
                if isinstance(x, GroundElement)
            }
            whole = mult(S, budget)
            lifted = [values.get(x, Fraction(0)) for x in whole.ground]
            return polyhedral.fractional_point(whole, lifted)
    return Integral(examined)


def _factor_chain(S: Subspace, coords: Sequence[int], spec: MinorSpec) -> list[MinorSpec]:
    """Isolate the factor on `coords` inside mult(S), then apply its own minor."""
    outside = [i for i in range(S.n) if i not in coords]
    others = MinorSpec.of(
        [GroundElement(i, v) for i in outside for v in S.field.elements if v],
        [GroundElement(i, 0) for i in outside],
    )
    mapping: dict[Label, Label] = {
        GroundElement(j, v): GroundElement(c, v)
        for j, c in enumerate(coords)
        for v in S.field.elements
    }
    steps = [relabel_spec(spec, mapping)]
    return [others] + steps if outside else steps


def search_minor(
    S: Subspace, target: str, budget: Budget | None = None
) -> MinorWitness | None:
    """
    Exhaustive search factor by factor; a minor of a product is a product of
    minors, and none of the targets is a product. Factors whose members are
    pairwise disjoint are skipped.
    """
    for coords, T in factor(S, budget):
        if T.dimension == 0:
            continue
        C = mult(T, budget)
        if has_pairwise_disjoint_members(C):
            continue
        found = find_minor(C, target, budget)
        if found is None:
            continue
        spec, _ = found
        return certify(mult(S, budget), _factor_chain(S, coords, spec), target, budget)
    return None


def structure_condition(
    S: Subspace, theorem: Theorem, budget: Budget | None = None
) -> ConditionResult:
    try:
        if theorem is Theorem.GF4:
            witnesses = []
            for coords, T in factor(S, budget):
                if T.dimension <= 1:
                    continue
                found = sunflower_basis(T, budget)
                if found is None:
                    return ConditionResult(
                        Verdict.FALSE, f"factor on {list(coords)} has no sunflower basis"
                    )
                witnesses.append((coords, found))
            if not witnesses:
                return ConditionResult(Verdict.TRUE, "factors of dimension <= 1",
                                       disjoint_support_basis(S, budget))
            return ConditionResult(Verdict.TRUE, "factors of dimension <= 1 or sunflower",
                                   tuple(witnesses))
        basis = disjoint_support_basis(S, budget)
    except (BudgetExceeded, TooLarge) as e:
        logger.warning("structure check ran out of budget: %s", e)
        return unknown(str(e))
    if basis is None:
        return ConditionResult(Verdict.FALSE, "minimal supports overlap")
    return ConditionResult(Verdict.TRUE, "basis of disjoint supports", basis)


def _constructive_minor(
    S: Subspace, theorem: Theorem, budget: Budget | None
) -> MinorWitness | None:
    if theorem is Theorem.EVEN:
        if intersecting_circuits(matroid_of(S, budget)) is not None:
            return c5sq_chain(S, budget)
        return None
    if disjoint_support_basis(S, budget) is not None:
        return None
    found = non_disjoint_witness(S, budget)
    if found.target in theorem.excluded:
        return found
    # over GF(4) the direct construction may stop at Q6
    return structural_delta3_witness(S, budget)


def minor_condition(
    S: Subspace, theorem: Theorem, budget: Budget | None = None
) -> ConditionResult:
    try:
        found = _constructive_minor(S, theorem, budget)
        if found is not None:
            return ConditionResult(Verdict.FALSE, f"{found.target} minor (constructed)", found)
        for target in theorem.excluded:
            found = search_minor(S, target, budget)
            if found is not None:
                return ConditionResult(Verdict.FALSE, f"{target} minor (search)", found)
    except (BudgetExceeded, TooLarge) as e:
        logger.warning("minor search ran out of budget: %s", e)
        return unknown(str(e))
    names = "/".join(theorem.excluded)
    return ConditionResult(Verdict.TRUE, f"exhaustive search: no {names} minor")


NON_IDEAL_TARGETS = frozenset({"Delta3", "C5sq"})


def ideal_condition(
    S: Subspace,
    budget: Budget | None = None,
    minor_free: ConditionResult | None = None,
) -> ConditionResult:
    """
    Direct when the localizations fit the polyhedral budget. Otherwise the
    verdict is derived: disjoint-support spaces give products of clutters with
    disjoint members, and a Delta3 or C5sq minor is a non-ideal minor.
    """
    try:
        found = is_ideal_mult(S, budget)
    except (BudgetExceeded, TooLarge) as e:
        logger.info("idealness not computed directly: %s", e)
        witness = minor_free.certificate if minor_free is not None else None
        if isinstance(witness, MinorWitness) and witness.target in NON_IDEAL_TARGETS:
            return ConditionResult(Verdict.FALSE, f"has a non-ideal {witness.target} minor",
                                   witness, derived=True)
        try:
            basis = disjoint_support_basis(S, budget)
        except (BudgetExceeded, TooLarge):
            basis = None
        if basis is not None:
            return ConditionResult(Verdict.TRUE, "product of clutters with disjoint members",
                                   basis, derived=True)
        return unknown(str(e))
    if isinstance(found, FractionalPoint):
        return ConditionResult(Verdict.FALSE, "fractional extreme point", found)
    return ConditionResult(Verdict.TRUE, f"{found.extreme_points} extreme points, all integral",
                           found)


def mfmc_condition(
    S: Subspace,
    budget: Budget | None = None,
    minor_free: ConditionResult | None = None,
) -> ConditionResult:
    """
    A violation is sought from the weights of a non-packing minor first, then
    by a small exhaustive sweep. Spaces with a disjoint-support basis are
    checked for the packing property on every minor.
    """
    try:
        C = mult(S, budget)
        basis = disjoint_support_basis(S, budget)
    except (BudgetExceeded, TooLarge) as e:
        return unknown(str(e))
    if basis is None:
        return _mfmc_violation(S, C, budget, minor_free)
    try:
        failing = polyhedral.has_packing_property(C, budget)
    except BudgetExceeded as e:
        logger.info("packing sweep not completed: %s", e)
        return ConditionResult(Verdict.TRUE, "product of clutters with disjoint members",
                               basis, derived=True)
    if failing is not None:
        return ConditionResult(Verdict.FALSE, "a minor does not pack", failing)
    return ConditionResult(Verdict.TRUE, "every minor packs; disjoint-member product",
                           basis, derived=True)


def _mfmc_violation(
    S: Subspace, C: Clutter, budget: Budget | None, minor_free: ConditionResult | None
) -> ConditionResult:
    witness = minor_free.certificate if minor_free is not None else None
    try:
        if not isinstance(witness, MinorWitness):
            witness = non_disjoint_witness(S, budget)
        hint = polyhedral.weights_from_minor(C, compose(witness.chain))
        found = polyhedral.mfmc_check(C, len(C.ground), hints=[hint], samples=0, budget=budget)
        if found is None:
            found = polyhedral.mfmc_check(C, 1, budget=budget)
    except (BudgetExceeded, TooLarge) as e:
        return unknown(str(e))
    if found is None:
        return unknown("no violating weights found")
    return ConditionResult(Verdict.FALSE, f"tau != nu via {witness.target} weights", found)


def verify_theorem(
    S: Subspace, theorem: Theorem | str, budget: Budget | None = None
) -> TheoremReport:
    which = Theorem.parse(theorem) if isinstance(theorem, str) else theorem
    if not which.applies_to(S.q):
        raise WrongFieldClass(which.value, S.q)
    structure = structure_condition(S, which, budget)
    minor_free = minor_condition(S, which, budget)
    if which is Theorem.MFMC:
        first = mfmc_condition(S, budget, minor_free)
    else:
        first = ideal_condition(S, budget, minor_free)
    report = TheoremReport(which, str(S), first, structure, minor_free)
    logger.debug("%s on %s: %s", which.value, S, report.agreement)
    return report


def ideal_mfmc_coincide(
    S: Subspace, budget: Budget | None = None
) -> tuple[ConditionResult, ConditionResult]:
    """
    Away from GF(2) and GF(4) mult(S) is ideal exactly when it has the
    max-flow min-cut property. Raises VerificationFailed when the two known
    verdicts differ.
    """
    if S.q in (2, 4):
        raise WrongFieldClass("ideal-mfmc", S.q)
    ideal = ideal_condition(S, budget)
    mfmc = mfmc_condition(S, budget)
    known = {ideal.verdict, mfmc.verdict} - {Verdict.UNKNOWN}
    if len(known) > 1:
        raise VerificationFailed(f"{S}: idealness {ideal} but MFMC {mfmc}")
    return ideal, mfmc


@dataclass(frozen=True)
class SeriesExtension:
    original: Subspace
    contracted: Subspace
    dropped: int
    ideal: bool


def series_extension_pair(S: Subspace, budget: Budget | None = None) -> SeriesExtension:
    """Dropping one of two elements in series does not change idealness."""
    M = matroid_of(S, budget)
    in_circuit = set().union(*M.circuits) if M.circuits else set()
    pair = next((c for c in series_classes(M) if len(c) >= 2 and c[0] in in_circuit), None)
    if pair is None:
        raise NoSeriesPair(f"matroid of {S} has no two elements in series")
    S2 = project(S, [pair[-1]])
    before = isinstance(is_ideal_mult(S, budget), Integral)
    after = isinstance(is_ideal_mult(S2, budget), Integral)
    if before != after:
        raise VerificationFailed(f"dropping coordinate {pair[-1]} of {S} changed idealness")
    return SeriesExtension(S, S2, pair[-1], before)


@dataclass(frozen=True)
class ReplicationReport:
    packing_property: bool
    disjoint_basis: bool
    ideal: bool | None = None
    minimally_non_packing: bool | None = None
    tau: int | None = None
    q6: dict[Label, Label] | None = field(default=None)

    @property
    def applicable(self) -> bool:
        return bool(self.ideal and self.minimally_non_packing)


def replication_tau2_report(S: Subspace, budget: Budget | None = None) -> ReplicationReport:
    """
    The packing property forces a disjoint-support basis, and an ideal
    minimally non-packing mult(S) is Q6 with covering number two.
    """
    C = mult(S, budget)
    packing = polyhedral.has_packing_property(C, budget) is None
    disjoint = disjoint_support_basis(S, budget) is not None
    if packing and not disjoint:
        raise VerificationFailed(f"mult({S}) packs but S has no disjoint-support basis")
    try:
        ideal = isinstance(polyhedral.is_ideal(C, budget), Integral)
    except TooLarge:
        return ReplicationReport(packing, disjoint)
    mnp = ideal and polyhedral.minimally_non_packing(C, budget)
    if not mnp:
        return ReplicationReport(packing, disjoint, ideal, mnp)
    t = polyhedral.tau(C, [1] * len(C.ground))
    iso = is_isomorphic(C, builtin("Q6"), budget)
    if t != 2 or iso is None:
        raise VerificationFailed(f"mult({S}) is ideal and minimally non-packing "
                                 f"but tau={t} and Q6 isomorphism {iso is not None}")
    return ReplicationReport(packing, disjoint, ideal, mnp, int(t), iso)


def _verify_task(args: tuple[Subspace, Theorem, Budget]) -> TheoremReport:
    S, theorem, budget = args
    return verify_theorem(S, theorem, budget)


def sweep(
    q: int,
    n: int,
    theorem: Theorem | str,
    jobs: int = 1,
    budget: Budget | None = None,
    progress: Callable[[TheoremReport], None] | None = None,
) -> tuple[list[TheoremReport], SweepSummary]:
    """verify_theorem over every subspace of GF(q)^n, in enumeration order."""
    which = Theorem.parse(theorem) if isinstance(theorem, str) else theorem
    if not which.applies_to(q):
        raise WrongFieldClass(which.value, q)
    caps = resolve(budget)
    tasks = [(S, which, caps) for S in enumerate_subspaces(q, n, caps)]
    logger.info("sweeping %d subspaces of GF(%d)^%d with %d job(s)", len(tasks), q, n, jobs)
    summary = SweepSummary()
    reports = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results: Iterator[TheoremReport] = pool.map(_verify_task, tasks, chunksize=4)
            for report in results:
                summary.add(report)
                reports.append(report)
                if progress:
                    progress(report)
    else:
        for task in tasks:
            report = _verify_task(task)
            summary.add(report)
            reports.append(report)
            if progress:
                progress(report)
    logger.info("%s", summary)
    return reports, summary
