from clutterforge.clutter import Clutter, GroundElement, MinorSpec, find_minor, minor, mult
from clutterforge.config import Budget
from clutterforge.errors import BudgetExceeded, ClutterForgeError, VerificationFailed
from clutterforge.gf import FieldSpec, build_field
from clutterforge.matroid import CircuitMatroid, matroid_of
from clutterforge.polyhedral import extreme_points, is_ideal
from clutterforge.verify import Theorem, TheoremReport, Verdict, verify_theorem
from clutterforge.vspace import Subspace, span

__all__ = [
    "Budget",
    "BudgetExceeded",
    "CircuitMatroid",
    "Clutter",
    "ClutterForgeError",
    "FieldSpec",
    "GroundElement",
    "MinorSpec",
    "Subspace",
    "Theorem",
    "TheoremReport",
    "Verdict",
    "VerificationFailed",
    "build_field",
    "extreme_points",
    "find_minor",
    "is_ideal",
    "matroid_of",
    "minor",
    "mult",
    "span",
    "verify_theorem",
]
