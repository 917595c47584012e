"""
Text and JSON codecs for instances and certificates.

Text inputs are line based; blank lines and lines starting with `#` are
ignored. Errors report 1-based line and column numbers.
"""

from __future__ import annotations

import json
import re
import stat
from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from clutterforge import gf, polyhedral
from clutterforge.clutter import (
    Clutter,
    GroundElement,
    Label,
    MinorSpec,
    builtin,
    check_minor_chain,
    mult,
    sort_labels,
)
from clutterforge.config import Budget
from clutterforge.errors import ClutterForgeError, ParseError, VerificationFailed
from clutterforge.gf import FieldElement, FieldSpec
from clutterforge.graphs import MultiGraph
from clutterforge.matroid import CircuitMatroid
from clutterforge.polyhedral import FractionalPoint, MfmcViolation
from clutterforge.vspace import Point, Subspace, SunflowerWitness, factor, span, support
from clutterforge.witnesses import MinorWitness

Certificate = dict[str, Any]

ARROW = "→"


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith("#"):
            yield number, line


def _tokens(line: str) -> Iterator[tuple[int, str]]:
    for match in re.finditer(r"\S+", line):
        yield match.start() + 1, match.group()


def parse_element(f: FieldSpec, token: str, line: int = 0, column: int = 0) -> FieldElement:
    if f.q == 4 and token in gf.GF4_NAMES:
        return gf.GF4_NAMES.index(token)
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"{token!r} is not an element of {f}", line, column) from None
    if not 0 <= value < f.q:
        raise ParseError(f"{value} is not an element of {f}", line, column)
    return value


def _int(token: str, what: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", line, column) from None


def subspace_from_json(data: Mapping[str, Any]) -> Subspace:
    try:
        q, n, generators = int(data["q"]), int(data["n"]), data.get("generators", [])
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"subspace object needs integer 'q' and 'n': {e}") from None
    f = gf.build_field(q)
    rows = []
    for r, row in enumerate(generators, start=1):
        if len(row) != n:
            raise ParseError(f"generator {r} has {len(row)} entries, expected {n}")
        rows.append(tuple(parse_element(f, str(v)) for v in row))
    return span(f, n, rows)


def parse_subspace(text: str) -> Subspace:
    """`q n` followed by generator rows, or the equivalent JSON object."""
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno, e.colno) from None
        return subspace_from_json(data)

    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    number, header = lines[0]
    head = list(_tokens(header))
    if len(head) != 2:
        raise ParseError("header must be 'q n'", number, 1)
    q = _int(head[0][1], "q", number, head[0][0])
    n = _int(head[1][1], "n", number, head[1][0])
    try:
        f = gf.build_field(q)
    except ClutterForgeError as e:
        raise ParseError(str(e), number, head[0][0]) from None
    rows = []
    for number, line in lines[1:]:
        tokens = list(_tokens(line))
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, got {len(tokens)}", number, 1)
        rows.append(tuple(parse_element(f, t, number, col) for col, t in tokens))
    return span(f, n, rows)


def format_subspace(S: Subspace) -> str:
    rows = [" ".join(gf.element_name(S.field, v) for v in row) for row in S.basis]
    return "\n".join([f"{S.q} {S.n}", *rows]) + "\n"


def subspace_to_json(S: Subspace) -> dict[str, Any]:
    return {"q": S.q, "n": S.n, "generators": [list(row) for row in S.basis]}


def parse_label(token: str) -> Label:
    part, sep, value = token.partition(":")
    if sep and part.lstrip("-").isdigit() and value.isdigit():
        return GroundElement(int(part), int(value))
    if token.lstrip("-").isdigit():
        return int(token)
    return token


def _header(text: str, keyword: str) -> tuple[list[tuple[int, str]], list[tuple[int, str]]]:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    number, first = lines[0]
    tokens = list(_tokens(first))
    if tokens[0][1] != f"{keyword}:":
        raise ParseError(f"first line must start with '{keyword}:'", number, tokens[0][0])
    return tokens[1:], lines[1:]


def parse_clutter(text: str, budget: Budget | None = None) -> Clutter:
    """`elements: e1 e2 ...` then one member per line."""
    head, rest = _header(text, "elements")
    ground = [parse_label(t) for _, t in head]
    if len(set(ground)) != len(ground):
        raise ParseError("repeated element in the ground set", 1, 1)
    known = set(ground)
    members = []
    for number, line in rest:
        member = []
        for col, t in _tokens(line):
            x = parse_label(t)
            if x not in known:
                raise ParseError(f"{t!r} is not a ground element", number, col)
            member.append(x)
        members.append(member)
    return Clutter.from_sets(ground, members, budget)


def format_clutter(C: Clutter) -> str:
    return str(C) + "\n"


def parse_circuits(text: str, n: int | None = None) -> CircuitMatroid:
    """`elements: 0 1 ... n-1` then one circuit per line."""
    head, rest = _header(text, "elements")
    elements = [_int(t, "matroid element", 1, col) for col, t in head]
    size = len(elements) if n is None else n
    if sorted(elements) != list(range(size)):
        raise ParseError(f"elements must be 0..{size - 1}", 1, 1)
    circuits = []
    for number, line in rest:
        circuit = []
        for col, t in _tokens(line):
            e = _int(t, "matroid element", number, col)
            if not 0 <= e < size:
                raise ParseError(f"element {e} out of range", number, col)
            circuit.append(e)
        circuits.append(circuit)
    return CircuitMatroid.from_circuits(size, circuits)


def parse_edge_list(text: str) -> MultiGraph:
    edges = []
    for number, line in _lines(text):
        tokens = list(_tokens(line))
        if len(tokens) != 2:
            raise ParseError("expected 'u v'", number, 1)
        u, v = (_int(t, "vertex", number, col) for col, t in tokens)
        if u < 0 or v < 0:
            raise ParseError("vertices are non-negative", number, 1)
        edges.append((u, v))
    return MultiGraph.from_edges(edges)


def format_minor_certificate(spec: MinorSpec, bijection: Mapping[Label, Label] | None) -> str:
    text = str(spec)
    if bijection:
        pairs = " ".join(f"{x}{ARROW}{bijection[x]}" for x in sort_labels(bijection))
        text += f" map: {pairs}"
    return text


_MINOR = re.compile(r"^\s*I=\{(?P<I>[^}]*)\}\s+J=\{(?P<J>[^}]*)\}(?:\s+map:(?P<map>.*))?$")


def _label_set(body: str) -> list[Label]:
    return [parse_label(t) for t in re.split(r"[\s,]+", body.strip()) if t]


def parse_minor_certificate(text: str) -> tuple[MinorSpec, dict[Label, Label]]:
    match = _MINOR.match(text.strip())
    if match is None:
        raise ParseError("expected 'I={...} J={...} [map: x→y ...]'", 1, 1)
    spec = MinorSpec.of(_label_set(match["I"]), _label_set(match["J"]))
    bijection: dict[Label, Label] = {}
    for pair in (match["map"] or "").split():
        left, sep, right = pair.replace("->", ARROW).partition(ARROW)
        if not sep:
            raise ParseError(f"bad map entry {pair!r}", 1, text.find(pair) + 1)
        bijection[parse_label(left)] = parse_label(right)
    return spec, bijection


def _points(rows: Sequence[Point]) -> list[list[int]]:
    return [list(r) for r in rows]


def _lift(S: Subspace, coords: Sequence[int], row: Sequence[FieldElement]) -> Point:
    full = [0] * S.n
    for c, v in zip(coords, row):
        full[c] = v
    return tuple(full)


def _single_rows(S: Subspace, cert: object, budget: Budget | None) -> list[Point]:
    """Lifted basis rows of the factors a sunflower certificate does not list."""
    listed = {tuple(coords) for coords, _ in cert} if isinstance(cert, tuple) else set()
    return [
        _lift(S, coords, T.basis[0])
        for coords, T in factor(S, budget)
        if T.dimension == 1 and tuple(coords) not in listed
    ]


def certificate_json(cert: object, S: Subspace, budget: Budget | None = None) -> Certificate | None:
    """JSON form of a certificate produced for S; None for plain counts."""
    if isinstance(cert, MinorWitness):
        return {
            "kind": "minor",
            "subspace": subspace_to_json(S),
            "target": cert.target,
            "chain": [str(spec) for spec in cert.chain],
            "bijection": {str(x): str(y) for x, y in cert.bijection.items()},
        }
    if isinstance(cert, FractionalPoint):
        return {
            "kind": "fractional_point",
            "clutter": format_clutter(mult(S, budget)),
            "point": [str(v) for v in cert.point],
            "tight_members": list(cert.tight_members),
            "tight_bounds": list(cert.tight_bounds),
        }
    if isinstance(cert, MfmcViolation):
        return {
            "kind": "mfmc_violation",
            "clutter": format_clutter(mult(S, budget)),
            "w": list(cert.w),
            "tau": cert.tau,
            "nu": cert.nu,
        }
    if isinstance(cert, tuple) and all(isinstance(r, tuple) for r in cert):
        if cert and len(cert[0]) == 2 and isinstance(cert[0][1], SunflowerWitness):
            return {
                "kind": "sunflower",
                "subspace": subspace_to_json(S),
                "factors": [
                    {
                        "coords": list(coords),
                        "permutation": list(w.permutation),
                        "block_sizes": list(w.block_sizes),
                        "rows": _points(w.rows),
                    }
                    for coords, w in cert
                ],
                "singles": _points(_single_rows(S, cert, budget)),
            }
        return {"kind": "disjoint_basis", "subspace": subspace_to_json(S), "basis": _points(cert)}
    return None


def _source_clutter(obj: Mapping[str, Any], budget: Budget | None) -> Clutter:
    if "subspace" in obj:
        return mult(subspace_from_json(obj["subspace"]), budget)
    if "clutter" in obj:
        return parse_clutter(obj["clutter"], budget)
    raise ParseError("certificate names neither a subspace nor a clutter")


def _check_sunflower_factor(S: Subspace, part: Mapping[str, Any], out: list[Point]) -> set[int]:
    """Validate one factor, append its rows lifted into S and return its coordinates."""
    coords = [int(c) for c in part["coords"]]
    if len(set(coords)) != len(coords) or not all(0 <= c < S.n for c in coords):
        raise VerificationFailed(f"bad factor coordinates {coords}")
    perm = list(part["permutation"])
    sizes = list(part["block_sizes"])
    rows = [tuple(r) for r in part["rows"]]
    if any(len(r) != len(coords) for r in rows):
        raise VerificationFailed("factor rows do not match the factor coordinates")
    if sorted(perm) != list(range(len(coords))) or sum(sizes) != len(perm):
        raise VerificationFailed("permutation and blocks do not partition the factor")
    blocks, start = [], 0
    for size in sizes:
        blocks.append(set(perm[start:start + size]))
        start += size
    head, tails = blocks[0], blocks[1:]
    if len(rows) != len(tails) or len(rows) < 2:
        raise VerificationFailed("a sunflower basis needs one row per private block, at least two")
    if len({tuple(r[c] for c in sorted(head)) for r in rows}) != 1:
        raise VerificationFailed("rows disagree on the shared block")
    for row, tail in zip(rows, tails):
        if support(row) != frozenset(head | tail):
            raise VerificationFailed(f"row {row} is not supported on its blocks")
    for row in rows:
        x = _lift(S, coords, row)
        if x not in S:
            raise VerificationFailed(f"{x} is not in S")
        out.append(x)
    return set(coords)


def check_certificate(obj: Mapping[str, Any], budget: Budget | None = None) -> str:
    """Re-validate a JSON certificate from scratch."""
    kind = obj.get("kind")
    try:
        if kind == "minor":
            C = _source_clutter(obj, budget)
            chain = [parse_minor_certificate(step)[0] for step in obj["chain"]]
            target = obj["target"]
            if target not in ("Delta3", "Q6", "C5sq", "C5sq_pre"):
                raise ParseError(f"unknown target {target!r}")
            pairs = obj.get("bijection", {}).items()
            bijection = {parse_label(k): parse_label(v) for k, v in pairs}
            check_minor_chain(C, chain, builtin(target), bijection or None, budget)
            return f"valid {target} minor in {len(chain)} step(s)"
        if kind == "fractional_point":
            C = _source_clutter(obj, budget)
            point = [Fraction(v) for v in obj["point"]]
            polyhedral.check_fractional_point(C, point, obj["tight_members"], obj["tight_bounds"])
            return "valid fractional extreme point of Q(C)"
        if kind == "mfmc_violation":
            C = _source_clutter(obj, budget)
            w = [int(v) for v in obj["w"]]
            t, p = polyhedral.tau(C, w), polyhedral.nu(C, w)
            if t != obj["tau"] or p != obj["nu"] or t == p:
                raise VerificationFailed(f"recomputed tau={t}, nu={p}")
            return f"valid MFMC violation: tau={t} > nu={p}"
        if kind == "disjoint_basis":
            S = subspace_from_json(obj["subspace"])
            rows = [tuple(r) for r in obj["basis"]]
            seen: set[int] = set()
            for row in rows:
                if row not in S:
                    raise VerificationFailed(f"{row} is not in S")
                if support(row) & seen:
                    raise VerificationFailed("basis supports overlap")
                seen |= support(row)
            if span(S.field, S.n, rows) != S:
                raise VerificationFailed("basis does not span S")
            return f"valid basis of {len(rows)} disjoint supports"
        if kind == "sunflower":
            S = subspace_from_json(obj["subspace"])
            lifted: list[Point] = []
            used: set[int] = set()
            for part in obj["factors"]:
                coords = _check_sunflower_factor(S, part, lifted)
                if used & coords:
                    raise VerificationFailed("factors share coordinates")
                used |= coords
            for single in obj.get("singles", []):
                row = tuple(single)
                if len(row) != S.n or row not in S:
                    raise VerificationFailed(f"{row} is not in S")
                if support(row) & used:
                    raise VerificationFailed("rows of different factors overlap")
                used |= support(row)
                lifted.append(row)
            if len(lifted) != S.dimension or span(S.field, S.n, lifted) != S:
                raise VerificationFailed("factor rows do not span S")
            return f"valid sunflower bases on {len(obj['factors'])} factor(s)"
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ClutterForgeError):
            raise
        raise ParseError(f"malformed {kind} certificate: {e}") from None
    raise ParseError(f"unknown certificate kind {kind!r}")


def validate_path(
    value: str | Path, *, dir_okay: bool, file_okay: bool, must_exist: bool
) -> Path:
    """Resolve a command-line path, raising ParseError when it is not acceptable."""
    try:
        p = Path(value).expanduser().resolve()
    except (OSError, RuntimeError):
        raise ParseError(f"{value}: not a valid path") from None
    if dir_okay and file_okay and not must_exist:
        return p
    try:
        st = p.stat()
    except FileNotFoundError:
        if must_exist:
            raise ParseError(f"{value}: file or directory does not exist") from None
        return p
    if not dir_okay and stat.S_ISDIR(st.st_mode):
        raise ParseError(f"{value}: path cannot be a directory")
    if not file_okay and stat.S_ISREG(st.st_mode):
        raise ParseError(f"{value}: path cannot be a regular file")
    return p


def read_input(value: str | Path) -> str:
    return validate_path(value, dir_okay=False, file_okay=True, must_exist=True).read_text()
