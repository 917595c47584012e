from __future__ import annotations

import json
from collections.abc import Callable
from pathlib import Path

import pytest

from clutterforge import formats, polyhedral, vspace, witnesses
from clutterforge.clutter import GroundElement, MinorSpec, builtin, mult
from clutterforge.errors import ParseError, VerificationFailed
from clutterforge.gf import FieldSpec
from clutterforge.matroid import builtin as builtin_matroid
from clutterforge.vspace import Subspace

G = GroundElement


def test_parse_subspace_text(data_dir: Path, ex92: Subspace, gf4: FieldSpec) -> None:
    S = formats.parse_subspace("# comment\n\n4 3\n1 1 0\n1 0 1\n")
    assert S == ex92
    assert formats.parse_element(gf4, "a") == 2
    assert formats.parse_element(gf4, "b") == 3
    assert formats.parse_subspace((data_dir / "instances" / "ex92.json").read_text()) == ex92


def test_format_subspace(ex92: Subspace, instance: Callable[[str], Subspace]) -> None:
    assert formats.format_subspace(ex92) == "4 3\n1 0 1\n0 1 1\n"
    S = instance("k4e_gf4.txt")
    assert formats.parse_subspace(formats.format_subspace(S)) == S
    assert formats.subspace_from_json(formats.subspace_to_json(S)) == S


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("", 1, 1),
        ("4\n", 1, 1),
        ("x 3\n", 1, 1),
        ("6 3\n1 0 0\n", 1, 1),
        ("4 3\n1 1\n", 2, 1),
        ("3 2\n1 5\n", 2, 3),
        ("4 2\n1 c\n", 2, 3),
        ('{"q": 4,\n "n": }', 2, 7),
    ],
)
def test_parse_subspace_errors(text: str, line: int, column: int) -> None:
    with pytest.raises(ParseError) as exc_info:
        formats.parse_subspace(text)
    assert (exc_info.value.line, exc_info.value.column) == (line, column)


def test_malformed_instance(instance: Callable[[str], Subspace]) -> None:
    with pytest.raises(ParseError, match="line 2"):
        instance("malformed.txt")


def test_subspace_from_json_errors() -> None:
    with pytest.raises(ParseError):
        formats.subspace_from_json({"n": 3})
    with pytest.raises(ParseError):
        formats.subspace_from_json({"q": 2, "n": 3, "generators": [[1, 0]]})


@pytest.mark.parametrize(
    "token,expected",
    [("0:1", G(0, 1)), ("12:3", G(12, 3)), ("5", 5), ("-2", -2), ("x", "x"), ("a:b", "a:b")],
)
def test_parse_label(token: str, expected: object) -> None:
    assert formats.parse_label(token) == expected


def test_parse_clutter() -> None:
    C = formats.parse_clutter("elements: 1 2 3\n1 2\n2 3\n3 1\n")
    assert C.family() == builtin("Delta3").family()
    assert formats.parse_clutter(formats.format_clutter(C)) == C
    with pytest.raises(ParseError, match="line 2"):
        formats.parse_clutter("elements: 1 2\n1 3\n")
    with pytest.raises(ParseError):
        formats.parse_clutter("1 2 3\n1 2\n")
    with pytest.raises(ParseError):
        formats.parse_clutter("elements: 1 1\n")


def test_parse_circuits(data_dir: Path) -> None:
    text = (data_dir / "instances" / "mk4e_circuits.txt").read_text()
    assert formats.parse_circuits(text) == builtin_matroid("MK4e")
    with pytest.raises(ParseError):
        formats.parse_circuits("elements: 0 2\n0 2\n")
    with pytest.raises(ParseError):
        formats.parse_circuits("elements: 0 1\n0 4\n")


def test_parse_edge_list() -> None:
    G2 = formats.parse_edge_list("0 1\n# parallel\n1 2\n1 2\n")
    assert G2.edges == ((0, 1), (1, 2), (1, 2))
    with pytest.raises(ParseError, match="line 1"):
        formats.parse_edge_list("0 1 2\n")


def test_minor_certificate_text() -> None:
    spec = MinorSpec.of([G(0, 1), G(2, 0)], [G(1, 1)])
    text = formats.format_minor_certificate(spec, {G(0, 0): 1, G(2, 1): 3})
    assert text == "I={0:1,2:0} J={1:1} map: 0:0→1 2:1→3"
    parsed, bijection = formats.parse_minor_certificate(text)
    assert parsed == spec
    assert bijection == {G(0, 0): 1, G(2, 1): 3}
    parsed, bijection = formats.parse_minor_certificate("I={} J={4} map: 1->2")
    assert parsed == MinorSpec.of(J=[4])
    assert bijection == {1: 2}
    with pytest.raises(ParseError):
        formats.parse_minor_certificate("delete 1")


def _round_trip(cert: object, S: Subspace) -> dict[str, object]:
    data = formats.certificate_json(cert, S)
    assert data is not None
    loaded: dict[str, object] = json.loads(json.dumps(data))
    return loaded


def test_check_minor_certificate(delta3_gf3: Subspace) -> None:
    w = witnesses.non_disjoint_witness(delta3_gf3)
    data = _round_trip(w, delta3_gf3)
    assert data["kind"] == "minor"
    assert formats.check_certificate(data) == "valid Delta3 minor in 2 step(s)"
    data["target"] = "Q6"
    with pytest.raises(VerificationFailed):
        formats.check_certificate(data)


def test_check_fractional_point(delta3_gf3: Subspace) -> None:
    cert = polyhedral.is_ideal(mult(delta3_gf3))
    data = _round_trip(cert, delta3_gf3)
    assert data["kind"] == "fractional_point"
    assert formats.check_certificate(data) == "valid fractional extreme point of Q(C)"


def test_check_mfmc_violation(r11: Subspace) -> None:
    cert = polyhedral.mfmc_check(mult(r11), 1)
    data = _round_trip(cert, r11)
    assert formats.check_certificate(data) == "valid MFMC violation: tau=2 > nu=1"
    data["nu"] = 2
    with pytest.raises(VerificationFailed):
        formats.check_certificate(data)


def test_check_disjoint_basis(gf3: FieldSpec) -> None:
    S = vspace.span(gf3, 4, [(1, 1, 0, 0), (0, 0, 1, 2)])
    data = _round_trip(vspace.disjoint_support_basis(S), S)
    assert data["kind"] == "disjoint_basis"
    assert formats.check_certificate(data) == "valid basis of 2 disjoint supports"
    data["basis"] = [[1, 1, 0, 0], [1, 1, 1, 2]]
    with pytest.raises(VerificationFailed):
        formats.check_certificate(data)


def test_check_sunflower(ex92: Subspace) -> None:
    w = vspace.sunflower_basis(ex92)
    data = _round_trip(((tuple(range(ex92.n)), w),), ex92)
    assert data["kind"] == "sunflower"
    assert formats.check_certificate(data) == "valid sunflower bases on 1 factor(s)"


def test_check_sunflower_with_single_factor(ex92: Subspace, gf4: FieldSpec) -> None:
    S = vspace.span(gf4, 5, [(1, 1, 0, 0, 0), (1, 0, 1, 0, 0), (0, 0, 0, 1, 1)])
    data = _round_trip((((0, 1, 2), vspace.sunflower_basis(ex92)),), S)
    assert data["singles"] == [[0, 0, 0, 1, 1]]
    assert formats.check_certificate(data) == "valid sunflower bases on 1 factor(s)"

    data["singles"] = []
    with pytest.raises(VerificationFailed, match="do not span"):
        formats.check_certificate(data)


def test_check_sunflower_rejects_empty_factors(ex92: Subspace) -> None:
    data = {"kind": "sunflower", "subspace": formats.subspace_to_json(ex92), "factors": []}
    with pytest.raises(VerificationFailed, match="do not span"):
        formats.check_certificate(data)


def test_check_sunflower_rejects_rows_short_of_a_basis(gf3: FieldSpec) -> None:
    whole = vspace.span(gf3, 3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    part = {
        "coords": [0, 1, 2],
        "permutation": [0, 1, 2],
        "block_sizes": [1, 1, 1],
        "rows": [[1, 1, 0], [1, 0, 1]],
    }
    data = {"kind": "sunflower", "subspace": formats.subspace_to_json(whole), "factors": [part]}
    with pytest.raises(VerificationFailed, match="do not span"):
        formats.check_certificate(data)


@pytest.mark.parametrize(
    "coords,message",
    [([0, 0, 1], "bad factor coordinates"), ([0, 1, 5], "bad factor coordinates")],
)
def test_check_sunflower_rejects_bad_coords(
    ex92: Subspace, coords: list[int], message: str
) -> None:
    data = _round_trip(((tuple(range(ex92.n)), vspace.sunflower_basis(ex92)),), ex92)
    factors = data["factors"]
    assert isinstance(factors, list)
    factors[0]["coords"] = coords
    with pytest.raises(VerificationFailed, match=message):
        formats.check_certificate(data)


def test_check_certificate_rejects_junk(gf2: FieldSpec) -> None:
    with pytest.raises(ParseError):
        formats.check_certificate({"kind": "proof by intimidation"})
    with pytest.raises(ParseError):
        formats.check_certificate({"kind": "mfmc_violation"})
    assert formats.certificate_json(7, vspace.span(gf2, 1, [])) is None


def test_read_input(data_dir: Path) -> None:
    assert formats.read_input(data_dir / "instances" / "r11.txt").startswith("#")
    with pytest.raises(ParseError):
        formats.read_input(data_dir / "instances")
    with pytest.raises(ParseError):
        formats.read_input(data_dir / "instances" / "missing.txt")
