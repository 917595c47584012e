import json
from pathlib import Path

import pytest

from clutterforge.cli import WITNESS_KINDS, build_parser, default_theorem
from clutterforge.verify import Theorem

from .conftest import Runner


@pytest.mark.parametrize(
    "q,expected",
    [(2, Theorem.MFMC), (3, Theorem.ODD), (4, Theorem.GF4), (8, Theorem.EVEN), (9, Theorem.ODD)],
)
def test_default_theorem(q: int, expected: Theorem) -> None:
    assert default_theorem(q) is expected


def test_parser_rejects_unknown_witness() -> None:
    parser = build_parser()
    with pytest.raises(SystemExit):
        parser.parse_args(["witness", "bogus", "x.txt"])
    assert "overlap" in WITNESS_KINDS


def test_no_command(cli: Runner) -> None:
    result = cli()
    assert result.exit_code == 1
    assert "usage: clutterforge" in result.stdout


def test_field_json(cli: Runner) -> None:
    result = cli("--json", "field", "--q", "4")
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert (data["q"], data["p"], data["k"]) == (4, 2, 2)
    assert data["modulus"] == [1, 1, 1]
    assert data["add"][1] == [1, 0, 3, 2]
    assert data["mul"][2][2] == 3


def test_field_tables(cli: Runner) -> None:
    result = cli("field", "--q", "3")
    assert result.exit_code == 0
    assert "GF(3) +" in result.stdout
    assert "GF(3) *" in result.stdout


def test_field_rejects(cli: Runner) -> None:
    result = cli("field", "--q", "6")
    assert result.exit_code == 1
    assert "error: 6 is not a prime power" in result.stderr


def test_analyze_json(cli: Runner, instances: Path) -> None:
    result = cli("--json", "analyze", instances / "ex92.json")
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["theorem"] == "gf4"
    assert data["agreement"] is True
    assert list(data["conditions"]) == ["ideal", "structure", "minor_free"]
    assert all(c["verdict"] == "true" for c in data["conditions"].values())
    assert data["conditions"]["structure"]["certificate"]["kind"] == "sunflower"


def test_analyze_ideal_only(cli: Runner, instances: Path) -> None:
    result = cli("analyze", instances / "delta3_gf3.txt", "--ideal")
    assert result.exit_code == 0
    assert "NOT IDEAL (fractional extreme point" in result.stdout


def test_analyze_minors_only(cli: Runner, instances: Path) -> None:
    result = cli("analyze", instances / "disjoint_gf3.txt", "--minors", "--structure")
    assert result.exit_code == 0
    assert "structure: TRUE (basis of disjoint supports)" in result.stdout
    assert "minor_free: TRUE" in result.stdout


def test_analyze_wrong_field(cli: Runner, instances: Path) -> None:
    result = cli("analyze", instances / "r11.txt", "--theorem", "odd")
    assert result.exit_code == 1
    assert "does not apply to GF(2)" in result.stderr


@pytest.mark.parametrize("filename", ["malformed.txt", "missing.txt"])
def test_analyze_bad_input(cli: Runner, instances: Path, filename: str) -> None:
    result = cli("analyze", instances / filename)
    assert result.exit_code == 1
    assert result.stderr.startswith("error:")
    assert result.stdout == ""


def test_tiny_budget_is_unknown(cli: Runner, instances: Path) -> None:
    result = cli("--budget", "1e-9", "analyze", instances / "delta3_gf3.txt")
    assert result.exit_code == 2
    assert "UNKNOWN" in result.stdout


def test_witness_and_check_cert(cli: Runner, instances: Path, tmp_path: Path) -> None:
    result = cli("--json", "witness", "overlap", instances / "r11.txt")
    assert result.exit_code == 0
    cert = json.loads(result.stdout)
    assert cert["kind"] == "minor"
    assert cert["target"] == "Q6"

    path = tmp_path / "q6.json"
    path.write_text(result.stdout)
    checked = cli("--check-cert", path)
    assert checked.exit_code == 0
    assert checked.stdout.startswith("VALID:")

    cert["target"] = "Delta3"
    cert["bijection"] = {}
    path.write_text(json.dumps(cert))
    checked = cli("--check-cert", path)
    assert checked.exit_code == 1
    assert checked.stdout.startswith("INVALID:")


def test_check_cert_bad_json(cli: Runner, tmp_path: Path) -> None:
    path = tmp_path / "junk.json"
    path.write_text("{\n  oops")
    result = cli("--check-cert", path)
    assert result.exit_code == 1
    assert "error: line 2" in result.stderr


def test_witness_text(cli: Runner, instances: Path) -> None:
    result = cli("witness", "u24", instances / "u24_gf4.txt")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "Delta3 minor:"
    assert lines[1].startswith("  step 1: I={")
    assert "map:" in lines[-1]


def test_structural_witness_absent(cli: Runner, instances: Path) -> None:
    result = cli("witness", "structural", instances / "ex92.json")
    assert result.exit_code == 0
    assert "neither a U24 nor an M(K4/e) minor" in result.stdout


def test_localize(cli: Runner, instances: Path) -> None:
    result = cli("localize", instances / "r11.txt", "--alpha", "1,0,0")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0].startswith("elements:")
    assert len(lines) > 1


def test_localize_profile(cli: Runner, instances: Path) -> None:
    result = cli("--json", "localize", instances / "sum_zero_gf8.txt", "--alpha", "1 0 0",
                 "--profile")
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["sigma"] == 1
    assert data["singletons"] == ["0:0", "1:1", "2:1"]
    assert len(data["components"]) == 3


def test_localize_bad_point(cli: Runner, instances: Path) -> None:
    result = cli("localize", instances / "r11.txt", "--alpha", "1,0")
    assert result.exit_code == 1
    assert "point needs 3 coordinates" in result.stderr


def test_matroid_circuits(cli: Runner, instances: Path) -> None:
    result = cli("--json", "matroid", instances / "mk4e_circuits.txt", "--circuits")
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["size"] == 5
    assert len(data["circuits"]) == 6
    assert data["minors"]["U24"] == "absent"
    assert data["minors"]["MK4"] == "absent"
    assert data["minors"]["MK4e"] != "absent"
    assert data["minors"]["A3"] != "absent"


def test_matroid_of_subspace(cli: Runner, instances: Path) -> None:
    result = cli("matroid", instances / "u24_gf4.txt")
    assert result.exit_code == 0
    assert "U24 minor: I=[] J=[]" in result.stdout


def test_sweep_to_file(cli: Runner, tmp_path: Path) -> None:
    out = tmp_path / "sweep.csv"
    result = cli("sweep", "--q", "2", "--n", "2", "--theorem", "1.4", "--out", out)
    assert result.exit_code == 0
    assert "5 subspaces:" in result.stdout
    assert "0 disagree" in result.stdout
    rows = out.read_text().splitlines()
    assert rows[0] == "instance,theorem,polyhedral,structure,minor_free,agreement"
    assert len(rows) == 6


def test_sweep_to_stdout(cli: Runner) -> None:
    result = cli("sweep", "--q", "2", "--n", "2", "--theorem", "mfmc")
    assert result.exit_code == 0
    assert len(result.stdout.splitlines()) == 6
    assert "5 subspaces" in result.stderr
