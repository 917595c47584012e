from collections.abc import Callable, Sequence
from dataclasses import dataclass
from pathlib import Path

import pytest

from clutterforge.cli import main


@dataclass(frozen=True)
class CliResult:
    exit_code: int
    stdout: str
    stderr: str


Runner = Callable[..., CliResult]


@pytest.fixture
def cli(capsys: pytest.CaptureFixture[str]) -> Runner:
    def run(*argv: str | Path) -> CliResult:
        args: Sequence[str] = [str(a) for a in argv]
        code = main(args)
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return run


@pytest.fixture
def instances(data_dir: Path) -> Path:
    return data_dir / "instances"
