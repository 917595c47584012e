from collections.abc import Callable
from pathlib import Path

import pytest

from clutterforge.formats import parse_subspace
from clutterforge.gf import FieldSpec, build_field
from clutterforge.vspace import Subspace, span


@pytest.fixture
def data_dir() -> Path:
    here = Path(__file__)
    return here.parent / "data"


@pytest.fixture
def instance(data_dir: Path) -> Callable[[str], Subspace]:
    def load(name: str) -> Subspace:
        return parse_subspace((data_dir / "instances" / name).read_text())

    return load


@pytest.fixture
def gf2() -> FieldSpec:
    return build_field(2)


@pytest.fixture
def gf3() -> FieldSpec:
    return build_field(3)


@pytest.fixture
def gf4() -> FieldSpec:
    return build_field(4)


@pytest.fixture
def r11(gf2: FieldSpec) -> Subspace:
    return span(gf2, 3, [(1, 0, 1), (0, 1, 1)])


@pytest.fixture
def ex92(gf4: FieldSpec) -> Subspace:
    return span(gf4, 3, [(1, 1, 0), (1, 0, 1)])


@pytest.fixture
def delta3_gf3(gf3: FieldSpec) -> Subspace:
    return span(gf3, 3, [(1, 1, 0), (1, 0, 1)])
