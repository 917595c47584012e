import pytest

from clutterforge.verify import Theorem, subspace_count, sweep


@pytest.mark.slow
@pytest.mark.parametrize(
    "q,n,theorem",
    [
        (3, 2, Theorem.ODD),
        (3, 3, Theorem.ODD),
        (3, 4, Theorem.ODD),
        (5, 2, Theorem.ODD),
        (5, 3, Theorem.ODD),
        (4, 2, Theorem.GF4),
        (4, 3, Theorem.GF4),
        (8, 3, Theorem.EVEN),
        (2, 3, Theorem.MFMC),
        (3, 2, Theorem.MFMC),
        (3, 3, Theorem.MFMC),
    ],
)
def test_sweep_has_no_disagreements(q: int, n: int, theorem: Theorem) -> None:
    reports, summary = sweep(q, n, theorem)
    assert summary.total == len(reports) == subspace_count(q, n)
    assert summary.disagreements == 0
    assert summary.unknowns == 0


@pytest.mark.slow
def test_sweep_in_worker_processes() -> None:
    serial, _ = sweep(3, 2, Theorem.ODD)
    parallel, summary = sweep(3, 2, Theorem.ODD, jobs=2)
    assert [r.instance for r in parallel] == [r.instance for r in serial]
    assert [r.agreement for r in parallel] == [r.agreement for r in serial]
    assert summary.disagreements == 0
