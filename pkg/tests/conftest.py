"""Acceptance registry: criteria record a verdict line, printed after the run."""

import pytest

CRITERIA = {
    1: "box-count law",
    2: "no nested supports",
    3: "partition of unity",
    4: "grading bounds",
    5: "spanning condition",
    6: "shadow equivalence on tensor meshes",
    7: "knot-insertion identity",
    8: "insertion-order independence",
    9: "closest-first vs batched grader fixture",
    10: "variant asymmetry",
}

_verdicts: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    def _record(number: int, ok: bool, detail: str) -> None:
        _verdicts[number] = (bool(ok), detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance")
    for n, name in CRITERIA.items():
        ok, detail = _verdicts.get(n, (False, "not run"))
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n:2d}. {name}: {detail}")
