from __future__ import annotations

import pytest

_ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


class AcceptanceRecorder:
    """Collects one PASS/FAIL line per acceptance criterion."""

    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.notes: list[str] = []
        self.ok = True

    def check(self, ok: bool, note: str) -> bool:
        self.notes.append(("ok " if ok else "BAD ") + note)
        self.ok = self.ok and bool(ok)
        return ok

    def note(self, text: str):
        self.notes.append(text)


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    number, title = marker.args
    rec = AcceptanceRecorder(number, title)
    failed = True
    try:
        yield rec
        failed = False
    finally:
        ok = rec.ok and not failed and not getattr(request.node, "_call_failed", False)
        _ACCEPTANCE[number] = (ok, title, "; ".join(rec.notes[-4:]))
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title}"
        print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed:
        item._call_failed = True


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, title, notes = _ACCEPTANCE[number]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}: {title}")
        if notes:
            tr.write_line(f"        {notes}")
