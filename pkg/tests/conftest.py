"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from __future__ import annotations

_RESULTS: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args))


def pytest_runtest_logreport(report):
    info = dict(report.user_properties).get("criterion")
    if info is None:
        return
    number, text = info
    entry = _RESULTS.setdefault(number, {"text": text, "ok": True, "seconds": 0.0, "seen": False})
    if report.when == "call":
        entry["seen"] = True
        entry["seconds"] += report.duration
    if report.failed or report.skipped and report.when == "call":
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        verdict = "PASS" if e["ok"] and e["seen"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {e['text']}  ({e['seconds']:.2f} s)")
