"""Collects acceptance outcomes and prints one line per criterion at the end."""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion check")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if call.excinfo is not None:
        detail = f"{detail} | {call.excinfo.exconly().splitlines()[0]}".strip(" |")
    _RESULTS[number] = (title, call.excinfo is None, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, detail = _RESULTS[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} -- {detail}")
