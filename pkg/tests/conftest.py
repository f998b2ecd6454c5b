"""Collects the acceptance verdicts and prints one line per criterion at the end."""

import pytest

_VERDICTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    k = mark.args[0]
    detail = "; ".join(str(v) for name, v in item.user_properties if name == "detail")
    ok = rep.passed and _VERDICTS.get(k, (True, ""))[0]
    if rep.failed:
        detail = detail or str(rep.longrepr).strip().splitlines()[-1]
    _VERDICTS[k] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_VERDICTS):
        ok, detail = _VERDICTS[k]
        terminalreporter.write_line(f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}")
