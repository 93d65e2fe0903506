"""Shared pytest wiring.

Emits one ``acceptance NN: PASS|FAIL`` line per acceptance test through
the terminal reporter.  Output capture would swallow a plain print from
inside a passing test, so the verdict is derived from the test outcome
instead.
"""

import pytest


def _tag(nodeid):
    if "test_acceptance.py::test_" not in nodeid:
        return None
    name = nodeid.rsplit("::", 1)[1]
    parts = name.split("_")
    if len(parts) > 1 and parts[1].isdigit():
        return parts[1]
    return None


class AcceptanceLines:
    def __init__(self, config):
        self._config = config
        self._done = set()

    @pytest.hookimpl(trylast=True)
    def pytest_runtest_logreport(self, report):
        tag = _tag(report.nodeid)
        if tag is None or report.nodeid in self._done:
            return
        # a setup failure means the test body never ran: still a verdict
        if report.when != "call" and not (report.when == "setup" and report.failed):
            return
        # the reporter registers after conftest configure, so look it up late
        reporter = self._config.pluginmanager.get_plugin("terminalreporter")
        if reporter is None:
            return
        self._done.add(report.nodeid)
        outcome = "PASS" if report.passed else "FAIL"
        reporter.write_line(f"acceptance {tag}: {outcome}")


def pytest_configure(config):
    config.pluginmanager.register(AcceptanceLines(config))
