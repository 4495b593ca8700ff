"""Shared fixtures: compile kernels once so timed tests measure math, not JIT."""

import sys

import pytest

import cpass


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    cpass.warmup()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance-gate verdict lines after the capture ends."""
    module = (sys.modules.get("test_acceptance")
              or sys.modules.get("tests.test_acceptance"))
    lines = getattr(module, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance gate")
        for line in lines:
            terminalreporter.write_line(line)
