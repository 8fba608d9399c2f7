import re

import pytest

from avlrot import available_backends

BACKENDS = sorted(available_backends())


@pytest.fixture(params=BACKENDS)
def backend(request):
    """Runs a test once per importable kernel."""
    return request.param


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    results = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", nodeid)
            if m is None:
                continue
            num = int(m.group(1))
            verdict = "PASS" if outcome == "passed" else "FAIL"
            if results.get(num) != "FAIL":
                results[num] = verdict
    if results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for num in sorted(results):
            terminalreporter.write_line(f"criterion {num}: {results[num]}")
