import pytest

from kfree import _accel

BACKENDS = ["numba", "numpy"] if _accel.HAVE_NUMBA else ["numpy"]

_criteria = {}


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    monkeypatch.setattr(_accel, "USE_NUMBA", request.param == "numba")
    return request.param


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion.

    Usage: ``criterion(3, "recursions", detail)``; the verdict is PASS unless
    the test body raises afterwards.
    """
    def record(number, title, detail=""):
        _criteria[request.node.nodeid] = [number, title, detail, None]

    yield record
    entry = _criteria.get(request.node.nodeid)
    if entry is not None and entry[3] is None:
        entry[3] = "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    entry = _criteria.get(item.nodeid)
    if entry is not None and rep.when == "call" and rep.failed:
        entry[3] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, detail, verdict in sorted(_criteria.values(), key=lambda e: e[0]):
        line = f"[{verdict or 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" | {detail}"
        terminalreporter.write_line(line)
