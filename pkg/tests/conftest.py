import pytest
from hypothesis import HealthCheck, settings

from k3mirror import kernels

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(params=kernels.backends(), ids=lambda m: m.BACKEND)
def backend(request, monkeypatch):
    """Route the form code through one kernel backend for the test."""
    mod = request.param
    monkeypatch.setattr(kernels, "q_values", mod.q_values)
    monkeypatch.setattr(kernels, "iso_backtrack", mod.iso_backtrack)
    return mod


ACCEPTANCE = {}


@pytest.fixture
def verdict(request):
    """Record the one-line outcome of an acceptance criterion."""
    key = request.node.name

    def record(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}"
        ACCEPTANCE[key] = (number, line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE.values()):
        terminalreporter.write_line(line)
