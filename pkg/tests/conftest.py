import pytest

from fdi.config import load_config
from fdi.fleet import compute_normalization
from fdi.wing import WingScalingRules, load_twist


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def twist():
    return load_twist()


@pytest.fixture(scope="session")
def rules(cfg):
    return WingScalingRules.from_config(cfg)


@pytest.fixture(scope="session")
def norm(cfg, twist):
    return compute_normalization(cfg, twist)


_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record a numbered acceptance verdict and fail the test when it does not hold."""

    def record(number, title, ok, detail):
        _ACCEPTANCE[number] = (title, bool(ok), detail)
        assert ok, f"criterion {number} ({title}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")
