import numpy as np
import pytest

from sl2cqsp.algebra import expm_traceless


def random_traceless(rng, scale=1.0):
    c = rng.normal(size=3) + 1j * rng.normal(size=3)
    c *= scale / np.linalg.norm(c)
    return np.array([[c[2], c[0] - 1j * c[1]], [c[0] + 1j * c[1], -c[2]]])


def random_sl2c(rng, scale=1.0):
    return expm_traceless(random_traceless(rng, scale))


def random_schedule(rng, length=None, max_len=17):
    n = length if length is not None else rng.integers(1, max_len + 1)
    return rng.uniform(-np.pi, np.pi, n)


@pytest.fixture
def rng():
    return np.random.default_rng(20260214)


# ------------------------------------------------------- acceptance reporting

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
        _ACCEPTANCE[marker.args[0]] = (marker.args[1], report.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        line = f"{'PASS' if ok else 'FAIL'} {n:>2}. {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
