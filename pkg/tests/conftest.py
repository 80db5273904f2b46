import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=150, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")
    config.addinivalue_line("markers", "slow: long-running check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _criteria[num] = (text, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        text, status = _criteria[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {text}")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timing checks measure the computation."""
    from weylhp import _kernels as K

    exps = np.array([[1, 0, 0, 1, 0, 0, 0, 0]], dtype=K.EXP_DTYPE)
    coeffs = np.array([1], dtype=np.int64)
    e, c = K.shift_expand(exps, coeffs, 2)
    e, c = K.times_linear_form(e, c, 2)
    K.orbit_reduce(e, c, 2, False, both=True)
    K.orbit_reduce(e, c, 2, True)
    K.symmetrize(e, c, 2, both=True)
