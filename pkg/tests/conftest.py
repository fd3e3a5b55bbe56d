import numpy as np
import pytest

from chainsurvival import analyze, build_chain, resonance_params

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def weak():
    """Weak-coupling parameter set: eps0 = V, v0 = 0.4 V."""
    return build_chain(1.0, 0.4, 1.0)


@pytest.fixture(scope="session")
def strong():
    """Strong-coupling parameter set: eps0 = 1.8 V, v0 = 0.77 V."""
    return build_chain(1.8, 0.77, 1.0)


@pytest.fixture(scope="session")
def weak_res(weak):
    return resonance_params(weak)


@pytest.fixture(scope="session")
def strong_res(strong):
    return resonance_params(strong)


@pytest.fixture(scope="session")
def weak_analysis(weak):
    return analyze(weak)


@pytest.fixture(scope="session")
def strong_analysis(strong):
    return analyze(strong)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _ACCEPTANCE.append((str(number), title, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE, key=lambda r: (len(r[0]), r[0])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")
