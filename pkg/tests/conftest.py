import numpy as np
import pytest

from graph_cubature import (
    Graph,
    cluster_spectral,
    compute_constants,
    graph_spectrum,
    make_average,
    normalize,
)
from graph_cubature.generators import CommunitySpec, gen_community


@pytest.fixture
def barbell():
    """Two unit triangles joined by one bridge of weight 0.01."""
    return gen_community(CommunitySpec(2, 3, 1.0, 1.0, 0.01, 1, seed=0))


@pytest.fixture
def barbell_setup(barbell):
    g, p = barbell
    sd = graph_spectrum(g)
    cs = cluster_spectral(g, p)
    ff = make_average(p, g.n)
    nf = normalize(ff, cs)
    return g, p, sd, cs, ff, nf, compute_constants(ff, nf, p, cs)


@pytest.fixture
def p2():
    return Graph(2, ((0, 1, 1.0),))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append(report)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for rep in _ACCEPTANCE:
        props = dict(rep.user_properties)
        label = props.get("criterion", rep.nodeid.split("::")[-1])
        status = "PASS" if rep.passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label} ({rep.duration:.2f}s)")
