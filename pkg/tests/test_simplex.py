import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from graph_cubature.simplex import solve_bounded_lp


def box_range(y, A, lo, hi):
    r = y @ A
    return float(np.sum(np.minimum(r * lo, r * hi))), float(np.sum(np.maximum(r * lo, r * hi)))


def test_small_known_optimum():
    # min -x - y, x + y + s = 4, x,y in [0, 3], s in [0, 10]
    res = solve_bounded_lp([-1, -1, 0], [[1, 1, 1]], [4], [0, 0, 0], [3, 3, 10])
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-4)


def test_infeasible_with_certificate():
    A = np.array([[1.0, 1.0]])
    res = solve_bounded_lp([0, 0], A, [5.0], [0, 0], [1, 1])
    assert res.status == "infeasible"
    assert res.infeasibility == pytest.approx(3.0)
    lo, hi = box_range(res.certificate, A, np.zeros(2), np.ones(2))
    yb = float(res.certificate @ [5.0])
    assert yb > hi + 1e-9 or yb < lo - 1e-9


def test_beale_cycling_instance():
    # Beale's example cycles under the textbook largest-coefficient rule
    A = np.array([
        [0.25, -8, -1, 9, 1, 0, 0],
        [0.5, -12, -0.5, 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ])
    c = np.array([-0.75, 20, -0.5, 6, 0, 0, 0])
    b = np.array([0, 0, 1.0])
    hi = np.full(7, 100.0)
    res = solve_bounded_lp(c, A, b, np.zeros(7), hi)
    assert res.status == "optimal"
    assert res.objective == pytest.approx(-1.25, abs=1e-9)


def test_bad_dimensions():
    with pytest.raises(ValueError):
        solve_bounded_lp([1, 2], [[1, 1]], [1], [0], [1])
    with pytest.raises(ValueError):
        solve_bounded_lp([1], [[1]], [1], [0], [np.inf])


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_matches_scipy(m, extra, seed):
    rng = np.random.default_rng(seed)
    n = m + extra
    A = rng.standard_normal((m, n))
    lo = rng.uniform(-2, 0, n)
    hi = lo + rng.uniform(0, 3, n)
    if rng.random() < 0.7:
        b = A @ rng.uniform(lo, hi)  # feasible by construction
    else:
        b = rng.standard_normal(m) * 5
    c = rng.standard_normal(n)
    ours = solve_bounded_lp(c, A, b, lo, hi)
    ref = linprog(c, A_eq=A, b_eq=b, bounds=list(zip(lo, hi)), method="highs")
    if ref.status == 2:
        assert ours.status == "infeasible"
        return
    assert ref.status == 0
    assert ours.status == "optimal"
    assert ours.objective == pytest.approx(ref.fun, rel=1e-7, abs=1e-7)
    assert np.max(np.abs(A @ ours.x - b)) <= 1e-8 * (1 + np.max(np.abs(b)))
    assert np.all(ours.x >= lo) and np.all(ours.x <= hi)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_certificate_separates(m, seed):
    rng = np.random.default_rng(seed)
    n = m + 3
    A = rng.standard_normal((m, n))
    lo, hi = np.zeros(n), np.ones(n)
    b = rng.standard_normal(m) * 20
    res = solve_bounded_lp(np.zeros(n), A, b, lo, hi)
    if res.status == "infeasible":
        y = res.certificate
        low, high = box_range(y, A, lo, hi)
        assert y @ b > high + 1e-9 or y @ b < low - 1e-9
