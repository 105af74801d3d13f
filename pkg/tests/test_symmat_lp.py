import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from liftproj.lp import InfeasibleError, LpProblem, UnboundedError, lp_feasible, lp_max, solve
from liftproj.symmat import (congruence, diagonal_scaling, eigenvalues, format_real, is_pd, is_psd,
                             quadratic_form, read_csv, write_csv)


def test_psd_basics():
    assert is_psd(np.zeros((3, 3)))
    assert not is_pd(np.zeros((3, 3)))
    assert is_pd(np.eye(2))
    assert not is_psd(np.diag([1.0, -1e-3]))
    assert is_psd(np.diag([1.0, -1e-12]))  # inside the relative band


def test_eigen_rejects_bad_input():
    with pytest.raises(ValueError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(ValueError):
        eigenvalues(np.array([[np.nan, 0], [0, 1]]))
    with pytest.raises(ValueError):
        is_psd(np.eye(2), tol=-1)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10 ** 6))
def test_diagonal_scaling_keeps_inertia(m, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((m, m))
    a = a + a.T
    w = rng.uniform(0.01, 10, m)
    ev0 = np.linalg.eigvalsh(a)
    ev1 = np.linalg.eigvalsh(diagonal_scaling(a, w))
    gap = np.abs(ev0).min()
    if gap > 1e-6:
        assert np.sum(ev0 > 0) == np.sum(ev1 > 0)


def test_congruence_and_quadratic_form():
    l = np.array([[1.0, 2.0], [0.0, 1.0]])
    a = np.diag([1.0, 2.0])
    assert np.allclose(congruence(l, a), l @ a @ l.T)
    assert quadratic_form([1, 1], a) == 3.0
    with pytest.raises(ValueError):
        congruence(np.ones((2, 3)), a)


def test_csv_roundtrip():
    a = np.array([[0.1, 1 / 3], [2e-17, -5.0]])
    buf = io.StringIO()
    write_csv(a, buf)
    assert np.array_equal(read_csv(buf.getvalue().splitlines()), a)
    assert format_real(0.1) == "0.10000000000000001"


def test_lp_simple():
    # max x + y with x + 2y <= 4, 3x + y <= 6
    p = LpProblem(2, G=[[-1, -2], [-3, -1]], g0=[4, 6], objective=[1, 1])
    assert solve(p).value == pytest.approx(2.8)
    assert lp_feasible(p)


def test_lp_infeasible_unbounded():
    with pytest.raises(InfeasibleError):
        solve(LpProblem(1, G=[[-1.0]], g0=[-1.0]))  # x <= -1
    assert not lp_feasible(LpProblem(1, E=[[1.0]], e=[-2.0]))
    with pytest.raises(UnboundedError):
        lp_max(LpProblem(1, objective=[1.0]))


def test_lp_redundant_equalities():
    p = LpProblem(2, E=[[1, 1], [2, 2]], e=[1, 2], objective=[1, 0])
    assert lp_max(p) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_lp_against_scipy(nv, mi, me, seed):
    rng = np.random.default_rng(seed)
    G = rng.integers(-3, 4, (mi, nv)).astype(float)
    g0 = rng.integers(-2, 6, mi).astype(float)
    E = rng.integers(-2, 3, (me, nv)).astype(float)
    x0 = rng.uniform(0, 2, nv)
    e = E @ x0
    c = rng.integers(-3, 4, nv).astype(float)
    # bound the region so the reference never reports unboundedness
    G = np.vstack([G, -np.eye(nv)])
    g0 = np.concatenate([g0, np.full(nv, 5.0)])
    ref = linprog(-c, A_ub=-G, b_ub=g0, A_eq=E if me else None, b_eq=e if me else None,
                  bounds=[(0, None)] * nv, method="highs")
    p = LpProblem(nv, G=G, g0=g0, E=E, e=e, objective=c)
    if ref.status == 2:
        with pytest.raises(InfeasibleError):
            solve(p)
    else:
        assert ref.status == 0
        assert solve(p).value == pytest.approx(-ref.fun, abs=1e-7)
