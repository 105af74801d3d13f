import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liftproj.combinatorics import family, popcount
from liftproj.moments import (MomentVector, alphabound, bernoulli_moments, chipped_rho_bound, collapsed_w,
                              localizer_chipped, localizer_cropped, mobius_transform, moment_matrix,
                              pd_margin_chipped, superset_mobius, superset_zeta, xi_norm_sq)
from liftproj.symmat import diagonal_scaling, is_psd


def test_bernoulli_m1():
    M = moment_matrix(bernoulli_moments(2, 0.5), 1)
    assert np.allclose(M, [[1, 0.5, 0.5], [0.5, 0.5, 0.25], [0.5, 0.25, 0.5]])


@pytest.mark.parametrize("n", [1, 3, 5])
@pytest.mark.parametrize("theta", [0.2, 0.5, 0.8])
def test_bernoulli_mobius(n, theta):
    u = mobius_transform(bernoulli_moments(n, theta)).values
    s = np.array([popcount(m) for m in range(1 << n)])
    assert np.allclose(u, theta ** s * (1 - theta) ** (n - s))
    assert u.sum() == pytest.approx(1.0)


def test_all_ones_mobius_is_top_indicator():
    n = 4
    u = mobius_transform(MomentVector(n, n, np.ones(1 << n))).values
    assert np.array_equal(u, np.eye(1 << n)[-1])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10 ** 6))
def test_mobius_zeta_inverse(n, seed):
    v = np.random.default_rng(seed).standard_normal(1 << n)
    assert np.allclose(superset_zeta(superset_mobius(v, n), n), v)
    # brute-force definition
    u = superset_mobius(v, n)
    s = int(np.random.default_rng(seed).integers(0, 1 << n))
    ref = sum((-1) ** popcount(t & ~s) * v[t] for t in range(1 << n) if t & s == s)
    assert u[s] == pytest.approx(ref)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_chipped_localizer(n):
    theta, rho = 0.4, 0.3
    w = localizer_chipped(n, theta, rho)
    assert w[0] == pytest.approx(n * (1 - theta) - rho)
    assert np.allclose(localizer_chipped(n, 0.5, rho).values, localizer_cropped(n, rho).values)


@pytest.mark.parametrize("n", [2, 4, 6])
@pytest.mark.parametrize("make", [lambda n: localizer_chipped(n, 0.3, 0.7), lambda n: localizer_cropped(n, 0.7)])
def test_stored_mobius_matches_transform(n, make):
    w = make(n)
    assert np.allclose(w.mobius, mobius_transform(w).values, atol=1e-10)


def test_cropped_n2():
    w = localizer_cropped(2, 0.5)
    assert np.allclose(w.values, [0.5, 0, 0, -0.125])
    assert np.linalg.eigvalsh(moment_matrix(w, 1)).min() == pytest.approx(-0.125)


def test_cropped_n4_levels():
    w = localizer_cropped(4, 0.5)
    assert is_psd(moment_matrix(w, 1))
    assert not is_psd(moment_matrix(w, 2))


@pytest.mark.parametrize("n", range(2, 8))
def test_cropped_top_moment_matrix_never_psd(n):
    for rho in (0.01, 0.2, 1.0):
        w = localizer_cropped(n, rho)
        assert w[(1 << n) - 1] < 0
        assert np.linalg.eigvalsh(moment_matrix(w, n)).min() < 0


def test_moment_matrix_needs_level():
    y = MomentVector.from_cardinality(3, lambda s: 0.5 ** s, level=1)
    moment_matrix(y, 0)
    with pytest.raises(ValueError):
        moment_matrix(y, 1)


def test_xi_norm():
    assert xi_norm_sq(1, 0.5, 0.5) == pytest.approx(4.0)
    vals = [xi_norm_sq(4, 0.6, r) for r in (0.1, 0.3, 0.5, 0.9)]
    assert vals == sorted(vals)
    # log-space branch agrees with the direct sum
    n, t, r = 13, 0.7, 0.4
    direct = sum(math.comb(n, i) / ((n - i - r) * t ** i * (1 - t) ** (n - i)) for i in range(n))
    assert xi_norm_sq(n, t, r) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("n", range(2, 9))
def test_alphabound_special_values(n):
    assert alphabound(n, (n - 1) / n) == pytest.approx(chipped_rho_bound(n), rel=1e-12)
    assert alphabound(n, 0.5) == pytest.approx((n + 1) / (2 ** (n + 2) - n - 3), rel=1e-12)


def test_chipped_rho_bound_n3():
    assert chipped_rho_bound(3) == pytest.approx(8 / 152)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("theta", [0.3, 0.5, 0.8])
def test_pd_margin_tracks_eigenvalues(n, theta):
    # margin 1 - ρθ^n ξᵀξ is positive exactly where M_{n-1}(w) is PD
    lo = 0.99 * alphabound(n, theta)
    hi = 1.01 * alphabound(n, theta)
    for rho in (lo, hi):
        if rho >= 1:
            continue
        M = moment_matrix(localizer_chipped(n, theta, rho), n - 1)
        pos = np.linalg.eigvalsh(diagonal_scaling(M, np.diag(M) ** -0.5)).min() > 0
        assert pos == (pd_margin_chipped(n, theta, rho) > 0)
    assert pd_margin_chipped(n, theta, lo) > 0


def test_collapsed_w_n2():
    assert np.allclose(collapsed_w(2, 0.5), [[0.5, 0], [0, -0.25]])


@pytest.mark.parametrize("n", range(2, 9))
def test_collapsed_w_matches_double_sum(n):
    rho = 0.37
    M = moment_matrix(localizer_cropped(n, rho), n - 1)
    sizes = np.array([popcount(c.ones) for c in family(n, n - 1, "A+")])
    W = np.array([[M[np.ix_(sizes == i, sizes == j)].sum() for j in range(n)] for i in range(n)])
    assert np.allclose(collapsed_w(n, rho), W, rtol=1e-12, atol=1e-12)


def test_collapsed_n3_threshold():
    assert is_psd(collapsed_w(3, 0.177), tol=0)
    assert not is_psd(collapsed_w(3, 0.178), tol=0)
