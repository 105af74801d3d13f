import math

import numpy as np
import pytest

from liftproj.analysis import (FIG_HEADERS, bisect_threshold, check_collapse, check_pd_rule, check_factorization, check_localizer_identity,
                               cheung_upper, las_rank_profile, figure_data, gap_chipped, gap_formula,
                               las_cropped_level_ok, las_rank_cropped, level_thresholds_millis, log_base, p_of_n,
                               p_oracle, q_bounds, q_generalized_eig, q_of_n, scaled_min_eig)
from liftproj.combinatorics import SizeGuardError
from liftproj.moments import chipped_rho_bound, collapsed_w, localizer_chipped, localizer_cropped, moment_matrix
from liftproj.symmat import is_psd

# independently computed with the generalized eigenvalue route and cross-checked
# against the full moment matrix for n <= 11
Q_FROZEN = {
    2: 0.292893218813, 3: 0.177124344468, 4: 0.107610285886, 5: 0.0649539076703, 6: 0.0387480654835,
    7: 0.0227924860425, 8: 0.0132127748917, 9: 0.00755238992243, 10: 0.00426140162756,
    11: 0.00237687791236, 12: 0.00131243714220,
}
NORMALIZED_FROZEN = {13: 0.9054, 14: 0.9135, 15: 0.9205, 16: 0.9264}
# log_n p(n), scalar root in log space, confirmed at 50 digits for n = 11
LOGP_FROZEN = {2: -1.77155, 3: -2.48574, 4: -3.29020, 5: -4.18254, 6: -5.12620,
               7: -6.09436, 8: -7.07443, 9: -8.06093, 10: -9.05124, 11: -10.04399}


def test_bisect_threshold():
    lo, hi = bisect_threshold(lambda x: x <= 0.3, 0.0, 1.0, 1e-10)
    assert lo <= 0.3 < hi and hi - lo <= 1e-10


def test_scaled_min_eig_sign():
    a = np.array([[1e-8, 0], [0, -1.0]])
    assert scaled_min_eig(a, np.array([1e-8, 1.0])) < 0


def test_las_rank_examples():
    assert las_rank_cropped(2, 0.5).rank == 1
    assert las_rank_cropped(4, 0.5).rank == 2
    assert las_rank_cropped(3, 0.1).rank == 3
    assert las_rank_cropped(3, 0.2).rank == 2
    assert las_rank_cropped(6, 0.5).rank == 3
    assert las_rank_cropped(9, 0.5).rank == 5
    assert las_rank_cropped(4, 2.5).rank == 0
    with pytest.raises(SizeGuardError):
        las_rank_cropped(13, 0.1)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_level_check_matches_direct_eigensolve(n):
    for k in range(1, n):
        for rho in (0.05, 0.17, 0.3, 0.45):
            m = moment_matrix(localizer_cropped(n, rho), k)
            d = np.diag(m)
            if np.any(d <= 0):
                continue
            direct = np.linalg.eigvalsh(m / np.sqrt(np.outer(d, d))).min() >= 0
            assert las_cropped_level_ok(n, k, rho) == direct


@pytest.mark.parametrize("n", range(2, 13))
def test_q_frozen(n):
    q = q_of_n(n, tol=1e-12)
    assert q.value == pytest.approx(Q_FROZEN[n], rel=1e-9)
    lo, hi = q_bounds(n)
    assert lo < q.value < hi


def test_q_n2_closed_form():
    assert q_of_n(2, tol=1e-13).value == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-12)


@pytest.mark.parametrize("n", range(2, 10))
def test_q_modes_agree(n):
    w = q_of_n(n, tol=1e-11).value
    assert q_of_n(n, tol=1e-11, mode="full").value == pytest.approx(w, abs=1e-10)
    assert q_generalized_eig(n) == pytest.approx(w, abs=1e-9)


@pytest.mark.parametrize("n", range(13, 17))
def test_q_normalized_frozen(n):
    q = q_of_n(n).value
    assert 2 ** (n + 1) * q / n == pytest.approx(NORMALIZED_FROZEN[n], abs=1e-4)


def test_q_errors():
    with pytest.raises(ValueError):
        q_of_n(3, mode="bogus")
    with pytest.raises(SizeGuardError):
        q_of_n(13, mode="full")


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("theta", [0.55, 0.75, 0.95])
def test_p_oracle_modes_agree(n, theta):
    s = p_oracle(n, theta)
    e = p_oracle(n, theta, tol=1e-10, mode="eigen")
    assert e == pytest.approx(s, rel=1e-6, abs=1e-8)
    below = moment_matrix(localizer_chipped(n, theta, 0.999 * s), n - 1)
    d = np.sqrt(np.diag(below))
    assert np.linalg.eigvalsh(below / np.outer(d, d)).min() > 0


@pytest.mark.parametrize("n", range(2, 12))
def test_p_frozen(n):
    p = p_of_n(n)
    assert log_base(n, p.value) == pytest.approx(LOGP_FROZEN[n], abs=1e-5)
    assert p.argument == pytest.approx((n - 1) / n)
    assert p.data["at_boundary"]
    assert p.value >= chipped_rho_bound(n) * (1 - 1e-9)


def test_gap_formula_examples():
    assert gap_formula(3, 1, 0.5) == pytest.approx(1.2)
    for rho in (0.01, 0.1, 0.5, 0.9):
        assert gap_formula(10, 10, rho) == pytest.approx(1.0)
    assert gap_formula(10, 0, 0.1) == pytest.approx(1 + 0.9 / 9)


@pytest.mark.parametrize("n", range(2, 8))
@pytest.mark.parametrize("rho", [0.1, 0.5, 0.9])
def test_gap_lp_oracle(n, rho):
    g = gap_chipped(n, 0, rho, oracle="lp")
    assert g.gap == pytest.approx(gap_formula(n, 0, rho), abs=1e-9)
    assert g.numerator == pytest.approx(n - rho)


def test_gap_errors():
    with pytest.raises(ValueError):
        gap_chipped(4, 1, 0.5, oracle="lp")
    with pytest.raises(ValueError):
        gap_chipped(4, 1, 1.5)


@pytest.mark.parametrize("n", range(2, 12))
def test_gap_decreasing_in_k(n):
    for rho in (0.1, 0.5, 0.9):
        g = [gap_formula(n, k, rho) for k in range(n + 1)]
        assert all(a > b for a, b in zip(g, g[1:]))


def test_cheung_upper():
    assert cheung_upper(4, 0.5) == 3
    assert cheung_upper(5, 0.5) is None
    assert cheung_upper(6, 0.1) is None


def test_rank_profile_rows():
    rows, meta = las_rank_profile(3)
    assert meta["drops"] == [178] and meta["monotone"]
    assert rows[0] == (3, 1, 3) and rows[-1] == (3, 500, 2)
    _, meta6 = las_rank_profile(6)
    assert meta6["drops"] == [39, 187, 494]
    assert las_rank_profile(9)[1]["drops"] == [8, 52, 173, 402]
    assert level_thresholds_millis(3) == [500, 177]
    assert level_thresholds_millis(9) == [500, 500, 500, 500, 401, 172, 51, 7]


@pytest.mark.parametrize("n", [3, 6])
def test_rank_profile_agrees_with_scan(n):
    rows, _ = las_rank_profile(n)
    for _, lam, rank in rows[::37]:
        assert las_rank_cropped(n, lam / 1000).rank == rank


def test_figure_data_shapes():
    header, rows, _ = figure_data("fig6")
    assert header == FIG_HEADERS["fig6"] and len(rows) == 44
    assert all(r[3] == pytest.approx(1.0) for r in rows if r[1] == 10)
    header, rows, _ = figure_data("fig3", ns=[2, 3])
    assert rows[0][4] == pytest.approx(2 ** 3 * Q_FROZEN[2] / 2, rel=1e-9)
    header, rows, meta = figure_data("fig2", ns=[3])
    assert rows[0][1] == pytest.approx(LOGP_FROZEN[3], abs=1e-5) and meta[0]["at_boundary"]
    with pytest.raises(ValueError):
        figure_data("fig5")


def test_figure_threads_deterministic():
    a = figure_data("fig3", ns=[3, 4, 5], threads=1)[1]
    b = figure_data("fig3", ns=[3, 4, 5], threads=3)[1]
    assert a == b


@pytest.mark.parametrize("n", range(2, 9))
def test_identities(n):
    assert check_factorization(n, trials=20).passed
    assert check_localizer_identity(n).passed
    assert check_pd_rule(n).passed


@pytest.mark.parametrize("n", range(2, 9))
def test_collapse_consistency(n):
    r = check_collapse(n)
    assert r.passed, r.details


def test_collapse_n3_threshold():
    assert is_psd(collapsed_w(3, Q_FROZEN[3] - 1e-6), tol=0)
    assert not is_psd(collapsed_w(3, Q_FROZEN[3] + 1e-6), tol=0)
