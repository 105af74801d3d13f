"""Las-rank scans, the q(n) and p(n) thresholds, integrality gaps and the
plot-ready CSV tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .combinatorics import SizeGuardError, family, popcounts
from .moments import (bernoulli_moments, chipped_rho_bound, collapsed_w_parts, localizer_chipped,
                      localizer_cropped, moment_matrix, xi_norm_sq)
from .polytopes import chipped, integer_points, lp_max_over, lp_max_over_points
from .symmat import DEFAULT_TOL, eigenvalues

GOLDEN = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class RankResult:
    family: str
    n: int
    rho: float
    operator: str
    rank: int | None
    method: str  # formula | psd-scan | certificate
    bounds: tuple[int, int] | None = None
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ThresholdResult:
    n: int
    value: float
    bracket: tuple[float, float]
    tol: float
    argument: float | None = None  # maximising θ for p(n)
    data: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GapResult:
    n: int
    k: int
    rho: float
    direction: str
    gap: float
    numerator: float | None = None
    denominator: float | None = None


# ---- PSD tests on diagonally rescaled pencils A - ρB

def scaled_min_eig(a: np.ndarray, weights: np.ndarray) -> float:
    """λ_min of D a D with D = diag(weights)^{-1/2}.  Same sign as λ_min(a)."""
    d = 1.0 / np.sqrt(weights)
    return eigenvalues(a * d[:, None] * d[None, :]).smallest


def _pencil_psd(a: np.ndarray, b: np.ndarray, tol: float) -> Callable[[float], bool]:
    w = np.diag(b).copy()
    d = 1.0 / np.sqrt(w)
    sa = a * d[:, None] * d[None, :]
    sb = b * d[:, None] * d[None, :]

    def ok(rho: float) -> bool:
        ev = eigenvalues(sa - rho * sb)
        return ev.smallest >= -tol * max(1.0, abs(ev.largest))

    return ok


def bisect_threshold(ok: Callable[[float], bool], lo: float, hi: float, tol: float,
                     relative: bool = False) -> tuple[float, float]:
    """Shrink [lo, hi] with ok(lo) true and ok(hi) false.  With ``relative``
    the midpoint is geometric and the stopping rule is hi - lo <= tol·hi."""
    while hi - lo > (tol * hi if relative else tol):
        mid = math.sqrt(lo * hi) if relative and lo > 0 else 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _bracket(ok: Callable[[float], bool], start: float, limit: float = 1e6) -> float:
    hi = start
    while ok(hi):
        hi *= 2
        if hi > limit:
            raise RuntimeError("no failing point found")
    return hi


# ---- cropped hypercube

def cropped_pencil(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) with M_k(localizer_cropped(n, ρ)) = A - ρB."""
    m = family(n, k, "A+").ones
    s = popcounts(m[:, None] | m[None, :]).astype(float)
    return (n - s) * 2.0 ** (-s - 1), 2.0 ** (-s)


def las_cropped_level_ok(n: int, k: int, rho: float, tol: float = 0.0) -> bool:
    a, b = cropped_pencil(n, k)
    return _pencil_psd(a, b, tol)(rho)


def las_rank_cropped(n: int, rho: float, tol: float = 0.0) -> RankResult:
    """Smallest k with Las^k(Q(n, ρ)) empty, scanning M_k(w) upwards."""
    if n > 12:
        raise SizeGuardError("las_rank_cropped needs n <= 12")
    if not rho > 0:
        raise ValueError("rho must be positive")
    if rho > n / 2:
        return RankResult("cropped", n, rho, "Las", 0, "psd-scan", data={"reason": "Q is empty"})
    for k in range(1, n):
        if not las_cropped_level_ok(n, k, rho, tol):
            return RankResult("cropped", n, rho, "Las", k, "psd-scan", data={"failing_level": k})
    return RankResult("cropped", n, rho, "Las", n, "psd-scan", data={"failing_level": None})


def q_bounds(n: int) -> tuple[float, float]:
    return (n + 1) / (2 ** (n + 2) - n - 3), n / (2 ** (n + 1) - 2)


def q_of_n(n: int, tol: float = 1e-9, mode: str = "W", psd_tol: float = 0.0) -> ThresholdResult:
    """Largest ρ with M_{n-1}(localizer_cropped(n, ρ)) PSD, by bisection.

    ``mode`` "W" uses the n x n collapsed matrix, "full" the whole moment
    matrix.  Both pencils are rescaled by the diagonal of their ρ-part.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if mode == "W":
        if n > 16:
            raise SizeGuardError("W mode supports n <= 16")
        a, b = collapsed_w_parts(n)
    elif mode == "full":
        if n > 12:
            raise SizeGuardError("full mode supports n <= 12")
        a, b = cropped_pencil(n, n - 1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ok = _pencil_psd(a, b, psd_tol)
    hi = _bracket(ok, 2.0 ** -n)
    lo, hi = bisect_threshold(ok, 0.0, hi, tol)
    return ThresholdResult(n, lo, (lo, hi), tol, data={"mode": mode, "bounds": q_bounds(n)})


def q_generalized_eig(n: int, mode: str = "W") -> float:
    """Smallest generalized eigenvalue of (A, B): an independent route to q(n)."""
    from scipy.linalg import eigh

    a, b = collapsed_w_parts(n) if mode == "W" else cropped_pencil(n, n - 1)
    return float(eigh(a, b, eigvals_only=True, subset_by_index=[0, 0])[0])


# ---- chipped hypercube

def chipped_pencil(n: int, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) with M_{n-1}(localizer_chipped(n, θ, ρ)) = A - ρB."""
    m = family(n, n - 1, "A+").ones
    s = popcounts(m[:, None] | m[None, :]).astype(float)
    return (n - s) * (1 - theta) * theta ** s, theta ** s


def _scalar_root(n: int, theta: float, tol: float) -> float:
    from scipy.optimize import brentq

    f = lambda r: math.log(r) + n * math.log(theta) + math.log(xi_norm_sq(n, theta, r))  # noqa: E731
    lo, hi = 1e-300, 1 - 1e-15
    if f(hi) < 0:
        return hi
    return brentq(f, lo, hi, xtol=1e-300, rtol=max(tol, 4 * np.finfo(float).eps), maxiter=500)


def p_oracle(n: int, theta: float, tol: float = 1e-12, mode: str = "scalar", psd_tol: float = 0.0) -> float:
    """Largest ρ with M_{n-1}(localizer_chipped(n, θ, ρ)) PSD.

    "scalar" solves ρθⁿ·ξᵀξ = 1; "eigen" bisects on the rescaled matrix.
    ``tol`` is relative, since the threshold decays like n^{-n}.
    """
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if mode == "scalar":
        if n > 16:
            raise SizeGuardError("scalar mode supports n <= 16")
        return _scalar_root(n, theta, tol)
    if mode != "eigen":
        raise ValueError(f"unknown mode {mode!r}")
    if n > 11:
        raise SizeGuardError("eigen mode supports n <= 11")
    a, b = chipped_pencil(n, theta)
    ok = _pencil_psd(a, b, psd_tol)
    if not ok(1e-300):
        return 0.0
    hi = _bracket(ok, 1e-3 * float(n) ** -n)
    lo = hi / 2
    while not ok(lo):
        lo /= 2
    lo, hi = bisect_threshold(ok, lo, hi, tol, relative=True)
    return lo


def p_of_n(n: int, tol: float = 1e-12, grid: int = 64, mode: str = "scalar") -> ThresholdResult:
    """sup over θ ∈ ((n-1)/n, 1) of p_oracle, by a grid and golden-section refinement.

    The left end of the interval is included in the grid as a limit point;
    when it wins, the value is a supremum that no admissible θ attains.
    """
    left = (n - 1) / n
    thetas = left + (1 - left) * np.arange(grid) / grid  # first point is the open end
    vals = np.array([p_oracle(n, t, tol, mode) for t in thetas])
    i = int(np.argmax(vals))
    a = thetas[max(i - 1, 0)]
    b = thetas[min(i + 1, grid - 1)]
    f = lambda t: p_oracle(n, t, tol, mode)  # noqa: E731
    best_t, best = thetas[i], vals[i]
    if i > 0:
        c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
        fc, fd = f(c), f(d)
        while b - a > 1e-10:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = f(d)
        for t, v in ((c, fc), (d, fd)):
            if v > best:
                best_t, best = t, v
    return ThresholdResult(n, float(best), (float(best), float(best)), tol, float(best_t),
                           data={"at_boundary": i == 0 and best_t == left, "lower_bound": chipped_rho_bound(n)})


def log_base(n: int, v: float) -> float:
    return math.log(v) / math.log(n)


# ---- integrality gaps

def gap_formula(n: int, k: int, rho: float) -> float:
    return 1 + (n - k) * (1 - rho) / ((n - 1) * (n - k + k * rho))


def gap_chipped(n: int, k: int, rho: float, oracle: str = "formula") -> GapResult:
    """Integrality gap of Γ^k(P(n, ρ)) along ē; ``oracle="lp"`` recomputes
    the k = 0 value as a ratio of two LPs."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < rho < 1:
        raise ValueError("rho must lie in (0, 1)")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    g = gap_formula(n, k, rho)
    if oracle == "formula":
        return GapResult(n, k, rho, "e", g)
    if oracle != "lp" or k != 0:
        raise ValueError("the LP oracle covers k = 0 only")
    desc = chipped(n, rho)
    num = lp_max_over(desc, np.ones(n))
    den = lp_max_over_points(integer_points(desc), np.ones(n))
    return GapResult(n, k, rho, "e", num / den, num, den)


def cheung_upper(n: int, rho: float) -> int | None:
    """Known Las-rank bound n - 1 for even n >= 4 and ρ >= 1/n, else None."""
    if n >= 4 and n % 2 == 0 and rho >= 1 / n:
        return n - 1
    return None


# ---- figure tables

FIG_HEADERS = {
    "fig2": ("n", "log_n_p", "log_n_lower_bound"),
    "fig3": ("n", "q", "q_lower_thm11", "q_upper_thm11", "normalized"),
    "fig4": ("n", "rho_millis", "las_rank"),
    "fig6": ("n", "k", "rho", "gap"),
}


def _map(fn, items, threads: int):
    items = list(items)
    if threads <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(threads) as ex:
        return list(ex.map(fn, items))


def level_thresholds_millis(n: int, lam_max: int = 500, tol: float = 0.0) -> list[int]:
    """For k = 1..n-1, the largest λ in 0..lam_max with M_k(w(λ/1000)) PSD."""
    out = []
    for k in range(1, n):
        a, b = cropped_pencil(n, k)
        ok = _pencil_psd(a, b, tol)
        lo, hi = 0, lam_max + 1  # ok(0) holds; treat lam_max+1 as failing
        if ok(lam_max / 1000):
            out.append(lam_max)
            continue
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid / 1000):
                lo = mid
            else:
                hi = mid
        out.append(lo)
    return out


def las_rank_profile(n: int, lam_max: int = 500) -> tuple[list[tuple], dict]:
    th = level_thresholds_millis(n, lam_max)
    rows = []
    for lam in range(1, lam_max + 1):
        rho = lam / 1000
        if rho > n / 2:
            rank = 0
        else:
            rank = next((k for k, t in enumerate(th, start=1) if lam > t), n)
        rows.append((n, lam, rank))
    ranks = [r[2] for r in rows]
    drops = [rows[i][1] for i in range(1, len(rows)) if ranks[i] < ranks[i - 1]]
    monotone = all(ranks[i] <= ranks[i - 1] for i in range(1, len(ranks)))
    return rows, {"n": n, "drops": drops, "monotone": monotone, "level_thresholds": th}


def figure_data(which: str, ns: Iterable[int] | None = None, threads: int = 1) -> tuple[tuple, list[tuple], list]:
    """(header, rows, metadata) for one of the figure tables."""
    if which == "fig2":
        ns = list(ns or range(2, 12))
        ps = _map(p_of_n, ns, threads)
        rows = [(n, log_base(n, p.value), log_base(n, chipped_rho_bound(n))) for n, p in zip(ns, ps)]
        meta = [{"n": n, "theta": p.argument, "at_boundary": p.data["at_boundary"]} for n, p in zip(ns, ps)]
    elif which == "fig3":
        ns = list(ns or range(2, 17))
        qs = _map(q_of_n, ns, threads)
        rows = [(n, q.value, *q_bounds(n), 2 ** (n + 1) * q.value / n) for n, q in zip(ns, qs)]
        meta = []
    elif which == "fig4":
        ns = list(ns or (3, 6, 9, 12))
        parts = _map(las_rank_profile, ns, threads)
        rows = [r for p in parts for r in p[0]]
        meta = [p[1] for p in parts]
    elif which == "fig6":
        n = 10
        rows = [(n, k, rho, gap_formula(n, k, rho)) for rho in (0.01, 0.1, 0.5, 0.9) for k in range(n + 1)]
        meta = []
    else:
        raise ValueError(f"unknown figure {which!r}")
    return FIG_HEADERS[which], rows, meta


# ---- identity checks (worst deviation, or count of disagreements)

@dataclass(frozen=True)
class IdentityResult:
    which: str
    passed: bool
    worst: float
    cases: int
    details: list = field(default_factory=list)


def check_factorization(n: int, trials: int = 100, seed: int = 0, tol: float = 1e-10) -> IdentityResult:
    """M_n(y) = Z Diag(u) Zᵀ for random y, u the superset Möbius transform."""
    from .combinatorics import zeta_matrix
    from .moments import MomentVector, superset_mobius

    rng = np.random.default_rng(seed)
    z = zeta_matrix(n).astype(float)
    m = family(n, n, "A+").ones
    worst = 0.0
    for _ in range(trials):
        y = MomentVector(n, n, rng.standard_normal(1 << n))
        u = superset_mobius(y.values, n)[m]
        dev = np.abs(moment_matrix(y, n) - (z * u[None, :]) @ z.T).max()
        worst = max(worst, dev / max(1.0, np.abs(y.values).max()))
    return IdentityResult("lemma5", worst <= tol, float(worst), trials)


def check_localizer_identity(n: int, thetas=None, rhos=None, tol: float = 1e-10) -> IdentityResult:
    """(n-ρ)y[S∪T] - Σ_j y[S∪T∪j] = w[S∪T], and M_n(w) = Z Diag(u) Zᵀ with the
    closed-form Möbius coefficients of the chipped localizer."""
    from .combinatorics import zeta_matrix

    thetas = np.round(np.arange(1, 10) / 10, 10) if thetas is None else thetas
    rhos = np.round(np.arange(1, 10) / 10, 10) if rhos is None else rhos
    z = zeta_matrix(n).astype(float)
    m = family(n, n, "A+").ones
    union = m[:, None] | m[None, :]
    worst, cases = 0.0, 0
    for t in thetas:
        y = bernoulli_moments(n, t).values
        for r in rhos:
            w = localizer_chipped(n, t, r)
            lhs = (n - r) * y[union] - sum(y[union | (1 << j)] for j in range(n))
            d1 = np.abs(lhs - w.values[union]).max()
            d2 = np.abs(w.values[union] - (z * w.mobius[m][None, :]) @ z.T).max()
            worst = max(worst, d1, d2)
            cases += 1
    return IdentityResult("lemma6", worst <= tol, float(worst), cases)


def check_pd_rule(n: int, thetas=None, rhos=None, margin: float = 1e-8) -> IdentityResult:
    """sign λ_min(M_{n-1}(w)) against sign(1 - ρθⁿξᵀξ), skipping |margin| <= 1e-8."""
    from .moments import pd_margin_chipped

    thetas = np.round(np.arange(1, 10) / 10, 10) if thetas is None else thetas
    rhos = np.round(np.arange(1, 10) / 10, 10) if rhos is None else rhos
    bad, cases = [], 0
    for t in thetas:
        a, b = chipped_pencil(n, t)
        for r in rhos:
            g = pd_margin_chipped(n, t, r)
            if abs(g) <= margin:
                continue
            lam = scaled_min_eig(a - r * b, np.diag(b))
            cases += 1
            if (lam > 0) != (g > 0):
                bad.append((n, float(t), float(r), lam, g))
    return IdentityResult("eq2", not bad, float(len(bad)), cases, bad)


def check_collapse(n: int, rhos=None, tol: float = DEFAULT_TOL, method: str = "grid") -> IdentityResult:
    """PSD status of the collapsed W against the full M_{n-1}(w), both after
    the inertia-preserving diagonal rescaling.

    ``method="interval"`` evaluates the full matrix only at 0 and at the two
    grid points around the W boundary.  It is exact on the grid because the
    ρ-part B is positive definite (checked by Cholesky), so the full PSD set
    {ρ : A - ρB ⪰ 0} is an interval containing 0 whenever A ⪰ 0.
    """
    rhos = np.round(np.arange(1, 101) * 0.005, 10) if rhos is None else np.asarray(rhos, dtype=float)
    a, b = cropped_pencil(n, n - 1)
    wa, wb = collapsed_w_parts(n)
    full, coll = _pencil_psd(a, b, tol), _pencil_psd(wa, wb, tol)
    bad = []

    def report(r):
        bad.append((n, float(r), scaled_min_eig(a - r * b, np.diag(b)), scaled_min_eig(wa - r * wb, np.diag(wb))))

    if method == "grid":
        for r in rhos:
            if full(r) != coll(r):
                report(r)
        return IdentityResult("collapse", not bad, float(len(bad)), len(rhos), bad)
    if method != "interval":
        raise ValueError(f"unknown method {method!r}")
    d = 1.0 / np.sqrt(np.diag(b))
    np.linalg.cholesky(b * d[:, None] * d[None, :])  # raises unless B is PD
    if not full(0.0):
        raise ValueError("A is not PSD; the interval argument does not apply")
    order = np.sort(rhos)
    status = np.array([coll(r) for r in order])
    if np.any(status[1:] > status[:-1]):
        raise ValueError("collapsed PSD status is not monotone on the grid")
    last_ok = int(status.sum()) - 1
    probes = [order[i] for i in (last_ok, last_ok + 1) if 0 <= i < len(order)]
    for r in probes:
        if full(r) != coll(r):
            report(r)
    return IdentityResult("collapse", not bad, float(len(bad)), len(rhos), bad)
