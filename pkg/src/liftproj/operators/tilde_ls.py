"""tilde-LS^k: closed-form maximum along ē and a disjunctive LP oracle."""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..lp import InfeasibleError, LpProblem, solve
from ..polytopes import LinearDescription


def _check_rho(n: int, rho: float) -> None:
    if float(rho).is_integer() or not 0 < rho < n:
        raise ValueError(f"rho must be a non-integer in (0, {n}), got {rho}")


def tilde_ls_closed_form(n: int, rho: float, k: int) -> float:
    """(n - k + (k-1)ρ)/(n - k + kρ), valid for ρ ∈ (0, 1)."""
    return (n - k + (k - 1) * rho) / (n - k + k * rho)


def _diagonal_hit(p: np.ndarray, q: np.ndarray) -> float | None:
    """Largest t with (t, t) on the segment pq, or None."""
    dp, dq = p[0] - p[1], q[0] - q[1]
    if dp == 0 and dq == 0:
        return max(p[0], q[0])
    if dp * dq > 0:
        return None
    s = dp / (dp - dq)
    return float(p[0] + s * (q[0] - p[0]))


def tilde_ls_max_symmetric(n: int, rho: float, k: int) -> float:
    """max{θ : θē ∈ tilde-LS^k(P(n, ρ))} via the planar reduction.

    Pattern i (i of the k fixed coordinates at 1) contributes the segment
    {(i/k, v) : 0 <= v <= min(1, (n - i - ρ)/(n - k))}, absent when the bound
    is negative.  The answer is the top of the diagonal inside their hull.
    """
    _check_rho(n, rho)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")
    if k == n:
        return (n - math.ceil(rho)) / n
    pts = []
    for i in range(k + 1):
        top = min(1.0, (n - i - rho) / (n - k))
        if top >= 0:
            pts += [(i / k, 0.0), (i / k, top)]
    pts = np.array(pts)
    best = -math.inf
    for a in range(len(pts)):
        for b in range(a, len(pts)):
            t = _diagonal_hit(pts[a], pts[b])
            if t is not None:
                best = max(best, t)
    return best


def _block_problem(desc: LinearDescription, S: tuple[int, ...], x=None):
    """Disjunctive LP for the fixed set S.

    Variables per pattern T ⊆ S: λ_T, then z_T on the free coordinates.
    With ``x=None`` a final variable θ is appended and the target is θē.
    """
    n = desc.n
    free = [i for i in range(n) if i not in S]
    k, f = len(S), len(free)
    width = 1 + f
    patterns = list(itertools.product((0, 1), repeat=k))
    nb = len(patterns)
    nv = nb * width + (1 if x is None else 0)
    A, a0 = desc.A, desc.a0
    G = np.zeros((nb * len(a0), nv))
    E = np.zeros((1 + n, nv))
    e = np.zeros(1 + n)
    E[0, [b * width for b in range(nb)]] = 1.0
    e[0] = 1.0
    for b, pat in enumerate(patterns):
        c0 = b * width
        fixed = A[:, list(S)] @ np.array(pat, dtype=float) if k else np.zeros(len(a0))
        rows = slice(b * len(a0), (b + 1) * len(a0))
        G[rows, c0] = a0 + fixed
        G[rows, c0 + 1:c0 + width] = A[:, free]
        for j, i in enumerate(S):
            if pat[j]:
                E[1 + i, c0] = 1.0
        for j, i in enumerate(free):
            E[1 + i, c0 + 1 + j] = 1.0
    if x is None:
        E[1:, -1] = -1.0
        obj = np.zeros(nv)
        obj[-1] = 1.0
        return LpProblem(nv, G=G, g0=np.zeros(len(G)), E=E, e=e, objective=obj)
    e[1:] = np.asarray(x, dtype=float)
    return LpProblem(nv, G=G, g0=np.zeros(len(G)), E=E, e=e)


def _index_sets(n: int, k: int, symmetric_shortcut: bool):
    if symmetric_shortcut:
        return [tuple(range(k))]
    return list(itertools.combinations(range(n), k))


def tilde_ls_membership_lp(desc: LinearDescription, x, k: int, symmetric_shortcut: bool = False) -> bool:
    """x ∈ ∩_{|S|=k} conv{y ∈ P : y_S integral}, one LP per S.

    The shortcut tests only S = {1..k}; it is sound only for descriptions
    invariant under coordinate permutations and x proportional to ē.
    """
    n = desc.n
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    if not symmetric_shortcut and n > 6:
        raise ValueError("the full tilde-LS oracle is limited to n <= 6; use the symmetric shortcut")
    x = np.asarray(x, dtype=float)
    for S in _index_sets(n, k, symmetric_shortcut):
        try:
            solve(_block_problem(desc, S, x))
        except InfeasibleError:
            return False
    return True


def tilde_ls_max_lp(desc: LinearDescription, k: int, symmetric_shortcut: bool = False) -> float:
    """max{θ : θē ∈ tilde-LS^k(P)} for P containing the origin (min over S)."""
    n = desc.n
    if not symmetric_shortcut and n > 6:
        raise ValueError("the full tilde-LS oracle is limited to n <= 6; use the symmetric shortcut")
    return min(solve(_block_problem(desc, S)).value for S in _index_sets(n, k, symmetric_shortcut))


def tilde_ls_max_bisect(desc: LinearDescription, k: int, tol: float = 1e-9, symmetric_shortcut: bool = False) -> float:
    """Same maximum by bisection on the membership oracle."""
    e = np.ones(desc.n)
    lo, hi = 0.0, 1.0
    if tilde_ls_membership_lp(desc, e, k, symmetric_shortcut):
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if tilde_ls_membership_lp(desc, mid * e, k, symmetric_shortcut):
            lo = mid
        else:
            hi = mid
    return lo
