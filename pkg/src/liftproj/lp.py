"""A small dense two-phase simplex solver with Bland's rule.

Used as a brute-force oracle (tilde-LS membership, integer-hull maxima), so it
favours determinism over speed.  Every variable is non-negative.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11
MAX_PIVOTS = 200_000


class LpError(RuntimeError):
    pass


class InfeasibleError(LpError):
    "Raised when the constraint system has no solution."


class UnboundedError(LpError):
    "Raised when the objective is unbounded over a non-empty feasible set."


@dataclass
class LpProblem:
    """Constraints ``g0 + G x >= 0`` and ``E x = e`` over ``x >= 0``."""

    num_vars: int
    G: np.ndarray = None
    g0: np.ndarray = None
    E: np.ndarray = None
    e: np.ndarray = None
    objective: np.ndarray | None = None

    def __post_init__(self):
        nv = self.num_vars
        self.G = np.zeros((0, nv)) if self.G is None else np.atleast_2d(np.asarray(self.G, float))
        self.g0 = np.zeros(0) if self.g0 is None else np.asarray(self.g0, float).ravel()
        self.E = np.zeros((0, nv)) if self.E is None else np.atleast_2d(np.asarray(self.E, float))
        self.e = np.zeros(0) if self.e is None else np.asarray(self.e, float).ravel()
        if self.G.shape[0] == 0:
            self.G = self.G.reshape(0, nv)
        if self.E.shape[0] == 0:
            self.E = self.E.reshape(0, nv)
        if self.G.shape != (len(self.g0), nv) or self.E.shape != (len(self.e), nv):
            raise ValueError("inconsistent LP dimensions")
        if self.objective is not None:
            self.objective = np.asarray(self.objective, float).ravel()
            if self.objective.shape != (nv,):
                raise ValueError("objective length does not match num_vars")


@dataclass
class LpResult:
    value: float
    x: np.ndarray
    pivots: int = field(default=0)


class _Tableau:
    def __init__(self, a: np.ndarray, b: np.ndarray):
        m, n = a.shape
        self.m, self.n = m, n
        self.t = np.zeros((m + 1, n + 1))
        self.t[:m, :n] = a
        self.t[:m, n] = b
        self.basis = list(range(n - m, n))
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        t = self.t
        t[r] /= t[r, c]
        col = t[:, c].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        self.basis[r] = c
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise LpError("pivot limit exceeded")

    def run(self, allowed: int) -> None:
        """Minimise the cost row over columns ``< allowed`` (Bland's rule)."""
        t = self.t
        while True:
            cost = t[self.m, :allowed]
            neg = np.nonzero(cost < -PIVOT_TOL * max(1.0, np.abs(cost).max()))[0]
            if len(neg) == 0:
                return
            c = int(neg[0])
            col = t[: self.m, c]
            rows = np.nonzero(col > PIVOT_TOL)[0]
            if len(rows) == 0:
                raise UnboundedError("objective is unbounded")
            ratios = t[rows, self.n] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, c)


def solve(problem: LpProblem, maximize: bool = True) -> LpResult:
    """Optimise ``problem.objective`` (zero objective if absent).

    Raises :class:`InfeasibleError` or :class:`UnboundedError`.
    """
    nv = problem.num_vars
    G, g0, E, e = problem.G, problem.g0, problem.E, problem.e
    mi, me = G.shape[0], E.shape[0]
    # -G x + s = g0 ;  E x = e
    a = np.zeros((mi + me, nv + mi))
    a[:mi, :nv] = -G
    a[:mi, nv:] = np.eye(mi)
    a[mi:, :nv] = E
    b = np.concatenate([g0, e])
    flip = b < 0
    a[flip] *= -1
    b = np.where(flip, -b, b)
    m, n_struct = a.shape
    scale = max(1.0, float(np.abs(b).max()) if m else 1.0)

    tab = _Tableau(np.hstack([a, np.eye(m)]), b)
    tab.t[m, :n_struct] = -a.sum(axis=0)
    tab.t[m, -1] = -b.sum()
    tab.run(n_struct)
    if -tab.t[m, -1] > FEAS_TOL * scale:
        raise InfeasibleError("constraint system is infeasible")

    # drive artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(m):
        if tab.basis[r] >= n_struct:
            row = tab.t[r, :n_struct]
            cand = np.nonzero(np.abs(row) > 1e-9)[0]
            if len(cand):
                tab.pivot(r, int(cand[0]))
            else:
                continue
        keep.append(r)
    t = np.vstack([tab.t[keep], tab.t[m:m + 1]])
    tab2 = _Tableau.__new__(_Tableau)
    tab2.m, tab2.n = len(keep), tab.n
    tab2.t = t
    tab2.basis = [tab.basis[r] for r in keep]
    tab2.pivots = tab.pivots

    c = np.zeros(tab.n)
    if problem.objective is not None:
        c[:nv] = -problem.objective if maximize else problem.objective
    t[-1] = 0.0
    t[-1, : tab.n] = c
    for r, j in enumerate(tab2.basis):
        if c[j] != 0.0:
            t[-1] -= c[j] * t[r]
    tab2.run(n_struct)

    x = np.zeros(tab.n)
    for r, j in enumerate(tab2.basis):
        x[j] = t[r, -1]
    value = -t[-1, -1]
    if maximize:
        value = -value
    return LpResult(float(value), x[:nv], tab2.pivots)


def lp_feasible(problem: LpProblem) -> bool:
    try:
        solve(LpProblem(problem.num_vars, problem.G, problem.g0, problem.E, problem.e))
    except InfeasibleError:
        return False
    return True


def lp_max(problem: LpProblem) -> float:
    if problem.objective is None:
        raise ValueError("lp_max needs an objective")
    return solve(problem, maximize=True).value
