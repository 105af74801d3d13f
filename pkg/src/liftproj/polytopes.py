"""Explicit inequality systems for chipped and cropped hypercubes.

Every inequality is stored in the normal form ``a0 + a·x >= 0``.  The 2n box
inequalities always come first (x_1 >= 0, ..., x_n >= 0, 1 - x_1 >= 0, ...),
followed by the family-specific cuts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .combinatorics import MAX_DENSE_N, SizeGuardError, check_n, popcount
from .lp import LpProblem, lp_max, solve
from .symmat import format_real


@dataclass(frozen=True)
class Inequality:
    a0: float
    a: tuple[float, ...]

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.a0, *self.a)):
            raise ValueError("inequality coefficients must be finite")

    def value(self, x) -> float:
        return self.a0 + float(np.dot(self.a, x))

    def support(self) -> int:
        """Bit mask of the non-zero coefficients."""
        return sum(1 << i for i, v in enumerate(self.a) if v != 0)


@dataclass(frozen=True)
class LinearDescription:
    n: int
    inequalities: tuple[Inequality, ...]
    family: str = "custom"  # chipped | cropped | custom
    rho: float | None = None

    @property
    def A(self) -> np.ndarray:
        return np.array([q.a for q in self.inequalities], dtype=float).reshape(-1, self.n)

    @property
    def a0(self) -> np.ndarray:
        return np.array([q.a0 for q in self.inequalities], dtype=float)

    def __len__(self) -> int:
        return len(self.inequalities)

    def cuts(self) -> tuple[Inequality, ...]:
        """The inequalities after the 2n box facets."""
        return self.inequalities[2 * self.n:]

    def inequality_set(self, digits: int = 12) -> frozenset:
        return frozenset(
            (round(q.a0, digits), tuple(round(v, digits) for v in q.a)) for q in self.inequalities
        )

    def dump(self, out: TextIO) -> None:
        for q in self.inequalities:
            out.write(" ".join(format_real(v) for v in (q.a0, *q.a)) + "\n")


def box_inequalities(n: int) -> list[Inequality]:
    eye = np.eye(n)
    lower = [Inequality(0.0, tuple(eye[i])) for i in range(n)]
    upper = [Inequality(1.0, tuple(-eye[i])) for i in range(n)]
    return lower + upper


def custom(n: int, cuts: Sequence[tuple[float, Sequence[float]]]) -> LinearDescription:
    """[0,1]^n intersected with ``a0 + a·x >= 0`` for each ``(a0, a)`` in ``cuts``."""
    check_n(n)
    ineqs = box_inequalities(n) + [Inequality(float(a0), tuple(float(v) for v in a)) for a0, a in cuts]
    for q in ineqs:
        if len(q.a) != n:
            raise ValueError("cut length does not match n")
    return LinearDescription(n, tuple(ineqs))


def _chipped(n: int, rho: float) -> LinearDescription:
    cut = Inequality(float(n - rho), tuple([-1.0] * n))
    return LinearDescription(n, tuple(box_inequalities(n) + [cut]), "chipped", float(rho))


def chipped(n: int, rho: float) -> LinearDescription:
    """P(n, ρ) = {x ∈ [0,1]^n : Σ x_i <= n - ρ}."""
    check_n(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 < rho < n:
        raise ValueError(f"rho must lie in (0, n) = (0, {n}), got {rho}")
    return _chipped(n, rho)


def cropped(n: int, rho: float) -> LinearDescription:
    """Q(n, ρ): one cut per S ⊆ [n], ordered by the S-mask."""
    check_n(n)
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_DENSE_N:
        raise SizeGuardError(f"cropped hypercube has 2^n cuts; n <= {MAX_DENSE_N} required")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    cuts = []
    for s in range(1 << n):
        a = tuple(-1.0 if s >> i & 1 else 1.0 for i in range(n))
        cuts.append(Inequality(float(popcount(s) - rho), a))
    return LinearDescription(n, tuple(box_inequalities(n) + cuts), "cropped", float(rho))


def contains(desc: LinearDescription, x, tol: float = 1e-9) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (desc.n,):
        raise ValueError(f"point has shape {x.shape}, expected ({desc.n},)")
    return bool(np.all(desc.a0 + desc.A @ x >= -tol))


def homogenized_contains(desc: LinearDescription, yhat, tol: float = 1e-9) -> bool:
    """Membership of ``(y0, y1..yn)`` in the cone K(P) = {(λ, λx) : λ >= 0, x ∈ P}."""
    yhat = np.asarray(yhat, dtype=float)
    if yhat.shape != (desc.n + 1,):
        raise ValueError(f"cone point has shape {yhat.shape}, expected ({desc.n + 1},)")
    if yhat[0] < -tol:
        return False
    return bool(np.all(desc.a0 * yhat[0] + desc.A @ yhat[1:] >= -tol))


def cube_points(n: int) -> np.ndarray:
    """All of {0,1}^n, row r is the incidence vector of mask r."""
    if n > MAX_DENSE_N:
        raise SizeGuardError(f"enumerating {{0,1}}^n needs n <= {MAX_DENSE_N}")
    masks = np.arange(1 << n)
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(float)


def integer_points(desc: LinearDescription, tol: float = 1e-9) -> np.ndarray:
    pts = cube_points(desc.n)
    ok = np.all(desc.a0[None, :] + pts @ desc.A.T >= -tol, axis=1)
    return pts[ok]


def integer_hull_chipped(n: int, rho: float) -> LinearDescription:
    """conv(P(n, ρ) ∩ {0,1}^n) = P(n, ⌈ρ⌉) for non-integer ρ."""
    if float(rho).is_integer():
        raise ValueError("rho must be non-integer")
    if not 0 < rho < n:
        raise ValueError(f"rho must lie in (0, {n})")
    return _chipped(n, math.ceil(rho))


def apply_automorphism(obj, permutation: Sequence[int], flip_mask: int = 0):
    """Apply x ↦ flip(x[permutation]) to a point or a description.

    ``permutation`` is 0-based: coordinate i of the image is coordinate
    ``permutation[i]`` of the input.  ``flip_mask`` bit i flips coordinate
    i + 1 of the permuted vector (x_i ↦ 1 - x_i).
    """
    p = np.asarray(permutation, dtype=int)
    if isinstance(obj, LinearDescription):
        n = obj.n
        _check_perm(p, n)
        out = []
        for q in obj.inequalities:
            a = np.asarray(q.a, dtype=float)[p]
            a0 = q.a0
            for i in range(n):
                if flip_mask >> i & 1:
                    a0 += a[i]
                    a[i] = -a[i]
            out.append(Inequality(float(a0), tuple(float(v) for v in a)))
        identity = flip_mask == 0 and np.array_equal(p, np.arange(n))
        fam = obj.family if identity else "custom"
        return LinearDescription(n, tuple(out), fam, obj.rho)
    x = np.asarray(obj, dtype=float)
    _check_perm(p, len(x))
    y = x[p].copy()
    for i in range(len(y)):
        if flip_mask >> i & 1:
            y[i] = 1.0 - y[i]
    return y


def inverse_automorphism(permutation: Sequence[int], flip_mask: int = 0) -> tuple[list[int], int]:
    p = np.asarray(permutation, dtype=int)
    pinv = np.empty_like(p)
    pinv[p] = np.arange(len(p))
    f = 0
    for j in range(len(p)):
        if flip_mask >> int(pinv[j]) & 1:
            f |= 1 << j
    return pinv.tolist(), f


def _check_perm(p: np.ndarray, n: int) -> None:
    if sorted(p.tolist()) != list(range(n)):
        raise ValueError(f"{p.tolist()} is not a permutation of 0..{n - 1}")


def description_problem(desc: LinearDescription, objective=None) -> LpProblem:
    return LpProblem(desc.n, G=desc.A, g0=desc.a0, objective=objective)


def lp_max_over(desc: LinearDescription, c) -> float:
    """max c·x over the description (all variables are boxed, so x >= 0 is implied)."""
    return lp_max(description_problem(desc, np.asarray(c, dtype=float)))


def lp_argmax_over(desc: LinearDescription, c) -> np.ndarray:
    return solve(description_problem(desc, np.asarray(c, dtype=float))).x


def lp_max_over_points(points: np.ndarray, c) -> float:
    """max c·x over conv(points), as an LP in the convex weights."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    k = points.shape[0]
    if k == 0:
        raise ValueError("empty point set")
    prob = LpProblem(k, E=np.ones((1, k)), e=[1.0], objective=points @ np.asarray(c, dtype=float))
    return lp_max(prob)
