"""Moment vectors on the subset lattice, their Möbius transforms, and the
closed-form localizers for the chipped and cropped hypercubes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .combinatorics import MAX_DENSE_N, SizeGuardError, family, popcounts


@dataclass(frozen=True)
class MomentVector:
    """Values y[S] for every S ⊆ [n] with |S| <= level, indexed by bit mask.

    Entries above the level are NaN.  ``mobius`` optionally carries the
    analytically known Möbius coefficients (only meaningful at level n).
    """

    n: int
    level: int
    values: np.ndarray
    mobius: np.ndarray | None = None

    def __post_init__(self):
        if self.n > MAX_DENSE_N:
            raise SizeGuardError(f"moment vectors are stored densely; n <= {MAX_DENSE_N}")
        if not 0 <= self.level <= self.n:
            raise ValueError("level must be in [0, n]")
        if self.values.shape != (1 << self.n,):
            raise ValueError("values must have length 2^n")
        sizes = popcounts(np.arange(1 << self.n))
        if not np.all(np.isfinite(self.values[sizes <= self.level])):
            raise ValueError("moment vector has non-finite values within its level")

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])

    @classmethod
    def from_cardinality(cls, n: int, f: Callable[[np.ndarray], np.ndarray], level: int | None = None,
                         mobius: Callable[[np.ndarray], np.ndarray] | None = None) -> "MomentVector":
        """Vector whose entry at S depends only on |S| (``f`` is vectorised)."""
        level = n if level is None else level
        sizes = popcounts(np.arange(1 << n))
        vals = np.where(sizes <= level, f(sizes.astype(float)), np.nan)
        mob = None if mobius is None else np.asarray(mobius(sizes.astype(float)), dtype=float)
        return cls(n, level, vals.astype(float), mob)


def moment_matrix(y: MomentVector, k: int) -> np.ndarray:
    """M_k(y)[S, T] = y[S ∪ T] over A_k^+."""
    if not 0 <= k <= y.n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    need = min(y.n, 2 * k)
    if y.level < need:
        raise ValueError(f"M_{k} needs moments up to level {need}, vector has level {y.level}")
    m = family(y.n, k, "A+").ones
    return y.values[m[:, None] | m[None, :]].copy()


def superset_mobius(values: np.ndarray, n: int) -> np.ndarray:
    """u[S] = Σ_{T ⊇ S} (-1)^{|T \\ S|} v[T] in O(n 2^n)."""
    u = np.array(values, dtype=float, copy=True)
    for i in range(n):
        u = u.reshape(-1, 2, 1 << i)
        u[:, 0, :] -= u[:, 1, :]
        u = u.reshape(-1)
    return u


def superset_zeta(values: np.ndarray, n: int) -> np.ndarray:
    """Inverse of :func:`superset_mobius`: v[S] = Σ_{T ⊇ S} u[T]."""
    v = np.array(values, dtype=float, copy=True)
    for i in range(n):
        v = v.reshape(-1, 2, 1 << i)
        v[:, 0, :] += v[:, 1, :]
        v = v.reshape(-1)
    return v


def mobius_transform(y: MomentVector) -> MomentVector:
    if y.level != y.n:
        raise ValueError("the Möbius transform needs the full level-n vector")
    return MomentVector(y.n, y.n, superset_mobius(y.values, y.n))


def bernoulli_moments(n: int, theta: float) -> MomentVector:
    """y[S] = θ^{|S|}: moments of the product Bernoulli(θ) measure."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    return MomentVector.from_cardinality(
        n, lambda s: theta ** s, mobius=lambda s: theta ** s * (1 - theta) ** (n - s))


def localizer_chipped(n: int, theta: float, rho: float) -> MomentVector:
    """w[S] = ((n - |S|)(1 - θ) - ρ) θ^{|S|}, with its Möbius coefficients
    (n - |S| - ρ) θ^{|S|} (1 - θ)^{n - |S|}."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if not rho > 0:
        raise ValueError("rho must be positive")
    return MomentVector.from_cardinality(
        n,
        lambda s: ((n - s) * (1 - theta) - rho) * theta ** s,
        mobius=lambda s: (n - s - rho) * theta ** s * (1 - theta) ** (n - s),
    )


def localizer_cropped(n: int, rho: float) -> MomentVector:
    """w[S] = (n - |S| - 2ρ) 2^{-|S|-1}."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return MomentVector.from_cardinality(
        n,
        lambda s: (n - s - 2 * rho) * 2.0 ** (-s - 1),
        mobius=lambda s: (n - s - rho) * 2.0 ** (-n),
    )


def xi_norm_sq(n: int, theta: float, rho: float) -> float:
    """Σ_{S ⊊ [n]} 1/u[S] = Σ_{i<n} C(n,i) / ((n-i-ρ) θ^i (1-θ)^{n-i})."""
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if n <= 12:
        return math.fsum(
            math.comb(n, i) / ((n - i - rho) * theta ** i * (1 - theta) ** (n - i)) for i in range(n))
    logs = [
        math.log(math.comb(n, i)) - math.log(n - i - rho) - i * math.log(theta)
        - (n - i) * math.log1p(-theta)
        for i in range(n)
    ]
    top = max(logs)
    return math.exp(top) * math.fsum(math.exp(v - top) for v in logs)


def pd_margin_chipped(n: int, theta: float, rho: float) -> float:
    """1 - ρ θ^n ξᵀξ; positive exactly when M_{n-1}(w) is positive definite."""
    return 1.0 - rho * theta ** n * xi_norm_sq(n, theta, rho)


def alphabound(n: int, theta: float) -> float:
    """(n+1) θ (1-θ)^n / (2 - [(n-1)θ + 2](1-θ)^n)."""
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    q = (1 - theta) ** n
    return (n + 1) * theta * q / (2 - ((n - 1) * theta + 2) * q)


def chipped_rho_bound(n: int) -> float:
    """(n² - 1)/(2 n^{n+1} - n² - 1): the bound above at θ = (n-1)/n."""
    return (n * n - 1) / (2 * n ** (n + 1) - n * n - 1)


def _collapse_sum(i: int, j: int, m: int) -> float:
    return math.fsum(math.comb(i, k) * math.comb(j, k) / math.comb(m, k) for k in range(min(i, j) + 1))


def collapsed_w_parts(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(A, B) with collapsed_w(n, ρ) = A - ρ B, both indexed by 0..n-1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    a = np.zeros((n, n))
    b = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            a[i, j] = 2.0 ** (-i - j - 1) * n * math.comb(n - 1, i) * math.comb(n - 1, j) * _collapse_sum(i, j, n - 1)
            b[i, j] = 2.0 ** (-i - j) * math.comb(n, i) * math.comb(n, j) * _collapse_sum(i, j, n)
    return a, b


def collapsed_w(n: int, rho: float) -> np.ndarray:
    """W[i, j] = Σ_{|S|=i, |T|=j} M_{n-1}(w)[S, T] for the cropped localizer."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    a, b = collapsed_w_parts(n)
    return a - rho * b
