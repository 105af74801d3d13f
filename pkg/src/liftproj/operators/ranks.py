"""Rounding-based membership test, explicit witness points and closed-form
rank bounds for the chipped and cropped hypercubes."""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from ..combinatorics import elements_of
from ..polytopes import LinearDescription


def xij(x, I: int, J: int) -> np.ndarray:
    """x with coordinates in I (bit mask) set to 1 and those in J set to 0."""
    if I & J:
        raise ValueError("I and J must be disjoint")
    y = np.array(x, dtype=float, copy=True)
    for i in elements_of(I):
        y[i - 1] = 1.0
    for j in elements_of(J):
        y[j - 1] = 0.0
    return y


def support_fractional(x, tol: float = 0.0) -> int:
    x = np.asarray(x, dtype=float)
    return int(sum(1 << i for i, v in enumerate(x) if tol < v < 1 - tol))


def sa_plus_sufficient(desc: LinearDescription, x, k: int, tol: float = 1e-9, chunk: int = 1 << 16) -> bool:
    """True when every x^I_J with I, J ⊆ S(x) disjoint and |I| + |J| <= k lies
    in the description.  Sufficient, not necessary, for x ∈ SA+^k."""
    if not 0 <= k <= desc.n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    x = np.asarray(x, dtype=float)
    A, a0 = desc.A, desc.a0
    frac = [i - 1 for i in elements_of(support_fractional(x))]
    batch = []

    def flush() -> bool:
        pts = np.array(batch)
        batch.clear()
        return bool(np.all(a0[None, :] + pts @ A.T >= -tol))

    for m in range(min(k, len(frac)) + 1):
        for pos in itertools.combinations(frac, m):
            for vals in itertools.product((0.0, 1.0), repeat=m):
                y = x.copy()
                y[list(pos)] = vals
                batch.append(y)
                if len(batch) >= chunk and not flush():
                    return False
    return flush() if batch else True


def _exact(rho) -> Fraction:
    # the shortest decimal that round-trips, so 8.1 means 81/10 and not the binary neighbour below it
    return Fraction(repr(float(rho)))


def _ceil(rho) -> int:
    return math.ceil(_exact(rho))


def witness_depth_bound(n: int, rho: float) -> Fraction:
    """n(⌈ρ⌉ - ρ)/⌈ρ⌉, computed exactly from the decimal value of ρ."""
    r = _exact(rho)
    c = math.ceil(r)
    return n * (c - r) / c


def witness_interval(n: int, rho: float, k: int) -> tuple[float, float]:
    """Open interval ((n - ⌈ρ⌉)/n, (n - ρ - k)/(n - k)) of admissible λ."""
    return (n - _ceil(rho)) / n, (n - rho - k) / (n - k)


def diagonal_witness(n: int, rho: float, k: int) -> np.ndarray:
    """λē at the midpoint of the admissible interval; needs k below the bound."""
    _check_noninteger(n, rho)
    if not 0 <= k < witness_depth_bound(n, rho):
        raise ValueError(f"k={k} is not below n(⌈ρ⌉-ρ)/⌈ρ⌉ = {float(witness_depth_bound(n, rho))}")
    lo, hi = witness_interval(n, rho, k)
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi}) for k={k}")
    return np.full(n, 0.5 * (lo + hi))


def tilde_ls_witness(n: int, rho: float) -> np.ndarray:
    """((ℓ(1-ε) + ε)/(n(1-ε) + ε))·ē with ℓ = n - ⌈ρ⌉, ε = min(⌈ρ⌉ - ρ, ℓ/(n-1))."""
    _check_noninteger(n, rho)
    if not rho < n - 1:
        raise ValueError("need rho < n - 1")
    ell = n - _ceil(rho)
    eps = min(_ceil(rho) - rho, ell / (n - 1))
    return np.full(n, (ell * (1 - eps) + eps) / (n * (1 - eps) + eps))


def _check_noninteger(n: int, rho: float) -> None:
    if n < 2:
        raise ValueError("n must be at least 2")
    if float(rho).is_integer() or not 0 < rho < n:
        raise ValueError(f"rho must be a non-integer in (0, {n}), got {rho}")


def sa_plus_rank_upper(n: int, rho: float) -> int:
    _check_noninteger(n, rho)
    return n - _ceil(rho) + 1


def sa_plus_rank_lower(n: int, rho: float) -> int:
    """1 + max{k : k < n(⌈ρ⌉ - ρ)/⌈ρ⌉}."""
    _check_noninteger(n, rho)
    return 1 + (math.ceil(witness_depth_bound(n, rho)) - 1)


def tilde_ls_rank(n: int, rho: float) -> int:
    _check_noninteger(n, rho)
    if not rho < n - 1:
        raise ValueError("the formula needs rho < n - 1")
    return n


def bz_lower(n: int) -> tuple[float, int]:
    """(ρ*, ⌊(√n + 1)/2⌋) for non-square n >= 5, ρ* = ⌊√n⌋ + ε."""
    r = math.isqrt(n)
    if n < 5 or r * r == n:
        raise ValueError("n must be a non-square integer >= 5")
    s = math.sqrt(n)
    eps = 0.5 * (1 - (r + 1) * (s - 1) / n)
    # ⌊(√n + 1)/2⌋ = ⌊(⌊√n⌋ + 1)/2⌋ for non-square n
    return r + eps, (r + 1) // 2


def sa_plus_iterate_cropped(n: int, rho: float, k: int) -> float:
    """Depth of SA+^k(Q(n, ρ)) = Q(n, ρ + k/2), for ρ ∈ (0, 1/2]."""
    if not 0 < rho <= 0.5:
        raise ValueError("rho must lie in (0, 1/2]")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    return rho + k / 2


def sa_plus_rank_cropped(n: int, rho: float) -> int:
    """Smallest k with Q(n, ρ + k/2) empty, i.e. ρ + k/2 > n/2."""
    k = 0
    while sa_plus_iterate_cropped(n, rho, k) <= n / 2:
        k += 1
    return k
