"""Dense symmetric matrices and eigenvalue-based definiteness tests."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

import numpy as np

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray  # ascending

    @property
    def smallest(self) -> float:
        return float(self.values[0])

    @property
    def largest(self) -> float:
        return float(self.values[-1])


def symmetrize(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return 0.5 * (a + a.T)


def eigenvalues(a) -> EigenResult:
    """Full spectrum of a symmetric matrix (LAPACK ``syevd`` via numpy)."""
    a = symmetrize(a)
    if a.shape[0] == 0:
        raise ValueError("empty matrix")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return EigenResult(np.linalg.eigvalsh(a))


def _band(ev: EigenResult, tol: float) -> float:
    return tol * max(1.0, abs(ev.largest))


def is_psd(a, tol: float = DEFAULT_TOL) -> bool:
    """λ_min ≥ -tol·max(1, |λ_max|)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    ev = eigenvalues(a)
    return ev.smallest >= -_band(ev, tol)


def is_pd(a, tol: float = DEFAULT_TOL) -> bool:
    """λ_min > tol·max(1, |λ_max|)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    ev = eigenvalues(a)
    return ev.smallest > _band(ev, tol)


def congruence(l, a) -> np.ndarray:
    """L·A·Lᵀ, re-symmetrized."""
    l = np.asarray(l, dtype=float)
    a = symmetrize(a)
    if l.ndim != 2 or l.shape[1] != a.shape[0]:
        raise ValueError(f"shape mismatch: L is {l.shape}, A is {a.shape}")
    return symmetrize(l @ a @ l.T)


def diagonal_scaling(a, weights) -> np.ndarray:
    """D·A·D with D = diag(weights)^{-1/2}; weights must be positive.

    Congruence by a positive diagonal keeps the inertia, so definiteness
    tests on the scaled matrix are equivalent but better conditioned.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w <= 0):
        raise ValueError("scaling weights must be positive")
    d = 1.0 / np.sqrt(w)
    return symmetrize(a) * d[:, None] * d[None, :]


def quadratic_form(x, a) -> float:
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or x.shape != (a.shape[0],) or a.shape[0] != a.shape[1]:
        raise ValueError(f"shape mismatch: x is {x.shape}, A is {a.shape}")
    return float(x @ a @ x)


def format_real(v: float) -> str:
    """17 significant digits, the dump format for every real in this package."""
    return f"{float(v):.17g}"


def write_csv(a, out: TextIO) -> None:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    for row in a:
        out.write(",".join(format_real(v) for v in row) + "\n")


def read_csv(lines) -> np.ndarray:
    rows = [[float(v) for v in line.strip().split(",")] for line in lines if line.strip()]
    return np.array(rows, dtype=float)
