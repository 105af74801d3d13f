"""Explicit SA+ and Las certificates for the chipped and cropped hypercubes,
automorphism transport, and the plain-text certificate dump."""
from __future__ import annotations

from typing import Sequence, TextIO

import numpy as np

from ..combinatorics import Cylinder, family, indicator_expansion, popcounts, u_matrix
from ..moments import bernoulli_moments, moment_matrix, MomentVector, superset_mobius
from ..polytopes import LinearDescription, _check_perm, apply_automorphism, chipped, cropped
from ..symmat import congruence, read_csv, write_csv
from .certificates import LasCertificate, SaPlusCertificate


def _check_unit_rho(rho: float) -> None:
    if not 0 < rho < 1:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")


def build_sa_plus_prop3(n: int, rho: float) -> SaPlusCertificate:
    """Level n-1 certificate from the three-case entry rule on α ∩ β."""
    if n < 2:
        raise ValueError("n must be at least 2")
    _check_unit_rho(rho)
    d = n * rho + 1 - rho
    fam = family(n, n - 1, "A")
    o, z = fam.ones, fam.zeros
    io = o[:, None] | o[None, :]
    iz = z[:, None] | z[None, :]
    empty = (io & iz) != 0
    nz = popcounts(iz)
    Y = np.where(nz == 0, 1.0 - rho * popcounts(io) / d, 0.0)
    Y = np.where(nz == 1, rho / d, Y)
    Y = np.where(empty, 0.0, Y)
    return SaPlusCertificate(n, n - 1, Y, fam)


def zeros_factorization(cert: SaPlusCertificate) -> tuple[np.ndarray, np.ndarray]:
    """(L, Y') with Y' the minor of Y on the zeros-only cylinders, so that
    Y = L Y' Lᵀ whenever Y is the moment matrix of a measure."""
    n, k = cert.n, cert.level
    minus = family(n, k, "A-")
    idx = np.array([cert.family.position(c) for c in minus.members], dtype=int)
    return indicator_expansion(n, k, "A-"), cert.Y[np.ix_(idx, idx)]


def linear_moments(n: int, rho: float, k: int) -> MomentVector:
    d = n - k + k * rho
    return MomentVector.from_cardinality(n, lambda s: 1.0 - s * rho / d)


def build_sa_plus_thm13(n: int, rho: float, k: int) -> SaPlusCertificate:
    """Y = L M_k(y) Lᵀ with y[S] = 1 - |S|ρ/(n - k + kρ)."""
    _check_unit_rho(rho)
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")
    y = linear_moments(n, rho, k)
    Y = congruence(indicator_expansion(n, k, "A+"), moment_matrix(y, k))
    return SaPlusCertificate(n, k, Y)


def linear_mobius(n: int, rho: float, k: int) -> np.ndarray:
    return superset_mobius(linear_moments(n, rho, k).values, n)


def build_las_chipped(n: int, theta: float, rho: float) -> LasCertificate:
    """Y = M_n(θ^{|S|}) at level n-1 over chipped(n, ρ)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    y = bernoulli_moments(n, theta)
    return LasCertificate(n, n - 1, moment_matrix(y, n), chipped(n, rho))


def build_las_cropped(n: int, k: int, rho: float) -> LasCertificate:
    """Y = M_{k+1}(2^{-|S|}) at level k over cropped(n, ρ)."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}")
    y = bernoulli_moments(n, 0.5)
    return LasCertificate(n, k, moment_matrix(y, k + 1), cropped(n, rho))


def transport_las(cert: LasCertificate, permutation: Sequence[int], flip_mask: int = 0) -> LasCertificate:
    """Certificate for the image of the description under x ↦ flip(x[p]).

    Ȳ = Uᵀ Y U lives on A_{k+1}; the new matrix is its minor on the cylinders
    Λ(S) = {p[i] : i ∈ S unflipped}|1 ∩ {p[i] : i ∈ S flipped}|0.
    """
    n, k = cert.n, cert.level
    p = np.asarray(permutation, dtype=int)
    _check_perm(p, n)
    plus = cert.family
    full = family(n, k + 1, "A")
    cols = []
    for s in plus.ones:
        ones = zeros = 0
        for i in range(n):
            if s >> i & 1:
                b = 1 << int(p[i])
                if flip_mask >> i & 1:
                    zeros |= b
                else:
                    ones |= b
        cols.append(full.position(Cylinder(n, ones, zeros)))
    U = u_matrix(n, k + 1)[:, cols]
    Y = U.T @ cert.Y @ U
    desc = apply_automorphism(cert.description, p, flip_mask)
    return LasCertificate(n, k, Y, desc, plus)


# ---- dump format: "operator level n", one "ones zeros" line per index, CSV

def dump_certificate(cert, out: TextIO) -> None:
    op = "las" if isinstance(cert, LasCertificate) else "sa-plus"
    out.write(f"{op} {cert.level} {cert.n}\n")
    for c in cert.family:
        out.write(f"{c.ones} {c.zeros}\n")
    write_csv(cert.Y, out)


def load_certificate(lines, description: LinearDescription | None = None):
    """Inverse of :func:`dump_certificate`.  Las certificates need the
    description they were built against."""
    lines = [ln for ln in lines if ln.strip()]
    op, level, n = lines[0].split()
    level, n = int(level), int(n)
    fam = family(n, level + 1, "A+") if op == "las" else family(n, level, "A")
    body = lines[1:]
    for c, ln in zip(fam, body[:len(fam)]):
        o, z = (int(v) for v in ln.split())
        if (c.ones, c.zeros) != (o, z) and not (c.empty and o == z == 0):
            raise ValueError(f"index line {ln.strip()!r} does not match the canonical family order")
    Y = read_csv(body[len(fam):])
    if op == "las":
        if description is None:
            raise ValueError("loading a Las certificate needs its description")
        return LasCertificate(n, level, Y, description, fam)
    if op != "sa-plus":
        raise ValueError(f"unknown operator {op!r}")
    return SaPlusCertificate(n, level, Y, fam)
