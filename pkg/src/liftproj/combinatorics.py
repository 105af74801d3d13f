"""Cylinder sets on {0,1}^n and the index families of lifted matrices.

A cylinder ``S|1 ∩ T|0`` is the set of 0/1 points with coordinates in ``S``
fixed to one and coordinates in ``T`` fixed to zero.  Subsets of the ground
set ``[n] = {1, ..., n}`` are stored as bit masks; element ``i`` lives in bit
``i - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_N = 24
MAX_DENSE_N = 16

KINDS = ("A", "A+", "A-")


class SizeGuardError(ValueError):
    """Raised when a dense construction would exceed the desk-scale limits."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def popcounts(masks: np.ndarray) -> np.ndarray:
    """Vectorised popcount for non-negative integer arrays."""
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape, dtype=np.int64)
    m = masks.copy()
    while np.any(m):
        out += m & 1
        m >>= 1
    return out


def mask_of(elements: Iterable[int]) -> int:
    """Bit mask of a collection of 1-based ground-set elements."""
    mask = 0
    for i in elements:
        if i < 1:
            raise ValueError(f"ground-set elements are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def check_n(n: int, limit: int = MAX_N) -> None:
    if n < 0:
        raise ValueError(f"ground-set size must be non-negative, got {n}")
    if n > limit:
        raise SizeGuardError(f"n = {n} exceeds the limit {limit}")


@dataclass(frozen=True, order=False)
class Cylinder:
    """The set ``ones|1 ∩ zeros|0`` inside {0,1}^n.

    Empty cylinders are canonical: every empty cylinder over the same ``n``
    is stored as ``(n, 0, 0, empty=True)`` so equality is a field comparison.
    """

    n: int
    ones: int = 0
    zeros: int = 0
    empty: bool = False

    def __post_init__(self):
        check_n(self.n)
        full = (1 << self.n) - 1
        if (self.ones | self.zeros) & ~full:
            raise ValueError("cylinder masks use bits beyond the ground set")
        if self.empty or (self.ones & self.zeros):
            object.__setattr__(self, "ones", 0)
            object.__setattr__(self, "zeros", 0)
            object.__setattr__(self, "empty", True)

    @classmethod
    def full_space(cls, n: int) -> "Cylinder":
        return cls(n)

    @classmethod
    def of(cls, n: int, ones: Iterable[int] = (), zeros: Iterable[int] = ()) -> "Cylinder":
        """Build from 1-based element lists, e.g. ``Cylinder.of(3, [1], [2])``."""
        return cls(n, mask_of(ones), mask_of(zeros))

    @property
    def size(self) -> int:
        """|S| + |T|, the number of fixed coordinates."""
        return popcount(self.ones) + popcount(self.zeros)

    def is_full(self) -> bool:
        return not self.empty and self.ones == 0 and self.zeros == 0

    def contains_point(self, x: Sequence[int]) -> bool:
        if self.empty:
            return False
        for i in range(self.n):
            bit = 1 << i
            if self.ones & bit and x[i] != 1:
                return False
            if self.zeros & bit and x[i] != 0:
                return False
        return True

    def __repr__(self) -> str:
        if self.empty:
            return "∅"
        if self.is_full():
            return "F"
        parts = []
        if self.ones:
            parts.append("{" + ",".join(map(str, elements_of(self.ones))) + "}|1")
        if self.zeros:
            parts.append("{" + ",".join(map(str, elements_of(self.zeros))) + "}|0")
        return "∩".join(parts)


def cylinder_intersect(a: Cylinder, b: Cylinder) -> Cylinder:
    if a.n != b.n:
        raise ValueError(f"cylinders over different ground sets ({a.n} vs {b.n})")
    if a.empty or b.empty:
        return Cylinder(a.n, empty=True)
    return Cylinder(a.n, a.ones | b.ones, a.zeros | b.zeros)


@dataclass(frozen=True)
class IndexFamily:
    """An ordered family ``A_l``, ``A_l^+`` or ``A_l^-`` of cylinders.

    Order: ascending by ``|S| + |T|``, ties broken by the zeros mask, then the ones mask.
    ``F`` is always first.
    """

    n: int
    level: int
    kind: str
    members: tuple[Cylinder, ...]
    index: dict = field(repr=False, compare=False)
    ones: np.ndarray = field(repr=False, compare=False)
    zeros: np.ndarray = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> Cylinder:
        return self.members[i]

    def position(self, c: Cylinder) -> int:
        return self.index[c]

    def __contains__(self, c: Cylinder) -> bool:
        return c in self.index


def _sort_key(pair: tuple[int, int]) -> tuple[int, int, int]:
    ones, zeros = pair
    return (popcount(ones) + popcount(zeros), zeros, ones)


@lru_cache(maxsize=64)
def family(n: int, level: int, kind: str = "A") -> IndexFamily:
    """The family ``A_level`` (kind "A"), ``A_level^+`` ("A+") or ``A_level^-`` ("A-")."""
    check_n(n)
    if kind not in KINDS:
        raise ValueError(f"unknown family kind {kind!r}; expected one of {KINDS}")
    if not 0 <= level <= n:
        raise ValueError(f"level must satisfy 0 <= level <= n, got level={level}, n={n}")
    full = (1 << n) - 1
    small = [m for m in range(1 << n) if popcount(m) <= level]
    if kind == "A+":
        pairs = [(m, 0) for m in small]
    elif kind == "A-":
        pairs = [(0, m) for m in small]
    else:
        pairs = []
        for s in small:
            budget = level - popcount(s)
            rest = full & ~s
            t = rest
            while True:
                if popcount(t) <= budget:
                    pairs.append((s, t))
                if t == 0:
                    break
                t = (t - 1) & rest
    pairs.sort(key=_sort_key)
    members = tuple(Cylinder(n, o, z) for o, z in pairs)
    index = {c: i for i, c in enumerate(members)}
    ones = np.array([o for o, _ in pairs], dtype=np.int64)
    zeros = np.array([z for _, z in pairs], dtype=np.int64)
    return IndexFamily(n, level, kind, members, index, ones, zeros)


def family_size(n: int, level: int, kind: str = "A") -> int:
    from math import comb

    if kind == "A":
        return sum(comb(n, s) * comb(n - s, t) for s in range(level + 1) for t in range(level - s + 1))
    return sum(comb(n, i) for i in range(level + 1))


def _dense_guard(n: int) -> None:
    check_n(n)
    if n > MAX_DENSE_N:
        raise SizeGuardError(f"dense 2^n matrices need n <= {MAX_DENSE_N}, got {n}")


def zeta_matrix(n: int) -> np.ndarray:
    """Z[S, T] = 1 iff S ⊆ T, rows and columns ordered as ``family(n, n, "A+")``."""
    _dense_guard(n)
    m = family(n, n, "A+").ones
    return ((m[:, None] & ~m[None, :]) == 0).astype(np.int64)


def mobius_matrix(n: int) -> np.ndarray:
    """Inverse of the zeta matrix: (-1)^{|T \\ S|} when S ⊆ T."""
    _dense_guard(n)
    m = family(n, n, "A+").ones
    sub = (m[:, None] & ~m[None, :]) == 0
    sign = 1 - 2 * (popcounts(m[None, :] & ~m[:, None]) % 2)
    return np.where(sub, sign, 0).astype(np.int64)


def l_matrix(n: int, k: int, target_kind: str = "A+") -> np.ndarray:
    """Sign-selection matrix from ``A_k`` onto ``A_k^+`` (or ``A_k^-``).

    Row ``S|1 ∩ T|0`` has a single entry ``(-1)^{|S|}`` in column ``(S ∪ T)``.
    This one-term rule does not reproduce the indicator of a cylinder; the
    certificate builders use :func:`indicator_expansion` instead.
    """
    if target_kind not in ("A+", "A-"):
        raise ValueError("target_kind must be 'A+' or 'A-'")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    rows = family(n, k, "A")
    cols = family(n, k, target_kind)
    col_masks = cols.ones if target_kind == "A+" else cols.zeros
    pos = {int(m): j for j, m in enumerate(col_masks)}
    out = np.zeros((len(rows), len(cols)))
    for i, (s, t) in enumerate(zip(rows.ones, rows.zeros)):
        out[i, pos[int(s | t)]] = -1.0 if popcount(int(s)) % 2 else 1.0
    return out


def indicator_expansion(n: int, k: int, target_kind: str = "A+") -> np.ndarray:
    """Inclusion-exclusion expansion of ``A_k`` cylinders over ``A_k^±``.

    For target ``A+``: ``1[S|1 ∩ T|0] = Σ_{S ⊆ U ⊆ S∪T} (-1)^{|U \\ S|} 1[U|1]``.
    For target ``A-``: ``1[S|1 ∩ T|0] = Σ_{T ⊆ U ⊆ S∪T} (-1)^{|U \\ T|} 1[U|0]``.
    If ``Y'`` is the moment matrix of a measure over the target family, then
    ``L Y' L^T`` is its moment matrix over ``A_k``.
    """
    if target_kind not in ("A+", "A-"):
        raise ValueError("target_kind must be 'A+' or 'A-'")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    rows = family(n, k, "A")
    cols = family(n, k, target_kind)
    u = cols.ones if target_kind == "A+" else cols.zeros
    s = rows.ones[:, None]
    t = rows.zeros[:, None]
    base = s if target_kind == "A+" else t
    u = u[None, :]
    inside = ((base & ~u) == 0) & ((u & ~(s | t)) == 0)
    sign = 1 - 2 * (popcounts(u & ~base) % 2)
    return np.where(inside, sign, 0).astype(float)


def u_matrix(n: int, level: int) -> np.ndarray:
    """U[S|1, T|1 ∩ W|0] = (-1)^{|S \\ T|} if T ⊆ S ⊆ T ∪ W, else 0.

    Shape ``|A_level^+| x |A_level|``.
    """
    if not 0 <= level <= n:
        raise ValueError(f"need 0 <= level <= n, got level={level}, n={n}")
    rows = family(n, level, "A+").ones[:, None]
    cols = family(n, level, "A")
    t = cols.ones[None, :]
    w = cols.zeros[None, :]
    inside = ((t & ~rows) == 0) & ((rows & ~(t | w)) == 0)
    sign = 1 - 2 * (popcounts(rows & ~t) % 2)
    return np.where(inside, sign, 0).astype(float)
