"""k-small obstructions of lower-comprehensive systems and the refined polytope."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..combinatorics import MAX_DENSE_N, SizeGuardError, elements_of, popcounts
from ..polytopes import Inequality, LinearDescription


class UnsupportedDescriptionError(ValueError):
    pass


@dataclass(frozen=True)
class Obstruction:
    mask: int
    inequality: int  # index into desc.inequalities
    branch: str  # "small" (|O| <= k+1) or "large" (|O| >= |supp| - (k+1)); small wins ties

    @property
    def elements(self) -> tuple[int, ...]:
        return elements_of(self.mask)


def _is_box_row(q: Inequality) -> bool:
    nz = [v for v in q.a if v != 0]
    return len(nz) == 1 and ((q.a0 == 0 and nz[0] > 0) or (q.a0 == -nz[0] and nz[0] < 0))


def packing_rows(desc: LinearDescription) -> list[tuple[int, np.ndarray, float]]:
    """(index, a, b) for the non-box rows written as a·x <= b.

    Raises :class:`UnsupportedDescriptionError` unless a >= 0 and b > 0.
    """
    rows = []
    for i, q in enumerate(desc.inequalities):
        if _is_box_row(q):
            continue
        a = -np.asarray(q.a, dtype=float)
        b = q.a0
        if np.any(a < 0) or not b > 0:
            raise UnsupportedDescriptionError(
                f"inequality {i} is not of the form a·x <= b with a >= 0, b > 0")
        rows.append((i, a, b))
    return rows


def enumerate_obstructions(desc: LinearDescription, k: int) -> list[Obstruction]:
    """Every (O, inequality) pair meeting the three defining conditions."""
    n = desc.n
    if n > MAX_DENSE_N:
        raise SizeGuardError(f"obstruction enumeration needs n <= {MAX_DENSE_N}")
    if k < 0:
        raise ValueError("k must be non-negative")
    masks = np.arange(1 << n)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    sizes = popcounts(masks)
    out = []
    for i, a, b in packing_rows(desc):
        supp = int(sum(1 << j for j in range(n) if a[j] != 0))
        m = popcounts(np.array([supp]))[0]
        inside = (masks & ~supp) == 0
        heavy = bits @ a > b
        small = sizes <= k + 1
        large = sizes >= m - (k + 1)
        for o in masks[inside & heavy & (small | large)]:
            out.append(Obstruction(int(o), i, "small" if sizes[o] <= k + 1 else "large"))
    return out


def brute_force_obstructions(desc: LinearDescription, k: int) -> set[tuple[int, int]]:
    """Plain loop over subsets, used to validate :func:`enumerate_obstructions`."""
    found = set()
    for i, a, b in packing_rows(desc):
        supp = [j for j in range(desc.n) if a[j] != 0]
        for o in range(1 << desc.n):
            elems = [j for j in range(desc.n) if o >> j & 1]
            if not set(elems) <= set(supp):
                continue
            if sum(a[j] for j in elems) > b and (len(elems) <= k + 1 or len(elems) >= len(supp) - (k + 1)):
                found.add((o, i))
    return found


def refined_polytope(desc: LinearDescription, k: int) -> LinearDescription:
    """desc plus Σ_{i∈O} x_i <= |O| - 1 for each distinct obstruction O."""
    seen = []
    for ob in enumerate_obstructions(desc, k):
        if ob.mask not in seen:
            seen.append(ob.mask)
    cuts = []
    for o in seen:
        a = tuple(-1.0 if o >> j & 1 else 0.0 for j in range(desc.n))
        cuts.append(Inequality(float(popcounts(np.array([o]))[0] - 1), a))
    return LinearDescription(desc.n, desc.inequalities + tuple(cuts), "custom", desc.rho)
