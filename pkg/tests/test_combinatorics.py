import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liftproj.combinatorics import (Cylinder, SizeGuardError, cylinder_intersect, elements_of, family, family_size,
                                    indicator_expansion, l_matrix, mask_of, mobius_matrix, popcount, popcounts,
                                    u_matrix, zeta_matrix)


def points(n):
    return list(itertools.product((0, 1), repeat=n))


def indicator(c, n):
    return np.array([c.contains_point(p) for p in points(n)], dtype=float)


def test_intersection_examples():
    n = 3
    a = Cylinder.of(n, [1], [2])
    assert cylinder_intersect(Cylinder.full_space(n), a) == a
    assert cylinder_intersect(Cylinder.of(n, [1]), Cylinder.of(n, [], [1])).empty
    assert cylinder_intersect(a, Cylinder.of(n, [3])) == Cylinder.of(n, [1, 3], [2])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 63), st.integers(0, 63), st.integers(0, 63), st.integers(0, 63))
def test_intersection_matches_point_sets(o1, z1, o2, z2):
    n = 6
    a, b = Cylinder(n, o1, z1), Cylinder(n, o2, z2)
    both = indicator(a, n) * indicator(b, n)
    assert np.array_equal(indicator(cylinder_intersect(a, b), n), both)


def test_empty_is_canonical():
    assert Cylinder(3, 1, 1) == Cylinder(3, 3, 3) == Cylinder(3, empty=True)


def test_family_a1_n2():
    fam = family(2, 1, "A")
    assert [repr(c) for c in fam] == ["F", "{1}|1", "{2}|1", "{1}|0", "{2}|0"]


@pytest.mark.parametrize("n", range(1, 7))
def test_family_sizes_by_enumeration(n):
    for level in range(n + 1):
        brute = sum(1 for s in range(1 << n) for t in range(1 << n)
                    if not s & t and popcount(s) + popcount(t) <= level)
        assert len(family(n, level, "A")) == brute == family_size(n, level, "A")
        assert len(family(n, level, "A+")) == sum(math.comb(n, i) for i in range(level + 1))
        assert len(family(n, level, "A-")) == family_size(n, level, "A-")
    assert len(family(n, 1, "A+")) == n + 1


def test_full_power_set_order():
    fam = family(3, 3, "A+")
    assert len(fam) == 8 and fam[-1] == Cylinder.of(3, [1, 2, 3]) and fam[0].is_full()


def test_family_rejects_bad_level():
    with pytest.raises(ValueError):
        family(3, 4)
    with pytest.raises(ValueError):
        family(3, 1, "B")


def test_zeta_mobius_small():
    assert zeta_matrix(1).tolist() == [[1, 1], [0, 1]]
    assert mobius_matrix(1).tolist() == [[1, -1], [0, 1]]
    fam = family(2, 2, "A+")
    assert mobius_matrix(2)[0, fam.position(Cylinder.of(2, [1, 2]))] == 1


@pytest.mark.parametrize("n", range(1, 11))
def test_zeta_mobius_inverse(n):
    assert np.array_equal(zeta_matrix(n) @ mobius_matrix(n), np.eye(1 << n, dtype=np.int64))


def test_l_matrix_literal_rule():
    n = 2
    L = l_matrix(n, 2, "A+")
    rows, cols = family(n, 2, "A"), family(n, 2, "A+")
    assert L[0, 0] == 1
    assert L[rows.position(Cylinder.of(n, [1], [2])), cols.position(Cylinder.of(n, [1, 2]))] == -1
    assert L[rows.position(Cylinder.of(n, [1, 2])), cols.position(Cylinder.of(n, [1, 2]))] == 1
    assert np.all(np.count_nonzero(L, axis=1) == 1)


def test_l_matrix_does_not_expand_indicators():
    # the single-term rule maps the indicator of {1}|1 to minus itself
    n = 2
    pts = np.array(points(n), dtype=float)
    ups = np.array([[float(all(p[i - 1] for i in elements_of(c.ones))) for p in pts] for c in family(n, 2, "A+")])
    lit = l_matrix(n, 2, "A+") @ ups
    exact = np.array([indicator(c, n) for c in family(n, 2, "A")])
    assert not np.allclose(lit, exact)


@pytest.mark.parametrize("n,k", [(2, 1), (2, 2), (3, 2), (4, 2), (4, 3)])
@pytest.mark.parametrize("kind", ["A+", "A-"])
def test_indicator_expansion_reproduces_cylinders(n, k, kind):
    pts = points(n)
    cols = family(n, k, kind)
    if kind == "A+":
        basis = np.array([[float(all(p[i - 1] == 1 for i in elements_of(c.ones))) for p in pts] for c in cols])
    else:
        basis = np.array([[float(all(p[i - 1] == 0 for i in elements_of(c.zeros))) for p in pts] for c in cols])
    exact = np.array([indicator(c, n) for c in family(n, k, "A")])
    assert np.array_equal(indicator_expansion(n, k, kind) @ basis, exact)


def test_u_matrix_examples():
    n = 2
    U = u_matrix(n, 2)
    rows, cols = family(n, 2, "A+"), family(n, 2, "A")
    one = Cylinder.of(n, [1])
    assert U[rows.position(one), cols.position(one)] == 1
    assert U[rows.position(one), cols.position(Cylinder.of(n, [], [1]))] == -1
    assert U[rows.position(Cylinder.of(n, [2])), cols.position(one)] == 0


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (4, 3)])
def test_u_matrix_is_transposed_expansion(n, k):
    assert np.array_equal(u_matrix(n, k), indicator_expansion(n, k, "A+").T)


@given(st.sets(st.integers(1, 20)))
def test_mask_roundtrip(elems):
    m = mask_of(elems)
    assert set(elements_of(m)) == elems and popcount(m) == len(elems)


@given(st.lists(st.integers(0, 2 ** 40), max_size=30))
def test_popcounts_vectorised(xs):
    assert popcounts(np.array(xs, dtype=np.int64)).tolist() == [popcount(x) for x in xs]


def test_size_guard():
    with pytest.raises(SizeGuardError):
        zeta_matrix(17)
    with pytest.raises(ValueError):
        mask_of([0])
