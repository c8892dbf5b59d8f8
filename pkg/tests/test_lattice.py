from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilvend.arith import RatPoly, monic_integral_part
from nilvend.lattice import (
    INFINITE,
    Lattice,
    hnf,
    hnf_with_transform,
    index,
    integer_left_kernel,
    intersect,
    invariant_core,
    map_image,
    map_preimage,
    quotient_charpoly,
    saturate,
    snf,
)

ints = st.integers(-9, 9)


def int_rows(n, lo=1, hi=4):
    return st.lists(st.lists(ints, min_size=n, max_size=n).map(tuple), min_size=lo, max_size=hi)


dims = st.integers(1, 4)


def full_rank_rows(n):
    return int_rows(n, n, n + 1).filter(lambda M: sympy.Matrix(M).rank() == n)


def oracle_index(rows, n):
    """[Z^n : span(rows)] as the gcd of the maximal minors, via sympy."""
    M = sympy.Matrix(rows)
    if M.rank() < n:
        return INFINITE
    g = 0
    from itertools import combinations

    for sel in combinations(range(len(rows)), n):
        g = gcd(g, int(M.extract(list(sel), list(range(n))).det()))
    return abs(g)


def in_span_over_Z(v, rows):
    sol = sympy.Matrix(rows).T.gauss_jordan_solve(sympy.Matrix(v))
    # the particular solution with free parameters at zero is enough when rows are independent
    x = sol[0].subs({s: 0 for s in sol[0].free_symbols})
    return all(e.is_integer for e in x)


@settings(max_examples=100, deadline=None)
@given(dims.flatmap(lambda n: st.tuples(st.just(n), int_rows(n))))
def test_hnf_shape_and_span(data):
    n, rows = data
    L = hnf(rows, n)
    piv = L.pivots()
    assert piv == sorted(piv) and len(set(piv)) == len(piv)
    for r, p in zip(L.basis, piv):
        assert r[p] > 0
    for k, (r, p) in enumerate(zip(L.basis, piv)):
        assert all(0 <= L.basis[j][p] < r[p] for j in range(k))
    for r in rows:
        assert r in L
    if L.basis:
        for r in L.basis:
            assert in_span_over_Z(r, [list(b) for b in L.basis])


@settings(max_examples=100, deadline=None)
@given(dims.flatmap(lambda n: st.tuples(st.just(n), int_rows(n))))
def test_hnf_transform_and_kernel(data):
    n, rows = data
    H, U = hnf_with_transform(rows, n)
    assert abs(sympy.Matrix(U).det()) == 1
    prod = [tuple(sum(U[i][k] * rows[k][j] for k in range(len(rows))) for j in range(n)) for i in range(len(rows))]
    assert prod[: len(H)] == H
    assert all(not any(r) for r in prod[len(H):])
    assert len(integer_left_kernel(rows, n)) == len(rows) - sympy.Matrix(rows).rank()


@settings(max_examples=100, deadline=None)
@given(dims.flatmap(lambda n: st.tuples(st.just(n), int_rows(n))))
def test_index_matches_minor_gcd(data):
    n, rows = data
    assert index(Lattice.full(n), hnf(rows, n)) == oracle_index(rows, n)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(st.just(n), int_rows(n), int_rows(n))))
def test_intersection_is_greatest_lower_bound(data):
    n, a, b = data
    L, M = hnf(a, n), hnf(b, n)
    K = intersect(L, M)
    assert K <= L and K <= M
    # any vector in both lies in K; probe a box of small vectors
    from itertools import product

    for v in product(range(-3, 4), repeat=n):
        if v in L and v in M:
            assert v in K


def test_index_of_lower_rank_is_infinite():
    assert index(Lattice.full(2), hnf([(1, 1)], 2)) is INFINITE
    with pytest.raises(ValueError):
        index(hnf([(2, 0), (0, 2)], 2), Lattice.full(2))


def test_saturation_example():
    assert saturate(hnf([(2, 4)], 2)) == hnf([(1, 2)], 2)
    assert saturate(hnf([(2, 0), (0, 2)], 2)) == Lattice.full(2)


def test_map_image_and_preimage():
    A = ((Fraction(1, 2), 1), (1, 0))
    L = hnf([(2, 0), (0, 1)], 2)
    img = map_image(L, A)
    assert img == hnf([(1, 2), (1, 0)], 2)
    pre = map_preimage(Lattice.full(2), A)
    assert pre == hnf([(2, 0), (0, 1)], 2)
    with pytest.raises(ValueError):
        map_image(Lattice.full(2), A)


def test_invariant_core_examples():
    A = ((Fraction(1, 2), 1), (1, 0))
    # x^2 - x/2 - 1 has no integral factor: nothing nonzero is invariant
    assert invariant_core(Lattice.full(2), A) == Lattice.zero(2)
    B = ((2, 0), (0, Fraction(1, 2)))
    assert invariant_core(Lattice.full(2), B) == hnf([(1, 0)], 2)
    C = ((1, Fraction(1, 2)), (0, 1))
    K = invariant_core(Lattice.full(2), C)
    assert K.rank == 2 and map_image(K, C) <= K


def test_snf_small():
    D, U, V = snf([(2, 4, 4), (-6, 6, 12), (10, -4, -16)])
    assert [D[i][i] for i in range(3)] == [2, 6, 12]


def test_quotient_charpoly_factor():
    B = ((2, 0), (0, Fraction(1, 2)))
    K = hnf([(1, 0)], 2)
    assert quotient_charpoly(K, B) == RatPoly([Fraction(-1, 2), 1])
    assert monic_integral_part(quotient_charpoly(K, B)) == RatPoly.const(1)
