from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilvend.arith import (
    DegreeCapError,
    RatPoly,
    all_roots_inside_unit_circle,
    as_rat,
    charpoly,
    det,
    factor_int_poly,
    left_nullspace,
    mat_inv,
    mat_mul,
    monic_integral_part,
    primitive_int_vector,
    rank,
    rat_str,
    solve_left,
    vec_mat,
)

X = sympy.symbols("x")

rats = st.fractions(min_value=-6, max_value=6, max_denominator=4)


def square(n, elems=rats):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n)


def to_sympy(A):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in map(as_rat, r)] for r in A])


def poly_to_sympy(p: RatPoly):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)], X)


def test_rat_str_round_trip():
    assert rat_str(Fraction(-3, 6)) == "-1/2"
    assert rat_str(4) == "4"
    assert as_rat(" 7/21 ") == Fraction(1, 3)
    with pytest.raises(TypeError):
        as_rat(0.5)


def test_primitive_vector():
    assert primitive_int_vector([Fraction(-1, 2), Fraction(3, 4), 0]) == (2, -3, 0)
    assert primitive_int_vector([0, 0]) == (0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_det_and_charpoly_agree_with_sympy(A):
    S = to_sympy(A)
    assert det(A) == Fraction(str(S.det()))
    assert poly_to_sympy(charpoly(A)) == sympy.Poly(S.charpoly(X).as_expr(), X)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_inverse_and_rank(A):
    assert rank(A) == to_sympy(A).rank()
    if det(A) != 0:
        n = len(A)
        assert mat_mul(A, mat_inv(A)) == tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(square))
def test_left_nullspace(A):
    ker = left_nullspace(A)
    assert len(ker) == len(A) - rank(A)
    for u in ker:
        assert not any(vec_mat(u, A))


def test_solve_left_recovers_matrix():
    rows = [(1, 2), (0, 3), (1, 5)]
    A = ((Fraction(1, 2), 1), (1, 0))
    assert solve_left(rows, [vec_mat(r, A) for r in rows]) == A
    assert solve_left(rows, [(1, 0), (0, 1), (0, 0)]) is None


def test_factorization_is_sorted_and_exact():
    # (x - 2)(2x + 1)(x^2 + 1)^2
    p = RatPoly([-2, 1]) * RatPoly([1, 2]) * RatPoly([1, 0, 1]) ** 2
    content, factors = factor_int_poly(p)
    assert content == 1
    assert [(f.int_coeffs(), m) for f, m in factors] == [((-2, 1), 1), ((1, 2), 1), ((1, 0, 1), 2)]


def test_factor_degree_cap():
    with pytest.raises(DegreeCapError):
        factor_int_poly(RatPoly([1] + [0] * 30 + [1]))


def test_monic_integral_part_drops_non_integral_factors():
    # x^2 - x/2 - 1 is irreducible over Q and not integral
    chi = RatPoly([-1, Fraction(-1, 2), 1]) * RatPoly([-3, 1])
    assert monic_integral_part(chi) == RatPoly([-3, 1])
    assert monic_integral_part(RatPoly([-1, Fraction(-1, 2), 1])) == RatPoly.const(1)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.integers(1, 6))
def test_schur_cohn_matches_numeric_roots(tail, lead):
    p = RatPoly([*tail, lead])
    sq = sympy.Poly(list(reversed(p.int_coeffs())), X).sqf_part()
    roots = sq.nroots(n=30, maxsteps=200) if sq.degree() > 0 else []
    # skip polynomials with a root numerically on the circle
    mods = [abs(complex(r)) for r in roots]
    if any(abs(m - 1) < 1e-9 for m in mods):
        return
    assert all_roots_inside_unit_circle(p) == all(m < 1 for m in mods)


def test_schur_cohn_boundary_cases():
    assert not all_roots_inside_unit_circle(RatPoly([1, 1]))
    assert all_roots_inside_unit_circle(RatPoly([Fraction(-1, 2), 1]))
    assert not all_roots_inside_unit_circle(RatPoly([-1, Fraction(-1, 2), 1]))
