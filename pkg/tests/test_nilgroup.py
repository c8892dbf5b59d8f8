"""Group arithmetic checked against a faithful matrix representation.

x^k v is sent to the block matrix [[X^k, 0], [v, 1]], so products of row
vectors compose on the right the same way the group law does.
"""

from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nilvend.lattice import INFINITE, Lattice, hnf
from nilvend.nilgroup import (
    Elem,
    GroupDesc,
    central_data,
    coset_rep,
    isolator,
    make_subgroup,
    quotient_by_center,
    sg_closure,
    sg_contains,
    sg_coords,
    sg_index,
    sg_intersection,
    sg_is_normal,
    sg_member,
    sg_transversal,
    subgroup_center,
    translation_subgroup,
    whole_group,
)
from nilvend.registry import x_matrix

HEIS = GroupDesc.affine([[1, 1], [0, 1]])
F3 = GroupDesc.affine(x_matrix(3))


def as_matrix(G, g):
    n = G.n
    Xk = sympy.Matrix(G.X) ** g.k
    M = sympy.zeros(n + 1, n + 1)
    M[:n, :n] = Xk
    M[n, :n] = sympy.Matrix([list(g.v)])
    M[n, n] = 1
    return M


def elems(G, radius=4):
    k = st.integers(-radius, radius) if G.is_affine else st.just(0)
    v = st.tuples(*[st.integers(-radius, radius)] * G.n)
    return st.builds(Elem, k, v)


groups = st.sampled_from([HEIS, F3, GroupDesc.free_abelian(2)])


@settings(max_examples=150, deadline=None)
@given(groups.flatmap(lambda G: st.tuples(st.just(G), elems(G), elems(G))))
def test_law_matches_matrices(data):
    G, a, b = data
    assert as_matrix(G, G.mul(a, b)) == as_matrix(G, a) * as_matrix(G, b)
    assert as_matrix(G, G.inv(a)) == as_matrix(G, a).inv()
    A, B = as_matrix(G, a), as_matrix(G, b)
    assert as_matrix(G, G.comm(a, b)) == A.inv() * B.inv() * A * B
    assert as_matrix(G, G.pow(a, -3)) == A.inv() ** 3


def test_heisenberg_commutator_is_central():
    a, b = Elem(1, (0, 0)), Elem(0, (1, 0))
    # with [g, h] = g^-1 h^-1 g h and the right action, [b, a] = z
    z = HEIS.comm(b, a)
    assert z == Elem(0, (0, 1)) and HEIS.comm(a, b) == HEIS.inv(z)
    assert HEIS.comm(z, a) == HEIS.identity()


def test_rejects_non_unipotent_action():
    with pytest.raises(ValueError):
        GroupDesc.affine([[2, 0], [0, 1]])


H_INTRO = make_subgroup(HEIS, hnf([(1, 0), (0, 2)], 2), 2, (0, 0))
H33 = make_subgroup(HEIS, hnf([(2, 0), (0, 6)], 2), 3, (0, 0))


@pytest.mark.parametrize("S,m", [(H_INTRO, 4), (H33, 36)])
def test_index_and_transversal(S, m):
    assert sg_index(HEIS, S) == m
    Y = sg_transversal(HEIS, S)
    assert len(Y) == m
    # distinct cosets: y_i y_j^-1 outside S for i != j
    for i, j in product(range(m), repeat=2):
        inside = sg_member(HEIS, S, HEIS.mul(Y[i], HEIS.inv(Y[j])))
        assert inside == (i == j)


@pytest.mark.parametrize("S", [H_INTRO, H33])
def test_coset_rep_is_in_transversal_and_same_coset(S):
    Y = set(sg_transversal(HEIS, S))
    for k, a, b in product(range(-4, 5), range(-4, 5), range(-4, 5)):
        g = Elem(k, (a, b))
        y = coset_rep(HEIS, S, g)
        assert y in Y
        assert sg_member(HEIS, S, HEIS.mul(g, HEIS.inv(y)))


def test_coords_reconstruct_element():
    for g in [Elem(6, (4, 18)), Elem(-3, (2, 0)), Elem(3, (0, 0))]:
        j, c = sg_coords(HEIS, H33, g)
        rebuilt = HEIS.pow(H33.h0(), j)
        for ci, row in zip(c, H33.W.basis):
            rebuilt = HEIS.mul(rebuilt, HEIS.pow(Elem(0, row), ci))
        assert rebuilt == g
    assert sg_coords(HEIS, H33, Elem(1, (0, 0))) is None


def test_closure_of_generators():
    S = sg_closure(HEIS, [Elem(2, (0, 0)), Elem(0, (2, 0))])
    # [x^2, b^2] = z^4
    assert S == make_subgroup(HEIS, hnf([(2, 0), (0, 4)], 2), 2, (0, 0))
    assert sg_contains(HEIS, whole_group(HEIS), S)


def test_intersection_and_normality():
    A = make_subgroup(HEIS, hnf([(1, 0), (0, 1)], 2), 2, (0, 0))
    B = make_subgroup(HEIS, hnf([(2, 0), (0, 1)], 2), 1, (0, 0))
    I = sg_intersection(HEIS, A, B)
    for k, a, b in product(range(-4, 5), range(-3, 4), range(-2, 3)):
        g = Elem(k, (a, b))
        assert sg_member(HEIS, I, g) == (sg_member(HEIS, A, g) and sg_member(HEIS, B, g))
    assert sg_is_normal(HEIS, A)
    assert not sg_is_normal(HEIS, translation_subgroup(HEIS, hnf([(1, 0)], 2)))


def test_central_series_of_filiform_group():
    cd = central_data(F3)
    assert cd.c == 3 and cd.h == 4
    assert cd.center.W == hnf([(0, 0, 1)], 3)
    # gamma_2 is spanned by the rows of X - 1
    assert cd.lower[1].W == hnf([(0, 2, 0), (0, 0, 1)], 3)
    for g in [Elem(1, (0, 0, 0)), Elem(0, (1, 0, 0)), Elem(0, (0, 1, 0))]:
        assert F3.comm(g, Elem(0, (0, 0, 1))) == F3.identity()


def test_subgroup_center_and_isolator():
    ZH = subgroup_center(HEIS, H33)
    assert ZH == translation_subgroup(HEIS, hnf([(0, 6)], 2))
    assert isolator(HEIS, ZH) == translation_subgroup(HEIS, hnf([(0, 1)], 2))
    iso = isolator(HEIS, H33)
    assert iso == whole_group(HEIS)


def test_quotient_by_center():
    Q = quotient_by_center(F3)
    g = Elem(2, (1, -1, 5))
    h = Elem(-1, (0, 3, 2))
    assert Q.project(F3.mul(g, h)) == Q.Q.mul(Q.project(g), Q.project(h))
    assert Q.project(Elem(0, (0, 0, 7))) == Q.Q.identity()
    assert Q.project(Q.lift(Q.project(g))) == Q.project(g)


def test_infinite_index():
    assert sg_index(HEIS, translation_subgroup(HEIS, Lattice.full(2))) is INFINITE


def test_intro_transversal_order():
    # b = (0, (1, 0)) lies in H here, so the cosets are e, z, a, az
    assert sg_transversal(HEIS, H_INTRO) == [Elem(0, (0, 0)), Elem(0, (0, 1)), Elem(1, (0, 0)), Elem(1, (0, 1))]
    assert sg_member(HEIS, H_INTRO, Elem(0, (1, 0)))
