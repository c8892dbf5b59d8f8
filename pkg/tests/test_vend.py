from fractions import Fraction

import pytest
import sympy

from nilvend.lattice import hnf
from nilvend.nilgroup import Elem, GroupDesc, make_subgroup, translation_subgroup
from nilvend.registry import EXAMPLES, make_example
from nilvend.selfsim import AtomTable
from nilvend.vend import (
    a_of,
    bounds_report,
    center_restriction,
    core_compute,
    derived_chain,
    f_eval,
    finite_state_predict,
    image_data,
    images_hom,
    integer_eigenvalues,
    is_f_invariant,
    is_k_number,
    is_semi_invariant,
    l_of,
    make_triple,
    matrix_hom,
    prime_factors,
    simplicity_decide,
    strong_simplicity,
    thm13_check,
    triple_validate,
    verify_core,
)

HEIS = GroupDesc.affine([[1, 1], [0, 1]])
TRIPLES = [n for n in EXAMPLES if not isinstance(make_example(n), AtomTable)]


@pytest.mark.parametrize("name", TRIPLES)
def test_registered_triples_validate(name):
    rep = triple_validate(make_example(name))
    assert rep.ok, rep.problems


def test_validation_reports_broken_relation():
    H = make_subgroup(HEIS, hnf([(1, 0), (0, 2)], 2), 2, (0, 0))
    # swapping two images breaks the commutator relation
    bad = make_triple("bad", HEIS, H, images_hom([Elem(0, (1, 0)), Elem(0, (0, -1)), Elem(1, (0, 0))]))
    rep = triple_validate(bad)
    assert not rep.ok and rep.problems


def test_matrix_form_must_map_H_into_G():
    G = GroupDesc.free_abelian(1)
    H = make_subgroup(G, hnf([(2,)], 1))
    bad = make_triple("bad", G, H, matrix_hom([[Fraction(1, 4)]]))
    assert not triple_validate(bad).ok


def test_f_eval_is_a_homomorphism_on_H():
    t = make_example("example33")
    G = t.G
    h1, h2 = Elem(3, (2, 0)), Elem(-3, (0, 6))
    assert f_eval(t, G.mul(h1, h2)) == G.mul(f_eval(t, h1), f_eval(t, h2))
    with pytest.raises(ValueError):
        f_eval(t, Elem(1, (0, 0)))


@pytest.mark.parametrize("name,m_prime", [("heisenberg-intro", 1), ("power-f22", 1), ("example4", 4)])
def test_image_index(name, m_prime):
    assert image_data(make_example(name)).m_prime == m_prime


def test_number_theory():
    assert prime_factors(72) == {2: 3, 3: 2}
    assert (l_of(72), a_of(72)) == (5, 3)
    assert l_of(1) == 0
    assert is_k_number(9, 3) and not is_k_number(10, 3) and is_k_number(1, 5)


def test_simplicity_adding_machine_and_example1():
    assert simplicity_decide(make_example("adding-machine")).status == "Simple"
    assert simplicity_decide(make_example("example1")).status == "Simple"


def test_core_of_matrix_triple_with_invariant_line():
    G = GroupDesc.free_abelian(2)
    H = make_subgroup(G, hnf([(2, 0), (0, 1)], 2))
    # f(v) = v A with the first axis scaled by 1/2 and the second fixed
    t = make_triple("t", G, H, matrix_hom([[Fraction(1, 2), 0], [0, 1]]))
    r = core_compute(t)
    assert r.exact and r.core.W == hnf([(0, 1)], 2) and r.status == "NotSimple"
    assert verify_core(t, r.core)


def test_example33_core_and_invariance():
    t = make_example("example33")
    r = core_compute(t, 8)
    assert r.exact and r.core == translation_subgroup(t.G, hnf([(0, 6)], 2))
    assert is_f_invariant(t, r.core) and verify_core(t, r.core)
    assert not is_f_invariant(t, t.H)


def test_example4_center_map_is_onto():
    t = make_example("example4")
    K, ZH, A = center_restriction(t)
    assert K == hnf([(0, 1)], 2)
    imgs = {f_eval(t, Elem(0, r)) for r in ZH.basis}
    assert Elem(0, (0, 1)) in imgs or Elem(0, (0, -1)) in imgs


def test_integer_eigenvalues():
    A = ((1, Fraction(1, 2), 0), (0, 2, 0), (0, 0, 3))
    # charpoly (x - 1)(x - 2)(x - 3) from the triangular form
    assert integer_eigenvalues(A) == [3, 2, 1]
    assert set(integer_eigenvalues(A)) == {int(r) for r in sympy.Matrix(A).eigenvals()}


def test_strong_simplicity_adding_machine_and_sec54():
    assert strong_simplicity(make_example("adding-machine")).verdict == "StronglySimple"
    st = strong_simplicity(make_example("sec54", n=3))
    assert st.verdict == "WitnessFound" and st.witness.W == hnf([(1, 3, 1)], 3)


def test_derived_chain_example1_indices():
    steps, _ = derived_chain(make_example("example1"), 6)
    assert [s.index_in_G for s in steps] == [2 ** i for i in range(7)]


def test_finite_state_prediction():
    assert finite_state_predict(make_example("adding-machine"))["verdict"] == "Predicted"
    assert finite_state_predict(make_example("example1"))["verdict"] == "NotPredicted"
    assert finite_state_predict(make_example("example33"))["verdict"] == "Inapplicable"


def test_semi_invariance_of_center():
    t = make_example("example2", n=3)
    Z = translation_subgroup(t.G, hnf([(0, 1)], 2))
    assert is_semi_invariant(t, Z)


def test_bounds_report_shape():
    d = bounds_report(make_example("sec54", n=3)).data
    assert (d["m"], d["l(m)"], d["s(G)"], d["c(G)"]) == (4, 2, 2, 3)
    assert d["thm10"]["holds"] is True and d["thm12"]["holds"] is False


def test_index_relation_example33():
    t = make_example("example33")
    rep = thm13_check(t, translation_subgroup(t.G, hnf([(0, 6)], 2))).data
    assert rep["verdict"] == "PairFound" and rep["pair"] == [1, 1]
    with pytest.raises(ValueError):
        thm13_check(t, translation_subgroup(t.G, hnf([(0, 1)], 2)))


def test_index_relation_power_triple():
    t = make_example("power-f22", n=2)
    rep = thm13_check(t, translation_subgroup(t.G, hnf([(0, 16)], 2))).data
    # f(z^16) = z^4 so U^f = <z^4>
    assert rep["Uf"]["lattice"] == [[0, 4]]
    assert (rep["l"], rep["l_prime"], rep["pair"]) == (4, 1, [4, 1])

