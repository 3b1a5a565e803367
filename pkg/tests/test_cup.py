import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from barcalc.bar import nested_from_leaves
from barcalc.cup import (
    check_cup_forms,
    check_graded_ring_axioms,
    cup_closed_form,
    cup_eval,
    cup_grid,
    cup_grid_recursive,
    homology_circle_product,
    hopf_checks,
    naturality_check,
)
from barcalc.errors import ShapeMismatch
from barcalc.rings import FiniteRing, RingSpec

from oracles import nested_face, sparse_rank_mod_p

Z2, Z3, Z4, Z6 = (FiniteRing.cyclic(m) for m in (2, 3, 4, 6))


def test_degree_zero_is_the_ring_product():
    assert cup_eval(Z6, 0, 0, 1, 2, 5) == 4
    for a, b in itertools.product(range(6), repeat=2):
        assert cup_eval(Z6, 0, 0, 3, a, b) == (a * b) % 6


def test_scalar_times_tuple():
    assert cup_eval(Z6, 0, 1, 2, 2, (3, 4)) == (0, 2)
    x = ((1, 5), (3, 2))
    assert cup_eval(Z6, 0, 2, 2, 1, x) == x


def test_closed_form_example():
    assert cup_closed_form(Z2, 1, 1, 2, (1, 0), (1, 1)) == ((1, 1), (0, 0))
    assert cup_eval(Z2, 1, 1, 2, (1, 0), (1, 1)) == ((1, 1), (0, 0))
    zero = ((0, 0), (0, 0))
    assert cup_closed_form(Z4, 2, 1, 2, zero, (3, 1)) == (((0, 0), (0, 0)), ((0, 0), (0, 0)))
    assert cup_closed_form(Z4, 1, 1, 1, (3,), (3,)) == ((1,),)


def test_shape_errors():
    with pytest.raises(ShapeMismatch):
        cup_eval(Z2, 1, 1, 2, (1,), (1, 0))
    with pytest.raises(ShapeMismatch):
        cup_closed_form(Z2, 0, 0, 1, 3, 1)


@pytest.mark.parametrize("spec", ["Z/2", "Z/3", "Z/2 x Z/2"])
def test_forms_agree_exhaustively_small(spec):
    s = RingSpec.parse(spec).ring()
    for n in range(3):
        for m in range(3 - n):
            for p in range(3):
                r = check_cup_forms(s, n, m, p)
                assert r.mismatches == 0, r


def test_universal_instance_is_used_for_large_domains():
    r = check_cup_forms(Z4, 3, 0, 3, budget=1 << 10, samples=500)
    assert r.method == "universal+sampled" and r.mismatches == 0


@st.composite
def cup_inputs(draw):
    spec = draw(st.sampled_from(["Z/2", "Z/4", "Z/5", "Z/6", "Z/2 x Z/3", "Z/2 x Z/2"]))
    s = RingSpec.parse(spec).ring()
    n = draw(st.integers(0, 3))
    m = draw(st.integers(0, 3 - n))
    p = draw(st.integers(1, 3))
    y = draw(st.lists(st.integers(0, s.size - 1), min_size=p**n, max_size=p**n))
    x = draw(st.lists(st.integers(0, s.size - 1), min_size=p**m, max_size=p**m))
    return s, n, m, p, nested_from_leaves(y, n, p), nested_from_leaves(x, m, p)


@settings(max_examples=300, deadline=None)
@given(cup_inputs())
def test_recursion_equals_closed_form(args):
    s, n, m, p, y, x = args
    assert cup_eval(s, n, m, p, y, x) == cup_closed_form(s, n, m, p, y, x)


def test_grid_forms_broadcast():
    mul = lambda a, b: Z6.mul[a, b]  # noqa: E731
    y = np.array([[1, 2], [3, 4]])
    x = np.array([[5, 0]])
    assert np.array_equal(cup_grid(mul, y, x, 1, 1), cup_grid_recursive(mul, y, np.repeat(x, 2, 0), 1, 1))


def test_axioms_z2_and_z6():
    rep = check_graded_ring_axioms(Z2, 2, 3)
    assert rep.ok, rep.failures()
    assert set(rep.summary()) == {"simplicial", "associativity", "unit", "distributivity (left)",
                                  "distributivity (right)"}
    rep = check_graded_ring_axioms(Z6, 2, 2)
    assert rep.ok, rep.failures()
    assert "commutativity_up_to_index_swap" in rep.measurements


def test_axioms_detect_a_flipped_entry():
    bad = Z4.with_mul_entry(2, 3, 1)
    rep = check_graded_ring_axioms(bad, 1, 2)
    failed = {r.axiom for r in rep.failures()}
    assert {"distributivity (left)", "distributivity (right)"} <= failed
    assert all(r.witness for r in rep.failures())


def test_generator_reduced_distributivity_catches_faults():
    bad = Z4.with_mul_entry(2, 3, 1)
    rep = check_graded_ring_axioms(bad, 1, 2, budget=1)
    dist = [r for r in rep.results if r.axiom.startswith("distributivity")]
    assert all(r.method == "generator-reduced" for r in dist)
    assert any(not r.passed for r in dist)


def test_circle_product_generator_squared():
    hp = homology_circle_product(Z2, 2, 1, 1, 1, 1)
    assert hp.dims == (1, 1, 1)
    assert hp.matrix.tolist() == [[1]]
    assert hp.representative_independent and hp.perturbations == 10


def test_explicit_cycle_oracle():
    # shuffle of (1) with itself, cupped on each simplex, is a cycle that is not a boundary
    chain = [((0, 0), (1, 0)), ((0, 1), (0, 0))]
    assert cup_closed_form(Z2, 1, 1, 2, (0, 1), (1, 0)) == chain[0]
    assert cup_closed_form(Z2, 1, 1, 2, (1, 0), (0, 1)) == chain[1]
    bnd: dict = {}
    for t in chain:
        for i in range(3):
            f = nested_face(t, 2, i, 2)
            bnd[f] = (bnd.get(f, 0) + 1) % 2
    assert not any(bnd.values())
    level3 = list(itertools.product(itertools.product(range(2), repeat=3), repeat=3))
    level2 = list(itertools.product(itertools.product(range(2), repeat=2), repeat=2))
    pos = {t: k for k, t in enumerate(level2)}
    cols = []
    for t in level3:
        col: dict = {}
        for i in range(4):
            r = pos[nested_face(t, 2, i, 2)]
            col[r] = (col.get(r, 0) + 1) % 2
        cols.append({r: v for r, v in col.items() if v})
    base = sparse_rank_mod_p(cols, 2)
    assert sparse_rank_mod_p(cols + [{pos[t]: 1 for t in chain}], 2) == base + 1


def test_degree_zero_pairing_is_the_multiplication_table():
    hp = homology_circle_product(Z3, 3, 0, 0, 0, 0)
    want = np.zeros((3, 9), dtype=int)
    for a, b in itertools.product(range(3), repeat=2):
        want[(a * b) % 3, a * 3 + b] = 1
    assert np.array_equal(hp.matrix, want)


def test_unit_class_acts_as_identity():
    hp = homology_circle_product(Z2, 2, 0, 1, 0, 1)
    d = hp.dims[1]
    unit_block = hp.matrix[:, Z2.one * d : (Z2.one + 1) * d]
    assert np.array_equal(unit_block % 2, np.eye(d, dtype=int))
    assert not (hp.matrix[:, Z2.zero * d : (Z2.zero + 1) * d] % 2).any()


def test_naturality_small_and_fault():
    rep = naturality_check(Z3, 3, 1, 2)
    assert rep.ok, rep.mismatches()[:3]
    rep = naturality_check(Z2, 2, 2, 2, transpose_fault=True)
    assert not rep.ok and rep.mismatches()


def test_hopf_structure():
    rep = hopf_checks(Z2, 2, 0, 2)
    assert rep.ok
    rep = hopf_checks(Z4, 2, 1, 2)
    assert rep.ok
    names = {c["check"] for c in rep.checks}
    assert {"antipode", "antipode involution", "coproduct multiplicative"} <= names
