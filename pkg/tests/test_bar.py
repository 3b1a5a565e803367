import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from barcalc.bar import (
    bar,
    bar_simplicial_algebra,
    bar_simplicial_group,
    degen_eval,
    face_eval,
    iterated_bar,
    iterated_bar_algebra,
    nested_from_leaves,
    nested_to_leaves,
)
from barcalc.errors import IndexOutOfRange, InfiniteLevel, ShapeMismatch
from barcalc.exact_linalg import FGAbelianGroup, IntMatrix
from barcalc.rings import AugCommAlgebra, FiniteRing, RingSpec
from barcalc.simplicial import (
    GridSimplicialSet,
    MatrixSetView,
    constant,
    homotopy_groups,
    verify_identities,
)
from barcalc.simplicial.sets import encode_leaves

from oracles import nerve_face


def G(text):
    return FGAbelianGroup.parse(text)


def test_nerve_low_faces():
    assert face_eval("Z/4", 1, 1, 0, (3,)) == () == face_eval("Z/4", 1, 1, 1, (3,))
    assert face_eval("Z/4", 1, 2, 1, (3, 2)) == (1,)
    assert degen_eval("Z/4", 1, 1, 0, (3,)) == (0, 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
def test_nerve_matches_tuple_formulas(q):
    x = bar_simplicial_group(f"Z/{q}", 4).as_set()
    for p in range(1, 5 if q <= 4 else 4):
        tuples = list(itertools.product(range(q), repeat=p))
        pos = {t: k for k, t in enumerate(itertools.product(range(q), repeat=p - 1))}
        for i in range(p + 1):
            want = np.array([pos[nerve_face(t, i, q)] for t in tuples])
            assert np.array_equal(x.face(p, i), want)


def test_nerve_of_klein_four_matches_tuple_formulas():
    s = RingSpec.parse("Z/2 x Z/2").ring()
    x = GridSimplicialSet(s, 1, 3)

    def face(t, i):
        if i == 0:
            return t[1:]
        if i == len(t):
            return t[:-1]
        return t[: i - 1] + (int(s.add[t[i - 1], t[i]]),) + t[i + 1 :]

    for p in range(1, 4):
        pos = {t: k for k, t in enumerate(itertools.product(range(4), repeat=p - 1))}
        for i in range(p + 1):
            want = [pos[face(t, i)] for t in itertools.product(range(4), repeat=p)]
            assert x.face(p, i).tolist() == want


def test_algebra_bar_of_unit_is_trivial():
    k = AugCommAlgebra.truncated_polynomial(2, 1)
    b = bar_simplicial_algebra(k, 3)
    for p in range(4):
        assert b.rank(p) == 1
    for p in range(1, 4):
        for i in range(p + 1):
            assert b.face(p, i) == IntMatrix.identity(1)


def test_algebra_bar_faces_of_dual_numbers():
    a = AugCommAlgebra.truncated_polynomial(2, 2)  # basis 1, x
    b = bar_simplicial_algebra(a, 3)
    d0 = b.face(1, 0).to_dense()
    assert d0 == [[1, 0]]  # 1 -> 1, x -> eps(x) = 0
    d1 = b.face(2, 1).to_dense()
    xx = 1 * 2 + 1
    assert [row[xx] for row in d1] == [0, 0]  # x (x) x -> x^2 = 0
    assert verify_identities(b).ok


def test_bar_of_constant_is_the_nerve():
    c = constant(G("Z/3"), 3)
    nerve = bar_simplicial_group("Z/3", 3)
    bc = bar(c)
    for p in range(1, 4):
        for i in range(p + 1):
            assert bc.face(p, i) == nerve.face(p, i)


def test_bar_of_nerve_cardinality_and_identities():
    b = bar(GridSimplicialSet(FiniteRing.cyclic(2), 1, 3))
    assert b.size(3) == 2**9
    b3 = bar(bar_simplicial_group("Z/3", 4))
    assert verify_identities(b3).ok
    assert verify_identities(b3.as_set().truncate(3)).ok


def test_iterated_bar_basics():
    b0 = iterated_bar("Z/7", 0, 3)
    assert [b0.exponent(p) for p in range(4)] == [1, 1, 1, 1]
    assert iterated_bar("Z/2", 2, 3).as_set().size(3) == 512
    assert homotopy_groups(iterated_bar("Z/5", 2, 4), 3) == [G("0"), G("0"), G("Z/5"), G("0")]


def test_iterated_bar_over_z_has_no_set_view():
    with pytest.raises(InfiniteLevel):
        iterated_bar("Z", 1, 3).as_set()
    assert homotopy_groups(iterated_bar("Z", 2, 4), 3) == [G("0"), G("0"), G("Z"), G("0")]


def test_matrix_and_grid_presentations_agree():
    m = iterated_bar("Z/3", 2, 3)
    view, grid = MatrixSetView(m), GridSimplicialSet(FiniteRing.cyclic(3), 2, 3)
    for p in range(1, 3):
        for i in range(p + 1):
            assert np.array_equal(view.face(p, i), grid.face(p, i))
        for i in range(p):
            assert np.array_equal(view.degen(p - 1, i), grid.degen(p - 1, i))


def test_depth_two_inner_face():
    s = FiniteRing.cyclic(2)
    for a, b, c, d in itertools.product(range(2), repeat=4):
        assert face_eval(s, 2, 2, 1, ((a, b), (c, d))) == (((a + b + c + d) % 2,),)


def test_bad_shapes_raise():
    with pytest.raises(ShapeMismatch):
        face_eval("Z/2", 2, 2, 0, ((0, 1), (1,)))
    with pytest.raises(ShapeMismatch):
        face_eval("Z/2", 1, 2, 0, (0, 5))
    with pytest.raises(IndexOutOfRange):
        face_eval("Z/2", 1, 2, 3, (0, 1))


def test_iterated_algebra_bar_identities():
    a = AugCommAlgebra.truncated_polynomial(3, 2)
    assert verify_identities(iterated_bar_algebra(a, 2, 2)).ok


@st.composite
def nested_elements(draw):
    q = draw(st.sampled_from([2, 3, 4, 6]))
    n = draw(st.integers(1, 3))
    p = draw(st.integers(1, 3 if n < 3 else 2))
    leaves = draw(st.lists(st.integers(0, q - 1), min_size=p**n, max_size=p**n))
    return q, n, p, nested_from_leaves(leaves, n, p)


@settings(max_examples=200, deadline=None)
@given(nested_elements(), st.data())
def test_pointwise_maps_agree_with_tables(el, data):
    q, n, p, t = el
    assume(q ** ((p + 1) ** n) <= 1 << 16)
    s = FiniteRing.cyclic(q)
    x = GridSimplicialSet(s, n, p + 1)
    k = int(encode_leaves(np.array([nested_to_leaves(t, n)]), q)[0])
    i = data.draw(st.integers(0, p))
    f = face_eval(s, n, p, i, t)
    if p - 1 > 0:
        assert x.face(p, i)[k] == int(encode_leaves(np.array([nested_to_leaves(f, n)]), q)[0])
    g = degen_eval(s, n, p, i, t)
    assert x.degen(p, i)[k] == int(encode_leaves(np.array([nested_to_leaves(g, n)]), q)[0])
    assert face_eval(s, n, p + 1, i, g) == t  # d_i s_i = id
    assert face_eval(s, n, p + 1, i + 1, g) == t  # d_(i+1) s_i = id


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 2), st.data())
def test_faces_are_additive(q, n, data):
    # each face of B^n S is a homomorphism of the levelwise group
    s = FiniteRing.cyclic(q)
    p = data.draw(st.integers(1, 3 if n == 1 else 2))
    a = data.draw(st.lists(st.integers(0, q - 1), min_size=p**n, max_size=p**n))
    b = data.draw(st.lists(st.integers(0, q - 1), min_size=p**n, max_size=p**n))
    ta, tb = nested_from_leaves(a, n, p), nested_from_leaves(b, n, p)
    tab = nested_from_leaves([(u + v) % q for u, v in zip(a, b)], n, p)
    for i in range(p + 1):
        fa, fb, fab = (nested_to_leaves(face_eval(s, n, p, i, t), n) for t in (ta, tb, tab))
        assert fab == [(u + v) % q for u, v in zip(fa, fb)]
