import numpy as np
import pytest

from barcalc.bar import iterated_bar, iterated_bar_algebra
from barcalc.dg import (
    DGAlgebra,
    alexander_whitney,
    bar_words,
    condense,
    dg_bar,
    dold_puppe_compare,
    ez_shuffle,
    shuffles,
)
from barcalc.errors import TruncationTooLow
from barcalc.exact_linalg import IntMatrix
from barcalc.rings import AugCommAlgebra, FiniteRing
from barcalc.simplicial import (
    GridSimplicialSet,
    bar_bisimplicial,
    constant_bisimplicial,
    grid_bisimplicial,
    homotopy_groups,
    linearize,
    linearize_bisimplicial,
    normalized_chains,
)
from barcalc.simplicial.sets import encode_leaves


def nerve_module(q: int, modulus: int, top: int = 3):
    return linearize(GridSimplicialSet(FiniteRing.cyclic(q), 1, top), modulus)


def test_shuffle_counts_and_signs():
    sh = list(shuffles(1, 1))
    assert sh == [((0,), (1,), 1), ((1,), (0,), -1)]
    assert len(list(shuffles(2, 2))) == 6
    assert sum(s for *_, s in shuffles(1, 2)) == 1


def test_ez_on_two_edges_over_z():
    x = nerve_module(2, 0)
    ez = ez_shuffle(x, x, 2)
    m = ez.maps[2]
    # block (1,1) is the middle column; entries sit on s1 x (x) s0 y and s0 x (x) s1 y
    col = {int(r): int(v) for r, c, v in zip(m.row, m.col, m.val) if c == 1}
    from barcalc.dg import _monoidal
    basis = list(_monoidal(x, x, 2).nxy.basis[2])
    s0, s1 = (int(encode_leaves(np.array([t]), 2)[0]) for t in ((0, 1), (1, 0)))
    assert col == {basis.index(s1 * 4 + s0): 1, basis.index(s0 * 4 + s1): -1}


@pytest.mark.parametrize("q", [2, 3])
def test_aw_after_ez_is_identity(q):
    x = nerve_module(q, q)
    ez, aw = ez_shuffle(x, x, 3), alexander_whitney(x, x, 3)
    assert ez.is_chain_map and aw.is_chain_map
    comp = aw.compose(ez)
    for k in range(4):
        assert (comp.maps[k] - IntMatrix.identity(comp.maps[k].rows)).mod(q).is_zero()


def test_shuffle_maps_need_truncation():
    x = nerve_module(2, 2, top=2)
    with pytest.raises(TruncationTooLow):
        ez_shuffle(x, x, 3)


@pytest.mark.parametrize("p", [2, 3])
def test_dg_bar_of_dual_numbers(p):
    a = AugCommAlgebra.truncated_polynomial(p, 2)
    b = dg_bar(a, 5)
    assert b.ranks == [1] * 6
    assert b.homology_dims(p, 4) == [1] * 5
    assert b.check().ok
    pi = homotopy_groups(iterated_bar_algebra(a, 1, 5), 4)
    assert [g.fp_dim(p) for g in pi] == b.homology_dims(p, 4)


@pytest.mark.parametrize("p", [2, 3])
def test_square_of_degree_one_class_vanishes(p):
    b = dg_bar(AugCommAlgebra.truncated_polynomial(p, 2), 2)
    # [x] * [x] = [x|x] - [x|x] by the Koszul sign
    assert b.mult(1, 1).mod(p).is_zero()


def test_dg_bar_words_and_degree_check():
    a = AugCommAlgebra.truncated_polynomial(2, 3)
    words = bar_words(a, 3)
    assert [len(w) for w in words] == [1, 2, 4, 8]
    with pytest.raises(TruncationTooLow):
        dg_bar(dg_bar(a, 2), 4)


def test_iterated_dg_bar():
    a = AugCommAlgebra.truncated_polynomial(2, 2)
    bb = dg_bar(dg_bar(a, 4), 3)
    assert bb.check().ok
    pi = homotopy_groups(iterated_bar_algebra(a, 2, 4), 3)
    assert bb.homology_dims(2, 2) == [g.fp_dim(2) for g in pi][:3]


def test_from_algebra_round_trip():
    a = AugCommAlgebra.truncated_polynomial(3, 3)
    d = DGAlgebra.from_algebra(a)
    assert d.ranks == [3] and d.check().ok


def test_condense_constant_object():
    y = nerve_module(2, 2, top=4)
    want = normalized_chains(y, 3)
    for direction in ("vertical", "horizontal"):
        c = condense(constant_bisimplicial(y, direction), 3)
        assert c.ranks == want.ranks
        assert [h.fp_dim(2) for h in c.homology_list(2)] == [h.fp_dim(2) for h in want.homology_list(2)]


def test_condensation_squares_to_zero():
    x = bar_bisimplicial(iterated_bar("Z/3", 1, 4), 3)
    c = condense(x, 4)
    for n in range(2, 5):
        assert (c.d(n - 1) @ c.d(n)).mod(3).is_zero()


@pytest.mark.parametrize("q", [2, 3])
def test_dold_puppe_group_module(q):
    rep = dold_puppe_compare(bar_bisimplicial(iterated_bar(f"Z/{q}", 1, 5), q), 3)
    assert rep.ok, rep.to_dict()
    # coordinates give the homotopy of B(B Z/q): one class in degree 2
    assert rep.diagonal_dims == [0, 0, 1, 0]


def test_dold_puppe_linearized_sets():
    x = linearize_bisimplicial(grid_bisimplicial(FiniteRing.cyclic(2), 1, 1, 4), 2)
    rep = dold_puppe_compare(x, 2)
    assert rep.ok, rep.to_dict()
    assert rep.diagonal_dims == [1, 0, 1]
