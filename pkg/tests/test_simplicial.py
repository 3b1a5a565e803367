import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from barcalc.bar import iterated_bar
from barcalc.errors import InvalidInput, TruncationTooLow
from barcalc.exact_linalg import FGAbelianGroup, IntMatrix
from barcalc.rings import Coeff, FiniteRing
from barcalc.simplicial import (
    GridSimplicialSet,
    TabulatedSimplicialSet,
    bar_bisimplicial,
    cartesian_product,
    constant,
    constant_bisimplicial,
    constant_set,
    diagonal,
    grid_bisimplicial,
    homology,
    homotopy_groups,
    linearize,
    linearize_bisimplicial,
    normalized_chains,
    tensor_modules,
    unnormalized_chains,
    verify_identities,
)

from oracles import nerve_fp_dims, nerve_integer_homology

Z2, Z3, Z4 = (FiniteRing.cyclic(m) for m in (2, 3, 4))


def nerve(ring, t):
    return GridSimplicialSet(ring, 1, t)


def G(text):
    return FGAbelianGroup.parse(text)


def test_nerve_identities_hold():
    rep = verify_identities(nerve(Z2, 4))
    assert rep.ok and rep.checked > 0


def test_corrupted_face_is_named():
    tab = TabulatedSimplicialSet.from_set(nerve(Z3, 3))
    f = np.array(tab.face(2, 1))
    f[4] = (f[4] + 1) % tab.size(1)
    rep = verify_identities(tab.with_face(2, 1, f))
    assert not rep.ok
    v = rep.violations[0]
    assert v.p >= 1 and v.simplex >= 0
    assert "fails at level" in str(v)


def test_diagonal_of_valid_bisimplicial_set():
    x = grid_bisimplicial(Z2, 1, 1, 3)
    assert verify_identities(x).ok
    assert verify_identities(diagonal(x)).ok


def test_cartesian_product_laws():
    x = nerve(Z3, 2)
    y = nerve(Z4, 2)
    assert cartesian_product(x, y).size(2) == 9 * 16
    point = constant_set(1, 2)
    xp = cartesian_product(x, point)
    for p in range(3):
        assert xp.size(p) == x.size(p)
    for p in range(1, 3):
        for i in range(p + 1):
            assert np.array_equal(xp.face(p, i), x.face(p, i))
    # the swap (a, b) -> (b, a) commutes with every structure map
    xy, yx = cartesian_product(x, y), cartesian_product(y, x)

    def swap(p):
        a, b = np.divmod(np.arange(xy.size(p)), y.size(p))
        return b * x.size(p) + a

    for p in range(1, 3):
        for i in range(p + 1):
            assert np.array_equal(swap(p - 1)[xy.face(p, i)], yx.face(p, i)[swap(p)])
    for p in range(2):
        for i in range(p + 1):
            assert np.array_equal(swap(p + 1)[xy.degen(p, i)], yx.degen(p, i)[swap(p)])
    assert verify_identities(xy).ok


def test_level_three_and_four_cardinalities():
    x = grid_bisimplicial(Z2, 1, 1, 3)
    d = diagonal(x)
    assert [d.size(p) for p in range(4)] == [2 ** (p * p) for p in range(4)]


def test_diagonal_of_bar_of_bar_z3_is_a_complex():
    m = iterated_bar("Z/3", 1, 4)
    diag = diagonal(bar_bisimplicial(m, 3))
    assert verify_identities(diag).ok
    c = unnormalized_chains(diag, 3)  # construction checks d d = 0 mod 3
    for i in range(2, 4):
        assert (c.differentials[i - 1] @ c.differentials[i]).mod(3).is_zero()
    # level 4 as well, through the raw faces
    d4 = [diag.face(4, i) for i in range(5)]
    d3 = [diag.face(3, i) for i in range(4)]
    total = IntMatrix.zeros(diag.rank(2), diag.rank(4))
    for i, a in enumerate(d3):
        for j, b in enumerate(d4):
            total = total + (a @ b).scale((-1) ** (i + j))
    assert total.mod(3).is_zero()


def test_constant_objects():
    c = constant(G("Z/4"), 3)
    assert [c.exponent(p) for p in range(4)] == [1, 1, 1, 1]
    assert homotopy_groups(constant(G("Z/6"), 3), 2) == [G("Z/6"), G("0"), G("0")]
    y = nerve(Z2, 3)
    d = diagonal(constant_bisimplicial(y))
    for p in range(1, 4):
        for i in range(p + 1):
            assert np.array_equal(d.face(p, i), y.face(p, i))
    dh = diagonal(constant_bisimplicial(y, "horizontal"))
    assert [dh.size(p) for p in range(4)] == [y.size(p) for p in range(4)]


def test_linearize_point_and_nerve():
    lp = linearize(constant_set(1, 3), 2)
    assert all(lp.rank(p) == 1 for p in range(4))
    assert lp.face(2, 1) == IntMatrix.identity(1)
    assert linearize(nerve(Z2, 3), 2).rank(3) == 8


def test_linearize_is_strong_monoidal():
    x, y = nerve(Z2, 3), nerve(Z3, 3)
    k_prod = linearize(cartesian_product(x, y), 6)
    k_tens = tensor_modules(linearize(x, 6), linearize(y, 6))
    for p in range(4):
        assert k_prod.rank(p) == k_tens.rank(p)
    for p in range(1, 4):
        for i in range(p + 1):
            assert k_prod.face(p, i) == k_tens.face(p, i)
    for p in range(3):
        for i in range(p + 1):
            assert k_prod.degen(p, i) == k_tens.degen(p, i)
    # comultiplication: (a, b) -> (a, b) (x) (a, b) against the middle-swapped product of coproducts
    lx, ly = linearize(x, 6), linearize(y, 6)
    for p in range(4):
        nx, ny = x.size(p), y.size(p)
        n = nx * ny
        a, b = np.divmod(np.arange(n), ny)
        want = (a * ny + b) * n + (a * ny + b)
        assert np.array_equal(k_prod.comultiplication(p).row[np.argsort(k_prod.comultiplication(p).col)], want)
        dx = lx.comultiplication(p)
        dy = ly.comultiplication(p)
        rows_x = dx.row[np.argsort(dx.col)][a]
        rows_y = dy.row[np.argsort(dy.col)][b]
        xa, xa2 = np.divmod(rows_x, nx)
        yb, yb2 = np.divmod(rows_y, ny)
        assert np.array_equal((xa * ny + yb) * n + (xa2 * ny + yb2), want)
        assert k_prod.counit(p) == lx.counit(p).kron(ly.counit(p))


def test_normalized_ranks():
    k = linearize(constant_set(1, 4), 2)
    assert normalized_chains(k, 3).ranks == [1, 0, 0, 0]
    assert normalized_chains(linearize(nerve(Z2, 5), 2), 4).ranks == [1, 1, 1, 1, 1]


def test_normalized_vs_unnormalized_nerve_z4():
    m = linearize(nerve(Z4, 4), 0)
    a = normalized_chains(m, 3).homology_list(2)
    b = unnormalized_chains(m, 3).homology_list(2)
    assert a == b == [G("Z"), G("Z/4"), G("0")]


def test_homotopy_groups_of_bar():
    assert homotopy_groups(iterated_bar("Z", 1, 3), 2) == [G("0"), G("Z"), G("0")]
    assert homotopy_groups(iterated_bar("Z/2", 2, 4), 3) == [G("0"), G("0"), G("Z/2"), G("0")]


def test_homotopy_needs_truncation():
    with pytest.raises(TruncationTooLow):
        homotopy_groups(iterated_bar("Z/2", 1, 2), 2)


@pytest.mark.parametrize("spec,n", [("Z/2", 1), ("Z/3", 2), ("Z/2 x Z/4", 1)])
def test_homotopy_independent_of_truncation(spec, n):
    a = homotopy_groups(iterated_bar(spec, n, n + 2), n + 1)
    b = homotopy_groups(iterated_bar(spec, n, n + 4), n + 1)
    assert a == b


def test_homology_of_point_and_nerves():
    assert homology(constant_set(1, 3), Coeff.parse("Z"), 2) == [G("Z"), G("0"), G("0")]
    got = homology(nerve(Z2, 6), "Z", 5, normalized=False)
    assert [str(g) for g in got] == nerve_integer_homology(2, 5) == ["Z", "Z/2", "0", "Z/2", "0", "Z/2"]
    for normalized in (True, False):
        got = homology(nerve(Z3, 5), "F3", 4, normalized=normalized)
        assert [g.fp_dim(3) for g in got] == nerve_fp_dims(3, 3, 4) == [1, 1, 1, 1, 1]


def test_chains_of_a_set_need_linearizing():
    with pytest.raises(TypeError):
        normalized_chains(nerve(Z2, 3), 2)


def test_degeneracy_check_in_nondegenerate_basis():
    bad = linearize(nerve(Z2, 3), 2)
    bad._dg = lambda p, i: IntMatrix.zeros(bad.rank(p + 1), bad.rank(p))
    bad._cache.clear()
    with pytest.raises(InvalidInput):
        normalized_chains(bad, 2)


rings = st.sampled_from(["Z/2", "Z/3", "Z/4", "Z/5", "Z/6", "Z/2 x Z/2"])


@settings(max_examples=12, deadline=None)
@given(rings, st.integers(0, 2))
def test_grid_sets_satisfy_identities(spec, n):
    from barcalc.rings import RingSpec

    s = RingSpec.parse(spec).ring()
    top = 1
    while top < 4 and s.size ** ((top + 1) ** n) <= 5000:
        top += 1
    assert verify_identities(GridSimplicialSet(s, n, top)).ok


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.sampled_from(["Z", "F2", "F3", "Z/4"]))
def test_normalized_equals_unnormalized(q, coeff):
    x = nerve(FiniteRing.cyclic(q), 4)
    assert homology(x, coeff, 3, normalized=True) == homology(x, coeff, 3, normalized=False)


def test_linearized_bisimplicial_diagonal_identities():
    x = linearize_bisimplicial(grid_bisimplicial(Z2, 1, 1, 3), 2)
    assert verify_identities(x).ok
    assert verify_identities(diagonal(x)).ok
