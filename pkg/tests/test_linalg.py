import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from barcalc.errors import CompositionNotZero, ParseError
from barcalc.exact_linalg import (
    FGAbelianGroup,
    FpMatrix,
    IntMatrix,
    homology_mod,
    homology_z,
    rank_fp,
    snf,
)


def small_matrices(max_side=4, lo=-6, hi=6):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def det(m: IntMatrix) -> int:
    return int(Matrix(m.to_dense()).det())


def test_snf_identity_and_zero():
    i3 = IntMatrix.identity(3)
    res = snf(i3)
    assert res.S == i3 and res.U == i3 and res.V == i3
    z = IntMatrix.zeros(2, 2)
    res = snf(z)
    assert res.S.is_zero()
    assert res.U == IntMatrix.identity(2) and res.V == IntMatrix.identity(2)


def test_snf_2x2():
    a = IntMatrix.from_dense([[2, 4], [6, 8]])
    res = snf(a)
    assert res.diagonal == [2, 4]
    assert res.U @ a @ res.V == res.S
    assert abs(det(res.U)) == 1 and abs(det(res.V)) == 1
    assert abs(det(res.S)) == abs(det(a)) == 8


@settings(max_examples=150, deadline=None)
@given(small_matrices())
def test_snf_properties(rows):
    a = IntMatrix.from_dense(rows)
    res = snf(a)
    assert res.U @ a @ res.V == res.S
    assert abs(det(res.U)) == 1 and abs(det(res.V)) == 1
    d = res.diagonal
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert d[: len(nz)] == nz  # zeros trail
    assert all(b % a_ == 0 for a_, b in zip(nz, nz[1:]))
    # off-diagonal entries vanish
    assert all(r == c for r, c, _ in res.S.triplets())
    # sympy's Smith form as an independent oracle (up to sign)
    ref = smith_normal_form(Matrix(rows), domain=ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)) if ref[i, i] != 0)
    assert sorted(nz) == ref_diag


def test_snf_is_deterministic():
    a = IntMatrix.from_dense([[3, 5, 7], [2, 4, 6], [1, 1, 1]])
    assert snf(a) == snf(a)


def test_snf_big_entries():
    # intermediate growth must not overflow
    a = IntMatrix.from_dense([[2**70, 3], [5, 2**65 + 1]])
    res = snf(a)
    assert res.U @ a @ res.V == res.S


def test_homology_z_examples():
    n = 3
    assert homology_z(IntMatrix(n, 0), IntMatrix(0, n)) == FGAbelianGroup(3)
    assert homology_z(IntMatrix.from_dense([[2]]), IntMatrix(0, 1)) == FGAbelianGroup.parse("Z/2")
    d_in = IntMatrix.from_dense([[1, 1], [1, 1]])
    d_out = IntMatrix.from_dense([[1, -1]])
    assert homology_z(d_in, d_out) == FGAbelianGroup()


def test_homology_z_rejects_nonzero_composition():
    with pytest.raises(CompositionNotZero):
        homology_z(IntMatrix.from_dense([[1]]), IntMatrix.from_dense([[1]]))


def test_homology_mod_examples():
    assert homology_mod(IntMatrix(3, 0), IntMatrix(0, 3), 2) == FGAbelianGroup.parse("Z/2 + Z/2 + Z/2")
    assert homology_mod(IntMatrix.from_dense([[2]]), IntMatrix(0, 1), 4) == FGAbelianGroup.parse("Z/2")
    assert homology_mod(IntMatrix.from_dense([[1]]), IntMatrix(0, 1), 3) == FGAbelianGroup()


def brute_homology_order(d_in: np.ndarray, d_out: np.ndarray, n: int, m: int) -> int:
    """|ker d_out / im d_in| over Z/m by enumerating (Z/m)^n."""
    cycles = 0
    for v in itertools.product(range(m), repeat=n):
        if not (d_out @ np.array(v) % m).any():
            cycles += 1
    image = set()
    for w in itertools.product(range(m), repeat=d_in.shape[1]):
        image.add(tuple(d_in @ np.array(w, dtype=np.int64) % m))
    return cycles // len(image)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 4, 6]), st.integers(1, 3), st.integers(0, 2), st.integers(0, 2), st.data())
def test_homology_mod_matches_enumeration(m, n, k_in, k_out, data):
    # build d_out d_in = 0 mod m by taking d_in from the kernel side
    d_out = np.array(data.draw(st.lists(st.lists(st.integers(0, m - 1), min_size=n, max_size=n),
                                        min_size=k_out, max_size=k_out)), dtype=np.int64).reshape(k_out, n)
    kernel = [np.array(v) for v in itertools.product(range(m), repeat=n) if not (d_out @ np.array(v) % m).any()]
    cols = [kernel[data.draw(st.integers(0, len(kernel) - 1))] for _ in range(k_in)]
    d_in = np.array(cols, dtype=np.int64).T.reshape(n, k_in)
    g = homology_mod(IntMatrix.from_dense(d_in.tolist(), k_in), IntMatrix.from_dense(d_out.tolist(), n), m)
    assert g.order == brute_homology_order(d_in, d_out, n, m)


@settings(max_examples=60, deadline=None)
@given(small_matrices(3, -3, 3), st.integers(1, 3))
def test_homology_z_rank_nullity(rows, _):
    d = IntMatrix.from_dense(rows)
    r = snf(d).rank
    # H(0 -> C -> 0 via d on the left) and (d on the right)
    top = homology_z(IntMatrix(d.cols, 0), d)  # ker d
    bottom = homology_z(d, IntMatrix(0, d.rows))  # coker d
    assert top.free_rank == d.cols - r and not top.torsion
    assert bottom.free_rank == d.rows - r


def brute_rank(a: np.ndarray, p: int) -> int:
    span = {tuple(np.array(c) @ a % p) for c in itertools.product(range(p), repeat=a.shape[0])}
    return round(np.log(len(span)) / np.log(p))


def test_rank_fp_examples():
    assert rank_fp(FpMatrix.from_dense(2, np.eye(5, dtype=int))) == 5
    assert rank_fp(FpMatrix(7, 3, 4)) == 0
    assert rank_fp(FpMatrix.from_dense(2, [[1, 1], [1, 1]])) == 1


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5]), small_matrices(4, 0, 4))
def test_rank_fp_matches_enumeration(p, rows):
    a = np.array(rows, dtype=np.int64)
    assert rank_fp(FpMatrix.from_dense(p, a)) == brute_rank(a % p, p)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_homology_mod_prime_dimension(p, n, k, data):
    d_out = np.array(data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n),
                                        min_size=k, max_size=k)), dtype=np.int64)
    g = homology_mod(IntMatrix(n, 0), IntMatrix.from_dense(d_out.tolist(), n), p)
    assert g.fp_dim(p) == n - rank_fp(FpMatrix.from_dense(p, d_out))


def test_group_canonical_strings():
    g = FGAbelianGroup.from_cyclic(1, [4, 2, 3])
    assert str(g) == "Z + Z/2 + Z/12"
    assert str(FGAbelianGroup()) == "0"
    assert FGAbelianGroup.parse(str(g)) == g
    with pytest.raises(ParseError):
        FGAbelianGroup.parse("Z/")
