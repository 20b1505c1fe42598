import numpy as np
import pytest
from hypothesis import given, strategies as st

from tiltheart import exactla as la
from tiltheart.exactla import Echelon, FieldMismatchError, Subspace


@st.composite
def matrices(draw, max_side=6):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(1, max_side))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=la.DTYPE).reshape(r, c), p


@given(matrices())
def test_rank_nullity(mp):
    m, p = mp
    ker = la.kernel_matrix(m, p)
    assert la.rank(m, p) + ker.shape[0] == m.shape[1]
    assert not la.matmul(m, ker.T, p).any()


@given(matrices())
def test_rref_is_idempotent(mp):
    m, p = mp
    r, piv = la.rref(m, p)
    r2, piv2 = la.rref(r, p)
    assert np.array_equal(r, r2) and piv == piv2
    # pivots are 1 and clear their columns
    for i, c in enumerate(piv):
        assert r[i, c] == 1 and np.count_nonzero(r[:, c]) == 1


@given(matrices())
def test_row_space_is_preserved(mp):
    m, p = mp
    r, piv = la.rref(m, p)
    assert Subspace(m, m.shape[1], p) == Subspace(r[: len(piv)], m.shape[1], p)


def test_solve_and_inverse():
    p = 5
    a = np.array([[1, 2], [3, 4]])
    x = la.solve(a, np.array([[1], [0]]), p)
    assert np.array_equal(la.matmul(a, x, p).ravel() % p, [1, 0])
    inv = la.inverse(a, p)
    assert np.array_equal(la.matmul(a, inv, p), la.identity(2))
    assert la.solve(np.array([[1, 1], [1, 1]]), np.array([[0], [1]]), 2) is None


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        la.inverse(np.array([[1, 1], [1, 1]]), 2)


def test_subspace_operations():
    p = 2
    u = Subspace([[1, 0, 0], [0, 1, 0]], 3, p)
    w = Subspace([[0, 1, 1]], 3, p)
    assert (u + w).dim == 3
    assert u.intersection(w).dim == 0
    assert u.intersection(Subspace([[1, 1, 0], [0, 0, 1]], 3, p)).dim == 1
    assert u.contains([1, 1, 0]) and not u.contains([0, 0, 1])
    assert np.array_equal(u.coordinates([1, 1, 0]), [[1, 1]])
    assert u.complement().tolist() == [[0, 0, 1]]


def test_zero_dimensional_ambient():
    z = Subspace.zero(0, 3)
    assert z.dim == 0 and z == Subspace(np.zeros((0, 0)), 0, 3)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        Subspace.full(2, 2) + Subspace.full(2, 3)


def test_echelon_detects_dependence():
    e = Echelon(3, 3)
    assert e.add([1, 2, 0])
    assert e.add([0, 1, 1])
    assert not e.add([1, 0, 1])  # (1,2,0) + (0,1,1) = (1,0,1) over F_3
    assert len(e) == 2 and e.subspace().dim == 2


def test_extend_to_basis():
    keep = la.extend_to_basis(np.array([[1, 0, 0]]), la.identity(3), 2)
    assert keep == [1, 2]


def test_matrix_power():
    n = np.array([[0, 1], [0, 0]])
    assert not la.matrix_power(n, 2, 3).any()
    assert np.array_equal(la.matrix_power(n, 0, 3), la.identity(2))
