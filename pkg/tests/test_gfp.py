import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfiltration import gfp

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(primes)
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    return p, np.array(entries, dtype=np.int64).reshape(rows, cols)


def test_rref_small():
    R, piv = gfp.rref([[2, 4], [1, 1]], 5)
    assert piv == [0, 1]
    assert np.array_equal(R, np.eye(2, dtype=np.int64))


def test_rank_of_dependent_rows():
    assert gfp.rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 2) == 2
    assert gfp.rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 3) == 3
    assert gfp.rank(np.zeros((0, 3)), 3) == 0


def test_singular_inverse_raises():
    with pytest.raises(ValueError):
        gfp.inverse([[1, 2], [2, 4]], 7)


@given(matrices())
def test_nullspace_is_kernel(pm):
    p, M = pm
    K = gfp.nullspace(M, p)
    assert len(K) + gfp.rank(M, p) == M.shape[1]
    assert not ((M @ K.T) % p).any()


@given(matrices())
def test_row_space_is_idempotent(pm):
    p, M = pm
    B, piv = gfp.row_space(M, p)
    assert len(B) == gfp.rank(M, p)
    again, _ = gfp.row_space(np.vstack([B, M]), p)
    assert np.array_equal(again, B)


@given(primes, st.integers(1, 5), st.data())
def test_inverse_roundtrip(p, n, data):
    entries = data.draw(st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n))
    M = np.array(entries, dtype=np.int64).reshape(n, n)
    if gfp.rank(M, p) < n:
        return
    Minv = gfp.inverse(M, p)
    assert np.array_equal((M @ Minv) % p, np.eye(n, dtype=np.int64))


@given(matrices(max_rows=4, max_cols=6))
def test_quotient_map_kills_subspace(pm):
    p, M = pm
    n = M.shape[1]
    W, _ = gfp.row_space(M, p)
    proj, lift = gfp.quotient_map(W, n, p)
    assert proj.shape == (n - len(W), n)
    assert not ((proj @ W.T) % p).any()
    assert np.array_equal((proj @ lift) % p, np.eye(n - len(W), dtype=np.int64))
