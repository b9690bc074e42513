import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmso import _kernels as K
from mmso.branchdec import all_trees

pytestmark = pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba not installed")

tables = st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.booleans(), min_size=1 << n, max_size=1 << n)))


@given(tables)
def test_rank_table_paths_agree(nt):
    n, t = nt
    t = np.array(t, dtype=np.bool_)
    assert np.array_equal(K._rank_table_nb(t, n), K._rank_table_np(t, n))


@given(tables)
def test_class_count_paths_agree(nt):
    n, t = nt
    t = np.array(t, dtype=np.bool_)
    assert np.array_equal(K._class_counts_nb(t, n), K._class_counts_np(t, n))


@given(tables, st.integers(0, 63))
def test_signature_paths_agree(nt, u):
    n, t = nt
    t = np.array(t, dtype=np.bool_)
    U = u & ((1 << n) - 1)
    xs = K.submasks(U)
    zs = K.submasks(((1 << n) - 1) & ~U)
    a_ids, a_k = K._signature_ids_nb(t, xs, zs)
    b_ids, b_k = K._signature_ids_np(t, xs, zs)
    assert a_k == b_k and np.array_equal(a_ids, b_ids)


@given(st.integers(3, 6), st.integers(0, 2**31))
def test_tree_minmax_paths_agree(n, seed):
    rng = np.random.default_rng(seed)
    _, splits = all_trees(n)
    cost = rng.integers(0, 9, size=1 << n).astype(np.int64)
    full = (1 << n) - 1
    assert K._tree_minmax_nb(splits, cost, full) == K._tree_minmax_np(splits, cost, full)


def test_env_switch(monkeypatch):
    monkeypatch.setenv("MMSO_NO_NUMBA", "1")
    assert not K.numba_enabled()
    monkeypatch.setenv("MMSO_NO_NUMBA", "0")
    assert K.numba_enabled()
