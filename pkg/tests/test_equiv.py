import pytest
from hypothesis import given

from mmso import corpus
from mmso import matroid as MT
from mmso.branchdec import grouped_decomposition
from mmso.equiv import (
    DEPENDENT, all_class_counts, class_count, classes, dw_exact, dw_of_decomposition,
    gfq_label_bound, gfq_refinement, signature,
)

from strategies import linear_matroids, set_systems

# exact decomposition-width and branch-width, confirmed by a separate
# brute force (own tree enumeration and signature computation)
FROZEN_DW_BW = {
    "U12": (2, 2), "U13": (3, 2), "U23": (2, 2), "U24": (3, 3), "U25": (4, 3), "U35": (3, 3),
    "U36": (4, 3), "U26": (4, 3), "K4": (6, 3), "C4": (2, 2), "theta": (3, 2), "m-P3": (3, 2),
    "m-K3": (5, 3), "mplus-P2": (3, 2), "U23plus": (3, 2), "polygon3": (5, 3), "gf2-r3": (3, 2),
    "gf3-U24": (3, 3), "gf3-r3": (5, 3), "2sum-triangles": (2, 2), "2sum-U24-triangle": (3, 3),
    "2sum-chain": (3, 3), "coloop+loop": (2, 1), "free3": (1, 1), "U12+U12": (3, 2),
    "U23+coloop": (2, 2), "triangles+loop": (3, 2),
}


def brute_count(S, U):
    rest = [Z for Z in range(1 << S.n) if Z & U == 0]
    subs = [X for X in range(1 << S.n) if X & ~U == 0]
    return len({tuple(bool(S.table[X | Z]) for Z in rest) for X in subs})


def test_u24_pair_classes():
    M = MT.uniform(2, 4)
    t = classes(M, M.mask(["a", "b"]))
    assert t.count == 3
    a, b = M.mask("a"), M.mask("b")
    assert t.class_of(a) == t.class_of(b)
    assert len({t.class_of(0), t.class_of(a), t.class_of(a | b)}) == 3


def test_empty_set_has_one_class():
    assert class_count(corpus.get("K4"), 0) == 1


def test_transversal_of_parallel_pairs():
    M = MT.u2n_plus(3)
    assert class_count(M, M.mask(["a1", "b1", "c1"])) >= 3


def test_class_table_tsv():
    M = MT.uniform(2, 4)
    tsv = classes(M, M.mask(["a", "b"])).to_tsv(M)
    assert tsv.splitlines() == ["subset\tclass", "{}\t0", "{a}\t1", "{a,b}\t2", "{b}\t1"]


@given(set_systems(max_n=4))
def test_class_counts_match_brute_force(S):
    cc = all_class_counts(S)
    for U in range(1 << S.n):
        assert cc[U] == class_count(S, U) == brute_count(S, U)


@given(set_systems(max_n=4))
def test_signature_equality_is_class_equality(S):
    U = S.full >> 1
    t = classes(S, U)
    xs = [X for X in range(1 << S.n) if X & ~U == 0]
    for X in xs:
        for Y in xs:
            assert (signature(S, U, X) == signature(S, U, Y)) == (t.class_of(X) == t.class_of(Y))


def test_gf2_triangle_labels():
    M = MT.linear(2, [[1, 0, 1], [0, 1, 1]])
    labels = gfq_refinement(M.linear, 0b011)
    assert labels[0] == labels[0b001] == labels[0b010] == ()
    assert labels[0b011] not in ((), DEPENDENT)
    assert len(set(labels.values())) == 2


@given(linear_matroids(max_n=6))
def test_gfq_labels_refine_classes(M):
    for U in range(1 << M.n):
        labels = gfq_refinement(M.linear, U)
        t = classes(M, U)
        for X in labels:
            for Y in labels:
                if labels[X] == labels[Y]:
                    assert t.class_of(X) == t.class_of(Y)
        assert len(set(labels.values())) <= gfq_label_bound(M.linear.q, MT.connectivity(M, U))


@pytest.mark.parametrize("name", sorted(FROZEN_DW_BW))
def test_frozen_dw(name):
    assert dw_exact(corpus.get(name)) == FROZEN_DW_BW[name][0]


def test_dw_small_cases():
    assert dw_exact(MT.uniform(1, 2)) == 2
    assert dw_exact(MT.uniform(1, 1)) == 1
    M = MT.uniform(2, 4)
    assert dw_exact(MT.delete(M, M.mask("d"))) <= dw_exact(M)


def test_parallel_class_decomposition():
    M = MT.u2n_plus(3)
    groups = [["a1", "a2"], ["b1", "b2"], ["c1", "c2"]]
    assert dw_of_decomposition(M, grouped_decomposition(M.names, groups)) <= 5


def test_dw_witness_achieves_value():
    M = corpus.get("K4")
    val, D = dw_exact(M, with_witness=True)
    assert dw_of_decomposition(M, D) == val
