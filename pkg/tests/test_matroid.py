import numpy as np
import pytest
from hypothesis import assume, given

from mmso import corpus
from mmso import matroid as MT

from strategies import linear_matroids


def indep_sets(M):
    return {frozenset(M.subset(m)) for m in M.family()}


def brute_rank(M, X):
    return max(bin(I).count("1") for I in range(1 << M.n) if I & ~X == 0 and M.table[I])


def test_uniform_independents():
    M = MT.uniform(2, 4)
    assert all(M.is_indep(m) == (bin(m).count("1") <= 2) for m in range(16))


def test_parallel_pair_extension():
    M = MT.u2n_plus(3)
    assert M.n == 6 and M.r == 2
    pairs = [M.mask(["a1", "a2"]), M.mask(["b1", "b2"]), M.mask(["c1", "c2"])]
    assert pairs[0] in MT.circuits(M)
    assert all(p in MT.circuits(M) for p in pairs)


def test_m_triangle_sparse_paving():
    M = corpus.get("m-K3")
    assert M.n == 6 and M.r == 3
    small = [c for c in MT.circuits(M) if bin(c).count("1") == 3]
    assert len(small) == 3


def test_explicit_family_not_downward_closed():
    with pytest.raises(ValueError, match="downward"):
        MT.from_family(["a", "b"], [[], ["a", "b"]])


def test_rank_examples():
    M = MT.uniform(2, 4)
    assert MT.rank(M, M.mask(["a", "b", "c"])) == 2
    assert MT.rank(M, 0) == 0
    m3 = corpus.get("m-K3")
    circ = next(c for c in MT.circuits(m3) if bin(c).count("1") == 3)
    assert MT.rank(m3, circ) == brute_rank(m3, circ) == 2


def test_connectivity_examples():
    M = MT.uniform(2, 4)
    assert MT.connectivity(M, M.mask(["a", "b"])) == 2
    assert MT.connectivity(M, 0) == 0
    P = MT.u2n_plus(3)
    assert MT.connectivity(P, P.mask(["a1", "b1", "c1"])) == 2


def test_minor_examples():
    M = MT.uniform(2, 4)
    N = MT.contract(M, M.mask("a"))
    assert MT.same_oracle(N, MT.uniform(1, ["b", "c", "d"]))
    assert MT.same_oracle(MT.minor(M, 0, 0), M)


def test_dual_examples():
    assert MT.same_oracle(MT.dual(MT.uniform(2, 4)), MT.uniform(2, 4))
    assert MT.same_oracle(MT.dual(MT.uniform(1, 3)), MT.uniform(2, 3))


@pytest.mark.parametrize("name", corpus.names())
def test_dual_involution(name):
    M = corpus.get(name)
    assert MT.same_oracle(MT.dual(MT.dual(M)), M)


@pytest.mark.parametrize("name", corpus.names())
def test_corpus_members_are_matroids(name):
    assert MT.verify_matroid_axioms(corpus.get(name))[0]


def test_parallel_connection_and_two_sum():
    M1 = MT.uniform(1, ["a", "e"])
    M2 = MT.uniform(1, ["b", "e"])
    P = MT.parallel_connection(M1, M2, "e")
    assert sorted(MT.circuits(P)) == sorted([P.mask(["a", "e"]), P.mask(["b", "e"]),
                                              P.mask(["a", "b"])])
    assert MT.same_oracle(P, MT.uniform(1, ["a", "b", "e"]))
    assert MT.same_oracle(MT.two_sum(M1, M2, "e"), MT.uniform(1, ["a", "b"]))


def _with_basepoint(M, prefix):
    """Rename elements with a prefix and add p parallel to the first non-loop."""
    L = M.linear
    j = next((j for j in range(M.n) if any(L.column(j))), None)
    assume(j is not None)
    rows = [list(r) + [r[j]] for r in L.rows]
    return MT.linear(L.q, rows, [f"{prefix}{i}" for i in range(M.n)] + ["p"])


@given(linear_matroids(max_n=4, fields=(2,)), linear_matroids(max_n=4, fields=(2,)))
def test_parallel_connection_restricts_to_parts(A, B):
    A, B = _with_basepoint(A, "a"), _with_basepoint(B, "b")
    P = MT.parallel_connection(A, B, "p")
    assert MT.same_oracle(MT.restrict(P, A.names), A)
    assert MT.same_oracle(MT.restrict(P, B.names), B)


def test_components_and_separations():
    S = MT.direct_sum(MT.uniform(1, ["a"]), MT.uniform(1, ["b"]))
    assert len(MT.connected_components(S)) == 2
    T = MT.two_sum(MT.uniform(2, ["a", "b", "p"]), MT.uniform(2, ["c", "d", "p"]), "p")
    U, V = MT.find_2separation(T)
    assert MT.connectivity(T, U) == 1 and U | V == T.full
    assert MT.find_2separation(MT.uniform(2, 4)) is None


def test_axiom_checker():
    assert MT.verify_matroid_axioms(MT.uniform(2, 4))[0]
    assert MT.verify_matroid_axioms(MT.set_system(["a", "b"], [[], ["a"], ["b"]]))[0]
    ok, bad = MT.verify_matroid_axioms(MT.set_system(["a", "b"], [[], ["a", "b"]]))
    assert not ok and bad.axiom == "downward-closure" and 0b01 in bad.sets


@given(linear_matroids())
def test_linear_rank_matches_brute_force(M):
    for X in range(1 << M.n):
        assert M.rank(X) == brute_rank(M, X)


@given(linear_matroids())
def test_dual_rank_formula(M):
    D = MT.dual(M)
    for X in range(1 << M.n):
        assert D.rank(X) == bin(X).count("1") + M.rank(M.full & ~X) - M.r


@given(linear_matroids())
def test_dual_keeps_a_representation(M):
    L = MT.dual(M).linear
    assert L is not None
    for X in range(1 << M.n):
        assert (L.rank(X) == bin(X).count("1")) == MT.dual(M).is_indep(X)


@pytest.mark.parametrize("name", corpus.names())
def test_text_round_trip(name):
    M = corpus.get(name)
    text = MT.format_matroid(M)
    N = MT.parse_matroid(text)
    assert MT.same_oracle(M, N)
    assert MT.format_matroid(N) == text


def test_text_format_errors():
    with pytest.raises(ValueError, match="header"):
        MT.parse_matroid("type: uniform\n")
    with pytest.raises(ValueError, match="unknown key"):
        MT.parse_matroid("matroid v1\ntype: uniform\nelements: a b\nrank: 1\ncolour: red\n")


def test_text_formats_by_type():
    g = MT.parse_matroid("matroid v1\ntype: graphic\nedges: u-v v-w w-u\n")
    assert g.n == 3 and g.r == 2
    lin = MT.parse_matroid("matroid v1\ntype: linear\nfield: 3\nelements: a b c d\n"
                           'rows: "1 0 1 1"\nrows: "0 1 1 2"\n')
    assert MT.same_oracle(lin, MT.uniform(2, ["a", "b", "c", "d"]))
    par = MT.parse_matroid("matroid v1\ntype: parallel2\nclasses: a1 a2; b1 b2; c1 c2\n")
    assert MT.same_oracle(par, MT.u2n_plus(3))


def test_rank_table_matches_oracle():
    M = corpus.get("fano")
    assert np.array_equal(M.rank_table, [brute_rank(M, X) for X in range(1 << M.n)])
