import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmso import automata as AU
from mmso import corpus
from mmso import matroid as MT
from mmso.branchdec import grouped_decomposition
from mmso.equiv import BruteForceOracle, class_count, classes
from mmso.parsetree import (
    DEP, ParseAutomaton, build, build_auto, build_disconnected, build_via_2sum, format_ptree,
    model_check, parse_ptree, satisfying_sets, split_pieces,
)

from strategies import set_systems

SMALL = [n for n, M in corpus.items(7)]


def accepted(P):
    return [Y for Y in range(1 << P.n) if AU.accepts(ParseAutomaton(), P.encode(Y))]


def test_u12_two_leaf_labels():
    M = MT.uniform(1, 2)
    P, _ = build(M)
    leaf_labels = {P.tree.labels[v] for v in P.tree.leaves()}
    assert len(P.tree.leaves()) == 2 and len(leaf_labels) <= 2
    assert accepted(P) == [0, 1, 2]


def test_u24_brute_force_oracle():
    M = MT.uniform(2, 4)
    P, _ = build(M, oracle=BruteForceOracle(M))
    assert len(accepted(P)) == 11


def test_materialized_automaton_agrees():
    M = corpus.get("K4")
    P, A = build(M)
    for Y in range(1 << M.n):
        assert AU.accepts(A, P.encode(Y)) == bool(M.table[Y])


@pytest.mark.parametrize("name", SMALL)
def test_pocket_invariant(name):
    """The state at each vertex names the class of Y ∩ U there."""
    M = corpus.get(name)
    P, _ = build(M, D=None, self_check=False)
    tables = {v: classes(M, U) for v, (U, _) in P.info.items()}
    for Y in range(1 << M.n):
        states = P.run_states(Y)
        for v, (U, reps) in P.info.items():
            q = states[v]
            if q == DEP:
                assert not M.is_indep(Y & U)
            elif q.startswith("q"):
                t = tables[v]
                assert t.class_of(reps[int(q[1:]) - 1]) == t.class_of(Y & U)


@pytest.mark.parametrize("name", SMALL)
def test_representatives_bounded_by_classes(name):
    M = corpus.get(name)
    P, _ = build(M, oracle=BruteForceOracle(M), self_check=False)
    for U, reps in P.info.values():
        assert len(reps) <= class_count(M, U)
        assert len({classes(M, U).class_of(r) for r in reps}) == len(reps)


def test_parallel_pairs_at_most_five_states():
    M = MT.u2n_plus(3)
    D = grouped_decomposition(M.names, [["a1", "a2"], ["b1", "b2"], ["c1", "c2"]])
    P, _ = build(M, D=D)
    assert all(len(reps) <= 5 for _, reps in P.info.values())


@given(set_systems(max_n=4))
def test_set_systems_full_class_style(S):
    P, _ = build(S, self_check=False)
    assert P.independence_table() == [bool(x) for x in S.table]


def test_two_sum_of_triangles():
    M = MT.two_sum(MT.uniform(2, ["a", "b", "p"]), MT.uniform(2, ["c", "d", "p"]), "p")
    assert M.n == 4 and M.r == 3
    P, _ = build_via_2sum(M)
    assert np.array_equal(P.independence_table(), M.table)


def test_three_connected_delegates():
    M = MT.uniform(2, 4)
    pieces, basepoints = split_pieces(M)
    assert len(pieces) == 1 and basepoints == []
    P1, _ = build_via_2sum(M)
    P2, _ = build(M)
    assert P1.independence_table() == P2.independence_table()


def test_split_pieces_chain():
    M = corpus.get("2sum-chain")
    pieces, basepoints = split_pieces(M)
    assert len(pieces) == 3 and basepoints == ["_p1", "_p2"]
    assert all(MT.is_3connected(p) for p in pieces)


def test_basepoint_closure():
    # in the triangle {a, b, p}, Y = {a, b} spans the basepoint
    A = MT.uniform(2, ["a", "b", "p"])
    assert A.closure(A.mask(["a", "b"])) >> A.names.index("p") & 1


def test_coloop_plus_loop():
    M = corpus.get("coloop+loop")
    P, _ = build_disconnected(M)
    assert accepted(P) == [0, M.mask("a")]


def test_free_matroid():
    P, _ = build_disconnected(corpus.get("free3"))
    assert accepted(P) == list(range(8))


def test_connected_input_matches_2sum_builder():
    M = corpus.get("2sum-U24-triangle")
    a, _ = build_disconnected(M)
    b, _ = build_via_2sum(M)
    assert a.independence_table() == b.independence_table()


@pytest.mark.parametrize("name", SMALL)
def test_ptree_round_trip(name):
    P, _ = build_auto(corpus.get(name))
    text = format_ptree(P)
    Q = parse_ptree(text)
    assert Q == P and format_ptree(Q) == text


@pytest.mark.parametrize("name", ["U24", "K4", "U12+U12"])
def test_automaton_file_round_trip(name):
    P, A = build_auto(corpus.get(name))
    text = AU.format_automaton(A)
    B = AU.parse_automaton(text)
    assert AU.format_automaton(B) == text
    for Y in range(1 << P.n):
        assert AU.accepts(A, P.encode(Y)) == AU.accepts(B, P.encode(Y))


def test_model_check_examples():
    M = MT.uniform(2, 4)
    assert model_check(M, "exists X1 Basis(X1)")
    assert not model_check(M, "forall X1 Ind(X1)")


@given(st.sampled_from([n for n, M in corpus.items(5)]))
def test_satisfying_coindependent_sets(name):
    M = corpus.get(name)
    P, _ = build_auto(M)
    assert satisfying_sets(M, P, "Coind(X1)") == MT.dual(M).family()
