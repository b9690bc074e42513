import pytest

from mmso import automata as AU
from mmso import logic as LG
from mmso import matroid as MT
from mmso.decide import decide_theorem, decode_witness
from mmso.parsetree import build

NONEMPTY = "exists X1 Ind(X1)"


@pytest.fixture(scope="module")
def u24_automaton():
    return build(MT.uniform(2, 4))[1]


def test_empty_set_independent_needs_nonempty_tau(u24_automaton):
    psi = "exists X1 (Empty(X1) & Ind(X1))"
    assert decide_theorem(u24_automaton, psi, tau=NONEMPTY).theorem
    # without τ one leaf labelled (dep, dep) realises a system with no independent set
    v = decide_theorem(u24_automaton, psi)
    assert not v.theorem
    assert v.system.family() == []


def test_counterexample_violates_psi(u24_automaton):
    psi = LG.parse("forall X1 Ind(X1)")
    v = decide_theorem(u24_automaton, psi, tau=NONEMPTY)
    assert not v.theorem
    assert not LG.evaluate(v.system, psi)
    assert LG.evaluate(v.system, NONEMPTY)


def test_tautology_is_a_theorem(u24_automaton):
    assert decide_theorem(u24_automaton, "forall X1 (Ind(X1) -> Ind(X1))").theorem


@pytest.mark.parametrize("psi", ["exists X1 Basis(X1)", "forall X1 (Sing(X1) -> Ind(X1))",
                                 "forall X1 card(X1,0,2)", "forall X1 ~Empty(X1)"])
def test_every_counterexample_violates_psi(u24_automaton, psi):
    v = decide_theorem(u24_automaton, psi)
    if not v.theorem:
        assert AU.accepts(LG.compile_formula(LG.Not(LG.parse(psi)), u24_automaton), v.tree)
        assert not LG.evaluate(v.system, psi)


def test_decode_parse_tree_of_u24():
    M = MT.uniform(2, 4)
    P, A = build(M)
    S = decode_witness(A, P.tree)
    assert S.table.tolist() == M.table.tolist()


def test_decode_single_leaf():
    A = AU.ExplicitAutomaton("x", ["n", "y"], ["y"], {("x", (0,)): {"n"}, ("x", (1,)): {"y"}}, {},
                             arity=(1,))
    S = decode_witness(A, AU.SigmaTree.leaf("x"))
    assert S.n == 1 and S.family() == [1]


def test_open_sentences_rejected(u24_automaton):
    with pytest.raises(ValueError):
        decide_theorem(u24_automaton, "Ind(X1)")
