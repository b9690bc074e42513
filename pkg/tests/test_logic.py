import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmso import automata as AU
from mmso import corpus
from mmso import logic as LG
from mmso import matroid as MT
from mmso.parsetree import ParseAutomaton, build_auto

from strategies import set_systems

U24 = MT.uniform(2, 4)


def test_parse_examples():
    assert LG.parse("Ind(X1)") == LG.Ind(1)
    assert LG.parse("exists X1 (Ind(X1) & card(X1,0,2))") == \
        LG.Exists(1, LG.And(LG.Ind(1), LG.Card(1, 0, 2)))
    assert LG.desugar(LG.parse("forall X1 Ind(X1)")) == LG.Not(LG.Exists(1, LG.Not(LG.Ind(1))))


def test_parse_precedence():
    f = LG.parse("X1 <= X2 -> X2 <= X3 -> X1 <= X3")
    assert isinstance(f, LG.Implies) and isinstance(f.b, LG.Implies)
    g = LG.parse("exists X1 Ind(X1) & X1 <= X1")
    assert isinstance(g, LG.Exists)
    assert LG.parse("~X1 <= X2 | Ind(X1)") == LG.Or(LG.Not(LG.Subseteq(1, 2)), LG.Ind(1))


@pytest.mark.parametrize("bad", ["Ind(X0)", "card(X1,2,2)", "exists X1", "Ind(X1", "Foo(X1)",
                                 "Ind(X1) &", "X1 <="])
def test_parse_errors(bad):
    with pytest.raises(LG.ParseError):
        LG.parse(bad)


def test_comments_and_whitespace():
    assert LG.parse("# header\nexists X1  # trailing\n  Ind(X1)\n") == LG.Exists(1, LG.Ind(1))


def test_hygiene_renames_only_on_clash():
    f = LG.parse("Ind(X1) & exists X1 Basis(X1)")
    assert isinstance(f.b, LG.Exists) and f.b.i != 1
    assert LG.parse("exists X1 Ind(X1)") == LG.Exists(1, LG.Ind(1))


var = st.integers(1, 3)
atoms = st.one_of(
    st.builds(LG.Ind, var),
    st.builds(LG.Subseteq, var, var),
    st.tuples(var, st.integers(2, 3)).flatmap(
        lambda t: st.integers(0, t[1] - 1).map(lambda p: LG.Card(t[0], p, t[1]))),
    st.builds(LG.Macro, st.sampled_from(LG.MACROS), var),
)


def _extend(kids):
    return st.one_of(
        st.builds(LG.Not, kids), st.builds(LG.And, kids, kids), st.builds(LG.Or, kids, kids),
        st.builds(LG.Implies, kids, kids), st.builds(LG.Iff, kids, kids),
        st.builds(LG.Exists, var, kids), st.builds(LG.Forall, var, kids))


formulas = st.recursive(atoms, _extend, max_leaves=6)


@given(formulas)
def test_text_round_trip(f):
    assert LG.parse(LG.to_text(f), hygiene=False) == f


@settings(max_examples=40)
@given(formulas, set_systems(max_n=3), st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
def test_desugar_preserves_truth(f, S, m1, m2, m3):
    theta = {1: m1 & S.full, 2: m2 & S.full, 3: m3 & S.full}
    want = LG.evaluate(S, f, theta)
    g = LG.desugar(f)
    assert LG.is_core(g)
    assert LG.evaluate(S, g, theta) == want
    assert LG.evaluate(S, f, theta, native_sugar=False) == want


def test_evaluate_examples():
    assert LG.evaluate(U24, "Ind(X1)", {1: ["a", "b"]})
    assert LG.evaluate(U24, "exists X2 Basis(X2)")
    assert LG.evaluate(U24, "Coind(X1)", {1: ["a", "b"]})
    assert LG.evaluate(U24, "Empty(X1)", {1: []})
    assert not LG.evaluate(U24, "Sing(X1)", {1: ["a", "b"]})
    U13 = MT.uniform(1, 3)
    # the remaining element is a basis of U13, so {a,b} is coindependent
    assert LG.evaluate(U13, "Coind(X1)", {1: ["a", "b"]})
    assert not LG.evaluate(U13, "Coind(X1)", {1: ["a", "b", "c"]})


def test_evaluate_needs_theta():
    with pytest.raises(ValueError, match="X1"):
        LG.evaluate(U24, "Ind(X1)")


def test_matroid_sentence_separates():
    axioms = LG.stdlib()["matroid"]
    assert LG.evaluate(U24, axioms)
    not_closed = MT.set_system(["a", "b"], [[], ["a", "b"]])
    no_exchange = MT.set_system(["a", "b", "c"], [[], ["a"], ["b"], ["c"], ["b", "c"]])
    assert not LG.evaluate(not_closed, axioms)
    assert not LG.evaluate(no_exchange, axioms)


def _leaf3():
    t = AU.SigmaTree.node("a", AU.SigmaTree.node("a", AU.SigmaTree.leaf("a"),
                                                 AU.SigmaTree.leaf("a")), AU.SigmaTree.leaf("a"))
    return t, {i: v for i, v in enumerate(t.leaves())}


def test_card_automaton_parity():
    A = LG.CardAutomaton(1, 0, 2)
    t, phi = _leaf3()
    got = [m for m in range(8) if AU.accepts(A, AU.encode(t, phi, {1: m}, (1,)))]
    assert got == [m for m in range(8) if bin(m).count("1") % 2 == 0]


def test_subset_automaton():
    A = LG.SubsetAutomaton(1, 2)
    t, phi = _leaf3()
    for m1 in range(8):
        for m2 in range(8):
            enc = AU.encode(t, phi, {1: m1, 2: m2}, (1, 2))
            assert AU.accepts(A, enc) == (m1 & ~m2 == 0)


NATIVE_VS_EXPANDED = [
    "exists X1 (Sing(X1) & ~Ind(X1))",
    "forall X1 (Empty(X1) -> Ind(X1))",
    "exists X1 (Basis(X1) & Coind(X1))",
    "forall X1 (Sing(X1) -> Coind(X1))",
]


@pytest.mark.parametrize("text", NATIVE_VS_EXPANDED)
def test_native_macros_match_expansion(text):
    f = LG.parse(text)
    A = ParseAutomaton()
    native = LG.compile_formula(f, A)
    full = LG.compile_formula(f, A, expand_all=True)
    for name, M in corpus.items(5):
        P, _ = build_auto(M, self_check=False)
        assert AU.accepts(native, P.tree) == AU.accepts(full, P.tree) == LG.evaluate(M, f), name


def test_free_variable_compile():
    f = LG.parse("Coind(X1)")
    A = LG.compile_formula(f, ParseAutomaton())
    assert A.arity == (1,)
