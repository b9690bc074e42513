import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmso import automata as AU
from mmso.selftest import random_automaton


def parity(chars=("a",), var=1):
    """Root state = parity of the marked leaves."""
    d0 = {((c, (b,))): {b} for c in chars for b in (0, 1)}
    d2 = {(c, p, q): {p ^ q} for c in chars for p in (0, 1) for q in (0, 1)}
    return AU.ExplicitAutomaton(chars, [0, 1], [0], d0, d2, arity=(var,))


def leaf(b):
    return AU.SigmaTree.leaf(("a", (b,)))


def three_leaves(bits):
    x, y, z = (leaf(b) for b in bits)
    return AU.SigmaTree.node("a", AU.SigmaTree.node("a", x, y), z)


def marked_trees(max_leaves):
    """All trees over {a} with every bit pattern, up to max_leaves leaves."""
    for n in range(1, max_leaves + 1):
        for t in AU.trees_with_leaves(["a"], n):
            leaves = t.leaves()
            for m in range(1 << n):
                labels = list(t.labels)
                for k, v in enumerate(leaves):
                    labels[v] = ("a", ((m >> k) & 1,))
                yield t.with_labels(labels)


def test_single_leaf_accepts():
    A = AU.ExplicitAutomaton("a", ["s"], ["s"], {("a", ()): {"s"}}, {})
    assert AU.accepts(A, AU.SigmaTree.leaf("a"))


def test_unknown_leaf_label_rejects():
    A = AU.ExplicitAutomaton("ab", ["s"], ["s"], {("a", ()): {"s"}}, {("a", "s", "s"): {"s"}})
    t = AU.SigmaTree.node("a", AU.SigmaTree.leaf("a"), AU.SigmaTree.leaf("b"))
    assert AU.run(A, t)[-1] == frozenset()
    assert not AU.accepts(A, t)


def test_parity_on_three_leaves():
    assert AU.run(parity(), three_leaves((1, 0, 1)))[-1] == {0}


def test_determinize_deterministic_input_has_singletons():
    A = parity()
    D = AU.determinize(A)
    states = AU.reachable_states(D, A.alphabet)
    assert all(len(s) == 1 for s in states)
    for t in marked_trees(4):
        assert AU.accepts(A, t) == AU.accepts(D, t)


def test_determinize_two_state_nondeterministic():
    # guesses a leaf carrying the letter b
    d0 = {("a", ()): {"n"}, ("b", ()): {"n", "y"}}
    d2 = {(c, p, q): ({"y"} if "y" in (p, q) else set()) | ({"n"} if (p, q) == ("n", "n") else set())
          for c in "ab" for p in "ny" for q in "ny"}
    A = AU.ExplicitAutomaton("ab", "ny", "y", d0, d2)
    D = AU.determinize(A)
    for n in range(1, 8):
        for t in AU.trees_with_leaves("ab", n) if n <= 4 else ():
            assert AU.accepts(A, t) == AU.accepts(D, t)
    prof = AU.run_profiles([A, D], "ab", 7)
    for profs in prof.values():
        for p, q in profs:
            assert AU.accepts_set(A, p) == AU.accepts_set(D, q)


def test_empty_accepting_set():
    A = parity()
    A = AU.ExplicitAutomaton(A.alphabet, A.states, [], A.d0, A.d2, A.arity)
    assert AU.emptiness(AU.determinize(A)) is None


def test_double_complement():
    A = parity()
    C = AU.complement(AU.complement(A))
    for t in marked_trees(4):
        assert AU.accepts(C, t) == AU.accepts(A, t)
        assert AU.accepts(AU.complement(A), t) != AU.accepts(A, t)


def test_product_with_universal():
    A = parity()
    P = AU.product(A, AU.Universal(A.arity, A.alphabet))
    for t in marked_trees(4):
        assert AU.accepts(P, t) == AU.accepts(A, t)


def test_projection_of_parity_accepts_everything():
    P = AU.project(parity(), 1)
    for n in range(1, 6):
        for t in AU.trees_with_leaves(["a"], n):
            assert AU.accepts(P, t)


def test_encode_examples():
    t = three_leaves((0, 0, 0)).with_labels(["a"] * 5)
    phi = {i: v for i, v in enumerate(t.leaves())}
    assert AU.encode(t, phi, {}, ()) == t
    full = AU.encode(t, phi, {1: 0b111}, (1,))
    assert all(full.labels[v][1] == (1,) for v in t.leaves())


@given(st.integers(0, 7), st.integers(0, 7))
def test_encode_decode_round_trip(m1, m2):
    t = three_leaves((0, 0, 0)).with_labels(["a"] * 5)
    phi = {i: v for i, v in enumerate(t.leaves())}
    enc = AU.encode(t, phi, {1: m1, 3: m2}, (1, 3))
    assert AU.decode_bits(enc, phi, (1, 3)) == {1: m1, 3: m2}


def test_emptiness_unreachable_accepting_state():
    A = AU.ExplicitAutomaton("a", ["s", "t"], ["t"], {("a", ()): {"s"}}, {("a", "s", "s"): {"s"}})
    assert AU.emptiness(A) is None


def test_emptiness_parity_witness():
    A = parity()
    A = AU.ExplicitAutomaton(A.alphabet, A.states, [1], A.d0, A.d2, A.arity)
    w = AU.emptiness(A)
    assert w == AU.SigmaTree.leaf(("a", (1,)))


@settings(max_examples=150)
@given(st.integers(0, 2**32))
def test_emptiness_witnesses_are_accepted(seed):
    A = random_automaton(random.Random(seed))
    w = AU.emptiness(A)
    if w is not None:
        assert AU.accepts(A, w)
    else:
        prof = AU.run_profiles([A], A.alphabet, 5)
        assert not any(AU.accepts_set(A, p[0]) for ps in prof.values() for p in ps)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_profiles_cover_literal_enumeration(n):
    rng = random.Random(n)
    for _ in range(20):
        A = random_automaton(rng)
        prof = AU.run_profiles([A], A.alphabet, n)[n]
        literal = {(AU.run(A, t)[-1],) for t in AU.trees_with_leaves(A.alphabet, n)}
        assert prof == literal


def test_tree_count():
    # Catalan(n-1) shapes times |Σ|^(2n-1) labels
    assert sum(1 for _ in AU.trees_with_leaves("ab", 3)) == 2 * 2 ** 5


def test_tree_text_round_trip():
    t = AU.SigmaTree.node("N", AU.SigmaTree.leaf(("L", (1, 0))), AU.SigmaTree.leaf("L"))
    assert AU.parse_tree(AU.format_tree(t)) == t


def test_automaton_text_round_trip():
    A = AU.relabel_states(parity())
    text = AU.format_automaton(A)
    B = AU.parse_automaton(text)
    assert AU.format_automaton(B) == text
    for t in marked_trees(3):
        assert AU.accepts(A, t) == AU.accepts(B, t)


def test_state_cap(monkeypatch):
    monkeypatch.setenv("MMSO_STATE_CAP", "1")
    rng = random.Random(0)
    A = next(a for a in (random_automaton(rng) for _ in range(200))
             if len(AU.reachable_states(AU.determinize(a, cap=10**6), a.alphabet, cap=10**6)) > 1)
    with pytest.raises(AU.StateCapError):
        AU.reachable_states(AU.determinize(A), A.alphabet)
