"""Theoremhood relative to the language of a parse automaton.

Given a {k}-ary automaton A' (the class presentation) and optionally a
defining sentence τ, a closed ψ is a theorem when every Σ-tree t over A''s
alphabet realises a set-system that satisfies τ → ψ.  The check compiles
τ ∧ ¬ψ against A' and asks the emptiness procedure for a witness.  This is
a statement about the trees of this one automaton, not about a whole class
of matroids.
"""

from dataclasses import dataclass

from . import automata as AU
from . import logic as LG
from .matroid import SetSystem

DECODE_CAP = 16


@dataclass
class Verdict:
    theorem: bool
    system: SetSystem = None
    tree: AU.SigmaTree = None

    def __bool__(self):
        return self.theorem


def _formula(x):
    return LG.parse(x) if isinstance(x, str) else x


def decide_theorem(A, psi, tau=None, alphabet=None, cap=None):
    """Verdict(theorem=True) or a counterexample (decoded system and its tree)."""
    psi = _formula(psi)
    if LG.free_vars(psi):
        raise ValueError("ψ must be a closed sentence")
    goal = LG.Not(psi)
    if tau is not None:
        tau = _formula(tau)
        if LG.free_vars(tau):
            raise ValueError("τ must be a closed sentence")
        goal = LG.And(tau, goal)
    alphabet = A._alphabet(alphabet)
    C = LG.compile_formula(goal, A, cap)
    t = AU.emptiness(C, alphabet, cap)
    if t is None:
        return Verdict(True)
    return Verdict(False, decode_witness(A, t), t)


def decode_witness(A, t, cap=DECODE_CAP):
    """The set-system realised by A on t with φ = identity on the leaves.

    Leaves are named e1, e2, ... left to right.
    """
    leaves = t.leaves()
    n = len(leaves)
    if n > cap:
        raise ValueError(f"witness has {n} leaves; decoding is capped at {cap}")
    if len(A.arity) != 1:
        raise ValueError("decoding needs a one-variable automaton")
    k = A.arity[0]
    bare = t.with_labels([AU.split_label(x)[0] for x in t.labels])
    phi = dict(enumerate(leaves))
    names = [f"e{i + 1}" for i in range(n)]
    table = [AU.accepts(A, AU.encode(bare, phi, {k: Y}, (k,))) for Y in range(1 << n)]
    return SetSystem(names, table)
