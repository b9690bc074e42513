"""Parse trees: Σ-trees whose characters are vertex functions, together with
the fixed automaton that reads them.

Characters are canonical strings:

* leaf ``L:a,b``: the leaf's element contributes state a when absent, b when
  present;
* internal ``N:x,y>z;...``: child-state pair (x, y) maps to z, pairs sorted;
* ``kappa``: joins components; its states are ``indep'`` and ``dep'``.

States are ``indep``, ``dep`` and ``q1``, ``q2``, ...; the state ``q1`` of
every edge is the class of the empty set.  Reading a character is the
whole transition function, so one automaton serves every parse tree.
"""

import re
from functools import lru_cache

from . import automata as AU
from . import logic as LG
from .branchdec import EXACT_CAP, caterpillar, find_decomposition
from .equiv import BruteForceOracle, default_oracle, dw_exact
from .matroid import (
    Matroid, connected_components, find_2separation, is_3connected, minor,
    natural_key, relabel, restrict, same_oracle, two_sum,
)

VAR = 1                 # variable index read by the parse automaton
STATE_LIMIT = 64        # per-edge cap on oracle classes
SELF_CHECK_CAP = 9
KAPPA = "kappa"
INDEP, DEP = "indep", "dep"
INDEP1, DEP1 = "indep'", "dep'"


class SelfCheckError(AssertionError):
    pass


def _skey(q):
    return natural_key(q)


# ---------------------------------------------------------------- characters

def leaf_char(f0, f1):
    return f"L:{f0},{f1}"


def node_char(table):
    items = sorted(table.items(), key=lambda kv: (_skey(kv[0][0]), _skey(kv[0][1])))
    return "N:" + ";".join(f"{a},{b}>{c}" for (a, b), c in items)


@lru_cache(maxsize=None)
def read_char(ch):
    """('leaf', (f0, f1)) | ('node', {pair: state}) | ('kappa', None)."""
    if ch == KAPPA:
        return "kappa", None
    if ch.startswith("L:"):
        parts = ch[2:].split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed leaf character {ch!r}")
        return "leaf", tuple(parts)
    if ch.startswith("N:"):
        table = {}
        for item in ch[2:].split(";"):
            m = re.fullmatch(r"([^,>;]+),([^,>;]+)>([^,>;]+)", item)
            if not m:
                raise ValueError(f"malformed node character {ch!r}")
            table[(m.group(1), m.group(2))] = m.group(3)
        return "node", table
    raise ValueError(f"unknown character {ch!r}")


class ParseAutomaton(AU._Lazy):
    """The fixed {VAR}-ary automaton that evaluates vertex functions."""

    deterministic = True
    arity = (VAR,)

    def __init__(self, alphabet=None):
        super().__init__()
        self.alphabet = None if alphabet is None else frozenset(alphabet)

    def _leaf(self, alpha, bits):
        kind, f = read_char(alpha)
        return (f[bits[0]],) if kind == "leaf" else ()

    def _step(self, alpha, ql, qr):
        kind, f = read_char(alpha)
        if kind == "kappa":
            ok = {INDEP, INDEP1}
            return (INDEP1 if ql in ok and qr in ok else DEP1,)
        if kind == "node":
            q = f.get((ql, qr))
            return (q,) if q is not None else ()
        return ()

    def accepting(self, q):
        return q in (INDEP, INDEP1)


# ---------------------------------------------------------------- parse trees

class ParseTree:
    """A Σ-tree plus the leaf bijection φ (element id -> leaf vertex).

    ``info`` maps each vertex to (U mask, representatives) when the builder
    recorded them; representatives are listed by state index q1, q2, ...
    """

    def __init__(self, names, tree, phi, info=None):
        self.names = tuple(names)
        self.tree = tree
        self.phi = tuple(phi)
        self.info = info or {}
        if sorted(self.phi) != sorted(tree.leaves()) or len(self.phi) != len(self.names):
            raise ValueError("leaf map is not a bijection onto the leaves")

    @property
    def n(self):
        return len(self.names)

    @property
    def alphabet(self):
        return frozenset(self.tree.labels)

    def encode(self, Y, var=VAR):
        return AU.encode(self.tree, dict(enumerate(self.phi)), {var: Y}, (var,))

    def run_states(self, Y):
        """Parse-automaton state at every vertex for the subset mask Y."""
        out = [None] * len(self.tree.labels)
        elem = {v: e for e, v in enumerate(self.phi)}
        for v, ch in enumerate(self.tree.labels):
            kind, f = read_char(ch)
            c = self.tree.children[v]
            if not c:
                out[v] = f[(Y >> elem[v]) & 1] if kind == "leaf" else None
                continue
            a, b = out[c[0]], out[c[1]]
            if a is None or b is None:
                out[v] = None
            elif kind == "kappa":
                ok = {INDEP, INDEP1}
                out[v] = INDEP1 if a in ok and b in ok else DEP1
            elif kind == "node":
                out[v] = f.get((a, b))
            else:
                out[v] = None
        return out

    def accepts(self, Y):
        return self.run_states(Y)[-1] in (INDEP, INDEP1)

    def independence_table(self):
        return [self.accepts(Y) for Y in range(1 << self.n)]

    def __eq__(self, other):
        # structural: vertex storage order is irrelevant
        return isinstance(other, ParseTree) and format_ptree(self) == format_ptree(other)


def format_ptree(P):
    elem = {v: e for e, v in enumerate(P.phi)}
    t = P.tree

    def go(v):
        s = AU._fmt_label(t.labels[v])
        if t.children[v]:
            a, b = t.children[v]
            return s + "(" + go(a) + "," + go(b) + ")"
        return s + "@" + P.names[elem[v]]
    return "ptree v1\nelements: " + " ".join(P.names) + "\ntree: " + go(t.root) + "\n"


def parse_ptree(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "ptree v1":
        raise ValueError("missing 'ptree v1' header")
    fields = {}
    for ln in lines[1:]:
        k, _, v = ln.partition(":")
        fields[k.strip()] = v.strip()
    names = fields.get("elements", "").split()
    idx = {x: i for i, x in enumerate(names)}
    # strip the @name markers, remembering them in post-order
    marks = []

    def cut(m):
        marks.append(m.group(2))
        return m.group(1)
    body = re.sub(r'("(?:[^"\\]|\\.)*")@([^(),\s]+)', cut, fields.get("tree", ""))
    tree = AU.parse_tree(body)
    leaves = [v for v in range(len(tree.labels)) if tree.is_leaf(v)]
    if len(leaves) != len(marks) or sorted(marks, key=natural_key) != sorted(names, key=natural_key):
        raise ValueError("leaf names do not match the element list")
    phi = [0] * len(names)
    for v, x in zip(leaves, marks):
        phi[idx[x]] = v
    return ParseTree(names, tree, phi)


# ---------------------------------------------------------------- labelling

class _Labeler:
    """Builds vertex functions bottom-up from oracle labels.

    With ``dep_style`` dependent sets collapse to the absorbing state dep and
    only independent representatives are kept (sound under downward
    closure).  Otherwise every subset is classified.
    """

    def __init__(self, S, oracle, dep_style):
        self.S, self.oracle, self.dep = S, oracle, dep_style

    def classify(self, U, cands):
        reps, seen, out = [], {}, {}
        for key, X in cands:
            if X is None or (self.dep and not self.S.is_indep(X)):
                out[key] = DEP
                continue
            lab = self.oracle.label(U, X)
            if lab not in seen:
                seen[lab] = len(reps)
                reps.append(X)
                if len(reps) > STATE_LIMIT:
                    raise ValueError(f"oracle produced more than {STATE_LIMIT} classes on one edge")
            out[key] = f"q{seen[lab] + 1}"
        return reps, out

    def leaf(self, x):
        U = 1 << x
        reps, out = self.classify(U, [(0, 0), (1, U)])
        return U, reps, leaf_char(out[0], out[1])

    def node(self, left, right, U=None):
        """left/right = (U, reps, image states).  Returns (U, reps, table)."""
        (UL, RL, SL), (UR, RR, SR) = left, right
        U = UL | UR if U is None else U
        cands = []
        for a in SL:
            for b in SR:
                X = None if DEP in (a, b) else RL[int(a[1:]) - 1] | RR[int(b[1:]) - 1]
                cands.append(((a, b), X))
        reps, out = self.classify(U, cands)
        return U, reps, out

    def root(self, left, right):
        (_, RL, SL), (_, RR, SR) = left, right
        table = {}
        for a in SL:
            for b in SR:
                if DEP in (a, b):
                    table[(a, b)] = DEP
                else:
                    X = RL[int(a[1:]) - 1] | RR[int(b[1:]) - 1]
                    table[(a, b)] = INDEP if self.S.is_indep(X) else DEP
        return table


def _image(reps, table_or_leaf):
    states = sorted({f"q{i + 1}" for i in range(len(reps))}, key=_skey)
    vals = table_or_leaf.values() if isinstance(table_or_leaf, dict) else table_or_leaf
    if DEP in vals:
        states.append(DEP)
    return states


class _TreeBuilder:
    """Accumulates a post-order Σ-tree."""

    def __init__(self):
        self.labels, self.children, self.info = [], [], {}
        self.leaf_of = {}

    def add(self, label, kids=(), info=None):
        v = len(self.labels)
        self.labels.append(label)
        self.children.append(tuple(kids))
        if info is not None:
            self.info[v] = info
        return v

    def tree(self):
        return AU.SigmaTree(self.labels, self.children)


def _rooted(D, v, parent):
    """Nested ('leaf', element) / ('node', left, right), children by least element."""
    if v in D.element_at:
        return ("leaf", D.element_at[v])
    kids = [_rooted(D, w, v) for w in D.adj[v] if w != parent]
    kids.sort(key=_least)
    return ("node", kids[0], kids[1])


def _least(node):
    return node[1] if node[0] == "leaf" else min(_least(node[1]), _least(node[2]))


def _emit(tb, lab, node, splice=None):
    """Label a rooted sub-decomposition; returns (vertex, (U, reps, image)).

    ``splice`` maps an element id to a callable producing the subtree that
    replaces that leaf (used for basepoints).
    """
    if node[0] == "leaf":
        x = node[1]
        if splice and x in splice:
            v = splice[x](tb)
            return v, (1 << x, [0, 1 << x], ["q1", "q2", DEP])
        U, reps, ch = lab.leaf(x)
        f = read_char(ch)[1]
        v = tb.add(ch, info=(U, reps))
        tb.leaf_of[x] = v
        return v, (U, reps, _image(reps, f))
    vl, left = _emit(tb, lab, node[1], splice)
    vr, right = _emit(tb, lab, node[2], splice)
    U, reps, table = lab.node(left, right)
    v = tb.add(node_char(table), (vl, vr), info=(U, reps))
    return v, (U, reps, _image(reps, table))


def _root_node(tb, lab, left, right):
    (vl, l), (vr, r) = left, right
    return tb.add(node_char(lab.root(l, r)), (vl, vr))


def _default_decomposition(S):
    if isinstance(S, Matroid):
        return find_decomposition(S)
    if S.n <= EXACT_CAP:
        return dw_exact(S, with_witness=True)[1]
    return caterpillar(S.n)


def build(S, D=None, oracle=None, dep_style=None, self_check=None):
    """Parse tree and automaton for S from the decomposition D.

    The root subdivides the least edge of D.  Returns (ParseTree,
    ExplicitAutomaton over the tree's characters).
    """
    if S.n == 0:
        raise ValueError("empty ground set has no parse tree")
    D = _default_decomposition(S) if D is None else D
    if D.n != S.n:
        raise ValueError("decomposition and set-system have different ground sets")
    oracle = (default_oracle(S) if isinstance(S, Matroid) else BruteForceOracle(S)) \
        if oracle is None else oracle
    dep_style = isinstance(S, Matroid) if dep_style is None else dep_style
    lab = _Labeler(S, oracle, dep_style)
    tb = _TreeBuilder()
    if S.n == 1:
        ch = leaf_char(INDEP if S.is_indep(0) else DEP, INDEP if S.is_indep(1) else DEP)
        tb.leaf_of[0] = tb.add(ch)
    else:
        a, b = D.edges[0]
        sides = sorted([_rooted(D, a, b), _rooted(D, b, a)], key=_least)
        _root_node(tb, lab, *(_emit(tb, lab, s) for s in sides))
    P = ParseTree(S.names, tb.tree(), [tb.leaf_of[i] for i in range(S.n)], tb.info)
    return _finish(S, P, self_check)


def _finish(S, P, self_check):
    if self_check is None:
        self_check = S.n <= SELF_CHECK_CAP
    if self_check:
        check_oracle_equivalence(S, P)
    return P, AU.materialize(ParseAutomaton(), P.alphabet)


def check_oracle_equivalence(S, P):
    for Y in range(1 << S.n):
        if P.accepts(Y) != S.is_indep(Y):
            raise SelfCheckError(f"parse tree disagrees with the oracle on {S.fmt(Y)}")
    return True


# ---------------------------------------------------------------- 2-sums

class Piece:
    """A 3-connected piece and how it sits in M: piece = relabel(M / C \\ D)."""

    def __init__(self, M, C, D, origin):
        self.M, self.C, self.D = M, C, D
        self.origin = origin      # piece element name -> name in the original matroid

    def realization(self, M0):
        m = minor(M0, self.C, self.D)
        return relabel(m, {v: k for k, v in self.origin.items()})


def _split(piece, M0, U1, U2, p):
    P = piece.M
    out = []
    for keep, other in ((U1, U2), (U2, U1)):
        B = P.basis(P.full, start=P.basis(keep))
        C = B & other
        cl = P.closure(C)
        x = min(i for i in range(P.n) if other >> i & 1 and not cl >> i & 1)
        D = other & ~C & ~(1 << x)
        m = minor(P, C, D)
        xn = P.names[x]
        m = relabel(m, {xn: p})
        origin = {k: v for k, v in piece.origin.items() if k in m.names}
        origin[p] = piece.origin[xn]
        out.append(Piece(m, piece.C | M0.mask([piece.origin[P.names[i]] for i in P.ids(C)]),
                         piece.D | M0.mask([piece.origin[P.names[i]] for i in P.ids(D)]),
                         origin))
    return out


def split_pieces(M):
    """Pieces of a connected matroid and their basepoints ``_p1``, ``_p2``, ...

    Returns (pieces, basepoints) where basepoints lists names in creation
    order.  Each split is checked: the 2-sum of the halves reproduces the
    piece, and every final piece is a 3-connected minor of M.
    """
    if len(connected_components(M)) > 1:
        raise ValueError("matroid is disconnected; use build_disconnected")
    taken = set(M.names)
    pieces = [Piece(M, 0, 0, {x: x for x in M.names})]
    basepoints = []
    k = 0
    while True:
        for i, pc in enumerate(pieces):
            sep = find_2separation(pc.M)
            if sep is not None:
                break
        else:
            break
        k += 1
        while f"_p{k}" in taken:
            k += 1
        p = f"_p{k}"
        taken.add(p)
        a, b = _split(pc, M, *sep, p)
        if not same_oracle(two_sum(a.M, b.M, p), pc.M):
            raise SelfCheckError("2-sum of the split pieces does not reproduce the piece")
        pieces[i:i + 1] = [a, b]
        basepoints.append(p)
    for pc in pieces:
        if pc.M.n < 3 and len(pieces) > 1:
            raise SelfCheckError("piece with fewer than 3 elements")
        if not is_3connected(pc.M):
            raise SelfCheckError("piece is not 3-connected")
        if not same_oracle(pc.realization(M), pc.M):
            raise SelfCheckError("piece is not the recorded minor of M")
    return [pc.M for pc in pieces], basepoints


def build_via_2sum(M, self_check=None):
    """Parse tree assembled along a tree of 3-connected pieces.

    The first basepoint created is the root: a copy of U_{1,2} whose two
    children are the subtrees on either side of it.
    """
    if len(connected_components(M)) > 1:
        raise ValueError("matroid is disconnected; use build_disconnected")
    if is_3connected(M):
        return build(M, self_check=self_check)
    pieces, basepoints = split_pieces(M)
    owners = {p: [i for i, pc in enumerate(pieces) if p in pc.names] for p in basepoints}
    em = basepoints[0]
    elem_id = {x: i for i, x in enumerate(M.names)}
    tb = _TreeBuilder()

    leaf_names = {}

    def _subtree_fixed(pi, parent_bp):
        P = pieces[pi]
        D = find_decomposition(P)
        bleaf = D.leaf_of[P.names.index(parent_bp)]
        (top,) = D.adj[bleaf]
        node = _rooted(D, top, bleaf)
        splice = {}
        for j, x in enumerate(P.names):
            if x in owners and x != parent_bp:
                (child,) = [c for c in owners[x] if c != pi]
                splice[j] = (lambda c, bp: lambda _tb: _subtree_fixed(c, bp)[0])(child, x)
        lab = _Labeler(P, BruteForceOracle(P), True)
        outer = tb.leaf_of
        tb.leaf_of = {}
        v, summary = _emit(tb, lab, node, splice)
        for j, vv in tb.leaf_of.items():
            leaf_names[vv] = P.names[j]
        tb.leaf_of = outer
        return v, summary

    a, b = owners[em]
    sides = [_subtree_fixed(a, em), _subtree_fixed(b, em)]
    root_table = {}
    for x in ("q1", "q2", DEP):
        for y in ("q1", "q2", DEP):
            root_table[(x, y)] = DEP if DEP in (x, y) or (x, y) == ("q2", "q2") else INDEP
    lv = [sides[0][0], sides[1][0]]

    def least_leaf(v):
        c = tb.children[v]
        if not c:
            return natural_key(leaf_names[v])
        return min(least_leaf(c[0]), least_leaf(c[1]))
    lv.sort(key=least_leaf)
    tb.add(node_char(root_table), lv)
    phi = [None] * M.n
    for v, x in leaf_names.items():
        phi[elem_id[x]] = v
    P = ParseTree(M.names, tb.tree(), phi)
    return _finish(M, P, self_check)


def build_disconnected(M, self_check=None):
    """Component parse trees joined along a right spine of kappa vertices."""
    comps = connected_components(M)
    if len(comps) == 1:
        return build_via_2sum(M, self_check)
    tb_labels, tb_children, phi = [], [], [None] * M.n
    roots = []
    for comp in comps:
        Mi = restrict(M, comp)
        Pi, _ = build_via_2sum(Mi, self_check=False)
        off = len(tb_labels)
        tb_labels.extend(Pi.tree.labels)
        tb_children.extend(tuple(w + off for w in c) for c in Pi.tree.children)
        for j, x in enumerate(Mi.names):
            phi[M.names.index(x)] = Pi.phi[j] + off
        roots.append(len(tb_labels) - 1)
    right = roots[-1]
    for r in reversed(roots[:-1]):
        tb_labels.append(KAPPA)
        tb_children.append((r, right))
        right = len(tb_labels) - 1
    P = ParseTree(M.names, AU.SigmaTree(tb_labels, tb_children), phi)
    return _finish(M, P, self_check)


def build_auto(S, self_check=None):
    """build_disconnected for matroids, the plain builder otherwise."""
    if isinstance(S, Matroid):
        return build_disconnected(S, self_check)
    return build(S, self_check=self_check)


# ---------------------------------------------------------------- model checking

def model_check(S, sentence, method="auto", self_check=None):
    """Does S satisfy the closed sentence?  Decided by the compiled automaton."""
    f = LG.parse(sentence) if isinstance(sentence, str) else sentence
    if LG.free_vars(f):
        raise ValueError("model checking needs a closed sentence")
    if method == "auto":
        P, _ = build_auto(S, self_check)
    elif method == "build":
        P, _ = build(S, self_check=self_check)
    elif method == "2sum":
        P, _ = build_disconnected(S, self_check)
    else:
        raise ValueError(f"unknown method {method!r}")
    A = LG.compile_formula(f, ParseAutomaton())
    return AU.accepts(A, P.tree)


def satisfying_sets(S, P, formula, var=VAR):
    """Masks Y accepted by the formula compiled against the parse automaton."""
    f = LG.parse(formula) if isinstance(formula, str) else formula
    fv = LG.free_vars(f)
    if not fv <= {var}:
        raise ValueError(f"formula may only use X{var} free")
    A = LG.compile_formula(f, ParseAutomaton())
    if not fv:
        return list(range(1 << S.n)) if AU.accepts(A, P.tree) else []
    return [Y for Y in range(1 << S.n) if AU.accepts(A, P.encode(Y, var))]
