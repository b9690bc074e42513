"""Σ-trees and bottom-up tree automata.

Leaves of an encoded tree carry ``(char, bits)`` where ``bits`` is a 0/1
tuple aligned with the automaton's sorted variable indices (its arity); a
bare character on a leaf means ``(char, ())``.  Internal vertices always
carry bare characters.

Runs are set-valued.  A transition that is undefined contributes the empty
set, so the run at a vertex is the union over the defined images of child
state pairs.  Under this reading projection stays sound on partial
automata, and "undefined" and "maps to ∅" are the same thing.

Besides the explicit table automaton there are lazy constructions
(product, projection, subset construction, complement) whose transitions
are computed on demand and memoised; ``materialize`` turns any automaton
into an explicit one over its reachable states.
"""

import json
import os
import re
from itertools import product as cartesian

DEFAULT_STATE_CAP = 1 << 20


class StateCapError(RuntimeError):
    pass


def state_cap():
    env = os.environ.get("MMSO_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


def split_label(label):
    if isinstance(label, tuple) and len(label) == 2 and isinstance(label[1], tuple):
        return label
    return label, ()


# ---------------------------------------------------------------- trees

class SigmaTree:
    """Rooted tree stored in post-order; the root is the last vertex.

    ``children[v]`` is () for a leaf or (left, right).
    """

    __slots__ = ("labels", "children")

    def __init__(self, labels, children):
        self.labels = tuple(labels)
        self.children = tuple(tuple(c) for c in children)
        if len(self.labels) != len(self.children) or not self.labels:
            raise ValueError("malformed tree")
        for v, c in enumerate(self.children):
            if len(c) not in (0, 2) or any(w >= v for w in c):
                raise ValueError("children must precede parents and come in pairs")

    @classmethod
    def leaf(cls, label):
        return cls((label,), ((),))

    @classmethod
    def node(cls, label, left, right):
        k = len(left.labels)
        shift = [tuple(w + k for w in c) for c in right.children]
        return cls(left.labels + right.labels + (label,),
                   left.children + tuple(shift) + ((k - 1, k + len(right.labels) - 1),))

    @property
    def root(self):
        return len(self.labels) - 1

    def is_leaf(self, v):
        return not self.children[v]

    def leaves(self):
        """Leaf vertices, left to right."""
        out = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            if self.children[v]:
                stack.append(self.children[v][1])
                stack.append(self.children[v][0])
            else:
                out.append(v)
        return out

    def depth(self):
        d = [0] * len(self.labels)
        for v, c in enumerate(self.children):
            if c:
                d[v] = 1 + max(d[c[0]], d[c[1]])
        return d[self.root]

    def with_labels(self, labels):
        return SigmaTree(labels, self.children)

    def __eq__(self, other):
        return (isinstance(other, SigmaTree) and self.labels == other.labels
                and self.children == other.children)

    def __hash__(self):
        return hash((self.labels, self.children))

    def __repr__(self):
        return f"SigmaTree({format_tree(self)})"


def _fmt_label(label):
    alpha, bits = split_label(label)
    s = json.dumps(alpha) if isinstance(alpha, str) else json.dumps(str(alpha))
    if isinstance(label, tuple):
        s += "/" + "".join(map(str, bits))
    return s


def format_tree(t, v=None):
    """Text form: leaf = "char" or "char"/bits; node = "char"(left,right)."""
    v = t.root if v is None else v
    s = _fmt_label(t.labels[v])
    if t.children[v]:
        a, b = t.children[v]
        s += "(" + format_tree(t, a) + "," + format_tree(t, b) + ")"
    return s


_TOKEN = re.compile(r'\s*("(?:[^"\\]|\\.)*")(/[01]*)?\s*')


def parse_tree(text):
    pos = 0

    def node():
        nonlocal pos
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"expected a quoted character at offset {pos}")
        pos = m.end()
        alpha = json.loads(m.group(1))
        label = (alpha, tuple(int(c) for c in m.group(2)[1:])) if m.group(2) else alpha
        if pos < len(text) and text[pos] == "(":
            pos += 1
            left = node()
            if text[pos:pos + 1] != ",":
                raise ValueError(f"expected ',' at offset {pos}")
            pos += 1
            right = node()
            if text[pos:pos + 1] != ")":
                raise ValueError(f"expected ')' at offset {pos}")
            pos += 1
            while pos < len(text) and text[pos].isspace():
                pos += 1
            return SigmaTree.node(label, left, right)
        return SigmaTree.leaf(label)
    t = node()
    if text[pos:].strip():
        raise ValueError(f"trailing text at offset {pos}")
    return t


def encode(t, phi, family=None, arity=()):
    """Attach membership bits to leaves.

    ``phi`` maps element id -> leaf vertex, ``family`` maps variable index ->
    subset mask.  With an empty arity the tree comes back unchanged.
    """
    arity = tuple(sorted(arity))
    if not arity:
        return t
    family = family or {}
    element_at = {v: e for e, v in phi.items()}
    labels = list(t.labels)
    for v in t.leaves():
        e = element_at[v]
        alpha, _ = split_label(labels[v])
        labels[v] = (alpha, tuple((family.get(j, 0) >> e) & 1 for j in arity))
    return t.with_labels(labels)


def decode_bits(t, phi, arity):
    """Inverse of encode: variable index -> mask."""
    out = {j: 0 for j in arity}
    for e, v in phi.items():
        _, bits = split_label(t.labels[v])
        for j, b in zip(arity, bits):
            if b:
                out[j] |= 1 << e
    return out


# ---------------------------------------------------------------- automata

class TreeAutomaton:
    """Interface shared by explicit and lazy automata.

    ``alphabet`` is None for automata that treat every character alike.
    """

    arity = ()
    alphabet = None
    deterministic = False
    total = False

    def leaf(self, alpha, bits):
        raise NotImplementedError

    def step(self, alpha, ql, qr):
        raise NotImplementedError

    def accepting(self, q):
        raise NotImplementedError

    def leaf_labels(self, alphabet=None):
        alphabet = self._alphabet(alphabet)
        return [(a, bits) for a in alphabet for bits in cartesian((0, 1), repeat=len(self.arity))]

    def _alphabet(self, alphabet=None):
        alphabet = alphabet if alphabet is not None else self.alphabet
        if alphabet is None:
            raise ValueError("automaton has no fixed alphabet; pass one explicitly")
        return sorted(alphabet, key=_char_key)


def _char_key(c):
    return (type(c).__name__, str(c))


class ExplicitAutomaton(TreeAutomaton):
    """Finite tables: d0[(char, bits)] and d2[(char, qL, qR)] -> frozenset of states."""

    def __init__(self, alphabet, states, accepting, d0, d2, arity=()):
        self.alphabet = frozenset(alphabet)
        self.states = frozenset(states)
        self.accepting_states = frozenset(accepting)
        self.arity = tuple(sorted(arity))
        self.d0 = {}
        for k, v in d0.items():
            alpha, bits = split_label(k)
            if len(bits) != len(self.arity):
                raise ValueError("leaf bits do not match the arity")
            self.d0[(alpha, tuple(bits))] = frozenset(v)
        self.d2 = {k: frozenset(v) for k, v in d2.items()}
        for (alpha, _), img in self.d0.items():
            self._check(alpha, img)
        for (alpha, a, b), img in self.d2.items():
            self._check(alpha, img)
            if a not in self.states or b not in self.states:
                raise ValueError("transition from an unknown state")
        if not self.accepting_states <= self.states:
            raise ValueError("accepting states must be states")
        imgs = list(self.d0.values()) + list(self.d2.values())
        self.deterministic = all(len(i) <= 1 for i in imgs)
        nleaf = len(self.alphabet) * 2 ** len(self.arity)
        self.total = (all(len(i) == 1 for i in imgs) and len(self.d0) == nleaf
                      and len(self.d2) == len(self.alphabet) * len(self.states) ** 2)

    def _check(self, alpha, img):
        if alpha not in self.alphabet:
            raise ValueError(f"character {alpha!r} not in the alphabet")
        if not img <= self.states:
            raise ValueError("transition to an unknown state")

    def leaf(self, alpha, bits):
        return self.d0.get((alpha, tuple(bits)), frozenset())

    def step(self, alpha, ql, qr):
        return self.d2.get((alpha, ql, qr), frozenset())

    def accepting(self, q):
        return q in self.accepting_states


class _Sink:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "⊥"

    def __reduce__(self):
        return (_Sink, ())


SINK = _Sink()
_EMPTY = frozenset()


class _Lazy(TreeAutomaton):
    def __init__(self):
        self._leaf_memo = {}
        self._step_memo = {}

    def leaf(self, alpha, bits):
        key = (alpha, tuple(bits))
        r = self._leaf_memo.get(key)
        if r is None:
            r = self._leaf_memo[key] = frozenset(self._leaf(alpha, key[1]))
        return r

    def step(self, alpha, ql, qr):
        key = (alpha, ql, qr)
        r = self._step_memo.get(key)
        if r is None:
            r = self._step_memo[key] = frozenset(self._step(alpha, ql, qr))
        return r


class Renamed(_Lazy):
    """Same automaton with variable indices renamed by ``mapping``."""

    def __init__(self, A, mapping):
        super().__init__()
        self.A = A
        new = [mapping.get(i, i) for i in A.arity]
        if len(set(new)) != len(new):
            raise ValueError("index clash after renaming")
        self.arity = tuple(sorted(new))
        self._perm = [self.arity.index(j) for j in new]
        self.alphabet = A.alphabet
        self.deterministic, self.total = A.deterministic, A.total

    def _leaf(self, alpha, bits):
        return self.A.leaf(alpha, tuple(bits[p] for p in self._perm))

    def _step(self, alpha, ql, qr):
        return self.A.step(alpha, ql, qr)

    def accepting(self, q):
        return self.A.accepting(q)


def rename(A, mapping):
    return Renamed(A, mapping)


def _merge_alphabets(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise ValueError("alphabet mismatch")


class Product(_Lazy):
    """Runs A1 and A2 side by side; accepts when both accept."""

    def __init__(self, A1, A2):
        super().__init__()
        self.A1, self.A2 = A1, A2
        self.alphabet = _merge_alphabets(A1.alphabet, A2.alphabet)
        self.arity = tuple(sorted(set(A1.arity) | set(A2.arity)))
        self._r1 = [self.arity.index(j) for j in A1.arity]
        self._r2 = [self.arity.index(j) for j in A2.arity]
        self.deterministic = A1.deterministic and A2.deterministic
        self.total = A1.total and A2.total

    def _leaf(self, alpha, bits):
        s1 = self.A1.leaf(alpha, tuple(bits[p] for p in self._r1))
        if not s1:
            return ()
        s2 = self.A2.leaf(alpha, tuple(bits[p] for p in self._r2))
        return [(x, y) for x in s1 for y in s2]

    def _step(self, alpha, ql, qr):
        s1 = self.A1.step(alpha, ql[0], qr[0])
        if not s1:
            return ()
        s2 = self.A2.step(alpha, ql[1], qr[1])
        return [(x, y) for x in s1 for y in s2]

    def accepting(self, q):
        return self.A1.accepting(q[0]) and self.A2.accepting(q[1])


def product(A1, A2):
    return Product(A1, A2)


class Projection(_Lazy):
    """Existential projection of variable j: leaves guess the bit."""

    def __init__(self, A, j):
        super().__init__()
        if j not in A.arity:
            raise ValueError(f"variable {j} is not in the automaton's index set")
        self.A = A
        self.j = j
        self.arity = tuple(i for i in A.arity if i != j)
        self._pos = A.arity.index(j)
        self.alphabet = A.alphabet
        self.deterministic = False
        self.total = False

    def _leaf(self, alpha, bits):
        b = list(bits)
        s0 = self.A.leaf(alpha, tuple(b[:self._pos] + [0] + b[self._pos:]))
        s1 = self.A.leaf(alpha, tuple(b[:self._pos] + [1] + b[self._pos:]))
        return s0 | s1

    def _step(self, alpha, ql, qr):
        return self.A.step(alpha, ql, qr)

    def accepting(self, q):
        return self.A.accepting(q)


def project(A, j):
    return Projection(A, j)


class Determinized(_Lazy):
    """Subset construction; states are frozensets of A's states (∅ is the sink)."""

    def __init__(self, A, cap=None):
        super().__init__()
        self.A = A
        self.arity = A.arity
        self.alphabet = A.alphabet
        self.deterministic = True
        self.total = True
        self.cap = state_cap() if cap is None else cap
        self._seen = set()

    def _note(self, X):
        if X not in self._seen:
            self._seen.add(X)
            if len(self._seen) > self.cap:
                raise StateCapError(f"determinization exceeded the state cap ({self.cap})")
        return (X,)

    def _leaf(self, alpha, bits):
        return self._note(self.A.leaf(alpha, bits))

    def _step(self, alpha, X, Y):
        # hot loop: read the inner memo directly when there is one
        A = self.A
        memo = getattr(A, "_step_memo", None)
        get = memo.get if memo is not None else (lambda k: None)
        step = A.step
        out = set()
        for a in X:
            for b in Y:
                r = get((alpha, a, b))
                if r is None:
                    r = step(alpha, a, b)
                if r:
                    out.update(r)
        return self._note(frozenset(out))

    def accepting(self, X):
        return any(self.A.accepting(q) for q in X)

    @property
    def state_count(self):
        return len(self._seen)


def determinize(A, cap=None):
    return Determinized(A, cap)


class Totalized(_Lazy):
    """Deterministic automaton with undefined transitions sent to a sink."""

    def __init__(self, A):
        super().__init__()
        if not A.deterministic:
            raise ValueError("totalization expects a deterministic automaton")
        self.A = A
        self.arity, self.alphabet = A.arity, A.alphabet
        self.deterministic = self.total = True

    def _leaf(self, alpha, bits):
        return self.A.leaf(alpha, bits) or (SINK,)

    def _step(self, alpha, ql, qr):
        if ql is SINK or qr is SINK:
            return (SINK,)
        return self.A.step(alpha, ql, qr) or (SINK,)

    def accepting(self, q):
        return q is not SINK and self.A.accepting(q)


def totalize(A):
    return A if A.total else Totalized(A)


class Complement(_Lazy):
    def __init__(self, A):
        super().__init__()
        if not A.deterministic:
            raise ValueError("complement needs a deterministic automaton")
        if not A.total:
            raise ValueError("complement needs total transitions; totalize first")
        self.A = A
        self.arity, self.alphabet = A.arity, A.alphabet
        self.deterministic = self.total = True

    def _leaf(self, alpha, bits):
        return self.A.leaf(alpha, bits)

    def _step(self, alpha, ql, qr):
        return self.A.step(alpha, ql, qr)

    def accepting(self, q):
        return not self.A.accepting(q)


def complement(A):
    """Language complement of a deterministic automaton (totalised if needed)."""
    if not A.deterministic:
        raise ValueError("complement needs a deterministic automaton")
    return Complement(totalize(A))


class Universal(_Lazy):
    """One state, accepting, defined everywhere."""

    deterministic = total = True

    def __init__(self, arity=(), alphabet=None):
        super().__init__()
        self.arity = tuple(sorted(arity))
        self.alphabet = None if alphabet is None else frozenset(alphabet)

    def _leaf(self, alpha, bits):
        return ("*",)

    def _step(self, alpha, ql, qr):
        return ("*",)

    def accepting(self, q):
        return True


# ---------------------------------------------------------------- runs

def run(A, t):
    """State set at every vertex (post-order list)."""
    out = []
    for v, label in enumerate(t.labels):
        c = t.children[v]
        if not c:
            alpha, bits = split_label(label)
            out.append(A.leaf(alpha, bits))
        else:
            L, R = out[c[0]], out[c[1]]
            s = set()
            for a in L:
                for b in R:
                    s |= A.step(label, a, b)
            out.append(frozenset(s))
    return out


def accepts(A, t):
    return any(A.accepting(q) for q in run(A, t)[-1])


def reachable_states(A, alphabet=None, cap=None):
    """All states occurring in some run, by least fixpoint."""
    alphabet = A._alphabet(alphabet)
    cap = state_cap() if cap is None else cap
    seen = set()
    for a, bits in A.leaf_labels(alphabet):
        seen |= A.leaf(a, bits)
    frontier = set(seen)
    while frontier:
        new = set()
        old = list(seen)
        for a in alphabet:
            for p in frontier:
                for r in old:
                    new |= A.step(a, p, r)
                    new |= A.step(a, r, p)
        frontier = new - seen
        seen |= frontier
        if len(seen) > cap:
            raise StateCapError(f"reachable state count exceeded the cap ({cap})")
    return seen


def materialize(A, alphabet=None, cap=None):
    """Explicit automaton over the reachable states of A."""
    alphabet = A._alphabet(alphabet)
    states = reachable_states(A, alphabet, cap)
    d0, d2 = {}, {}
    for a, bits in A.leaf_labels(alphabet):
        img = A.leaf(a, bits)
        if img:
            d0[(a, bits)] = img
    for a in alphabet:
        for p in states:
            for r in states:
                img = A.step(a, p, r)
                if img:
                    d2[(a, p, r)] = img
    acc = [q for q in states if A.accepting(q)]
    return ExplicitAutomaton(alphabet, states, acc, d0, d2, A.arity)


# ---------------------------------------------------------------- emptiness

def _leaf_tree(alpha, bits):
    return SigmaTree.leaf((alpha, bits) if bits else alpha)


def reachable_avoiding(A, Z, q, alphabet=None):
    """A smallest-depth tree t with q ∈ r(t) and r(v) ∩ Z = ∅ at every vertex.

    Candidate trees are combined breadth-first, one witness per state, so
    the search is exact for deterministic automata; for nondeterministic
    ones any tree returned is still a valid witness.
    """
    Z = frozenset(Z)
    if q in Z:
        raise ValueError("target state lies in the avoided set")
    alphabet = A._alphabet(alphabet)
    wit = {}   # state -> (tree, root set)
    frontier = []
    for a, bits in A.leaf_labels(alphabet):
        s = A.leaf(a, bits)
        if s and not (s & Z):
            for p in sorted(s, key=_char_key):
                if p not in wit:
                    wit[p] = (_leaf_tree(a, bits), s)
                    frontier.append(p)
    while q not in wit and frontier:
        new = []
        old = list(wit)
        fset = set(frontier)
        for a in alphabet:
            for p in old:
                for r in old:
                    if p not in fset and r not in fset:
                        continue
                    tp, sp = wit[p]
                    tr, sr = wit[r]
                    s = set()
                    for x in sp:
                        for y in sr:
                            s |= A.step(a, x, y)
                    if not s or s & Z:
                        continue
                    for u in s:
                        if u not in wit:
                            wit[u] = (SigmaTree.node(a, tp, tr), frozenset(s))
                            new.append(u)
        frontier = new
    return wit[q][0] if q in wit else None


def emptiness(A, alphabet=None, cap=None):
    """None if A accepts no tree, else a smallest-depth accepted tree."""
    alphabet = A._alphabet(alphabet)
    cap = state_cap() if cap is None else cap
    wit = {}
    frontier = []
    for a, bits in A.leaf_labels(alphabet):
        for p in A.leaf(a, bits):
            if p not in wit:
                wit[p] = _leaf_tree(a, bits)
                frontier.append(p)
    while True:
        for p in frontier:
            if A.accepting(p):
                return wit[p]
        if not frontier:
            return None
        new = []
        old = list(wit)
        fset = set(frontier)
        for a in alphabet:
            for p in old:
                for r in old:
                    if p not in fset and r not in fset:
                        continue
                    for u in A.step(a, p, r):
                        if u not in wit:
                            wit[u] = SigmaTree.node(a, wit[p], wit[r])
                            new.append(u)
        if len(wit) > cap:
            raise StateCapError(f"emptiness search exceeded the state cap ({cap})")
        frontier = new


# ---------------------------------------------------------------- text format

def _natural(s):
    return tuple((0, int(t), "") if t.isdigit() else (1, 0, t)
                 for t in re.split(r"(\d+)", str(s)) if t)


def relabel_states(A, names=None):
    """Explicit copy whose states are strings (``s0``, ``s1``, ... unless given)."""
    if names is None:
        order = sorted(A.states, key=lambda q: (0, str(q)) if isinstance(q, str) else (1, repr(q)))
        if all(isinstance(q, str) for q in A.states):
            names = {q: q for q in order}
        else:
            names = {q: f"s{i}" for i, q in enumerate(order)}
    return ExplicitAutomaton(
        A.alphabet, [names[q] for q in A.states], [names[q] for q in A.accepting_states],
        {k: {names[q] for q in v} for k, v in A.d0.items()},
        {(a, names[p], names[r]): {names[q] for q in v} for (a, p, r), v in A.d2.items()},
        A.arity)


def _state_ok(q):
    return isinstance(q, str) and q and not re.search(r"[\s{},\"]", q) and q != "->"


def format_automaton(A):
    """Canonical text form of an explicit automaton with string states."""
    if not all(_state_ok(q) for q in A.states):
        raise ValueError("states must be plain tokens; use relabel_states first")
    chars = sorted(A.alphabet, key=str)
    if not all(isinstance(c, str) for c in chars):
        raise ValueError("characters must be strings")

    def sset(s):
        return "{" + ",".join(sorted(s, key=_natural)) + "}"
    out = ["automaton v1", "arity: " + " ".join(map(str, A.arity)),
           "alphabet: " + " ".join(json.dumps(c) for c in chars),
           "states: " + " ".join(sorted(A.states, key=_natural)),
           "accepting: " + " ".join(sorted(A.accepting_states, key=_natural))]
    for (a, bits) in sorted(A.d0, key=lambda k: (k[0], k[1])):
        b = (" " + "".join(map(str, bits))) if A.arity else ""
        out.append(f"d0: {json.dumps(a)}{b} -> {sset(A.d0[(a, bits)])}")
    for (a, p, r) in sorted(A.d2, key=lambda k: (k[0], _natural(k[1]), _natural(k[2]))):
        out.append(f"d2: {json.dumps(a)} {p} {r} -> {sset(A.d2[(a, p, r)])}")
    return "\n".join(ln.rstrip() for ln in out) + "\n"


_QUOTED = re.compile(r'"(?:[^"\\]|\\.)*"')


def parse_automaton(text):
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or lines[0].strip() != "automaton v1":
        raise ValueError("missing 'automaton v1' header")
    arity, alphabet, states, accepting = (), [], [], []
    d0, d2 = {}, {}

    def sset(s):
        s = s.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise ValueError(f"expected a state set, got {s!r}")
        return [x for x in s[1:-1].split(",") if x]
    for ln in lines[1:]:
        key, _, rest = ln.partition(":")
        key, rest = key.strip(), rest.strip()
        if key == "arity":
            arity = tuple(int(x) for x in rest.split())
        elif key == "alphabet":
            alphabet = [json.loads(m) for m in _QUOTED.findall(rest)]
        elif key == "states":
            states = rest.split()
        elif key == "accepting":
            accepting = rest.split()
        elif key in ("d0", "d2"):
            m = _QUOTED.match(rest)
            if not m:
                raise ValueError(f"expected a quoted character in {ln!r}")
            alpha = json.loads(m.group(0))
            lhs, arrow, rhs = rest[m.end():].partition("->")
            if not arrow:
                raise ValueError(f"missing '->' in {ln!r}")
            toks = lhs.split()
            if key == "d0":
                bits = tuple(int(c) for c in toks[0]) if toks else ()
                d0[(alpha, bits)] = sset(rhs)
            else:
                if len(toks) != 2:
                    raise ValueError(f"d2 needs two states in {ln!r}")
                d2[(alpha, toks[0], toks[1])] = sset(rhs)
        else:
            raise ValueError(f"unknown key {key!r}")
    return ExplicitAutomaton(alphabet, states, accepting, d0, d2, arity)


# ---------------------------------------------------------------- enumeration

def trees_with_leaves(alphabet, n):
    """Every Σ-tree with exactly n leaves over a bare alphabet (arity 0)."""
    alphabet = sorted(alphabet, key=_char_key)
    if n == 1:
        for a in alphabet:
            yield SigmaTree.leaf(a)
        return
    for k in range(1, n):
        lefts = list(trees_with_leaves(alphabet, k))
        rights = list(trees_with_leaves(alphabet, n - k))
        for a in alphabet:
            for L in lefts:
                for R in rights:
                    yield SigmaTree.node(a, L, R)


def run_profiles(automata, alphabet, max_leaves):
    """Root state-set tuples, one entry per automaton, over all trees with
    at most ``max_leaves`` leaves.

    This is a dynamic programme over leaf counts: the set of profiles for n
    leaves is built from those for k and n - k, so it covers every tree
    without listing them.  Returns {n: set of profiles}.
    """
    alphabet = sorted(alphabet, key=_char_key)
    by_n = {1: set()}
    for a in alphabet:
        by_n[1].add(tuple(A.leaf(a, ()) for A in automata))
    for n in range(2, max_leaves + 1):
        cur = set()
        for k in range(1, n):
            for p in by_n[k]:
                for q in by_n[n - k]:
                    for a in alphabet:
                        prof = []
                        for A, x, y in zip(automata, p, q):
                            s = set()
                            for u in x:
                                for v in y:
                                    s |= A.step(a, u, v)
                            prof.append(frozenset(s))
                        cur.add(tuple(prof))
        by_n[n] = cur
    return by_n


def accepts_set(A, states):
    return any(A.accepting(q) for q in states)
