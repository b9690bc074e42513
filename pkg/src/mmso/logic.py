"""Counting monadic second-order logic over set-systems.

Core kinds are Ind, Subseteq, Card, Not, And and Exists; the remaining node
types are sugar kept for display and expanded by ``desugar``.  Variables are
positive integers (``X1``, ``X2``, ...).

Concrete grammar, loosest first::

    iff     := imp ('<->' imp)*
    imp     := or ('->' imp)?            right associative
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | quant | atom
    quant   := ('exists'|'forall') Xn iff     body extends as far right as possible
    atom    := Ind(Xi) | card(Xi,p,q) | Xi <= Xj | Name(Xi) | '(' iff ')'

where Name is one of Empty, Sing, Basis, Coind, Circuit.
"""

import re
from dataclasses import dataclass, field
from functools import lru_cache

from . import automata as AU

EVAL_CAP = 16


class ParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"syntax error at offset {pos}: {msg}")
        self.pos = pos


# ---------------------------------------------------------------- AST

_SPAN = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Ind:
    i: int
    span: tuple = _SPAN


@dataclass(frozen=True)
class Subseteq:
    i: int
    j: int
    span: tuple = _SPAN


@dataclass(frozen=True)
class Card:
    i: int
    p: int
    q: int
    span: tuple = _SPAN

    def __post_init__(self):
        if not 0 <= self.p < self.q:
            raise ValueError(f"card parameters need 0 <= p < q, got p={self.p}, q={self.q}")


@dataclass(frozen=True)
class Not:
    a: object
    span: tuple = _SPAN


@dataclass(frozen=True)
class And:
    a: object
    b: object
    span: tuple = _SPAN


@dataclass(frozen=True)
class Exists:
    i: int
    a: object
    span: tuple = _SPAN


# sugar

@dataclass(frozen=True)
class Or:
    a: object
    b: object
    span: tuple = _SPAN


@dataclass(frozen=True)
class Implies:
    a: object
    b: object
    span: tuple = _SPAN


@dataclass(frozen=True)
class Iff:
    a: object
    b: object
    span: tuple = _SPAN


@dataclass(frozen=True)
class Forall:
    i: int
    a: object
    span: tuple = _SPAN


@dataclass(frozen=True)
class Macro:
    """Named predicate on one variable: Empty, Sing, Basis, Coind or Circuit."""

    name: str
    i: int
    span: tuple = _SPAN


CORE = (Ind, Subseteq, Card, Not, And, Exists)
_BINARY = (And, Or, Implies, Iff)
_QUANT = (Exists, Forall)


def children(f):
    if isinstance(f, Not):
        return (f.a,)
    if isinstance(f, _BINARY):
        return (f.a, f.b)
    if isinstance(f, _QUANT):
        return (f.a,)
    return ()


def atom_vars(f):
    if isinstance(f, (Ind, Card, Macro)):
        return (f.i,)
    if isinstance(f, Subseteq):
        return (f.i, f.j)
    return ()


@lru_cache(maxsize=65536)
def free_vars(f):
    if isinstance(f, _QUANT):
        return free_vars(f.a) - {f.i}
    out = frozenset(atom_vars(f))
    for c in children(f):
        out |= free_vars(c)
    return out


def all_vars(f):
    out = set(atom_vars(f))
    if isinstance(f, _QUANT):
        out.add(f.i)
    for c in children(f):
        out |= all_vars(c)
    return out


def is_core(f):
    return isinstance(f, CORE) and all(is_core(c) for c in children(f))


def quantifier_depth(f):
    d = max((quantifier_depth(c) for c in children(f)), default=0)
    return d + 1 if isinstance(f, _QUANT) else d


def _rebuild(f, kids):
    if isinstance(f, Not):
        return Not(kids[0], f.span)
    if isinstance(f, _BINARY):
        return type(f)(kids[0], kids[1], f.span)
    raise TypeError(f)


# ---------------------------------------------------------------- printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(f):
    """Fully parenthesised where needed; parse(to_text(f)) == f."""
    def go(f, ctx):
        if isinstance(f, Ind):
            return f"Ind(X{f.i})"
        if isinstance(f, Subseteq):
            return f"X{f.i} <= X{f.j}"
        if isinstance(f, Card):
            return f"card(X{f.i},{f.p},{f.q})"
        if isinstance(f, Macro):
            return f"{f.name}(X{f.i})"
        if isinstance(f, Not):
            inner = go(f.a, 9)
            return f"~({inner})" if isinstance(f.a, Subseteq) else "~" + inner
        if isinstance(f, _QUANT):
            kw = "exists" if isinstance(f, Exists) else "forall"
            s = f"{kw} X{f.i} {go(f.a, 0)}"
            return f"({s})" if ctx > 0 else s
        p = _PREC[type(f)]
        # -> is right associative, the others left associative
        lp, rp = (p + 1, p) if isinstance(f, Implies) else (p, p + 1)
        s = f"{go(f.a, lp)} {_OPS[type(f)]} {go(f.b, rp)}"
        return f"({s})" if ctx > p else s
    return go(f, 0)


# ---------------------------------------------------------------- parser

MACROS = ("Empty", "Sing", "Basis", "Coind", "Circuit")
_TOK = re.compile(r"\s*(?:(<->|->|<=|[&|~(),])|X(\d+)|(\d+)|([A-Za-z_]\w*))")


def _tokenize(text):
    toks, pos = [], 0
    text = "\n".join(ln.split("#", 1)[0] for ln in text.splitlines())
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOK.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start() + len(m.group(0)) - len(m.group(0).lstrip())
        if m.group(1):
            toks.append(("op", m.group(1), start))
        elif m.group(2) is not None:
            n = int(m.group(2))
            if n == 0:
                raise ParseError("variable index 0 is not allowed (indices start at 1)", start)
            toks.append(("var", n, start))
        elif m.group(3) is not None:
            toks.append(("num", int(m.group(3)), start))
        else:
            toks.append(("name", m.group(4), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None, value=None):
        t = self.toks[self.k]
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = "end of input" if t[0] == "end" else repr(t[1])
            raise ParseError(f"expected {want!r}, got {got}", t[2])
        self.k += 1
        return t

    def at(self, value):
        t = self.peek()
        return t[0] == "op" and t[1] == value

    def end(self):
        return self.toks[self.k - 1][2] + len(str(self.toks[self.k - 1][1]))

    def iff(self):
        s = self.peek()[2]
        f = self.imp()
        while self.at("<->"):
            self.take()
            f = Iff(f, self.imp(), (s, self.end()))
        return f

    def imp(self):
        s = self.peek()[2]
        f = self.or_()
        if self.at("->"):
            self.take()
            f = Implies(f, self.imp(), (s, self.end()))
        return f

    def or_(self):
        s = self.peek()[2]
        f = self.and_()
        while self.at("|"):
            self.take()
            f = Or(f, self.and_(), (s, self.end()))
        return f

    def and_(self):
        s = self.peek()[2]
        f = self.unary()
        while self.at("&"):
            self.take()
            f = And(f, self.unary(), (s, self.end()))
        return f

    def unary(self):
        t = self.peek()
        if self.at("~"):
            self.take()
            return Not(self.unary(), (t[2], self.end()))
        if t[0] == "name" and t[1] in ("exists", "forall"):
            self.take()
            i = self.take("var")[1]
            body = self.iff()
            cls = Exists if t[1] == "exists" else Forall
            return cls(i, body, (t[2], self.end()))
        return self.atom()

    def var(self):
        return self.take("var")[1]

    def atom(self):
        t = self.peek()
        if self.at("("):
            self.take()
            f = self.iff()
            self.take("op", ")")
            return f
        if t[0] == "var":
            i = self.var()
            self.take("op", "<=")
            return Subseteq(i, self.var(), (t[2], self.end()))
        if t[0] == "name":
            name = t[1]
            self.take()
            self.take("op", "(")
            i = self.var()
            if name == "Ind":
                self.take("op", ")")
                return Ind(i, (t[2], self.end()))
            if name == "card":
                self.take("op", ",")
                p = self.take("num")[1]
                self.take("op", ",")
                q = self.take("num")[1]
                self.take("op", ")")
                if not 0 <= p < q:
                    raise ParseError(f"card needs 0 <= p < q, got p={p}, q={q}", t[2])
                return Card(i, p, q, (t[2], self.end()))
            if name in MACROS:
                self.take("op", ")")
                return Macro(name, i, (t[2], self.end()))
            raise ParseError(f"unknown predicate {name!r}", t[2])
        got = "end of input" if t[0] == "end" else repr(t[1])
        raise ParseError(f"expected a formula, got {got}", t[2])


def parse(text, hygiene=True):
    """Parse a formula; bound variables that clash are renamed apart."""
    p = _Parser(text)
    f = p.iff()
    if p.peek()[0] != "end":
        raise ParseError(f"unexpected {p.peek()[1]!r}", p.peek()[2])
    return rename_apart(f) if hygiene else f


def rename_apart(f):
    """α-rename binders that reuse a free variable or an enclosing binder."""
    fresh = [max(all_vars(f), default=0)]
    taken0 = set(free_vars(f))

    def go(f, env, taken):
        if isinstance(f, (Ind, Card, Macro)):
            return type(f)(**{**f.__dict__, "i": env.get(f.i, f.i)})
        if isinstance(f, Subseteq):
            return Subseteq(env.get(f.i, f.i), env.get(f.j, f.j), f.span)
        if isinstance(f, _QUANT):
            i = f.i
            if i in taken:
                fresh[0] += 1
                i = fresh[0]
            return type(f)(i, go(f.a, {**env, f.i: i}, taken | {i}), f.span)
        return _rebuild(f, [go(c, env, taken) for c in children(f)])
    return go(f, {}, taken0)


# ---------------------------------------------------------------- stdlib

_DEFS = {
    "Empty": "forall X2 (X2 <= X1 -> X1 <= X2)",
    "Sing": "~Empty(X1) & forall X2 (X2 <= X1 -> (Empty(X2) | X1 <= X2))",
    "Basis": "Ind(X1) & forall X2 ((Ind(X2) & X1 <= X2) -> X2 <= X1)",
    "Coind": "exists X2 (Basis(X2) & ~exists X3 (Sing(X3) & X3 <= X1 & X3 <= X2))",
    "Circuit": "~Ind(X1) & forall X2 ((X2 <= X1 & ~(X1 <= X2)) -> Ind(X2))",
}

# ∅ independent, downward closed, and circuit elimination stated as "(C1 ∪ C2) - z
# contains a dependent set" (any dependent set contains a circuit)
MATROID_AXIOMS = (
    "(exists X1 (Empty(X1) & Ind(X1)))"
    " & (forall X1 forall X2 ((Ind(X2) & X1 <= X2) -> Ind(X1)))"
    " & (forall X1 (Circuit(X1) -> forall X2 ((Circuit(X2) & ~(X1 <= X2 & X2 <= X1))"
    " -> forall X3 ((Sing(X3) & X3 <= X1 & X3 <= X2) -> exists X4 (~Ind(X4) & ~(X3 <= X4)"
    " & forall X5 ((Sing(X5) & X5 <= X4) -> (X5 <= X1 | X5 <= X2)))))))"
)


@lru_cache(maxsize=None)
def _definition(name):
    return parse(_DEFS[name])


def stdlib():
    """Named formulas: the macro bodies (in X1) and the matroid-axioms sentence."""
    out = {name: _definition(name) for name in MACROS}
    out["matroid"] = parse(MATROID_AXIOMS)
    return out


# ---------------------------------------------------------------- desugar

def desugar(f, keep=()):
    """Equivalent formula over the six core kinds.

    User binders keep their index; binders inside expanded macro bodies get
    fresh indices so they cannot capture.  Macros named in ``keep`` are left
    in place.
    """
    counter = [max(all_vars(f), default=0)]

    def fresh():
        counter[0] += 1
        return counter[0]

    def go(f, env, body=False):
        r = lambda i: env.get(i, i)  # noqa: E731
        if isinstance(f, Ind):
            return Ind(r(f.i))
        if isinstance(f, Subseteq):
            return Subseteq(r(f.i), r(f.j))
        if isinstance(f, Card):
            return Card(r(f.i), f.p, f.q)
        if isinstance(f, Not):
            return Not(go(f.a, env, body))
        if isinstance(f, And):
            return And(go(f.a, env, body), go(f.b, env, body))
        if isinstance(f, Or):
            return Not(And(Not(go(f.a, env, body)), Not(go(f.b, env, body))))
        if isinstance(f, Implies):
            return Not(And(go(f.a, env, body), Not(go(f.b, env, body))))
        if isinstance(f, Iff):
            a, b = go(f.a, env, body), go(f.b, env, body)
            return And(Not(And(a, Not(b))), Not(And(b, Not(a))))
        if isinstance(f, (Exists, Forall)):
            i = fresh() if body else f.i
            inner = go(f.a, {**env, f.i: i}, body)
            return Exists(i, inner) if isinstance(f, Exists) else Not(Exists(i, Not(inner)))
        if isinstance(f, Macro) and f.name in keep:
            return Macro(f.name, r(f.i))
        if isinstance(f, Macro):
            # the body's only free variable is X1
            return go(_definition(f.name), {1: r(f.i)}, True)
        raise TypeError(f"not a formula: {f!r}")
    return go(f, {})


# ---------------------------------------------------------------- evaluation

def _pc(x):
    return bin(x).count("1")


def _conjuncts(f):
    if isinstance(f, And):
        return _conjuncts(f.a) + _conjuncts(f.b)
    return (f,)


class _Evaluator:
    def __init__(self, S, native_sugar=True):
        self.S = S
        self.native = native_sugar
        self.full = S.full
        self.masks = range(1 << S.n)
        t = S.table
        self.ind = (lambda m: bool(t[m])) if t is not None else S.is_indep
        self.memo = {}
        self._fv = {}
        self._bases = None

    def bases(self):
        if self._bases is None:
            self._bases = [m for m in self.masks if self._basis(m)]
        return self._bases

    def _basis(self, m):
        if not self.ind(m):
            return False
        rest = self.full & ~m
        sub = rest
        while sub:
            if self.ind(m | sub):
                return False
            sub = (sub - 1) & rest
        return True

    def macro(self, name, x):
        if name == "Empty":
            return x == 0
        if name == "Sing":
            return x != 0 and x & (x - 1) == 0
        if name == "Basis":
            return x in set(self.bases())
        if name == "Coind":
            return any(b & x == 0 for b in self.bases())
        if name == "Circuit":
            if self.ind(x):
                return False
            if x == 0:
                return True
            sub = (x - 1) & x
            while True:
                if not self.ind(sub):
                    return False
                if sub == 0:
                    return True
                sub = (sub - 1) & x
        raise ValueError(name)

    def domain(self, i, guards, env):
        """Values of X_i worth trying: guards that must hold narrow the range."""
        upper, lower = self.full, 0
        for g in guards:
            if isinstance(g, Subseteq) and g.i == i and g.j != i and g.j in env:
                upper &= env[g.j]
            elif isinstance(g, Subseteq) and g.j == i and g.i != i and g.i in env:
                lower |= env[g.i]
            elif isinstance(g, Macro) and g.i == i and g.name == "Empty":
                upper = 0
            elif isinstance(g, Macro) and g.i == i and g.name == "Sing":
                return [1 << b for b in range(self.S.n) if upper >> b & 1 and not lower & ~(1 << b)]
        if lower & ~upper:
            return []
        if upper == self.full and lower == 0:
            return self.masks
        free = upper & ~lower
        out, sub = [], free
        while True:
            out.append(sub | lower)
            if sub == 0:
                return out
            sub = (sub - 1) & free

    def fv(self, f):
        k = id(f)
        out = self._fv.get(k)
        if out is None:
            out = self._fv[k] = (f, tuple(sorted(free_vars(f))))
        return out[1]

    def ev(self, f, env):
        key = (id(f), tuple(env[i] for i in self.fv(f)))
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        val = self._ev(f, env)
        self.memo[key] = val
        return val

    def _ev(self, f, env):
        if isinstance(f, Ind):
            return self.ind(env[f.i])
        if isinstance(f, Subseteq):
            return env[f.i] & ~env[f.j] == 0
        if isinstance(f, Card):
            return _pc(env[f.i]) % f.q == f.p
        if isinstance(f, Not):
            return not self.ev(f.a, env)
        if isinstance(f, And):
            return self.ev(f.a, env) and self.ev(f.b, env)
        if isinstance(f, Exists):
            dom = self.domain(f.i, _conjuncts(f.a), env)
            return any(self.ev(f.a, {**env, f.i: m}) for m in dom)
        if isinstance(f, Macro) and self.native:
            return self.macro(f.name, env[f.i])
        if isinstance(f, Macro):
            return self.ev(desugar(f), env)
        if isinstance(f, Or):
            return self.ev(f.a, env) or self.ev(f.b, env)
        if isinstance(f, Implies):
            return (not self.ev(f.a, env)) or self.ev(f.b, env)
        if isinstance(f, Iff):
            return self.ev(f.a, env) == self.ev(f.b, env)
        if isinstance(f, Forall):
            guards = _conjuncts(f.a.a) if isinstance(f.a, Implies) else ()
            dom = self.domain(f.i, guards, env)
            return all(self.ev(f.a, {**env, f.i: m}) for m in dom)
        raise TypeError(f"not a formula: {f!r}")


def evaluate(S, f, theta=None, native_sugar=True):
    """Truth of f in the set-system S under θ (variable index -> subset).

    Subsets may be masks or iterables of element names.  Sugar is evaluated
    directly unless ``native_sugar`` is false, in which case macros are
    expanded first.
    """
    if isinstance(f, str):
        f = parse(f)
    if S.n > EVAL_CAP:
        raise ValueError(f"brute-force evaluation is capped at |E| <= {EVAL_CAP}")
    theta = dict(theta or {})
    missing = sorted(free_vars(f) - set(theta))
    if missing:
        raise ValueError("uncovered free variable " + ", ".join(f"X{i}" for i in missing))
    env = {i: S.mask(v) for i, v in theta.items()}
    return _Evaluator(S, native_sugar).ev(f, env)


# ---------------------------------------------------------------- compiler

class SubsetAutomaton(AU._Lazy):
    """Accepts when every leaf with bit i set also has bit j set."""

    deterministic = total = True

    def __init__(self, i, j):
        super().__init__()
        self.arity = tuple(sorted({i, j}))
        self._i, self._j = self.arity.index(i), self.arity.index(j)

    def _leaf(self, alpha, bits):
        return ("bad",) if bits[self._i] and not bits[self._j] else ("ok",)

    def _step(self, alpha, ql, qr):
        return ("bad",) if "bad" in (ql, qr) else ("ok",)

    def accepting(self, q):
        return q == "ok"


class CountAutomaton(AU._Lazy):
    """Counts marked leaves, saturating at ``top``; accepts counts in ``good``.

    Empty is good={0}, top=1 and Sing is good={1}, top=2.
    """

    deterministic = total = True

    def __init__(self, i, top, good):
        super().__init__()
        self.arity = (i,)
        self.top, self.good = top, frozenset(good)

    def _leaf(self, alpha, bits):
        return (min(bits[0], self.top),)

    def _step(self, alpha, ql, qr):
        return (min(ql + qr, self.top),)

    def accepting(self, q):
        return q in self.good


class CardAutomaton(AU._Lazy):
    """Counts marked leaves modulo q; accepts residue p."""

    deterministic = total = True

    def __init__(self, i, p, q):
        super().__init__()
        self.arity = (i,)
        self.p, self.q = p, q

    def _leaf(self, alpha, bits):
        return (bits[0] % self.q,)

    def _step(self, alpha, ql, qr):
        return ((ql + qr) % self.q,)

    def accepting(self, q):
        return q == self.p


DIRECT_MACROS = ("Empty", "Sing")


def compile_formula(f, A_ind, cap=None, expand_all=False):
    """Tree automaton for f relative to the {k}-ary automaton A_ind.

    The result's arity is the set of free variables of f (after desugaring);
    on enc(T, σ, φ, S) it accepts iff the system realised by A_ind on (T, σ, φ)
    satisfies f under S.  Empty and Sing get small counting automata instead
    of their quantified definitions unless ``expand_all`` is set.
    """
    if isinstance(f, str):
        f = parse(f)
    if len(A_ind.arity) != 1:
        raise ValueError("the independence automaton must have exactly one variable")
    k = A_ind.arity[0]
    f = desugar(f, () if expand_all else DIRECT_MACROS)
    memo = {}

    def go(f):
        hit = memo.get(f)
        if hit is not None:
            return hit
        if isinstance(f, Ind):
            A = A_ind if f.i == k else AU.rename(A_ind, {k: f.i})
        elif isinstance(f, Subseteq):
            A = AU.Universal((f.i,)) if f.i == f.j else SubsetAutomaton(f.i, f.j)
        elif isinstance(f, Card):
            A = CardAutomaton(f.i, f.p, f.q)
        elif isinstance(f, Macro) and f.name == "Empty":
            A = CountAutomaton(f.i, 1, (0,))
        elif isinstance(f, Macro) and f.name == "Sing":
            A = CountAutomaton(f.i, 2, (1,))
        elif isinstance(f, Not):
            inner = go(f.a)
            if not inner.deterministic:
                inner = AU.determinize(inner, cap)
            A = AU.complement(inner)
        elif isinstance(f, And):
            A = AU.product(go(f.a), go(f.b))
        elif isinstance(f, Exists):
            inner = go(f.a)
            A = AU.project(inner, f.i) if f.i in inner.arity else inner
        else:
            raise TypeError(f"not a core formula: {f!r}")
        memo[f] = A
        return A
    A = go(f)
    if A.alphabet is None and A_ind.alphabet is not None:
        A.alphabet = A_ind.alphabet
    return A
