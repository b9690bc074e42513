"""Set-systems and matroids over small ground sets.

Subsets are Python ints used as bitmasks over the canonical element order
(natural sort of the display names).  Up to ``TABLE_CAP`` elements the
independence predicate is a boolean table with one entry per subset; above
that it falls back to a memoised oracle.
"""

import re
import threading
from itertools import combinations

import numpy as np

from . import _kernels as K
from .gf import field, left_nullspace, rank as gf_rank

TABLE_CAP = 24

__all__ = [
    "SetSystem", "Matroid", "LinearRep", "natural_key", "build_matroid",
    "set_system", "from_family", "uniform", "linear", "graphic", "sparse_paving",
    "m_graph", "m_plus", "parallel2", "u2n_plus", "polygon", "path_matroid",
    "rank", "connectivity", "minor", "delete", "contract", "restrict", "dual",
    "relabel", "direct_sum", "add_parallel", "parallel_connection", "two_sum",
    "circuits", "connected_components", "find_2separation", "is_3connected",
    "verify_matroid_axioms", "same_oracle", "parse_matroid", "format_matroid",
]


def natural_key(name):
    return tuple((0, int(t), "") if t.isdigit() else (1, 0, t)
                 for t in re.split(r"(\d+)", name) if t)


def _canonical_names(names):
    names = [str(x) for x in names]
    if len(set(names)) != len(names):
        raise ValueError("duplicate element names")
    return tuple(sorted(names, key=natural_key))


def _popcount(x):
    return bin(x).count("1")


class SetSystem:
    """A ground set with an independence predicate.

    ``table`` is a boolean array indexed by subset masks; for ground sets
    above TABLE_CAP pass ``oracle`` (mask -> bool) instead.
    """

    def __init__(self, names, table=None, oracle=None):
        self.names = tuple(names)
        if tuple(sorted(self.names, key=natural_key)) != self.names:
            raise ValueError("names must be in canonical (natural-sorted) order")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate element names")
        self.n = len(self.names)
        self.full = (1 << self.n) - 1
        self._id = {x: i for i, x in enumerate(self.names)}
        if table is None and oracle is None:
            raise ValueError("need a table or an oracle")
        if table is None and self.n <= TABLE_CAP:
            table = np.fromiter((bool(oracle(m)) for m in range(1 << self.n)),
                                dtype=np.bool_, count=1 << self.n)
        if table is not None:
            table = np.asarray(table, dtype=np.bool_)
            if table.shape != (1 << self.n,):
                raise ValueError("independence table has the wrong length")
            table.setflags(write=False)
        self.table = table
        self._oracle = oracle
        self._memo = {}
        self._lock = threading.Lock()

    # -- subsets
    def mask(self, X):
        """Normalise a subset given as mask, name, or iterable of names/ids."""
        if isinstance(X, (int, np.integer)) and not isinstance(X, bool):
            X = int(X)
            if X < 0 or X & ~self.full:
                raise ValueError(f"subset {X:#b} is not contained in the ground set")
            return X
        if isinstance(X, str):
            X = [X]
        m = 0
        for x in X:
            if isinstance(x, str):
                if x not in self._id:
                    raise ValueError(f"unknown element {x!r}")
                m |= 1 << self._id[x]
            else:
                x = int(x)
                if not 0 <= x < self.n:
                    raise ValueError(f"element id {x} out of range")
                m |= 1 << x
        return m

    def subset(self, mask):
        return frozenset(self.names[i] for i in range(self.n) if mask >> i & 1)

    def ids(self, mask):
        return [i for i in range(self.n) if mask >> i & 1]

    def fmt(self, mask):
        return "{" + ",".join(self.names[i] for i in self.ids(mask)) + "}"

    # -- independence
    def is_indep(self, X):
        m = self.mask(X)
        if self.table is not None:
            return bool(self.table[m])
        with self._lock:
            if m not in self._memo:
                self._memo[m] = bool(self._oracle(m))
            return self._memo[m]

    def require_table(self, what="this operation"):
        if self.table is None:
            raise ValueError(f"{what} needs |E| <= {TABLE_CAP}")
        return self.table

    def family(self):
        """Independent sets as a sorted list of masks."""
        return [int(m) for m in np.flatnonzero(self.require_table())]

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class LinearRep:
    """Columns of an r x n matrix over GF(q); column j represents element j."""

    def __init__(self, q, rows):
        self.q = q
        self.F = field(q)
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        if self.rows:
            width = len(self.rows[0])
            if any(len(r) != width for r in self.rows):
                raise ValueError("malformed matrix: ragged rows")
            if any(not 0 <= x < q for r in self.rows for x in r):
                raise ValueError(f"matrix entries must lie in 0..{q - 1}")
        self.ncols = len(self.rows[0]) if self.rows else 0

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def vectors(self, mask):
        return [self.column(j) for j in range(self.ncols) if mask >> j & 1]

    def rank(self, mask):
        return gf_rank(self.F, self.vectors(mask))

    def select(self, cols):
        return LinearRep(self.q, [tuple(r[j] for j in cols) for r in self.rows])

    def dual(self):
        # rows spanning the null space represent the dual matroid
        ker = left_nullspace(self.F, [self.column(j) for j in range(self.ncols)])
        return LinearRep(self.q, ker if ker else [(0,) * self.ncols])


class Matroid(SetSystem):
    """Set-system known to satisfy the matroid axioms, with a cached rank."""

    def __init__(self, names, table=None, oracle=None, linear=None, descriptor=None):
        super().__init__(names, table, oracle)
        self.linear = linear
        self.descriptor = descriptor
        self._rank_table = None

    @property
    def rank_table(self):
        if self._rank_table is None:
            rt = K.rank_table(self.require_table("rank table"), self.n)
            rt.setflags(write=False)
            self._rank_table = rt
        return self._rank_table

    def rank(self, X):
        m = self.mask(X)
        if self.table is not None:
            return int(self.rank_table[m])
        r, cur = 0, 0
        for i in self.ids(m):
            if self.is_indep(cur | 1 << i):
                cur |= 1 << i
                r += 1
        return r

    @property
    def r(self):
        return self.rank(self.full)

    def closure(self, X):
        m = self.mask(X)
        rk = self.rank(m)
        out = m
        for i in range(self.n):
            if not m >> i & 1 and self.rank(m | 1 << i) == rk:
                out |= 1 << i
        return out

    def connectivity(self, U):
        m = self.mask(U)
        return self.rank(m) + self.rank(self.full & ~m) - self.r

    def is_loop(self, x):
        return self.rank(self.mask(x)) == 0

    def is_coloop(self, x):
        m = self.mask(x)
        return self.rank(self.full & ~m) < self.r

    def basis(self, X=None, start=0):
        """Greedy basis of X in canonical order, extending the independent set ``start``."""
        m = self.full if X is None else self.mask(X)
        cur = start
        for i in self.ids(m & ~start):
            if self.is_indep(cur | 1 << i):
                cur |= 1 << i
        return cur


# ---------------------------------------------------------------- builders

def _table_from(names, pred):
    n = len(names)
    return np.fromiter((bool(pred(m)) for m in range(1 << n)), dtype=np.bool_, count=1 << n)


def set_system(names, sets):
    """Explicit set-system (no axioms checked)."""
    names = _canonical_names(names)
    S = SetSystem(names, np.zeros(1 << len(names), dtype=np.bool_))
    table = np.zeros(1 << len(names), dtype=np.bool_)
    for X in sets:
        table[S.mask(X)] = True
    return SetSystem(names, table)


def from_family(names, sets):
    """Matroid from an explicit list of independent sets; axioms are verified."""
    S = set_system(names, sets)
    ok, bad = verify_matroid_axioms(S)
    if not ok:
        raise ValueError(f"not a matroid: {bad.axiom} fails at "
                         + ", ".join(S.fmt(x) for x in bad.sets))
    desc = {"type": "explicit", "elements": list(S.names),
            "indep": [sorted(S.subset(m), key=natural_key) for m in S.family()]}
    return Matroid(S.names, S.table, descriptor=desc)


def _as_matroid(S, desc=None, linear=None):
    return Matroid(S.names, S.table, S._oracle if S.table is None else None,
                   linear=linear, descriptor=desc)


def uniform(r, n_or_names):
    names = (_default_names(n_or_names) if isinstance(n_or_names, int)
             else _canonical_names(n_or_names))
    if not 0 <= r <= len(names):
        raise ValueError("uniform matroid needs 0 <= r <= n")
    desc = {"type": "uniform", "rank": r, "elements": list(names)}
    if len(names) <= TABLE_CAP:
        table = K.popcounts(len(names)) <= r
        return Matroid(names, table, descriptor=desc)
    return Matroid(names, oracle=lambda m: _popcount(m) <= r, descriptor=desc)


def _default_names(n):
    if n <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:n])
    return _canonical_names(f"e{i + 1}" for i in range(n))


def linear(q, rows, names=None):
    """Column matroid of a matrix over GF(q); ``names`` label columns in order."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    if names is None:
        names = [f"e{i + 1}" for i in range(ncols)]
    names = [str(x) for x in names]
    if len(names) != ncols:
        raise ValueError("malformed matrix: column count differs from element count")
    canon = _canonical_names(names)
    perm = [names.index(x) for x in canon]
    rep = LinearRep(q, rows).select(perm)
    n = len(canon)
    if n <= TABLE_CAP:
        table = _linear_table(rep, n)
        M = Matroid(canon, table, linear=rep)
    else:
        M = Matroid(canon, oracle=lambda m: rep.rank(m) == _popcount(m), linear=rep)
    M.descriptor = {"type": "linear", "field": q, "elements": names, "rows": rows}
    return M


def _linear_table(rep, n):
    # X independent iff X - top independent and column(top) is outside its span
    F = rep.F
    table = np.zeros(1 << n, dtype=np.bool_)
    table[0] = True
    bases = {0: []}
    for m in range(1, 1 << n):
        top = m.bit_length() - 1
        rest = m ^ (1 << top)
        if not table[rest]:
            continue
        red = bases[rest]
        v = list(rep.column(top))
        for piv, row in red:
            c = v[piv]
            if c:
                v = [F.sub(x, F.mul[c][y]) for x, y in zip(v, row)]
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = F.inv[v[piv]]
        v = [F.mul[inv][x] for x in v]
        new = []
        for p, row in red:
            c = row[piv]
            if c:
                row = [F.sub(x, F.mul[c][y]) for x, y in zip(row, v)]
            new.append((p, row))
        new.append((piv, v))
        table[m] = True
        bases[m] = new
    return table


def graphic(edges, names=None):
    """Cycle matroid; ``edges`` is a list of (u, v) pairs, one per element."""
    edges = [tuple(map(str, e)) for e in edges]
    if names is None:
        names = [f"e{i + 1}" for i in range(len(edges))]
    names = [str(x) for x in names]
    if len(names) != len(edges):
        raise ValueError("graphic: one name per edge required")
    canon = _canonical_names(names)
    ends = [edges[names.index(x)] for x in canon]

    def forest(m):
        parent = {}

        def find(a):
            while parent.get(a, a) != a:
                a = parent[a]
            return a
        for i in range(len(canon)):
            if m >> i & 1:
                a, b = find(ends[i][0]), find(ends[i][1])
                if a == b:
                    return False
                parent[a] = b
        return True

    M = _as_matroid(SetSystem(canon, None, forest) if len(canon) > TABLE_CAP
                    else SetSystem(canon, _table_from(canon, forest)))
    M.descriptor = {"type": "graphic", "elements": names,
                    "edges": [f"{u}-{v}" for u, v in edges]}
    return M


def sparse_paving(names, r, hyperplanes):
    """Sparse paving matroid of rank r with the given circuit-hyperplanes."""
    names = _canonical_names(names)
    S = SetSystem(names, np.zeros(1 << len(names), dtype=np.bool_))
    hp = {S.mask(h) for h in hyperplanes}
    for h in hp:
        if _popcount(h) != r:
            raise ValueError("circuit-hyperplanes must have size r")
    for a, b in combinations(sorted(hp), 2):
        if _popcount(a & b) > r - 2:
            raise ValueError("circuit-hyperplanes meet in more than r-2 elements")
    pc = K.popcounts(len(names))
    table = pc <= r
    for h in hp:
        table[h] = False
    return Matroid(names, table)


def _simple_graph(edges):
    seen = set()
    for u, v in edges:
        if u == v:
            raise ValueError("m(G) needs a graph without loops")
        key = frozenset((u, v))
        if key in seen:
            raise ValueError("m(G) needs a graph without parallel edges")
        seen.add(key)


def m_graph(edges, names=None, vertices=()):
    """Rank-3 sparse paving matroid on V ∪ E with circuit-hyperplanes {u, uv, v}."""
    edges = [tuple(map(str, e)) for e in edges]
    _simple_graph(edges)
    if names is None:
        names = [f"e{i + 1}" for i in range(len(edges))]
    names = [str(x) for x in names]
    verts = sorted({str(v) for v in vertices} | {v for e in edges for v in e}, key=natural_key)
    if set(verts) & set(names):
        raise ValueError("vertex and edge names overlap")
    hp = [(u, x, v) for (u, v), x in zip(edges, names)]
    M = sparse_paving(verts + names, 3, hp)
    M.descriptor = {"type": "m", "elements": names,
                    "edges": [f"{u}-{v}" for u, v in edges]}
    if vertices:
        M.descriptor["vertices"] = [str(v) for v in vertices]
    return M


def m_plus(edges, names=None, vertices=()):
    """m(G) with a parallel copy v' added for every vertex v."""
    M = m_graph(edges, names, vertices)
    desc = dict(M.descriptor, type="mplus")
    verts = [x for x in M.names if x not in set(desc["elements"])]
    for v in verts:
        M = add_parallel(M, v, v + "'")
    M.descriptor = desc
    return M


def parallel2(classes):
    """Rank-2 (or smaller) matroid whose parallel classes are given."""
    classes = [[str(x) for x in c] for c in classes]
    names = _canonical_names(x for c in classes for x in c)
    S = SetSystem(names, np.zeros(1 << len(names), dtype=np.bool_))
    cls = [S.mask(c) for c in classes]

    def ok(m):
        if _popcount(m) > 2:
            return False
        return all(_popcount(m & c) <= 1 for c in cls)
    M = Matroid(names, _table_from(names, ok))
    M.descriptor = {"type": "parallel2", "classes": classes}
    return M


def u2n_plus(n):
    """U_{2,n} with every element replaced by a parallel pair (a1 a2, b1 b2, ...)."""
    letters = "abcdefghijklmnopqrstuvwxyz"
    return parallel2([[f"{letters[i]}1", f"{letters[i]}2"] for i in range(n)])


def polygon(n, names=None):
    """Rank-3 sparse paving on 2n elements, circuits {e1e2e3}, {e3e4e5}, ..."""
    if n < 3:
        raise ValueError("polygon needs n >= 3")
    names = [f"e{i + 1}" for i in range(2 * n)] if names is None else [str(x) for x in names]
    if len(names) != 2 * n:
        raise ValueError("polygon(n) has 2n elements")
    hp = [(names[2 * i], names[2 * i + 1], names[(2 * i + 2) % (2 * n)]) for i in range(n)]
    M = sparse_paving(names, 3, hp)
    M.descriptor = {"type": "polygon", "n": n, "elements": names}
    return M


def path_matroid(n, starts, names=None):
    """Rank-3 sparse paving on a path; circuits {e_i, e_i+1, e_i+2} for i in starts (1-based)."""
    names = [f"e{i + 1}" for i in range(n)] if names is None else [str(x) for x in names]
    if len(names) != n:
        raise ValueError("path: element count mismatch")
    starts = sorted(int(s) for s in starts)
    for s in starts:
        if not 1 <= s <= n - 2:
            raise ValueError(f"path: circuit start {s} out of range")
        if s + 1 in starts:
            raise ValueError("path: consecutive triples cannot both be circuits")
    hp = [names[s - 1:s + 2] for s in starts]
    M = sparse_paving(names, 3, hp)
    M.descriptor = {"type": "path", "elements": names, "circuits": starts}
    return M


def build_matroid(desc):
    """Build from a descriptor dict (the parsed form of the matroid text format)."""
    kind = desc.get("type")
    els = desc.get("elements")
    if kind == "explicit":
        return from_family(els, desc.get("indep", []))
    if kind == "uniform":
        return uniform(int(desc["rank"]), els)
    if kind == "linear":
        return linear(int(desc["field"]), desc["rows"], els)
    if kind == "graphic":
        return graphic(_edge_pairs(desc["edges"]), els)
    if kind in ("m", "mplus"):
        f = m_graph if kind == "m" else m_plus
        return f(_edge_pairs(desc["edges"]), els, desc.get("vertices", ()))
    if kind == "parallel2":
        return parallel2(desc["classes"])
    if kind == "polygon":
        n = int(desc["n"]) if "n" in desc else len(els) // 2
        return polygon(n, els)
    if kind == "path":
        return path_matroid(len(els), desc.get("circuits", []), els)
    raise ValueError(f"unknown matroid type {kind!r}")


def _edge_pairs(edges):
    out = []
    for e in edges:
        if isinstance(e, str):
            if e.count("-") != 1:
                raise ValueError(f"bad edge {e!r}; expected u-v")
            u, v = e.split("-")
            out.append((u, v))
        else:
            out.append(tuple(e))
    return out


# ---------------------------------------------------------------- operations

def rank(M, X):
    return M.rank(X)


def connectivity(M, U):
    return M.connectivity(U)


def _sub_positions(M, keep):
    return [i for i in range(M.n) if keep >> i & 1]


def minor(M, C=0, D=0):
    """M / C \\ D on the ground set E - C - D."""
    C, D = M.mask(C), M.mask(D)
    if C & D:
        raise ValueError("contraction and deletion sets overlap")
    keep = M.full & ~(C | D)
    pos = _sub_positions(M, keep)
    names = tuple(M.names[i] for i in pos)
    if M.table is None:
        rc = M.rank(C)

        def ind(m):
            old = _deposit_int(m, pos)
            return M.rank(old | C) - rc == _popcount(m)
        return Matroid(names, oracle=ind)
    old = K.deposit(pos)
    rt = M.rank_table.astype(np.int64)
    table = rt[old | C] - rt[C] == K.popcounts(len(pos))
    lin = M.linear.select(pos) if (M.linear is not None and C == 0) else None
    return Matroid(names, table, linear=lin)


def _deposit_int(m, pos):
    out = 0
    for k, p in enumerate(pos):
        if m >> k & 1:
            out |= 1 << p
    return out


def delete(M, D):
    return minor(M, 0, D)


def contract(M, C):
    return minor(M, C, 0)


def restrict(M, X):
    return minor(M, 0, M.full & ~M.mask(X))


def dual(M):
    if M.table is None:
        return Matroid(M.names, oracle=lambda m: M.rank(M.full & ~m) == M.r)
    rt = M.rank_table
    idx = np.arange(1 << M.n, dtype=np.int64)
    lin = M.linear.dual() if M.linear is not None else None
    return Matroid(M.names, rt[M.full ^ idx] == M.r, linear=lin)


def relabel(M, mapping):
    """Rename elements; ``mapping`` sends old names to new names (missing -> same)."""
    new = [str(mapping.get(x, x)) for x in M.names]
    canon = _canonical_names(new)
    pos = [canon.index(x) for x in new]
    old_to_new = K.deposit(pos)
    table = np.zeros(1 << M.n, dtype=np.bool_)
    table[old_to_new] = M.require_table("relabel")
    lin = None
    if M.linear is not None:
        inv = [new.index(x) for x in canon]
        lin = M.linear.select(inv)
    return Matroid(canon, table, linear=lin)


def direct_sum(*ms):
    names = _canonical_names(x for M in ms for x in M.names)
    parts = []
    for M in ms:
        pos = [names.index(x) for x in M.names]
        parts.append((pos, M))

    def ind(m):
        for pos, M in parts:
            sub = sum(1 << k for k, p in enumerate(pos) if m >> p & 1)
            if not M.is_indep(sub):
                return False
        return True
    return Matroid(names, _table_from(names, ind))


def add_parallel(M, x, new):
    """Add ``new`` parallel to the non-loop element ``x``."""
    if M.is_loop(x):
        raise ValueError("cannot add a parallel copy of a loop")
    names = _canonical_names(list(M.names) + [new])
    pos = [names.index(y) for y in M.names]
    ix, inew = names.index(x), names.index(new)

    def ind(m):
        if m >> ix & 1 and m >> inew & 1:
            return False
        if m >> inew & 1:
            m = (m & ~(1 << inew)) | (1 << ix)
        sub = sum(1 << k for k, p in enumerate(pos) if m >> p & 1)
        return M.is_indep(sub)
    return Matroid(names, _table_from(names, ind))


def circuits(M):
    """Minimal dependent sets as masks, by increasing size then mask."""
    t = M.require_table("circuits")
    n = M.n
    circ = ~t.copy()
    idx = np.arange(1 << n, dtype=np.int64)
    for b in range(n):
        has = idx[(idx >> b) & 1 == 1]
        circ[has] &= t[has ^ (1 << b)]
    found = [int(m) for m in np.flatnonzero(circ)]
    return sorted(found, key=lambda m: (_popcount(m), m))


def _dep_from_circuits(n, circs):
    dep = np.zeros(1 << n, dtype=np.bool_)
    for c in circs:
        dep[c] = True
    idx = np.arange(1 << n, dtype=np.int64)
    for b in range(n):
        lo = idx[(idx >> b) & 1 == 0]
        dep[lo | (1 << b)] |= dep[lo]
    return dep


def parallel_connection(M1, M2, e):
    """Parallel connection along the common element e (neither loop nor coloop)."""
    common = set(M1.names) & set(M2.names)
    if common != {e}:
        raise ValueError("ground sets must meet exactly in the basepoint")
    for M in (M1, M2):
        if M.is_loop(e) or M.is_coloop(e):
            raise ValueError("basepoint is a loop or coloop")
    names = _canonical_names(set(M1.names) | set(M2.names))
    n = len(names)

    def lift(M, m):
        return sum(1 << names.index(M.names[i]) for i in M.ids(m))
    eb = 1 << names.index(e)
    c1 = [lift(M1, c) for c in circuits(M1)]
    c2 = [lift(M2, c) for c in circuits(M2)]
    cs = c1 + c2 + [(a | b) & ~eb for a in c1 if a & eb for b in c2 if b & eb]
    return Matroid(names, ~_dep_from_circuits(n, cs))


def two_sum(M1, M2, e):
    P = parallel_connection(M1, M2, e)
    return delete(P, e)


def connected_components(M):
    """Partition of E (list of masks, ordered by least element)."""
    parent = list(range(M.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a
    for c in circuits(M):
        ids = M.ids(c)
        for i in ids[1:]:
            parent[find(i)] = find(ids[0])
    comps = {}
    for i in range(M.n):
        comps[find(i)] = comps.get(find(i), 0) | 1 << i
    return sorted(comps.values(), key=lambda m: (m & -m))


def find_2separation(M, cap=20):
    """A partition (U, V) with |U|, |V| >= 2 and λ(U) <= 1, or None.

    Exhaustive; returns the smallest such U (by size, then mask).
    """
    if M.n > cap:
        raise ValueError(f"ground set too large for exhaustive 2-separation search (> {cap})")
    if M.n < 4:
        return None
    rt = M.rank_table.astype(np.int64)
    idx = np.arange(1 << M.n, dtype=np.int64)
    pc = K.popcounts(M.n)
    lam = rt + rt[M.full ^ idx] - M.r
    ok = (pc >= 2) & (pc <= M.n - 2) & (lam <= 1)
    cand = idx[ok]
    if cand.size == 0:
        return None
    best = min(cand.tolist(), key=lambda m: (_popcount(m), m))
    return best, M.full & ~best


def is_3connected(M):
    return len(connected_components(M)) <= 1 and find_2separation(M) is None


class Violation:
    def __init__(self, axiom, sets):
        self.axiom = axiom
        self.sets = tuple(sets)

    def __repr__(self):
        return f"Violation({self.axiom!r}, {self.sets!r})"


def verify_matroid_axioms(S):
    """(True, None) if S is a matroid, else (False, Violation).

    Exchange failure is reported as the pair (I1, I2) with |I1| < |I2| and
    no x in I2 - I1 keeping I1 + x independent.
    """
    t = S.require_table("axiom check")
    n = S.n
    if not t.any():
        return False, Violation("nonempty", [])
    for m in np.flatnonzero(t).tolist():
        missing = [m ^ (1 << b) for b in range(n) if m >> b & 1 and not t[m ^ (1 << b)]]
        if missing:
            return False, Violation("downward-closure", [m, min(missing)])
    rt = K.rank_table(t, n)
    for I1 in np.flatnonzero(t).tolist():
        stuck = I1
        for b in range(n):
            if not I1 >> b & 1 and not t[I1 | 1 << b]:
                stuck |= 1 << b
        if rt[stuck] > _popcount(I1):
            for I2 in K.submasks(stuck).tolist():
                if t[I2] and _popcount(I2) > _popcount(I1):
                    return False, Violation("exchange", [I1, I2])
    return True, None


def same_oracle(A, B):
    """Same ground names and same independent sets."""
    if A.names != B.names:
        return False
    return bool(np.array_equal(A.require_table(), B.require_table()))


# ---------------------------------------------------------------- text format

_KEYS = {"type", "elements", "indep", "rank", "field", "rows", "edges", "vertices",
         "circuits", "classes", "n"}


def parse_matroid(text):
    """Parse the ``matroid v1`` text format into a Matroid."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != "matroid v1":
        raise ValueError("missing 'matroid v1' header")
    desc = {}
    for ln in lines[1:]:
        if ":" not in ln:
            raise ValueError(f"malformed line {ln!r}")
        key, val = (s.strip() for s in ln.split(":", 1))
        if key not in _KEYS:
            raise ValueError(f"unknown key {key!r}")
        if key == "rows":
            desc.setdefault("rows", []).append([int(x) for x in val.strip('"').split()])
        elif key in desc:
            raise ValueError(f"duplicate key {key!r}")
        elif key in ("indep", "classes"):
            sets = []
            for part in (val.split(";") if val else []):
                part = part.strip()
                if part == "-":
                    sets.append([])
                else:
                    sets.append(part.replace(",", " ").split())
            desc[key] = sets
        elif key in ("elements", "edges", "vertices"):
            desc[key] = val.split()
        elif key == "circuits":
            desc[key] = [int(x) for x in val.split()]
        else:
            desc[key] = val
    if "type" not in desc:
        raise ValueError("missing 'type' key")
    return build_matroid(desc)


def format_matroid(M):
    """Text form; constructions keep their descriptor, anything else is explicit."""
    d = getattr(M, "descriptor", None) or {"type": "explicit", "elements": list(M.names),
                         "indep": [sorted(M.subset(m), key=natural_key) for m in M.family()]}
    out = ["matroid v1", f"type: {d['type']}"]
    if "elements" in d:
        out.append("elements: " + " ".join(d["elements"]))
    for key in ("rank", "field", "n"):
        if key in d:
            out.append(f"{key}: {d[key]}")
    for row in d.get("rows", []):
        out.append("rows: " + " ".join(str(x) for x in row))
    if "vertices" in d:
        out.append("vertices: " + " ".join(d["vertices"]))
    if "edges" in d:
        out.append("edges: " + " ".join(d["edges"]))
    if "circuits" in d:
        out.append("circuits: " + " ".join(str(x) for x in d["circuits"]))
    if "classes" in d:
        out.append("classes: " + "; ".join(" ".join(c) for c in d["classes"]))
    if "indep" in d:
        out.append("indep: " + "; ".join(" ".join(s) if s else "-" for s in d["indep"]))
    return "\n".join(out) + "\n"
