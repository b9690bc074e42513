"""Branch decompositions: width, exhaustive minimum, matroid intersection and
an approximation that refines a partial decomposition block by block.
"""

from collections import deque
from functools import lru_cache

import numpy as np

from . import _kernels as K
from .matroid import minor

EXACT_CAP = 8


class BranchWidthExceeded(ValueError):
    pass


def _pc(x):
    return bin(x).count("1")


class Decomposition:
    """Unrooted subcubic tree whose leaves are in bijection with the ground set.

    Vertices are 0..V-1; ``leaf_of[i]`` is the leaf vertex of element i.
    """

    def __init__(self, n_vertices, edges, leaf_of):
        self.n_vertices = n_vertices
        self.edges = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        self.leaf_of = tuple(leaf_of)
        self.adj = {v: [] for v in range(n_vertices)}
        for a, b in self.edges:
            self.adj[a].append(b)
            self.adj[b].append(a)
        for v in self.adj:
            self.adj[v].sort()
        self.element_at = {v: i for i, v in enumerate(self.leaf_of)}
        self.validate()

    @property
    def n(self):
        return len(self.leaf_of)

    def validate(self):
        n, V = self.n, self.n_vertices
        if len(set(self.leaf_of)) != n:
            raise ValueError("leaf map is not injective")
        if n <= 1:
            if V != max(n, 1) or self.edges:
                raise ValueError("a decomposition of at most one element is one vertex")
            return
        if len(self.edges) != V - 1 or len(set(self.edges)) != len(self.edges):
            raise ValueError("malformed tree: wrong edge count")
        seen, todo = {0}, [0]
        while todo:
            v = todo.pop()
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != V:
            raise ValueError("malformed tree: disconnected")
        for v in range(V):
            d = len(self.adj[v])
            if d not in (1, 3) and not (n == 2 and d == 1):
                raise ValueError(f"vertex {v} has degree {d}")
            if (d == 1) != (v in self.element_at):
                raise ValueError("leaves and elements are not in bijection")

    def side(self, a, b):
        """Mask of elements on b's side of the edge {a, b}."""
        m, todo, seen = 0, [b], {a, b}
        while todo:
            v = todo.pop()
            if v in self.element_at:
                m |= 1 << self.element_at[v]
            for w in self.adj[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return m

    def displayed(self):
        """One side mask per edge, in edge order."""
        return [self.side(a, b) for a, b in self.edges]

    def __eq__(self, other):
        return (isinstance(other, Decomposition) and self.edges == other.edges
                and self.leaf_of == other.leaf_of)

    def __hash__(self):
        return hash((self.edges, self.leaf_of))

    def __repr__(self):
        return f"Decomposition(n={self.n}, edges={len(self.edges)})"


def trivial_decomposition(n):
    if n > 1:
        raise ValueError("trivial decomposition only for |E| <= 1")
    return Decomposition(1, [], [0] if n == 1 else [])


def caterpillar(n, order=None):
    """Path-like decomposition with leaves attached in ``order``."""
    order = list(range(n)) if order is None else list(order)
    if n <= 1:
        return trivial_decomposition(n)
    if n == 2:
        return Decomposition(2, [(0, 1)], order)
    # spine vertices n..2n-3, leaf vertex i holds order[i]
    spine = list(range(n, 2 * n - 2))
    edges = [(0, spine[0]), (1, spine[0])]
    for k in range(2, n - 1):
        edges.append((spine[k - 2], spine[k - 1]))
        edges.append((k, spine[k - 1]))
    edges.append((n - 1, spine[-1]))
    leaf_of = [0] * n
    for v, x in enumerate(order):
        leaf_of[x] = v
    return Decomposition(2 * n - 2, edges, leaf_of)


# ---------------------------------------------------------------- enumeration

@lru_cache(maxsize=None)
def all_trees(n):
    """Every leaf-labelled subcubic tree on leaves 0..n-1.

    Trees are grown by inserting leaf k into each edge of every tree on
    leaves 0..k-1, which produces each labelled tree exactly once
    ((2n-5)!! of them).  Returns (edge lists, split array).
    """
    if n < 2:
        raise ValueError("need n >= 2")
    trees = [([(0, 1)], [1 << 1])]
    for k in range(2, n):
        w = n + k - 2
        bit = 1 << k
        grown = []
        for edges, sides in trees:
            old_full = (1 << k) - 1
            for i, ((x, y), s) in enumerate(zip(edges, sides)):
                new_edges, new_sides = [], []
                for j, ((a, b), t) in enumerate(zip(edges, sides)):
                    if j == i:
                        continue
                    inside = (s & ~t) == 0 or ((old_full ^ s) & ~t) == 0
                    new_edges.append((a, b))
                    new_sides.append(t | bit if inside else t)
                new_edges += [(x, w), (w, y), (w, k)]
                new_sides += [s | bit, s, bit]
                grown.append((new_edges, new_sides))
        trees = grown
    splits = np.array([s for _, s in trees], dtype=np.int64)
    return [e for e, _ in trees], splits


def tree_count(n):
    count = 1
    for k in range(3, 2 * n - 4, 2):
        count *= k
    return count


def _decomposition_from_edges(n, edges):
    return Decomposition(2 * n - 2, edges, list(range(n)))


# ---------------------------------------------------------------- widths

def width(M, D):
    """max over edges of λ(U_e)+1; 1 for a decomposition without edges."""
    if D.n != M.n:
        raise ValueError("decomposition and matroid have different ground sets")
    if not D.edges:
        return 1
    return max(M.connectivity(U) + 1 for U in D.displayed())


def connectivity_table(M):
    rt = M.rank_table.astype(np.int64)
    idx = np.arange(1 << M.n, dtype=np.int64)
    return rt + rt[M.full ^ idx] - M.r


def best_tree(n, cost):
    """(value, Decomposition) minimising the max of cost over displayed sets."""
    if n <= 1:
        return 1, trivial_decomposition(n)
    edges, splits = all_trees(n)
    val, i = K.tree_minmax(splits, cost, (1 << n) - 1)
    return val, _decomposition_from_edges(n, edges[i])


def bw_exact(M, cap=EXACT_CAP):
    """Exact branch-width with a witness decomposition (|E| <= cap)."""
    if M.n > cap:
        raise ValueError(f"bw_exact is capped at |E| <= {cap}")
    if M.n <= 1:
        return 1, trivial_decomposition(M.n)
    return best_tree(M.n, connectivity_table(M) + 1)


# ---------------------------------------------------------------- intersection

def _exchange_search(M1, M2, I):
    """BFS in the exchange graph; returns (path or None, reached set)."""
    n = M1.n
    outside = [x for x in range(n) if not I >> x & 1]
    inside = [y for y in range(n) if I >> y & 1]
    sources = [x for x in outside if M1.is_indep(I | 1 << x)]
    sinks = {x for x in outside if M2.is_indep(I | 1 << x)}
    prev = {x: None for x in sources}
    queue = deque(sources)
    while queue:
        v = queue.popleft()
        if v in sinks:
            path = []
            while v is not None:
                path.append(v)
                v = prev[v]
            return path[::-1], set(prev)
        if I >> v & 1:
            # y in I: arcs y -> x when I - y + x independent in M1
            for x in outside:
                if x not in prev and M1.is_indep((I & ~(1 << v)) | 1 << x):
                    prev[x] = v
                    queue.append(x)
        else:
            # x outside I: arcs x -> y when I - y + x independent in M2
            for y in inside:
                if y not in prev and M2.is_indep((I & ~(1 << y)) | 1 << v):
                    prev[y] = v
                    queue.append(y)
    return None, set(prev)


def _intersection(M1, M2):
    if M1.names != M2.names:
        raise ValueError("matroids must share a ground set")
    I = 0
    while True:
        path, reached = _exchange_search(M1, M2, I)
        if path is None:
            return I, reached
        for v in path:
            I ^= 1 << v


def matroid_intersection_max(M1, M2):
    """Maximum-cardinality common independent set (mask) by augmenting paths."""
    return _intersection(M1, M2)[0]


def lambda_minimize(M, D1, D2):
    """Z with D1 ⊆ Z ⊆ E-D2 minimising λ(Z), from the final intersection cut."""
    D1, D2 = M.mask(D1), M.mask(D2)
    if D1 & D2:
        raise ValueError("D1 and D2 must be disjoint")
    rest = [i for i in range(M.n) if not (D1 | D2) >> i & 1]
    if not rest:
        return D1
    A = minor(M, D1, D2)
    B = minor(M, D2, D1)
    _, reached = _intersection(A, B)
    Z = D1
    for k, i in enumerate(rest):
        if k not in reached:
            Z |= 1 << i
    return Z


# ---------------------------------------------------------------- approximation

def _aux_rank(M, B, U, V):
    bu = B & U

    def rB(X):
        return (M.rank(X | bu) + M.rank(V | (B & ~X)) - _pc(B & ~X) - _pc(bu))
    return rB


def aux_matroid_rank(M, U):
    """Normalised rank function of the auxiliary matroid on U (greedy basis B)."""
    U = M.mask(U)
    return _aux_rank(M, M.basis(), U, M.full & ~U)


def approx_branch_decomposition(M, lam):
    """Branch decomposition of width <= 3*lam+1, assuming bw(M) <= lam.

    Raises BranchWidthExceeded when the refinement certifies bw(M) > lam.
    """
    n = M.n
    if lam < 1:
        raise BranchWidthExceeded("branch-width exceeds λ (every matroid has width >= 1)")
    if n <= 1:
        return trivial_decomposition(n)
    cap = 3 * lam + 1
    adj = {0: set()}
    block = {0: M.full}
    nxt = 1

    def new_vertex():
        nonlocal nxt
        nxt += 1
        adj[nxt - 1] = set()
        return nxt - 1

    def split_leaf(l, A, C):
        # l keeps nothing; its block is carried by two new leaves
        if not adj[l]:
            a = new_vertex()
            adj[l].add(a)
            adj[a].add(l)
            block[l], block[a] = A, C
            return
        (p,) = adj[l]
        w = new_vertex()
        a = new_vertex()
        adj[l].discard(p)
        adj[p].discard(l)
        for x, y in ((p, w), (w, l), (w, a)):
            adj[x].add(y)
            adj[y].add(x)
        block[l], block[a] = A, C

    while True:
        todo = [v for v in sorted(block) if _pc(block[v]) > 1]
        if not todo:
            break
        l = todo[0]
        U = block[l]
        V = M.full & ~U
        w_e = M.connectivity(U) + 1 if adj[l] else 1
        if w_e < cap:
            u = U & -U
            split_leaf(l, U & ~u, u)
            continue
        B = M.basis()
        rB = _aux_rank(M, B, U, V)
        D = 0
        for i in M.ids(U):
            if rB(D | 1 << i) > rB(D):
                D |= 1 << i
        done = False
        for D1 in K.submasks(D).tolist():
            D2 = D & ~D1
            Z = lambda_minimize(M, D1, D2)
            if M.connectivity(Z) + 1 < min(_pc(D1), _pc(D2)):
                A, C = U & Z, U & ~Z
                if (M.connectivity(A) + 1 > cap or M.connectivity(C) + 1 > cap
                        or not A or not C):
                    raise AssertionError("refinement produced an over-wide block")
                split_leaf(l, A, C)
                done = True
                break
        if not done:
            raise BranchWidthExceeded(f"branch-width exceeds λ={lam}")
    # renumber so that leaf vertices are elements
    leaf_of = [0] * n
    for v, m in block.items():
        leaf_of[m.bit_length() - 1] = v
    edges = {(min(a, b), max(a, b)) for a in adj for b in adj[a]}
    return Decomposition(len(adj), edges, leaf_of)


def find_decomposition(M):
    """A good decomposition: exact below the cap, else the smallest λ that succeeds."""
    if M.n <= EXACT_CAP:
        return bw_exact(M)[1]
    lam = 1
    while True:
        try:
            return approx_branch_decomposition(M, lam)
        except BranchWidthExceeded:
            lam += 1


# ---------------------------------------------------------------- text form

def to_newick(D, names):
    """Canonical nested-parenthesis text; leaves are element names."""
    n = D.n
    if n == 0:
        return "()"
    if n == 1:
        return names[0]
    def rec(v, parent):
        if v in D.element_at:
            i = D.element_at[v]
            return i, names[i]
        parts = sorted(rec(w, v) for w in D.adj[v] if w != parent)
        return parts[0][0], "(" + ",".join(p for _, p in parts) + ")"
    if n == 2:
        return "(" + names[0] + "," + names[1] + ")"
    leaf = D.leaf_of[0]
    (hub,) = D.adj[leaf]
    parts = sorted(rec(w, hub) for w in D.adj[hub])
    return "(" + ",".join(p for _, p in parts) + ")"


def parse_newick(text, names):
    """Inverse of to_newick (also accepts any nesting with 2 or 3 children)."""
    text = "".join(text.split())
    index = {x: i for i, x in enumerate(names)}
    pos = 0

    def parse_node():
        nonlocal pos
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids = [parse_node()]
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(parse_node())
            if pos >= len(text) or text[pos] != ")":
                raise ValueError(f"expected ')' at offset {pos}")
            pos += 1
            return kids
        start = pos
        while pos < len(text) and text[pos] not in "(),":
            pos += 1
        tok = text[start:pos]
        if tok not in index:
            raise ValueError(f"unknown leaf {tok!r} at offset {start}")
        return tok

    tree = parse_node()
    if pos != len(text):
        raise ValueError(f"trailing text at offset {pos}")
    n = len(names)
    edges, leaf_of, count = [], {}, [0]

    def build(node):
        v = count[0]
        count[0] += 1
        if isinstance(node, str):
            if node in leaf_of:
                raise ValueError(f"leaf {node!r} repeated")
            leaf_of[node] = v
            return v
        for kid in node:
            edges.append((v, build(kid)))
        return v
    if isinstance(tree, str):
        build(tree)
    elif len(tree) == 2 and n >= 3:
        # degree-2 top: join the two sides directly
        a, b = build(tree[0]), build(tree[1])
        edges.append((a, b))
    elif len(tree) == 2 and n == 2:
        a, b = build(tree[0]), build(tree[1])
        edges.append((a, b))
    else:
        build(tree)
    if set(leaf_of) != set(names):
        raise ValueError("leaves do not match the ground set")
    return Decomposition(count[0], edges, [leaf_of[x] for x in names])


def grouped_decomposition(names, groups):
    """Each group (of two elements) is a cherry; cherries hang off a path."""
    cherries = ["(" + ",".join(g) + ")" if len(g) > 1 else g[0] for g in groups]
    if len(cherries) == 1:
        text = cherries[0]
    elif len(cherries) == 2:
        text = "(" + ",".join(cherries) + ")"
    else:
        comb = cherries[0]
        for c in cherries[1:-2]:
            comb = "(" + comb + "," + c + ")"
        text = "(" + ",".join([comb] + cherries[-2:]) + ")"
    return parse_newick(text, names)
