"""The equivalence ∼_U on subsets of U, its GF(q) refinement, and
decomposition-width.

X ∼_U X' when no Z ⊆ E-U tells them apart, i.e. X∪Z and X'∪Z are both
independent or both dependent for every such Z.  The signature of X is the
boolean vector of those memberships, indexed by Z in increasing mask order.
"""

from . import _kernels as K
from .branchdec import EXACT_CAP, best_tree
from .gf import intersect, rref, subspace_count

CLASS_CAP = 16
DEPENDENT = "DEP"


def _lex_key(mask):
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class ClassTable:
    """Partition of the subsets of U into ∼_U classes.

    Class indices are ordered by representative, the lexicographically
    least member (sorted element ids), so the class of ∅ is always 0.
    """

    def __init__(self, U, xs, ids, count):
        reps = {}
        for x, c in zip(xs.tolist(), ids.tolist()):
            if c not in reps or _lex_key(x) < _lex_key(reps[c]):
                reps[c] = x
        order = sorted(range(count), key=lambda c: _lex_key(reps[c]))
        renum = {c: k for k, c in enumerate(order)}
        self.U = U
        self.representatives = [reps[c] for c in order]
        self._class = {x: renum[c] for x, c in zip(xs.tolist(), ids.tolist())}

    @property
    def count(self):
        return len(self.representatives)

    def class_of(self, X):
        return self._class[X]

    def members(self, c):
        return sorted((x for x, k in self._class.items() if k == c), key=_lex_key)

    def to_tsv(self, S):
        lines = ["subset\tclass"]
        for x in sorted(self._class, key=_lex_key):
            lines.append(f"{S.fmt(x)}\t{self._class[x]}")
        return "\n".join(lines) + "\n"


def classes(S, U, cap=CLASS_CAP):
    U = S.mask(U)
    if S.n > cap:
        raise ValueError(f"class computation is capped at |E| <= {cap}")
    xs, ids, k = K.signature_ids(S.require_table(), S.n, U)
    return ClassTable(U, xs, ids, k)


def class_count(S, U, cap=CLASS_CAP):
    return classes(S, U, cap).count


def all_class_counts(S, cap=CLASS_CAP):
    """Array of #classes(∼_U) indexed by the mask U."""
    if S.n > cap:
        raise ValueError(f"class computation is capped at |E| <= {cap}")
    return K.class_counts(S.require_table(), S.n)


def signature(S, U, X):
    """Tuple of bits: is X∪Z independent, for Z ⊆ E-U in increasing mask order."""
    U, X = S.mask(U), S.mask(X)
    if X & ~U:
        raise ValueError("X must be a subset of U")
    zs = K.submasks(S.full & ~U)
    return tuple(bool(b) for b in S.require_table()[X | zs])


# ---------------------------------------------------------------- GF(q)

def gfq_refinement(L, U):
    """Label every X ⊆ U by DEPENDENT or the RREF basis of span(X) ∩ span(E-U).

    For independent X this equals span(X) ∩ W with W = span(U) ∩ span(E-U).
    Returns a dict mask -> label.
    """
    n = L.ncols
    full = (1 << n) - 1
    U = int(U)
    if U & ~full:
        raise ValueError("U is not a subset of the ground set")
    F = L.F
    Vb = list(rref(F, L.vectors(full & ~U))[0])
    out = {}
    for X in K.submasks(U).tolist():
        vecs = L.vectors(X)
        if len(rref(F, vecs)[0]) < len(vecs):
            out[X] = DEPENDENT
        else:
            out[X] = intersect(F, vecs, Vb)
    return out


def gfq_label_bound(q, lam):
    return 1 + subspace_count(lam, q)


# ---------------------------------------------------------------- oracles

class BruteForceOracle:
    """Labels are ∼_U class indices from exhaustive signatures."""

    kind = "brute"

    def __init__(self, S):
        self.S = S
        self._tables = {}

    def table(self, U):
        if U not in self._tables:
            self._tables[U] = classes(self.S, U)
        return self._tables[U]

    def label(self, U, X):
        return self.table(U).class_of(X)


class GFqOracle:
    """Labels from the trace subspace of a GF(q) representation."""

    kind = "gfq"

    def __init__(self, M):
        if M.linear is None:
            raise ValueError("matroid has no linear representation")
        self.L = M.linear
        self._labels = {}

    def label(self, U, X):
        if U not in self._labels:
            self._labels[U] = gfq_refinement(self.L, U)
        return self._labels[U][X]


class CallableOracle:
    """Wrap a user function (U, X) -> hashable label."""

    kind = "user"

    def __init__(self, fn):
        self.fn = fn

    def label(self, U, X):
        return self.fn(U, X)


def default_oracle(M):
    return GFqOracle(M) if getattr(M, "linear", None) is not None else BruteForceOracle(M)


# ---------------------------------------------------------------- width

def dw_of_decomposition(S, D):
    """Max number of classes over sets displayed by D (both sides of each edge)."""
    if not D.edges:
        return 1
    best = 0
    for U in D.displayed():
        best = max(best, class_count(S, U), class_count(S, S.full & ~U))
    return best


def dw_exact(S, cap=EXACT_CAP, with_witness=False):
    """Exact decomposition-width by exhaustive search over trees (|E| <= cap)."""
    if S.n > cap:
        raise ValueError(f"dw_exact is capped at |E| <= {cap}")
    val, D = best_tree(S.n, all_class_counts(S) if S.n > 1 else None)
    return (val, D) if with_witness else val
