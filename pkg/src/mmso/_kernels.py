"""Bitset kernels behind the rank, signature and width computations.

Every kernel has two implementations: a numba ``@njit`` loop version and a
vectorised numpy version.  The numba path is used when numba imports and the
environment variable ``MMSO_NO_NUMBA`` is unset (or ``0``); setting
``MMSO_NO_NUMBA=1`` forces the numpy path.  Both paths return identical
results, which the test-suite checks.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None


def numba_enabled():
    flag = os.environ.get("MMSO_NO_NUMBA", "").strip().lower()
    return HAVE_NUMBA and flag in ("", "0", "false", "no")


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


# ---------------------------------------------------------------- helpers

def popcounts(n):
    """Popcount of every mask below 2**n as int64."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def submasks(mask):
    """All submasks of ``mask`` in increasing numeric order."""
    out = np.zeros(1, dtype=np.int64)
    b = 0
    mask = int(mask)
    while mask >> b:
        if (mask >> b) & 1:
            out = np.concatenate([out, out | (1 << b)])
        b += 1
    return out


def deposit(positions):
    """Scatter map: entry i is the mask whose bit positions[k] is bit k of i."""
    out = np.zeros(1, dtype=np.int64)
    for p in positions:
        out = np.concatenate([out, out | (1 << int(p))])
    return out


# ---------------------------------------------------------------- rank table

@_njit
def _rank_table_nb(indep, n):
    size = 1 << n
    r = np.zeros(size, dtype=np.int8)
    for m in range(size):
        if indep[m]:
            c = 0
            x = m
            while x:
                x &= x - 1
                c += 1
            r[m] = c
        else:
            best = 0
            for b in range(n):
                if (m >> b) & 1:
                    v = r[m ^ (1 << b)]
                    if v > best:
                        best = v
            r[m] = best
    return r


def _rank_table_np(indep, n):
    # superset-max closure of |X|·[X independent]
    r = np.where(indep, popcounts(n), 0).astype(np.int8)
    idx = np.arange(1 << n, dtype=np.int64)
    for b in range(n):
        lo = idx[(idx >> b) & 1 == 0]
        hi = lo | (1 << b)
        r[hi] = np.maximum(r[hi], r[lo])
    return r


def rank_table(indep, n):
    """r[X] = size of a largest independent subset of X, for all X."""
    indep = np.ascontiguousarray(indep, dtype=np.bool_)
    if n == 0:
        return np.zeros(1, dtype=np.int8)
    if numba_enabled():
        return _rank_table_nb(indep, n)
    return _rank_table_np(indep, n)


# ---------------------------------------------------------------- signatures

@_njit
def _signature_ids_nb(indep, xs, zs):
    nx = xs.shape[0]
    nz = zs.shape[0]
    ids = np.empty(nx, dtype=np.int64)
    reps = np.empty(nx, dtype=np.int64)
    rep_hash = np.empty(nx, dtype=np.uint64)
    k = 0
    for i in range(nx):
        h = np.uint64(1469598103934665603)
        x = xs[i]
        for j in range(nz):
            bit = np.uint64(1) if indep[x | zs[j]] else np.uint64(0)
            h = (h ^ (bit + np.uint64(j) * np.uint64(2))) * np.uint64(1099511628211)
        found = -1
        for c in range(k):
            if rep_hash[c] != h:
                continue
            y = xs[reps[c]]
            same = True
            for j in range(nz):
                if indep[x | zs[j]] != indep[y | zs[j]]:
                    same = False
                    break
            if same:
                found = c
                break
        if found < 0:
            reps[k] = i
            rep_hash[k] = h
            found = k
            k += 1
        ids[i] = found
    return ids, k


def _signature_ids_np(indep, xs, zs):
    sig = indep[xs[:, None] | zs[None, :]]
    packed = np.packbits(sig, axis=1)
    _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    # renumber classes by first occurrence
    order = np.argsort(first, kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(order.size)
    return remap[inverse].astype(np.int64), int(order.size)


def signature_ids(indep, n, umask):
    """Class index of every X ⊆ U (xs in increasing mask order) under ∼_U.

    Returns (xs, ids, count); class indices follow first occurrence in xs.
    """
    full = (1 << n) - 1
    xs = submasks(umask)
    zs = submasks(full & ~int(umask))
    indep = np.ascontiguousarray(indep, dtype=np.bool_)
    if numba_enabled():
        ids, k = _signature_ids_nb(indep, xs, zs)
        return xs, ids, int(k)
    ids, k = _signature_ids_np(indep, xs, zs)
    return xs, ids, k


@_njit
def _class_counts_nb(indep, n):
    size = 1 << n
    full = size - 1
    out = np.zeros(size, dtype=np.int64)
    for u in range(size):
        v = full & ~u
        # enumerate submasks of u and v in increasing order
        nu = 0
        s = u
        while True:
            nu += 1
            if s == 0:
                break
            s = (s - 1) & u
        xs = np.empty(nu, dtype=np.int64)
        s = u
        i = nu - 1
        while True:
            xs[i] = s
            i -= 1
            if s == 0:
                break
            s = (s - 1) & u
        nv = 0
        s = v
        while True:
            nv += 1
            if s == 0:
                break
            s = (s - 1) & v
        zs = np.empty(nv, dtype=np.int64)
        s = v
        i = nv - 1
        while True:
            zs[i] = s
            i -= 1
            if s == 0:
                break
            s = (s - 1) & v
        _, k = _signature_ids_nb(indep, xs, zs)
        out[u] = k
    return out


def _class_counts_np(indep, n):
    size = 1 << n
    full = size - 1
    out = np.zeros(size, dtype=np.int64)
    for u in range(size):
        xs = submasks(u)
        zs = submasks(full & ~u)
        _, k = _signature_ids_np(indep, xs, zs)
        out[u] = k
    return out


def class_counts(indep, n):
    """Number of ∼_U classes for every U ⊆ E, indexed by mask."""
    indep = np.ascontiguousarray(indep, dtype=np.bool_)
    if numba_enabled():
        return _class_counts_nb(indep, n)
    return _class_counts_np(indep, n)


# ---------------------------------------------------------------- tree widths

@_njit
def _tree_minmax_nb(splits, cost, full):
    best = -1
    best_i = -1
    for t in range(splits.shape[0]):
        worst = 0
        for j in range(splits.shape[1]):
            s = splits[t, j]
            c = cost[s]
            d = cost[full ^ s]
            if d > c:
                c = d
            if c > worst:
                worst = c
            if best >= 0 and worst >= best:
                break
        if best < 0 or worst < best:
            best = worst
            best_i = t
    return best, best_i


def _tree_minmax_np(splits, cost, full):
    vals = np.maximum(cost[splits], cost[full ^ splits]).max(axis=1)
    i = int(np.argmin(vals))
    return int(vals[i]), i


def tree_minmax(splits, cost, full):
    """min over trees (rows of ``splits``) of the max edge cost; ties -> first row."""
    splits = np.ascontiguousarray(splits, dtype=np.int64)
    cost = np.ascontiguousarray(cost, dtype=np.int64)
    if numba_enabled():
        b, i = _tree_minmax_nb(splits, cost, int(full))
        return int(b), int(i)
    return _tree_minmax_np(splits, cost, full)
