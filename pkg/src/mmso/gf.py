"""Finite fields GF(q) for prime powers q, and small dense linear algebra.

Field elements are the integers 0..q-1.  For q = p**k with k > 1 an element
is the polynomial whose base-p digits are its coefficients, reduced modulo
the lexicographically first monic irreducible polynomial of degree k.
"""

from functools import lru_cache
from itertools import product


def prime_power(q):
    """Return (p, k) with q = p**k, or raise ValueError."""
    if q < 2:
        raise ValueError(f"field order {q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise ValueError(f"field order {q} is not a prime power")
    return p, k


def _poly_mulmod(a, b, mod, p):
    # coefficient lists, lowest degree first; mod is monic
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    k = len(mod) - 1
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for j in range(k + 1):
                out[d - k + j] = (out[d - k + j] - c * mod[j]) % p
    return out[:k] + [0] * (k - len(out[:k]))


def _irreducible(p, k):
    for tail in product(range(p), repeat=k):
        mod = list(tail) + [1]
        if mod[0] == 0:
            continue
        # no roots is enough for k <= 3; otherwise test all monic factors
        ok = True
        for d in range(1, k // 2 + 1):
            for ftail in product(range(p), repeat=d):
                f = list(ftail) + [1]
                if _divides(f, mod, p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return mod
    raise AssertionError("no irreducible polynomial found")


def _divides(f, g, p):
    g = list(g)
    df = len(f) - 1
    inv = pow(f[-1], p - 2, p)
    for d in range(len(g) - 1, df - 1, -1):
        c = g[d] * inv % p
        if c:
            for j in range(df + 1):
                g[d - df + j] = (g[d - df + j] - c * f[j]) % p
    return not any(g[:df])


class GF:
    """Arithmetic tables for GF(q)."""

    def __init__(self, q):
        self.p, self.k = prime_power(q)
        self.q = q
        p, k = self.p, self.k
        if k == 1:
            self.add = [[(a + b) % p for b in range(q)] for a in range(q)]
            self.mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            mod = _irreducible(p, k)
            digits = [self._digits(a) for a in range(q)]
            self.add = [[self._num([(x + y) % p for x, y in zip(digits[a], digits[b])])
                         for b in range(q)] for a in range(q)]
            self.mul = [[self._num(_poly_mulmod(digits[a], digits[b], mod, p))
                         for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [None] + [next(b for b in range(q) if self.mul[a][b] == 1)
                             for a in range(1, q)]

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _num(self, digits):
        return sum(d * self.p ** i for i, d in enumerate(digits))

    def sub(self, a, b):
        return self.add[a][self.neg[b]]

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q):
    return GF(q)


def rref(F, rows):
    """Reduced row-echelon form of a list of rows; returns (rows, pivots).

    Zero rows are dropped, so len(rows) is the rank.
    """
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv[m[r][c]]
        m[r] = [F.mul[inv][x] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub(x, F.mul[f][y]) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(F, rows):
    return len(rref(F, rows)[0]) if rows else 0


def left_nullspace(F, rows):
    """Basis of {x : sum_i x_i rows_i = 0}."""
    k = len(rows)
    if k == 0:
        return []
    ncols = len(rows[0])
    # augment with identity and reduce; rows whose left part vanish give the kernel
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(k)] for i in range(k)]
    red, piv = rref(F, aug)
    return [row[ncols:] for row, c in zip(red, piv) if c >= ncols]


def intersect(F, a, b):
    """RREF basis of span(a) ∩ span(b); a, b are lists of vectors."""
    if not a or not b:
        return ()
    ker = left_nullspace(F, list(a) + list(b))
    vecs = []
    dim = len(a[0])
    for coeff in ker:
        v = [0] * dim
        for c, row in zip(coeff[:len(a)], a):
            if c:
                v = [F.add[x][F.mul[c][y]] for x, y in zip(v, row)]
        vecs.append(v)
    if not vecs:
        return ()
    return tuple(rref(F, vecs)[0])


def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def subspace_count(n, q):
    """Number of subspaces of GF(q)^n, all dimensions."""
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))
