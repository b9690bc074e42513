"""Named small matroids used by the tests, the self-test and ``mmso corpus``."""

from functools import lru_cache

from . import matroid as MT

FANO_ROWS = [[1, 0, 0, 1, 1, 0, 1],
             [0, 1, 0, 1, 0, 1, 1],
             [0, 0, 1, 0, 1, 1, 1]]


def _relabel(M, names):
    return MT.relabel(M, dict(zip(M.names, names)))


def _triangle(names):
    return MT.uniform(2, names)


def _k4():
    return MT.graphic([("1", "2"), ("1", "3"), ("1", "4"), ("2", "3"), ("2", "4"), ("3", "4")],
                      ["a", "b", "c", "d", "e", "f"])


def _free(n):
    return MT.uniform(n, n)


_BUILDERS = {
    # uniform
    "U12": lambda: MT.uniform(1, 2),
    "U13": lambda: MT.uniform(1, 3),
    "U23": lambda: MT.uniform(2, 3),
    "U24": lambda: MT.uniform(2, 4),
    "U25": lambda: MT.uniform(2, 5),
    "U35": lambda: MT.uniform(3, 5),
    "U36": lambda: MT.uniform(3, 6),
    "U26": lambda: MT.uniform(2, 6),
    # graphic
    "K4": _k4,
    "C4": lambda: MT.graphic([("1", "2"), ("2", "3"), ("3", "4"), ("4", "1")]),
    "theta": lambda: MT.graphic([("1", "2"), ("1", "2"), ("1", "3"), ("3", "2"), ("2", "4"),
                                 ("4", "1")]),
    # m(G), m+(G)
    "m-P3": lambda: MT.m_graph([("u", "v"), ("v", "w")], ["x", "y"]),
    "m-K3": lambda: MT.m_graph([("u", "v"), ("v", "w"), ("w", "u")], ["x", "y", "z"]),
    "m-K13": lambda: MT.m_graph([("o", "u"), ("o", "v"), ("o", "w")], ["x", "y", "z"]),
    "mplus-P2": lambda: MT.m_plus([("u", "v")], ["x"]),
    "mplus-P3": lambda: MT.m_plus([("u", "v"), ("v", "w")], ["x", "y"]),
    "mplus-K3": lambda: MT.m_plus([("u", "v"), ("v", "w"), ("w", "u")], ["x", "y", "z"]),
    # rank 2 with parallel pairs
    "U23plus": lambda: MT.u2n_plus(3),
    "U24plus": lambda: MT.u2n_plus(4),
    # sparse paving families
    "polygon3": lambda: MT.polygon(3),
    "polygon4": lambda: MT.polygon(4),
    "path7": lambda: MT.path_matroid(7, [1, 4]),
    "path8": lambda: MT.path_matroid(8, [1, 3, 6]),
    # linear
    "fano": lambda: MT.linear(2, FANO_ROWS),
    "fano-dual": lambda: MT.dual(MT.linear(2, FANO_ROWS)),
    "gf2-r3": lambda: MT.linear(2, [[1, 0, 0, 1, 1], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1]]),
    "gf3-U24": lambda: MT.linear(3, [[1, 0, 1, 1], [0, 1, 1, 2]]),
    "gf3-r3": lambda: MT.linear(3, [[1, 0, 0, 1, 1, 1], [0, 1, 0, 1, 2, 0], [0, 0, 1, 0, 1, 2]]),
    # 2-sums (connected, not 3-connected)
    "2sum-triangles": lambda: MT.two_sum(_triangle(["a", "b", "p"]), _triangle(["c", "d", "p"]), "p"),
    "2sum-U24-triangle": lambda: MT.two_sum(MT.uniform(2, ["a", "b", "c", "p"]),
                                            _triangle(["d", "e", "p"]), "p"),
    "2sum-K4-triangle": lambda: MT.two_sum(_relabel(_k4(), ["a", "b", "c", "d", "e", "p"]),
                                           _triangle(["g", "h", "p"]), "p"),
    "2sum-chain": lambda: MT.two_sum(
        MT.two_sum(_triangle(["a", "b", "p"]), MT.uniform(2, ["c", "p", "q", "d"]), "p"),
        _triangle(["e", "f", "q"]), "q"),
    # disconnected
    "coloop+loop": lambda: MT.direct_sum(MT.uniform(1, ["a"]), MT.uniform(0, ["b"])),
    "free3": lambda: _free(3),
    "U12+U12": lambda: MT.direct_sum(MT.uniform(1, ["a", "b"]), MT.uniform(1, ["c", "d"])),
    "U23+coloop": lambda: MT.direct_sum(MT.uniform(2, ["a", "b", "c"]), MT.uniform(1, ["d"])),
    "triangles+loop": lambda: MT.direct_sum(
        MT.two_sum(_triangle(["a", "b", "p"]), _triangle(["c", "d", "p"]), "p"),
        MT.uniform(0, ["z"])),
}

TAGS = {
    "2sum": ["2sum-triangles", "2sum-U24-triangle", "2sum-K4-triangle", "2sum-chain", "C4",
             "theta"],
    "disconnected": ["coloop+loop", "free3", "U12+U12", "U23+coloop", "triangles+loop"],
    "linear": ["fano", "fano-dual", "gf2-r3", "gf3-U24", "gf3-r3"],
}


def names():
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def get(name):
    if name not in _BUILDERS:
        raise KeyError(f"unknown corpus matroid {name!r}")
    M = _BUILDERS[name]()
    M.corpus_name = name
    return M


def items(max_n=None):
    for name in _BUILDERS:
        M = get(name)
        if max_n is None or M.n <= max_n:
            yield name, M


def tagged(tag):
    return [(name, get(name)) for name in TAGS[tag]]
