"""Hypothesis strategies for small matroids and set-systems."""

from hypothesis import strategies as st

from mmso import matroid as MT


@st.composite
def linear_matroids(draw, max_n=6, fields=(2, 3)):
    q = draw(st.sampled_from(fields))
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, 3))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n),
                         min_size=r, max_size=r))
    return MT.linear(q, rows)


@st.composite
def set_systems(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    names = [f"e{i}" for i in range(n)]
    masks = draw(st.sets(st.integers(0, (1 << n) - 1), min_size=1))
    return MT.set_system(names, [[names[i] for i in range(n) if m >> i & 1] for m in masks])
