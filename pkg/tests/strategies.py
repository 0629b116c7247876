"""Shared hypothesis strategies."""

from math import prod

from hypothesis import assume
from hypothesis import strategies as st

from k3mirror import exact
from k3mirror.forms import parse_form
from k3mirror.lattice import Lattice

NAMED = [
    "U", "U(2)", "U(3)", "A1", "A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8",
    "<2>", "<-4>", "<6>", "<-8>", "T(2,3,7)", "T(3,4,4)", "T(2,5,6)", "H5", "H13", "L9", "M9",
    "A2(2)", "A1(-1)",
]

BLOCKS = [
    "w(2,1,1)", "w(2,1,-1)", "w(2,2,1)", "w(2,2,3)", "w(2,2,5)", "w(2,3,1)", "w(2,1,3)",
    "w(3,1,1)", "w(3,1,-1)", "w(3,2,1)", "w(3,2,-1)", "w(5,1,1)", "w(5,1,-1)", "w(7,1,1)",
    "u", "v", "u(2)", "v(2)",
]


@st.composite
def even_grams(draw, max_rank=4, entry=3, max_det=None):
    n = draw(st.integers(1, max_rank))
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2 * draw(st.integers(-entry, entry))
        for j in range(i + 1, n):
            g[i][j] = g[j][i] = draw(st.integers(-entry, entry))
    d = exact.determinant(g)
    assume(d != 0)
    if max_det is not None:
        assume(abs(d) <= max_det)
    return g


def lattices(**kw):
    return even_grams(**kw).map(Lattice)


@st.composite
def int_matrices(draw, max_rows=4, max_cols=4, entry=9):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(st.integers(-entry, entry)) for _ in range(n)] for _ in range(m)]


@st.composite
def unimodular(draw, n, steps=6):
    M = exact.identity(n)
    for _ in range(draw(st.integers(0, steps))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i == j:
            M[i] = [-x for x in M[i]]
        else:
            f = draw(st.integers(-3, 3))
            M[i] = [a + f * b for a, b in zip(M[i], M[j])]
    return M


def _block_order(text):
    return parse_form(text).form().order


def block_sums(max_order=512, max_size=4):
    return st.lists(st.sampled_from(BLOCKS), min_size=1, max_size=max_size).filter(
        lambda bs: prod(_block_order(b) for b in bs) <= max_order
    )
