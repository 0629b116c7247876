from fractions import Fraction
from functools import reduce
from math import gcd, lcm

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from k3mirror import bhk, exact
from k3mirror.verify import load_tables


def polynomial_from_matrix(A):
    """Invertible polynomial for ``A`` with weights solving ``A w = d 1``."""
    w = [sum(row) for row in exact.rational_inverse(A)]
    d = reduce(lcm, (x.denominator for x in w), 1)
    ints = [int(x * d) for x in w]
    g = reduce(gcd, ints)
    return bhk.InvertiblePolynomial(A, bhk.WeightSystem(tuple(x // g for x in ints), d // g))


def _fermat(a):
    return [[a]]


def _chain(exps):
    n = len(exps)
    return [[exps[i] if j == i else (1 if j == i + 1 else 0) for j in range(n)] for i in range(n)]


def _loop(exps):
    n = len(exps)
    return [[exps[i] if j == i else (1 if j == (i + 1) % n else 0) for j in range(n)] for i in range(n)]


@st.composite
def atomic_sums(draw, nvars=4, top=5):
    blocks = []
    left = nvars
    while left:
        size = draw(st.integers(1, left))
        exps = [draw(st.integers(2, top)) for _ in range(size)]
        kind = draw(st.sampled_from(["chain", "loop"])) if size > 1 else "fermat"
        if kind == "loop" and size == 2 and exps == [2, 2]:
            exps[0] = 3
        blocks.append({"fermat": lambda e: _fermat(e[0]), "chain": _chain, "loop": _loop}[kind](exps))
        left -= size
    A = [[0] * nvars for _ in range(nvars)]
    off = 0
    for B in blocks:
        for i, row in enumerate(B):
            for j, x in enumerate(row):
                A[off + i][off + j] = x
        off += len(B)
    return A


def all_rows():
    return [(t["m"], r) for t in load_tables()["tables"] for r in t["rows"]]


def test_parse_and_transpose_weights():
    W = bhk.parse_polynomial("x^2+y^3+z^9+yw^12", (9, 6, 2, 1), 18)
    assert W.matrix == ((2, 0, 0, 0), (0, 3, 0, 0), (0, 0, 9, 0), (0, 1, 0, 12))
    WT = bhk.transpose(W)
    assert (WT.weights.weights, WT.weights.degree) == ((18, 11, 4, 3), 36)
    assert str(WT) == "x^2+y^3w+z^9+w^12"


@pytest.mark.parametrize(
    "text,weights,degree",
    [
        ("x^2+y^3", (3, 2), 7),
        ("x^2+y^3+z", (3, 2, 1), 6),
        ("x^2+y^3+z^7+w^42", (21, 14, 6, 1), 41),
        ("x^2+x^2", (1, 1), 2),
        ("x^2+q^3", (3, 2), 6),
        ("x2+y^3", (3, 2), 6),
    ],
)
def test_parse_errors(text, weights, degree):
    with pytest.raises(bhk.BHKError):
        bhk.parse_polynomial(text, weights, degree)


def test_weight_system_validation():
    with pytest.raises(bhk.BHKError):
        bhk.WeightSystem((2, 4), 8)
    with pytest.raises(bhk.BHKError):
        bhk.WeightSystem((1, 0), 3)


def test_groups_of_fermat_quartic():
    W = bhk.parse_polynomial("x^4+y^4+z^4+w^4", (1, 1, 1, 1), 4)
    assert bhk.full_symmetry_group(W).order == 256
    assert bhk.sl_subgroup(W).order == 64
    assert bhk.j_subgroup(W).order == 4
    assert bhk.j_element(W) == (Fraction(1, 4),) * 4
    assert bhk.is_symplectic(bhk.j_element(W))
    assert not bhk.is_symplectic(bhk.sigma_element(W, "w", 4))


def test_sigma_element_indexing():
    W = bhk.parse_polynomial("x^2+y^3+z^7+w^42", (21, 14, 6, 1), 42)
    assert bhk.sigma_element(W, "w", 42) == bhk.sigma_element(W, 3, 42)


def test_subgroups_between_sorted():
    W = bhk.parse_polynomial("x^4+y^4+z^4+w^4", (1, 1, 1, 1), 4)
    subs = bhk.subgroups_between(bhk.j_subgroup(W), bhk.sl_subgroup(W))
    orders = [G.order for G in subs]
    assert orders == sorted(orders, reverse=True)
    assert orders[0] == 64 and orders[-1] == 4


def test_match_and_permute():
    a = [[2, 0], [1, 3]]
    b = [[3, 1], [0, 2]]
    p = bhk.match_permutation(a, b)
    assert p == (1, 0)
    W = bhk.parse_polynomial("x^4+y^4", (1, 1), 4)
    G = bhk.group_from_elements(W, [(Fraction(1, 4), 0)])
    assert bhk.permute_group(G, (1, 0)).elements == frozenset((0, k) for k in range(0, 16, 4))
    assert bhk.match_permutation(a, [[2, 0], [0, 3]]) is None


def test_dual_group_requires_subgroup():
    W = bhk.parse_polynomial("x^4+y^4", (1, 1), 4)
    V = bhk.parse_polynomial("x^2+y^2", (1, 1), 2)
    with pytest.raises(bhk.BHKError):
        bhk.dual_group(W, bhk.full_symmetry_group(V))


@given(atomic_sums())
def test_duality_laws_on_random_polynomials(A):
    try:
        W = polynomial_from_matrix(A)
    except bhk.BHKError:
        assume(False)
    WT = bhk.transpose(W)
    assert [sum(a * w for a, w in zip(row, W.weights.weights)) for row in W.matrix] == [W.weights.degree] * 4
    GW = bhk.full_symmetry_group(W)
    assert GW.order == W.det
    assert bhk.dual_group(W, GW, WT).order == 1
    J = bhk.j_subgroup(W)
    assert bhk.dual_group(W, J, WT).elements == bhk.sl_subgroup(WT).elements
    for G in (J, bhk.sl_subgroup(W)):
        GT = bhk.dual_group(W, G, WT)
        assert G.order * GT.order == W.det
        assert bhk.dual_group(WT, GT, W).elements == G.elements


@pytest.mark.parametrize("m,row", all_rows(), ids=lambda x: x if isinstance(x, int) else x["id"])
def test_duality_laws_on_bundled_rows(m, row):
    W = bhk.parse_polynomial(row["polynomial"], row["weights"], row["degree"])
    assert all(sum(a * w for a, w in zip(r, W.weights.weights)) == W.weights.degree for r in W.matrix)
    WT = bhk.transpose(W)
    J, SL = bhk.j_subgroup(W), bhk.sl_subgroup(W)
    assert bhk.dual_group(W, J, WT).elements == bhk.sl_subgroup(WT).elements
    for G in bhk.subgroups_between(J, SL):
        GT = bhk.dual_group(W, G, WT)
        assert G.order * GT.order == W.det
        assert bhk.dual_group(WT, GT, W).elements == G.elements
        assert bhk.j_subgroup(WT) <= GT <= bhk.sl_subgroup(WT)
