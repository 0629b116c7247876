import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3mirror.lattice import (
    Lattice,
    LatticeError,
    direct_sum,
    is_primitive_sublattice,
    named_lattice,
    parse_lattice,
    root_lattice,
    sublattice_from_generators,
    t_lattice,
    twist,
)

from strategies import NAMED


@pytest.mark.parametrize("n", range(1, 10))
def test_a_n(n):
    L = root_lattice("A", n)
    assert L.rank == n and abs(L.det) == n + 1 and L.signature == (0, n)


@pytest.mark.parametrize("n", range(4, 10))
def test_d_n(n):
    L = root_lattice("D", n)
    assert abs(L.det) == 4 and L.signature == (0, n)


@pytest.mark.parametrize("n,det", [(6, 3), (7, 2), (8, 1)])
def test_e_n(n, det):
    assert abs(root_lattice("E", n).det) == det


@pytest.mark.parametrize("p,q,r", [(2, 3, 7), (3, 4, 4), (2, 5, 6), (3, 3, 4), (2, 4, 5), (3, 3, 5)])
def test_t_lattice_det(p, q, r):
    L = t_lattice(p, q, r)
    assert L.rank == p + q + r - 2
    assert abs(L.det) == abs(p * q * r - p * q - q * r - p * r)


@pytest.mark.parametrize("p,q,r", [(3, 3, 3), (2, 4, 4), (2, 3, 6)])
def test_affine_t_lattices_are_degenerate(p, q, r):
    with pytest.raises(LatticeError):
        t_lattice(p, q, r)


def test_t_lattice_hyperbolic_beyond_ade():
    assert t_lattice(2, 3, 7).signature == (1, 9)
    assert t_lattice(2, 3, 5).signature == (0, 8)


def test_u_and_twist():
    U = named_lattice("U")
    assert U.det == -1 and U.signature == (1, 1)
    assert named_lattice("U(2)").gram == ((0, 2), (2, 0))
    assert twist(root_lattice("A", 2), -1).signature == (2, 0)


def test_parse_sum():
    L = parse_lattice("U + 2*A2 + E8")
    assert L.rank == 2 + 4 + 8 and L.signature == (1, 13)
    assert parse_lattice("U ⊕ A2").gram == parse_lattice("U+A2").gram
    assert parse_lattice("2A1").gram == parse_lattice("A1 + A1").gram


@pytest.mark.parametrize("bad", ["", "U +", "X7", "A0", "D3", "E9", "<3>", "T(1,2,3)", "H7"])
def test_parse_errors(bad):
    with pytest.raises(LatticeError):
        parse_lattice(bad)


def test_rejects_odd_or_degenerate():
    with pytest.raises(LatticeError):
        Lattice([[1]])
    with pytest.raises(LatticeError):
        Lattice([[2, 2], [2, 2]])
    with pytest.raises(LatticeError):
        Lattice([[2, 1], [0, 2]])


@pytest.mark.parametrize("tag", NAMED)
def test_named_constructors_are_even(tag):
    L = named_lattice(tag)
    assert all(L.gram[i][i] % 2 == 0 for i in range(L.rank))
    assert sum(L.signature) == L.rank


@given(st.lists(st.sampled_from(NAMED), min_size=1, max_size=4))
def test_direct_sum_multiplicative(tags):
    parts = [named_lattice(t) for t in tags]
    L = direct_sum(*parts)
    det = 1
    for p in parts:
        det *= p.det
    assert L.det == det
    assert L.signature == (sum(p.signature[0] for p in parts), sum(p.signature[1] for p in parts))


def test_sublattice_from_generators():
    E8 = root_lattice("E", 8)
    vecs = [[1, 0, 0, 0, 0, 0, 0, 0], [2, 0, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0, 0]]
    S, kept = sublattice_from_generators(E8, vecs)
    assert kept == [0, 2]
    assert S.gram == ((-2, 1), (1, -2))


def test_primitivity():
    assert is_primitive_sublattice(None, [[1, 0, 0], [0, 1, 0]])
    assert not is_primitive_sublattice(None, [[2, 0, 0]])
    assert is_primitive_sublattice([[2, 0], [0, 2]], [[2, 0]])
    with pytest.raises(LatticeError):
        is_primitive_sublattice([[2, 0], [0, 2]], [[1, 0]])
