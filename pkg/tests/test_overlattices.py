import pytest
from hypothesis import given

from k3mirror.forms import discriminant_form, forms_isomorphic, parse_form
from k3mirror.lattice import parse_lattice
from k3mirror.overlattices import (
    LatticeInvariants,
    elements_with_value,
    embedding_ruled_out,
    existence_and_uniqueness,
    exists_necessary,
    find_lattice_by_invariants,
    gluing_possible,
    isotropic_subgroups,
    overlattice,
    quotient_form,
    splits_off_U,
    uniqueness,
)

from strategies import lattices


def inv(tp, tm, form):
    return LatticeInvariants(tp, tm, parse_form(form))


def of(name):
    return LatticeInvariants.of(parse_lattice(name))


@pytest.mark.parametrize("name,count", [("D4", 1), ("U(2)", 3), ("2A1", 1), ("A8", 2), ("A3", 1), ("4A1", 2)])
def test_isotropic_subgroup_counts(name, count):
    assert len(isotropic_subgroups(discriminant_form(parse_lattice(name)))) == count


def test_trivial_subgroup_first():
    subs = isotropic_subgroups(parse_form("u").form())
    assert subs[0].order == 1 and [H.order for H in subs] == [1, 2, 2]


def test_a8_glues_to_e8():
    L = parse_lattice("A8")
    H = isotropic_subgroups(discriminant_form(L))[1]
    M = overlattice(L, H)
    assert H.order == 3 and abs(M.det) == 1 and M.signature == (0, 8)


def test_u2_glues_to_u():
    L = parse_lattice("U(2)")
    for H in isotropic_subgroups(discriminant_form(L))[1:]:
        M = overlattice(L, H)
        assert M.det == -1 and M.signature == (1, 1)


def test_elements_with_value():
    q = parse_form("u").form()
    assert len(elements_with_value(q, 0)) == 3
    assert elements_with_value(q, 1) == [(1, 1)]


@given(lattices(max_rank=4, entry=4, max_det=200))
def test_overlattice_form_matches_quotient_form(L):
    q = discriminant_form(L)
    for H in isotropic_subgroups(q):
        M = overlattice(L, H)
        assert M.det * H.order**2 == L.det
        assert M.signature == L.signature
        assert forms_isomorphic(discriminant_form(M), quotient_form(q, H))


def test_uniqueness():
    assert uniqueness(of("U + A2")) == "unique"
    assert uniqueness(of("<4>")) == "unique"
    assert uniqueness(of("A2")) == "not-guaranteed"
    assert uniqueness(inv(1, 2, "w(3,1,1) + w(3,2,1)")) == "not-guaranteed"
    assert uniqueness(inv(1, 2, "3w(3,1,1)")) == "unique"
    assert uniqueness(inv(1, 3, "2w(3,1,1) + w(3,1,-1)")) == "unique"


def test_existence_criteria():
    assert splits_off_U(inv(2, 18, "u"))
    assert not splits_off_U(inv(2, 1, "w(2,1,1)"))
    assert existence_and_uniqueness(inv(2, 1, "w(2,1,1)"))
    assert not existence_and_uniqueness(inv(2, 1, "w(2,1,-1)"))
    assert exists_necessary(inv(1, 8, "w(2,3,5)"))
    assert not exists_necessary(inv(1, 1, "w(3,1,1) + w(3,1,1) + w(3,1,1)"))
    assert not exists_necessary(inv(1, 1, "w(2,1,1)"))


@pytest.mark.parametrize("name", ["U + A2", "U + E6 + E8", "T(3,4,4)", "U(2) + D4 + E8", "U + A1 + E8"])
def test_criteria_agree_with_actual_lattices(name):
    assert exists_necessary(of(name))


def test_gluing_and_embedding_obstruction():
    ambient = of("U(2) + D4 + E8")
    assert not gluing_possible(of("U + A1 + E8").q, ambient.q)
    assert embedding_ruled_out(of("U + A1 + E8"), ambient)
    assert gluing_possible(of("T(2,5,6)").q, ambient.q)
    assert not embedding_ruled_out(of("T(2,5,6)"), ambient)
    assert embedding_ruled_out(of("U + E8"), of("A1"))


def test_find_lattice_by_invariants():
    assert find_lattice_by_invariants(inv(1, 8, "w(2,3,5)")).name == "T(3,4,4)"
    assert find_lattice_by_invariants(inv(1, 1, "<0>")).name == "U"
    assert find_lattice_by_invariants(inv(1, 3, "w(3,1,1)")).name == "U + A2"
    assert find_lattice_by_invariants(inv(1, 1, "w(3,1,1) + w(3,1,1) + w(3,1,1)")) is None
