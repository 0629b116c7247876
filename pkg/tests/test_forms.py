from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3mirror.forms import (
    FiniteQuadraticForm,
    FormError,
    GeneratorBlock,
    UndecidedError,
    block_decomposition,
    direct_sum,
    find_isomorphism,
    discriminant_form,
    format_form,
    forms_isomorphic,
    length,
    milgram_signature,
    negate,
    p_part,
    parse_form,
)
from k3mirror.lattice import parse_lattice

from strategies import BLOCKS, block_sums


def disc(expr):
    return discriminant_form(parse_lattice(expr))


def F(text):
    return parse_form(text).form()


@pytest.mark.parametrize(
    "lattice,form",
    [
        ("A1", "w(2,1,-1)"),
        ("A2", "w(3,1,1)"),
        ("E6", "w(3,1,-1)"),
        ("E7", "w(2,1,1)"),
        ("D4", "v"),
        ("U(2)", "u"),
        ("E8", "<0>"),
        ("U", "<0>"),
        ("<2>", "w(2,1,1)"),
    ],
)
def test_discriminant_forms_of_small_lattices(lattice, form, backend):
    assert forms_isomorphic(disc(lattice), F(form))


def test_negation_pairs(backend):
    assert forms_isomorphic(disc("E6"), negate(disc("A2")))
    assert forms_isomorphic(disc("E7"), negate(disc("A1")))
    assert not forms_isomorphic(disc("A1"), disc("E7"))


def test_nontrivial_isomorphisms(backend):
    assert forms_isomorphic(F("2w(3,1,1)"), F("2w(3,1,-1)"))
    assert not forms_isomorphic(F("w(3,1,1)"), F("w(3,1,-1)"))
    assert forms_isomorphic(F("w(2,1,1) + w(2,1,-1) + w(2,1,1)"), F("u + w(2,1,1)"))
    assert not forms_isomorphic(F("u"), F("v"))
    assert forms_isomorphic(F("2v"), F("2u"))


def test_group_mismatch_short_circuits():
    assert not forms_isomorphic(F("w(2,2,1)"), F("2w(2,1,1)"))


def test_budget_raises_undecided():
    with pytest.raises(UndecidedError):
        forms_isomorphic(F("3u + 2w(2,1,1)"), F("3u + w(2,1,1) + w(2,1,1)"), budget=1)


def test_recanonicalisation_to_invariant_factors():
    q = FiniteQuadraticForm((2, 3), [[Fraction(1, 2), 0], [0, Fraction(2, 3)]])
    assert q.orders == (6,)
    assert q.order == 6


def test_rejects_ill_defined_gram():
    with pytest.raises(FormError):
        FiniteQuadraticForm((3,), [[Fraction(1, 3)]])
    with pytest.raises(FormError):
        FiniteQuadraticForm((2,), [[Fraction(1, 4)]])


def test_values():
    q = F("w(3,1,1)")
    vals = sorted(q.q((x,)) for x in range(3))
    assert vals == [0, Fraction(4, 3), Fraction(4, 3)]


def test_length_and_p_part():
    q = F("u + w(3,1,1) + w(5,1,-1)")
    assert q.orders == (2, 30)
    assert length(q) == 2
    assert p_part(q, 2).orders == (2, 2)
    assert forms_isomorphic(p_part(q, 3), F("w(3,1,1)"))
    assert p_part(q, 7).order == 1


@pytest.mark.parametrize(
    "text,canonical",
    [
        ("v + 4w(2,1,-1)", "v + 4w(2,1,-1)"),
        ("2w_{2,1}^{-1} ⊕ w_{3,1}^1", "2w(2,1,-1) + w(3,1,1)"),
        ("w_{2,3}^5", "w(2,3,5)"),
        ("<0>", "<0>"),
        ("u_2", "u(2)"),
    ],
)
def test_parse_format(text, canonical):
    assert format_form(parse_form(text)) == canonical


def test_epsilon_normalisation_is_noted():
    e = parse_form("w(2,2,3)")
    assert e.blocks()[0].eps == -5
    assert e.notes
    with pytest.raises(FormError):
        GeneratorBlock("w", 3, 1, 2)


@pytest.mark.parametrize("bad", ["", "w(4,1,1)", "w(2,1,2)", "x", "u(0)", "0w(2,1,1)"])
def test_parse_errors(bad):
    with pytest.raises(FormError):
        parse_form(bad).form()


@given(block_sums())
def test_decomposition_reproduces_form(blocks):
    q = F(" + ".join(blocks))
    assert forms_isomorphic(F(format_form(block_decomposition(q))), q)
    assert forms_isomorphic(F(format_form(q)), q)


@given(block_sums())
def test_milgram_additive_and_odd_under_negation(blocks):
    parts = [F(b) for b in blocks]
    total = sum(milgram_signature(p) for p in parts) % 8
    assert milgram_signature(direct_sum(*parts)) == total
    assert milgram_signature(negate(direct_sum(*parts))) == (-total) % 8


@pytest.mark.parametrize(
    "form,sig",
    [("w(2,1,1)", 1), ("w(2,1,-1)", 7), ("u", 0), ("v", 4), ("w(3,1,1)", 6), ("w(3,1,-1)", 2), ("<0>", 0)],
)
def test_milgram_known(form, sig):
    assert milgram_signature(F(form)) == sig


def test_degenerate_form_isomorphism(backend):
    a = FiniteQuadraticForm((2, 2), [[0, 0], [0, Fraction(1, 2)]])
    b = FiniteQuadraticForm((2, 2), [[Fraction(1, 2), 0], [0, 0]])
    c = FiniteQuadraticForm((2, 2), [[0, 0], [0, 1]])
    assert not a.nondegenerate
    assert forms_isomorphic(a, b)
    assert not forms_isomorphic(a, c)


def test_degenerate_search_prunes_non_injective_prefixes(backend):
    zero = FiniteQuadraticForm((2,) * 6, [[0] * 6 for _ in range(6)])
    assert forms_isomorphic(zero, zero, budget=10_000)


def test_degenerate_search_places_large_cyclic_factors_first(backend):
    zero = FiniteQuadraticForm((2, 2, 2, 2, 4), [[0] * 5 for _ in range(5)])
    assert forms_isomorphic(zero, zero, budget=10_000)
    iso = find_isomorphism(zero, zero)
    assert [zero.element_order(y) for y in iso] == [2, 2, 2, 2, 4]


def test_found_isomorphism_preserves_the_form(backend):
    a = parse_form("w(2,1,1) + w(3,1,1) + w(2,2,1)").form()
    b = FiniteQuadraticForm(tuple(reversed(a.orders)), [row[::-1] for row in a.gram[::-1]])
    iso = find_isomorphism(a, b)
    assert iso is not None
    for i, y in enumerate(iso):
        assert b.q(y) == a.q(tuple(int(i == j) for j in range(a.ngens)))
