"""Isotropic subgroups, even overlattices and existence/uniqueness criteria."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod

from . import exact
from .forms import (
    FiniteQuadraticForm,
    FormExpression,
    _closure,
    _prime_factors,
    block_decomposition,
    direct_sum as form_sum,
    discriminant_data,
    discriminant_form,
    forms_isomorphic,
    length,
    milgram_signature,
    negate,
    orthogonal_complement,
    p_part,
    subquotient,
)
from .lattice import Lattice, LatticeError, direct_sum, named_lattice

__all__ = [
    "IsotropicSubgroup",
    "LatticeInvariants",
    "elements_with_value",
    "isotropic_subgroups",
    "overlattice",
    "overlattice_basis",
    "quotient_form",
    "uniqueness",
    "existence_and_uniqueness",
    "splits_off_U",
    "exists_necessary",
    "gluing_possible",
    "embedding_ruled_out",
    "find_lattice_by_invariants",
    "default_catalog",
]


@dataclass(frozen=True)
class IsotropicSubgroup:
    generators: tuple
    order: int
    elements: frozenset


@dataclass(frozen=True)
class LatticeInvariants:
    t_plus: int
    t_minus: int
    q: FiniteQuadraticForm

    def __post_init__(self):
        if self.t_plus < 0 or self.t_minus < 0:
            raise ValueError("signature entries must be nonnegative")
        if isinstance(self.q, FormExpression):
            object.__setattr__(self, "q", self.q.form())

    @property
    def rank(self):
        return self.t_plus + self.t_minus

    @classmethod
    def of(cls, L: Lattice):
        tp, tm = L.signature
        return cls(tp, tm, discriminant_form(L))


def _as_form(q):
    return q.form() if isinstance(q, FormExpression) else q


def elements_with_value(q, n=0):
    """Elements ``a`` with ``q(a) = n mod 2``, lexicographic."""
    q = _as_form(q)
    n = Fraction(n) % 2
    D = q.D * n.denominator
    target = int(n * D)
    vals = q.q_numerators(D)
    elems = q.elements()
    return [x for x, v in zip(elems, vals) if v == target]


def _key(q, gens):
    n = q.ngens
    rows = [list(g) for g in gens] + [[q.orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    return tuple(map(tuple, exact.hermite_normal_form(rows)))


def isotropic_subgroups(q):
    """All subgroups on which ``q`` vanishes, trivial first, sorted by order."""
    q = _as_form(q)
    iso = [x for x in elements_with_value(q, 0) if any(x)]
    zero = tuple([0] * q.ngens)
    start = IsotropicSubgroup((), 1, frozenset([zero]))
    seen = {_key(q, []): start}
    frontier = [start]
    while frontier:
        nxt = []
        for H in frontier:
            for x in iso:
                if x in H.elements or any(q.b(x, g) != 0 for g in H.generators):
                    continue
                gens = H.generators + (x,)
                k = _key(q, gens)
                if k in seen:
                    continue
                els = frozenset(_closure(q, gens))
                new = IsotropicSubgroup(gens, len(els), els)
                seen[k] = new
                nxt.append(new)
        frontier = nxt
    return sorted(seen.values(), key=lambda H: (H.order, sorted(H.elements)))


def quotient_form(q, H: IsotropicSubgroup):
    """``(q|H^perp)/H`` computed on the form alone."""
    q = _as_form(q)
    perp = orthogonal_complement(q, list(H.generators))
    return subquotient(q, perp, list(H.generators))


def overlattice_basis(L: Lattice, H: IsotropicSubgroup):
    """Rational basis (rows, in ``L`` coordinates) of the overlattice for ``H``."""
    q, lifts = discriminant_data(L)
    if any(q.q(h) != 0 for h in H.generators):
        raise ValueError("subgroup is not isotropic")
    n = L.rank
    vecs = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for h in H.generators:
        vecs.append([sum(h[k] * lifts[k][j] for k in range(len(h))) for j in range(n)])
    c = exact.common_denominator(vecs)
    rows = exact.hermite_normal_form([[int(x * c) for x in v] for v in vecs])
    return [[Fraction(x, c) for x in r] for r in rows]


def overlattice(L: Lattice, H: IsotropicSubgroup) -> Lattice:
    """The even overlattice ``L'`` with ``L'/L = H``."""
    B = overlattice_basis(L, H)
    G = exact.matmul(exact.matmul(B, [list(r) for r in L.gram]), exact.transpose(B))
    if any(x.denominator != 1 for row in G for x in row):
        raise ValueError("overlattice Gram is not integral")
    return Lattice([[int(x) for x in row] for row in G])


# ---------------------------------------------------------------------------
# existence and uniqueness criteria

def _repeated_level(blocks):
    levels = {}
    for b in blocks:
        if b.kind in ("u", "v"):
            return True
        levels[b.k] = levels.get(b.k, 0) + 1
    return any(c >= 2 for c in levels.values())


def uniqueness(inv: LatticeInvariants) -> str:
    """``"unique"`` when the sufficient uniqueness conditions hold, else ``"not-guaranteed"``."""
    tp, tm, q = inv.t_plus, inv.t_minus, inv.q
    if tp + tm == 1:
        return "unique"  # <n> is fixed by its sign and |A| = |n|
    if not (tp >= 1 and tm >= 1 and tp + tm >= 3):
        return "not-guaranteed"
    for p in _prime_factors(q.order):
        qp = p_part(q, p)
        if inv.rank >= 2 + length(qp):
            continue
        if not _repeated_level(block_decomposition(qp)):
            return "not-guaranteed"
    return "unique"


def existence_and_uniqueness(inv: LatticeInvariants) -> bool:
    tp, tm, q = inv.t_plus, inv.t_minus, inv.q
    return (
        tp >= 1
        and tm >= 1
        and (tp - tm - milgram_signature(q)) % 8 == 0
        and tp + tm >= 2 + length(q)
    )


def splits_off_U(inv: LatticeInvariants) -> bool:
    tp, tm, q = inv.t_plus, inv.t_minus, inv.q
    return tp >= 1 and tm >= 1 and tp + tm >= 3 + length(q)


def exists_necessary(inv: LatticeInvariants) -> bool:
    """False when no even lattice can have these invariants (rank/length, signature mod 8)."""
    if inv.rank < length(inv.q):
        return False
    return (inv.t_plus - inv.t_minus - milgram_signature(inv.q)) % 8 == 0


def _nonzero_values(q):
    return {(o, q.q(x)) for x, o in zip(q.elements(), q.element_orders()) if o > 1}


def gluing_possible(q1, q2) -> bool:
    """Whether some nonzero elements of equal order in ``q1`` and ``q2`` share a value.

    When this fails, the only isometric pair of subgroups is the trivial one.
    """
    return bool(_nonzero_values(_as_form(q1)) & _nonzero_values(_as_form(q2)))


def embedding_ruled_out(sub: LatticeInvariants, ambient: LatticeInvariants) -> bool:
    """True when no primitive embedding of ``sub`` into ``ambient`` can exist.

    Only the case of forced trivial gluing is decided: then the
    complement would have invariants ``(t+ - s+, t- - s-, -(q_S + (-q_T)))``
    and the rank/length and signature tests are applied to it.
    """
    tp = ambient.t_plus - sub.t_plus
    tm = ambient.t_minus - sub.t_minus
    if tp < 0 or tm < 0:
        return True
    if gluing_possible(sub.q, ambient.q):
        return False
    delta = form_sum(sub.q, negate(ambient.q))
    return not exists_necessary(LatticeInvariants(tp, tm, negate(delta)))


# ---------------------------------------------------------------------------
# identification by bounded search

def default_catalog():
    names = ["U", "U(2)", "H5", "L9", "M9", "T(4,4,4)", "T(3,4,4)", "T(2,5,6)"]
    names += ["E8", "E7", "E6"]
    names += [f"D{n}" for n in range(4, 13)]
    names += [f"A{n}" for n in range(1, 13)]
    names += ["A1(2)", "<2>", "<4>", "<8>", "<-2>", "<-4>", "<-8>"]
    return [named_lattice(n) for n in names]


_ORDER = {"U": 0, "U(2)": 1, "H": 2, "L": 3, "M": 4, "T": 5, "A": 6, "D": 7, "E": 8, "<": 9}


def _display_key(L):
    name = L.name
    head = "U(2)" if name == "U(2)" else name[0]
    digits = "".join(ch for ch in name if ch.isdigit())
    return (_ORDER.get(head, 10), int(digits or 0), name)


def find_lattice_by_invariants(inv: LatticeInvariants, catalog=None, max_summands=4):
    """Smallest direct sum from ``catalog`` with the given signature and form.

    Returns the lattice (named ``X + Y + ...``) or ``None``.
    """
    catalog = catalog or default_catalog()
    order = inv.q.order
    info = [(L, L.signature, abs(L.det)) for L in catalog]
    for s in range(1, max_summands + 1):
        for combo in combinations_with_replacement(range(len(info)), s):
            tp = sum(info[i][1][0] for i in combo)
            tm = sum(info[i][1][1] for i in combo)
            if (tp, tm) != (inv.t_plus, inv.t_minus):
                continue
            if prod(info[i][2] for i in combo) != order:
                continue
            parts = sorted((info[i][0] for i in combo), key=_display_key)
            L = direct_sum(*parts)
            if forms_isomorphic(discriminant_form(L), inv.q):
                return Lattice(L.gram, " + ".join(p.name for p in parts))
    return None
