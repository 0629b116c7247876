"""Invertible polynomials, diagonal symmetry groups and the BHK dual group.

Group elements are stored as integer tuples ``a`` meaning ``a / N`` in
``(Q/Z)^n`` where ``N = |det A_W|``; every diagonal symmetry has this form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import permutations
from math import gcd, lcm

from . import exact

__all__ = [
    "BHKError",
    "WeightSystem",
    "InvertiblePolynomial",
    "SymmetryGroup",
    "parse_polynomial",
    "format_polynomial",
    "transpose",
    "full_symmetry_group",
    "j_element",
    "sl_subgroup",
    "is_symplectic",
    "sigma_element",
    "group_from_elements",
    "dual_group",
    "subgroups_between",
    "match_permutation",
    "j_subgroup",
    "permute_group",
]

VARIABLES = "xyzw"


class BHKError(ValueError):
    pass


@dataclass(frozen=True)
class WeightSystem:
    weights: tuple
    degree: int

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x <= 0 for x in w) or self.degree <= 0:
            raise BHKError("weights and degree must be positive")
        if reduce(gcd, w) != 1:
            raise BHKError("weights must be coprime")
        if any(x >= self.degree for x in w):
            raise BHKError("each weight must be smaller than the degree")

    def __str__(self):
        return "(" + ",".join(map(str, self.weights)) + f";{self.degree})"


@dataclass(frozen=True)
class InvertiblePolynomial:
    """Exponent matrix (rows = monomials, columns = variables) plus weights."""

    matrix: tuple
    weights: WeightSystem

    def __post_init__(self):
        A = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", A)
        n = len(A)
        if any(len(r) != n for r in A):
            raise BHKError("number of monomials must equal number of variables")
        if any(x < 0 for r in A for x in r):
            raise BHKError("exponents must be nonnegative")
        if len(self.weights.weights) != n:
            raise BHKError("weight system has the wrong length")
        if exact.determinant(A) == 0:
            raise BHKError("exponent matrix is degenerate")
        d = self.weights.degree
        for row in A:
            if sum(a * w for a, w in zip(row, self.weights.weights)) != d:
                raise BHKError("polynomial is not quasihomogeneous for these weights")

    @property
    def nvars(self):
        return len(self.matrix)

    @cached_property
    def det(self) -> int:
        return abs(exact.determinant(self.matrix))

    def __str__(self):
        return format_polynomial(self.matrix)


_MONO = re.compile(r"([a-z])(?:\^(\d+))?")


def _parse_monomials(text, variables=VARIABLES):
    rows = []
    for mon in text.replace(" ", "").split("+"):
        if not mon:
            raise BHKError(f"empty monomial in {text!r}")
        pos = 0
        exps = [0] * len(variables)
        for m in _MONO.finditer(mon):
            if m.start() != pos:
                break
            v = m.group(1)
            if v not in variables:
                raise BHKError(f"unknown variable {v!r}")
            exps[variables.index(v)] += int(m.group(2) or 1)
            pos = m.end()
        if pos != len(mon):
            raise BHKError(f"cannot parse monomial {mon!r}")
        rows.append(exps)
    return rows


def parse_polynomial(text, weights, degree=None, variables=VARIABLES):
    """``parse_polynomial("x^2+y^3+z^9+yw^12", (9,6,2,1), 18)``.

    ``weights`` may also be a :class:`WeightSystem` (then ``degree`` is omitted).
    """
    ws = weights if isinstance(weights, WeightSystem) else WeightSystem(tuple(weights), degree)
    rows = _parse_monomials(text, variables[: len(ws.weights)])
    return InvertiblePolynomial(tuple(map(tuple, rows)), ws)


def format_polynomial(matrix, variables=VARIABLES):
    out = []
    for row in matrix:
        mon = "".join(
            (variables[j] if a == 1 else f"{variables[j]}^{a}") for j, a in enumerate(row) if a
        )
        out.append(mon)
    return "+".join(out)


def transpose(W: InvertiblePolynomial) -> InvertiblePolynomial:
    """Polynomial with exponent matrix ``A^T`` and its normalised weight system."""
    At = exact.transpose(W.matrix)
    inv = exact.rational_inverse(At)
    q = [sum(row) for row in inv]  # A^T q = (1, ..., 1)
    if any(x <= 0 for x in q):
        raise BHKError("transpose weights are not positive")
    d = reduce(lcm, (x.denominator for x in q), 1)
    w = [int(x * d) for x in q]
    g = reduce(gcd, w)
    w = [x // g for x in w]
    d //= g
    return InvertiblePolynomial(tuple(map(tuple, At)), WeightSystem(tuple(w), d))


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True)
class SymmetryGroup:
    """Finite subgroup of ``(Q/Z)^n``, elements stored as numerators over ``N``."""

    N: int
    elements: frozenset

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return tuple(x % self.N for x in g) in self.elements

    def __le__(self, other):
        return self.N == other.N and self.elements <= other.elements

    def fractions(self, g):
        return tuple(Fraction(x, self.N) for x in g)

    def generators(self):
        """A small generating set, chosen greedily in sorted order."""
        gens = []
        span = {tuple([0] * self._n)}
        for g in sorted(self.elements):
            if g not in span:
                gens.append(g)
                span = _closure(self.N, gens)
        return gens

    @property
    def _n(self):
        return len(next(iter(self.elements)))


def _closure(N, gens):
    if not gens:
        return set()
    n = len(gens[0])
    seen = {tuple([0] * n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % N for a, b in zip(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _to_int(g, N):
    out = []
    for x in g:
        x = Fraction(x) * N
        if x.denominator != 1:
            raise BHKError(f"element {g} is not in (1/{N})Z^n")
        out.append(int(x) % N)
    return tuple(out)


def group_from_elements(W, gens) -> SymmetryGroup:
    """Subgroup generated by rational vectors ``gens`` (length-n tuples)."""
    N = W.det
    ints = [_to_int(g, N) for g in gens]
    if not ints:
        ints = [tuple([0] * W.nvars)]
    return SymmetryGroup(N, frozenset(_closure(N, ints)))


@lru_cache(maxsize=256)
def full_symmetry_group(W) -> SymmetryGroup:
    """``G_W``: diagonal symmetries, generated by the columns of ``A_W^{-1}``."""
    inv = exact.rational_inverse(W.matrix)
    cols = [tuple(inv[i][j] for i in range(W.nvars)) for j in range(W.nvars)]
    return group_from_elements(W, cols)


def j_element(W):
    d = W.weights.degree
    return tuple(Fraction(w, d) % 1 for w in W.weights.weights)


def is_symplectic(g) -> bool:
    return sum(Fraction(x) for x in g).denominator == 1


def sl_subgroup(W) -> SymmetryGroup:
    G = full_symmetry_group(W)
    els = frozenset(g for g in G.elements if sum(g) % G.N == 0)
    return SymmetryGroup(G.N, els)


def j_subgroup(W) -> SymmetryGroup:
    return group_from_elements(W, [j_element(W)])


def sigma_element(W, variable, m):
    """``(0,..,1/m,..,0)`` on ``variable`` (a name from ``xyzw`` or an index)."""
    i = VARIABLES.index(variable) if isinstance(variable, str) else variable
    return tuple(Fraction(1, m) if k == i else Fraction(0) for k in range(W.nvars))


def dual_group(W, G: SymmetryGroup, WT=None) -> SymmetryGroup:
    """``G^T = {g in G_{W^T} : g A_W h^T in Z for all h in G}``."""
    GW = full_symmetry_group(W)
    if not G <= GW:
        raise BHKError("group is not a subgroup of G_W")
    WT = WT or transpose(W)
    GWT = full_symmetry_group(WT)
    A, n, N2 = W.matrix, W.nvars, GW.N * GW.N
    gens = G.generators() if G.order > 1 else []
    cols = [[sum(A[i][j] * h[j] for j in range(n)) for i in range(n)] for h in gens]  # A h^T
    els = frozenset(
        g for g in GWT.elements if all(sum(g[i] * c[i] for i in range(n)) % N2 == 0 for c in cols)
    )
    return SymmetryGroup(GWT.N, els)


def _join(N, H, g):
    """``<H, g>`` for a group ``H`` (set of tuples) and an element ``g``."""
    out = set(H)
    k = g
    while k not in H:
        out.update(tuple((a + b) % N for a, b in zip(h, k)) for h in H)
        k = tuple((a + b) % N for a, b in zip(k, g))
    return frozenset(out)


def subgroups_between(J: SymmetryGroup, S: SymmetryGroup):
    """All groups ``G`` with ``J <= G <= S`` sorted by decreasing order."""
    if not J <= S:
        raise BHKError("J is not contained in S")
    reps = sorted(S.elements - J.elements)
    seen = {J.elements}
    frontier = [J.elements]
    while frontier:
        nxt = []
        for H in frontier:
            for g in reps:
                if g in H:
                    continue
                new = _join(S.N, H, g)
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        frontier = nxt
    out = [SymmetryGroup(S.N, e) for e in seen]
    return sorted(out, key=lambda G: (-G.order, sorted(G.elements)))


def match_permutation(rows_a, rows_b, fixed=None):
    """Permutation ``p`` of variables with ``{row_a permuted by p} == {rows_b}``.

    ``p[i]`` is the index of the variable of ``b`` that variable ``i`` of ``a``
    maps to.  ``fixed = (i, j)`` forces ``p[i] = j``.  Identity is tried first.
    """
    n = len(rows_a[0])
    target = sorted(map(tuple, rows_b))
    for p in permutations(range(n)):
        if fixed is not None and p[fixed[0]] != fixed[1]:
            continue
        moved = []
        for row in rows_a:
            new = [0] * n
            for i, a in enumerate(row):
                new[p[i]] = a
            moved.append(tuple(new))
        if sorted(moved) == target:
            return p
    return None


def permute_group(G: SymmetryGroup, p) -> SymmetryGroup:
    n = len(p)
    els = set()
    for g in G.elements:
        new = [0] * n
        for i in range(n):
            new[p[i]] = g[i]
        els.add(tuple(new))
    return SymmetryGroup(G.N, frozenset(els))
