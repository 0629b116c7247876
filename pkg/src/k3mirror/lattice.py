"""Even lattices held as Gram matrices, named constructors and sublattices."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import exact

__all__ = [
    "Lattice",
    "LatticeError",
    "named_lattice",
    "parse_lattice",
    "direct_sum",
    "twist",
    "root_lattice",
    "t_lattice",
    "sublattice_from_generators",
    "is_primitive_sublattice",
]


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """Even nondegenerate integral lattice given by its Gram matrix.

    ``name`` is a display label only; equality is on the Gram matrix.
    """

    gram: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        if not exact.is_symmetric(g):
            raise LatticeError("Gram matrix must be square and symmetric")
        if any(g[i][i] % 2 for i in range(len(g))):
            raise LatticeError("lattice is not even")
        if exact.determinant(g) == 0:
            raise LatticeError("lattice is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return exact.determinant(self.gram)

    @cached_property
    def signature(self) -> tuple:
        tp, tm, _ = exact.signature(self.gram)
        return tp, tm

    def __add__(self, other):
        return direct_sum(self, other)

    def __str__(self):
        return self.name or f"Lattice(rank={self.rank})"


def direct_sum(*lattices: Lattice) -> Lattice:
    n = sum(L.rank for L in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            g[off + i][off:off + L.rank] = row
        off += L.rank
    name = " + ".join(L.name for L in lattices if L.name)
    return Lattice(g, name)


def twist(L: Lattice, n: int) -> Lattice:
    """``L(n)``: every Gram entry multiplied by ``n``."""
    if n == 0:
        raise LatticeError("twist by zero is degenerate")
    label = f"{L.name}({n})" if L.name else ""
    return Lattice([[n * x for x in row] for row in L.gram], label)


def _from_edges(n, edges, name):
    g = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        g[a][b] = g[b][a] = 1
    return Lattice(g, name)


def root_lattice(kind: str, n: int) -> Lattice:
    """Negative definite ADE lattice from its Dynkin diagram."""
    if kind == "A":
        if n < 1:
            raise LatticeError("A_n needs n >= 1")
        return _from_edges(n, [(i, i + 1) for i in range(n - 1)], f"A{n}")
    if kind == "D":
        if n < 4:
            raise LatticeError("D_m needs m >= 4")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return _from_edges(n, edges, f"D{n}")
    if kind == "E":
        if n not in (6, 7, 8):
            raise LatticeError("E_n needs n in {6, 7, 8}")
        # chain 0..n-2 with the branch node attached to node 2
        edges = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
        return _from_edges(n, edges, f"E{n}")
    raise LatticeError(f"unknown root system {kind!r}")


def t_lattice(p: int, q: int, r: int) -> Lattice:
    """T-shaped graph lattice with legs of p, q, r nodes sharing the centre.

    Rank is ``p + q + r - 2``; ``|det| = |pqr - pq - qr - pr|``.
    """
    if min(p, q, r) < 2:
        raise LatticeError("T_{p,q,r} needs p, q, r >= 2")
    edges = []
    nxt = 1
    for leg in (p, q, r):
        prev = 0
        for _ in range(leg - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return _from_edges(nxt, edges, f"T({p},{q},{r})")


U = Lattice([[0, 1], [1, 0]], "U")


def h_lattice(p: int) -> Lattice:
    # even hyperbolic, det -p; printed variant with (p+1)/2 on the diagonal
    # is odd and definite, so the sign of that entry is flipped here
    if p < 5 or p % 4 != 1 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise LatticeError("H_p needs a prime p = 1 (mod 4)")
    return Lattice([[(1 - p) // 2, 1], [1, 2]], f"H{p}")


L9 = Lattice([[-2, 1], [1, 4]], "L9")
M9 = Lattice([[-4, 5], [5, -4]], "M9")


_ATOM = re.compile(
    r"""\s*(?:(?P<mult>\d+)\s*\*?\s*)?
        (?:
          (?P<T>T\s*\(\s*(?P<tp>\d+)\s*,\s*(?P<tq>\d+)\s*,\s*(?P<tr>\d+)\s*\))
        | (?P<ang><\s*(?P<n>[+-]?\d+)\s*>)
        | (?P<base>U|L9|M9|[ADEH]\s*_?\s*\{?\s*\d+\s*\}?)
        )
        (?:\s*\(\s*(?P<tw>[+-]?\d+)\s*\))?\s*$""",
    re.VERBOSE,
)


def named_lattice(tag: str) -> Lattice:
    """Build one named lattice such as ``U``, ``U(2)``, ``A3``, ``T(3,4,4)``, ``<-8>``."""
    m = _ATOM.match(tag)
    if not m or m.group("mult"):
        raise LatticeError(f"cannot parse lattice name {tag!r}")
    if m.group("T"):
        L = t_lattice(int(m.group("tp")), int(m.group("tq")), int(m.group("tr")))
    elif m.group("ang"):
        n = int(m.group("n"))
        if n == 0 or n % 2:
            raise LatticeError("<n> needs n even and nonzero")
        L = Lattice([[n]], f"<{n}>")
    else:
        base = re.sub(r"[\s_{}]", "", m.group("base"))
        if base == "U":
            L = U
        elif base == "L9":
            L = L9
        elif base == "M9":
            L = M9
        elif base[0] == "H":
            L = h_lattice(int(base[1:]))
        else:
            L = root_lattice(base[0], int(base[1:]))
    if m.group("tw"):
        L = twist(L, int(m.group("tw")))
    return L


def parse_lattice(expr: str) -> Lattice:
    """Parse ``U + A2 + 2*E8`` style expressions into a direct sum."""
    parts = [p for p in expr.replace("⊕", "+").split("+")]
    if not expr.strip() or any(not p.strip() for p in parts):
        raise LatticeError(f"empty summand in {expr!r}")
    out = []
    for part in parts:
        m = _ATOM.match(part)
        if not m:
            raise LatticeError(f"cannot parse lattice summand {part!r}")
        k = int(m.group("mult") or 1)
        if k < 1:
            raise LatticeError("multiplicity must be positive")
        atom = part.strip()
        if m.group("mult"):
            atom = re.sub(r"^\s*\d+\s*\*?\s*", "", part)
        L = named_lattice(atom)
        out.extend([L] * k)
    return direct_sum(*out) if len(out) > 1 else out[0]


def _gram_of(gram, vectors):
    gv = exact.matmul(vectors, gram)
    return [[sum(a * b for a, b in zip(row, v)) for v in vectors] for row in gv]


def sublattice_from_generators(ambient, vectors):
    """Gram of a maximal independent subset of ``vectors``, chosen greedily.

    ``ambient`` is a Lattice or a (possibly degenerate) symmetric Gram
    matrix in whose coordinates the vectors are written.  Independence is
    tested on the images ``G v``, so vectors that differ by a radical
    element of a degenerate ambient Gram count as equal.
    Returns ``(Lattice, kept_indices)``.
    """
    gram = ambient.gram if isinstance(ambient, Lattice) else ambient
    vectors = [list(v) for v in vectors]
    images = exact.matmul(vectors, gram) if vectors else []
    kept = []
    rk = 0
    for i, img in enumerate(images):
        if not any(img):
            continue
        trial = [images[k] for k in kept] + [img]
        r = exact.rank(trial)
        if r > rk:
            kept.append(i)
            rk = r
    if not kept:
        raise LatticeError("all generators are zero")
    return Lattice(_gram_of(gram, [vectors[k] for k in kept])), kept


def _coordinates(basis, vectors):
    """Rational coordinates of ``vectors`` in the row basis ``basis``."""
    n = len(basis)
    M = exact.transpose(basis)  # columns = basis vectors
    G = exact.matmul(basis, M)  # n x n Gram of the standard dot product
    Ginv = exact.rational_inverse(G)
    out = []
    for v in vectors:
        rhs = [sum(Fraction(a) * b for a, b in zip(row, v)) for row in basis]
        c = [sum(Ginv[i][j] * rhs[j] for j in range(n)) for i in range(n)]
        back = [sum(c[i] * basis[i][k] for i in range(n)) for k in range(len(v))]
        if back != [Fraction(x) for x in v]:
            raise LatticeError("vector is not in the span of the ambient basis")
        out.append(c)
    return out


def is_primitive_sublattice(ambient_basis, sub):
    """True iff ``span(sub)`` is primitive in the lattice spanned by ``ambient_basis``.

    Both are integer vectors in a common coordinate space; ``ambient_basis``
    may be ``None`` for the standard lattice.  Raises if some ``sub``
    vector is not an integral combination of the ambient basis.
    """
    sub = [list(v) for v in sub]
    if ambient_basis is None:
        coords = sub
    else:
        basis = exact.hermite_normal_form(ambient_basis)
        coords = _coordinates(basis, sub)
        if any(x.denominator != 1 for c in coords for x in c):
            raise LatticeError("sublattice is not contained in the ambient lattice")
        coords = [[int(x) for x in c] for c in coords]
    snf = exact.smith_normal_form(coords)
    return all(d in (0, 1) for d in snf.diagonal)
