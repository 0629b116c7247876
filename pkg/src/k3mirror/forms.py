"""Finite quadratic forms: discriminant forms, blocks, isomorphism, signature.

A form lives on ``Z/d_1 x ... x Z/d_k`` (invariant factors, ``d_i | d_{i+1}``)
and is given by a rational Gram matrix ``Q``: ``q(x) = x^T Q x mod 2`` and
``b(x, y) = x^T Q y mod 1``.  Internally values are integer numerators over
the common denominator ``D`` of ``Q``, so ``q`` lives in ``Z/2D`` and ``b``
in ``Z/D``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product
from math import gcd, isqrt, lcm, prod

from . import exact, kernels
from .kernels import BudgetExceeded
from .lattice import Lattice

__all__ = [
    "FiniteQuadraticForm",
    "GeneratorBlock",
    "FormExpression",
    "FormError",
    "UndecidedError",
    "mod2",
    "discriminant_form",
    "discriminant_data",
    "negate",
    "direct_sum",
    "length",
    "p_part",
    "subquotient",
    "block_form",
    "block_decomposition",
    "forms_isomorphic",
    "milgram_signature",
    "parse_form",
    "format_form",
    "DEFAULT_GROUP_BOUND",
    "DEFAULT_BUDGET",
]

DEFAULT_GROUP_BOUND = 10**6
DEFAULT_BUDGET = 2_000_000


class FormError(ValueError):
    pass


class UndecidedError(RuntimeError):
    """The isomorphism search ran out of budget; no answer is claimed."""


def mod2(Q):
    """Reduce a rational Gram: diagonal into ``[0, 2)``, off-diagonal into ``[0, 1)``."""
    out = []
    for i, row in enumerate(Q):
        r = []
        for j, x in enumerate(row):
            x = Fraction(x)
            r.append(x % 2 if i == j else x % 1)
        out.append(tuple(r))
    return tuple(out)


def _prime_factors(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@dataclass(frozen=True)
class FiniteQuadraticForm:
    """Nikulin-style finite quadratic form in invariant-factor coordinates.

    Passing arbitrary generator orders (including 1 or a non-chain) is
    allowed; the constructor recanonicalises to invariant factors.
    """

    orders: tuple
    gram: tuple
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        gram = tuple(tuple(Fraction(x) for x in row) for row in self.gram)
        if len(gram) != len(orders) or any(len(r) != len(orders) for r in gram):
            raise FormError("Gram size must match the number of generators")
        if not exact.is_symmetric(gram):
            raise FormError("Gram must be symmetric")
        if any(d < 1 for d in orders):
            raise FormError("generator orders must be positive")
        if self.check:
            for i, d in enumerate(orders):
                if (d * d * gram[i][i]) % 2 or any((d * x).denominator != 1 for x in gram[i]):
                    raise FormError(f"Gram is not well defined on Z/{d} (generator {i})")
        chain = all(d > 1 for d in orders) and all(
            orders[i + 1] % orders[i] == 0 for i in range(len(orders) - 1)
        )
        if not chain:
            orders, gram = _recanonicalise(orders, gram)
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "gram", mod2(gram))

    # -- basic invariants ------------------------------------------------
    @property
    def ngens(self):
        return len(self.orders)

    @cached_property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.orders, 1)

    @cached_property
    def D(self) -> int:
        return exact.common_denominator(self.gram) if self.gram else 1

    @cached_property
    def N(self):
        """Integer Gram ``D * Q``."""
        return tuple(tuple(int(x * self.D) for x in row) for row in self.gram)

    def is_trivial(self):
        return self.order == 1

    # -- elements --------------------------------------------------------
    def elements(self, bound=DEFAULT_GROUP_BOUND):
        if self.order > bound:
            raise BudgetExceeded(f"group of order {self.order} exceeds bound {bound}")
        return list(product(*(range(d) for d in self.orders)))

    def q(self, x) -> Fraction:
        s = sum(x[i] * x[j] * self.gram[i][j] for i in range(self.ngens) for j in range(self.ngens))
        return Fraction(s) % 2

    def b(self, x, y) -> Fraction:
        s = sum(x[i] * y[j] * self.gram[i][j] for i in range(self.ngens) for j in range(self.ngens))
        return Fraction(s) % 1

    def element_order(self, x) -> int:
        return reduce(lcm, (d // gcd(xi, d) for xi, d in zip(x, self.orders)), 1)

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def q_numerators(self, D=None, bound=DEFAULT_GROUP_BOUND):
        """``q(x) * D mod 2D`` for all elements in lexicographic order."""
        D = D or self.D
        if D % self.D:
            raise ValueError("D must be a multiple of the form's denominator")
        if self.order > bound:
            raise BudgetExceeded(f"group of order {self.order} exceeds bound {bound}")
        f = D // self.D
        N = [[x * f for x in row] for row in self.N]
        return kernels.q_values(list(self.orders), N, 2 * D)

    def element_orders(self):
        return [self.element_order(x) for x in self.elements()]

    @cached_property
    def nondegenerate(self):
        """True iff ``b`` is nondegenerate."""
        D = self.D
        for x in self.elements():
            if any(x) and all(
                sum(x[i] * self.N[i][j] for i in range(self.ngens)) % D == 0
                for j in range(self.ngens)
            ):
                return False
        return True

    def value_fingerprint(self, D=None):
        D = D or self.D
        return Counter(zip(self.element_orders(), self.q_numerators(D)))

    def __neg__(self):
        return negate(self)

    def __add__(self, other):
        return direct_sum(self, other)

    def __str__(self):
        if self.is_trivial():
            return "<0>"
        g = "; ".join(" ".join(str(x) for x in row) for row in self.gram)
        return f"FQF(orders={list(self.orders)}, gram=[{g}])"


def _recanonicalise(orders, gram):
    n = len(orders)
    if n == 0:
        return (), ()
    snf = exact.smith_normal_form([[orders[i] if i == j else 0 for j in range(n)] for i in range(n)])
    # with P diag(o) Q = S the new generator j is P^{-1} e_j in old coordinates
    Pinv = exact.integer_inverse(snf.A)
    diag = snf.diagonal
    keep = [j for j in range(n) if diag[j] != 1]
    cols = [[Pinv[i][j] for i in range(n)] for j in keep]
    new = [[sum(u[a] * gram[a][b] * v[b] for a in range(n) for b in range(n)) for v in cols] for u in cols]
    return tuple(diag[j] for j in keep), tuple(map(tuple, new))


TRIVIAL = FiniteQuadraticForm((), ())


# ---------------------------------------------------------------------------
# construction from lattices

def discriminant_data(L: Lattice):
    """``(q_L, lifts)``: the discriminant form and rational lifts in ``L*``.

    Generator ``i`` of ``A_L`` is the class of ``lifts[i]`` (coordinates in
    the basis of ``L``).
    """
    G = [list(r) for r in (L.gram if isinstance(L, Lattice) else L)]
    n = len(G)
    if exact.determinant(G) == 0:
        raise FormError("degenerate Gram matrix")
    snf = exact.smith_normal_form(G)
    diag = snf.diagonal
    idx = [i for i in range(n) if diag[i] not in (0, 1)]
    lifts = [[Fraction(snf.B[r][i], diag[i]) for r in range(n)] for i in idx]
    Q = [[sum(u[a] * G[a][b] * v[b] for a in range(n) for b in range(n)) for v in lifts] for u in lifts]
    return FiniteQuadraticForm(tuple(diag[i] for i in idx), Q), lifts


def discriminant_form(L) -> FiniteQuadraticForm:
    return discriminant_data(L)[0]


# ---------------------------------------------------------------------------
# algebra on forms

def negate(q: FiniteQuadraticForm) -> FiniteQuadraticForm:
    return FiniteQuadraticForm(q.orders, [[-x for x in row] for row in q.gram])


def direct_sum(*forms: FiniteQuadraticForm) -> FiniteQuadraticForm:
    orders = [d for f in forms for d in f.orders]
    n = len(orders)
    g = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for f in forms:
        for i in range(f.ngens):
            for j in range(f.ngens):
                g[off + i][off + j] = f.gram[i][j]
        off += f.ngens
    return FiniteQuadraticForm(tuple(orders), g)


def length(q: FiniteQuadraticForm) -> int:
    """Minimal number of generators of the group."""
    return q.ngens


def subquotient(q: FiniteQuadraticForm, sub, kill=()):
    """Form on ``<sub> / <kill>`` (``kill`` must lie in ``sub`` and be orthogonal to it).

    Both arguments are lists of group elements.  The result carries the
    restriction of ``q``; it is well defined only when ``kill`` is isotropic
    and orthogonal to ``sub`` (not re-checked here beyond well-definedness).
    """
    n = q.ngens
    if n == 0:
        return TRIVIAL
    lat = [[q.orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
    basis = exact.hermite_normal_form([list(s) for s in sub] + lat)
    if len(basis) != n:
        raise FormError("internal error: subgroup preimage has wrong rank")
    killers = [list(k) for k in kill] + lat
    Binv = exact.rational_inverse(basis)
    coords = [[sum(Fraction(k[a]) * Binv[a][j] for a in range(n)) for j in range(n)] for k in killers]
    if any(x.denominator != 1 for row in coords for x in row):
        raise FormError("kill set is not contained in sub")
    coords = [[int(x) for x in row] for row in coords]
    snf = exact.smith_normal_form(coords)
    # x -> x Bm sends the row span of coords onto that of S
    Bm_inv = exact.integer_inverse(snf.B)
    diag = snf.diagonal
    gens = exact.matmul(Bm_inv, basis)
    keep = [i for i in range(n) if diag[i] != 1]
    vecs = [gens[i] for i in keep]
    Q = [[sum(u[a] * q.gram[a][b] * v[b] for a in range(n) for b in range(n)) for v in vecs] for u in vecs]
    return FiniteQuadraticForm(tuple(diag[i] for i in keep), Q)


def p_part(q: FiniteQuadraticForm, p: int) -> FiniteQuadraticForm:
    """Restriction of ``q`` to the Sylow ``p``-subgroup."""
    gens = []
    for i, d in enumerate(q.orders):
        m = d
        while m % p == 0:
            m //= p
        e = [0] * q.ngens
        e[i] = m % d
        gens.append(tuple(e))
    return subquotient(q, gens)


def orthogonal_complement(q, elems, elements=None):
    """All group elements orthogonal to every element of ``elems``."""
    elements = elements if elements is not None else q.elements()
    return [y for y in elements if all(q.b(x, y) == 0 for x in elems)]


# ---------------------------------------------------------------------------
# generator blocks and expressions

_EPS2 = {1: 1, 3: -5, 5: 5, 7: -1}


def _normalise_eps(p, k, e):
    if p == 2:
        if e % 2 == 0:
            raise FormError("epsilon must be odd for p = 2")
        if k == 1:
            return 1 if e % 4 == 1 else -1
        return _EPS2[e % 8]
    if e not in (1, -1):
        raise FormError("epsilon must be +1 or -1 for odd p")
    return e


def _odd_numerator(p, e):
    a = 2
    while _legendre(a, p) != e:
        a += 2
    return a


@dataclass(frozen=True)
class GeneratorBlock:
    """One of ``w(p,k,e)``, ``u(k)``, ``v(k)``; ``e`` is stored normalised."""

    kind: str
    p: int = 2
    k: int = 1
    eps: int = 1

    def __post_init__(self):
        if self.kind not in ("w", "u", "v"):
            raise FormError(f"unknown block kind {self.kind!r}")
        if self.k < 1:
            raise FormError("k must be >= 1")
        if self.kind == "w":
            if self.p < 2 or len(_prime_factors(self.p)) != 1 or _prime_factors(self.p)[0] != self.p:
                raise FormError(f"{self.p} is not prime")
            object.__setattr__(self, "eps", _normalise_eps(self.p, self.k, self.eps))
        elif self.p != 2:
            raise FormError("u and v blocks live on 2-groups")

    def form(self) -> FiniteQuadraticForm:
        return block_form(self)

    def __str__(self):
        if self.kind == "w":
            return f"w({self.p},{self.k},{self.eps})"
        return self.kind if self.k == 1 else f"{self.kind}({self.k})"


def block_form(block: GeneratorBlock) -> FiniteQuadraticForm:
    k = block.k
    if block.kind == "w":
        p = block.p
        num = block.eps if p == 2 else _odd_numerator(p, block.eps)
        return FiniteQuadraticForm((p**k,), [[Fraction(num, p**k)]])
    t = Fraction(1, 2**k)
    if block.kind == "u":
        return FiniteQuadraticForm((2**k, 2**k), [[0, t], [t, 0]])
    return FiniteQuadraticForm((2**k, 2**k), [[2 * t, t], [t, 2 * t]])


@dataclass(frozen=True)
class FormExpression:
    """A direct sum of generator blocks with multiplicities, as written."""

    terms: tuple  # of (multiplicity, GeneratorBlock)
    notes: tuple = field(default=(), compare=False)

    def form(self) -> FiniteQuadraticForm:
        parts = [b.form() for m, b in self.terms for _ in range(m)]
        return direct_sum(*parts) if parts else TRIVIAL

    def blocks(self):
        return [b for m, b in self.terms for _ in range(m)]

    def __str__(self):
        return format_form(self)


_TERM = re.compile(
    r"""^(?P<mult>\d+)?\s*\*?\s*(?:
        (?P<w>[wω])\s*(?:
            \(\s*(?P<p1>\d+)\s*,\s*(?P<k1>\d+)\s*,\s*(?P<e1>[+-]?\d+)\s*\)
          | _\s*\{\s*(?P<p2>\d+)\s*,\s*(?P<k2>\d+)\s*\}\s*\^\s*(?:\{\s*(?P<e2>[+-]?\d+)\s*\}|(?P<e3>[+-]?\d+))
        )
      | (?P<uv>[uv])\s*(?:\(\s*(?P<k3>\d+)\s*\)|_\s*\{?\s*(?P<k4>\d+)\s*\}?)?
    )$""",
    re.VERBOSE,
)


def parse_form(text: str) -> FormExpression:
    """Parse e.g. ``v + 4w(2,1,-1)``, ``2w_{2,1}^{-1}⊕w_{3,1}^1``, ``<0>``."""
    s = text.strip().replace("\\oplus", "+").replace("⊕", "+")
    if s in ("<0>", "triv", "trivial", "0"):
        return FormExpression(())
    if not s:
        raise FormError("empty form expression")
    terms = []
    notes = []
    for part in s.split("+"):
        part = part.strip()
        m = _TERM.match(part)
        if not m:
            raise FormError(f"cannot parse form term {part!r}")
        mult = int(m.group("mult") or 1)
        if mult < 1:
            raise FormError("multiplicity must be positive")
        if m.group("w"):
            p = int(m.group("p1") or m.group("p2"))
            k = int(m.group("k1") or m.group("k2"))
            e = int(m.group("e1") or m.group("e2") or m.group("e3"))
            blk = GeneratorBlock("w", p, k, e)
            if blk.eps != e:
                notes.append(f"w({p},{k},{e}) normalised to {blk}")
        else:
            k = int(m.group("k3") or m.group("k4") or 1)
            blk = GeneratorBlock(m.group("uv"), 2, k)
        terms.append((mult, blk))
    return FormExpression(tuple(terms), tuple(notes))


def format_form(expr) -> str:
    """Canonical text of an expression, a list of blocks or a form (decomposed first)."""
    if isinstance(expr, FiniteQuadraticForm):
        expr = block_decomposition(expr)
    if isinstance(expr, FormExpression):
        terms = expr.terms
    else:
        c = Counter(expr)
        terms = tuple((c[b], b) for b in sorted(c, key=_block_key))
    if not terms:
        return "<0>"
    return " + ".join((f"{m}{b}" if m > 1 else str(b)) for m, b in terms)


def _block_key(b):
    return (b.p, b.kind, b.k, -b.eps)


# ---------------------------------------------------------------------------
# isomorphism

def forms_isomorphic(q1, q2, budget=DEFAULT_BUDGET, bound=DEFAULT_GROUP_BOUND) -> bool:
    """Exact decision of ``q1 ≅ q2`` (group isomorphism preserving ``q``).

    Invariant factors, then order/value fingerprints, then a pruned
    backtracking search for the images of the generators.  Raises
    :class:`UndecidedError` if the search exceeds ``budget`` nodes.
    """
    if isinstance(q1, FormExpression):
        q1 = q1.form()
    if isinstance(q2, FormExpression):
        q2 = q2.form()
    if q1.orders != q2.orders:
        return False
    if q1.order == 1:
        return True
    if q1.order > bound:
        raise UndecidedError(f"group order {q1.order} exceeds bound {bound}")
    return find_isomorphism(q1, q2, budget) is not None


def find_isomorphism(q1, q2, budget=DEFAULT_BUDGET):
    """Images of ``q1``'s generators in ``q2`` (element tuples) or ``None``."""
    if q1.orders != q2.orders:
        return None
    if q1.order == 1:
        return []
    D = lcm(q1.D, q2.D)
    ords1 = q1.element_orders()
    ords2 = q2.element_orders()
    vals1 = q1.q_numerators(D)
    vals2 = q2.q_numerators(D)
    if Counter(zip(ords1, vals1)) != Counter(zip(ords2, vals2)):
        return None
    elems2 = q2.elements()
    buckets = {}
    for idx, key in enumerate(zip(ords2, vals2)):
        buckets.setdefault(key, []).append(idx)
    n = q1.ngens
    gens1 = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    f1 = D // q1.D
    N1 = [[x * f1 for x in row] for row in q1.N]
    f2 = D // q2.D
    N2 = [[x * f2 for x in row] for row in q2.N]
    # largest orders first: a collision in the span shows up near the root
    seq = sorted(range(n), key=lambda i: -q1.orders[i])
    gidx = [_index(gens1[i], q1.orders) for i in seq]
    cands = [buckets.get((ords1[i], vals1[i]), []) for i in gidx]
    target = [[N1[seq[a]][seq[b]] % D for b in range(a)] for a in range(n)]
    prefix_ok = None
    if not q1.nondegenerate:
        # pairings no longer force injectivity; the first m images must span
        # a subgroup as large as the first m generators do
        sizes = [prod(q1.orders[i] for i in seq[:m]) for m in range(n + 1)]

        def prefix_ok(chosen, m):
            return len(_closure(q2, [elems2[c] for c in chosen[:m]])) == sizes[m]
    try:
        res = kernels.iso_backtrack(cands, elems2, N2, D, target, budget, prefix_ok)
    except BudgetExceeded as exc:
        raise UndecidedError(f"isomorphism search exceeded budget {budget}") from exc
    if res is None:
        return None
    images = [None] * n
    for a, i in enumerate(seq):
        images[i] = elems2[res[a]]
    return images


def _index(x, orders):
    idx = 0
    for xi, d in zip(x, orders):
        idx = idx * d + xi
    return idx


def _closure(q, gens):
    seen = {tuple([0] * q.ngens)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = q.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# decomposition into generator blocks

def _full_order(val, order):
    """True iff the residue ``val`` (a Fraction mod 1) has additive order ``order``."""
    return (val % 1).denominator == order


def block_decomposition(q: FiniteQuadraticForm, verify=True):
    """A list of :class:`GeneratorBlock` whose sum is isomorphic to ``q``.

    Not canonical.  Requires a nondegenerate form.
    """
    if isinstance(q, FormExpression):
        q = q.form()
    blocks = []
    for p in _prime_factors(q.order):
        blocks.extend(_decompose_p(p_part(q, p), p))
    if verify:
        total = direct_sum(*(b.form() for b in blocks)) if blocks else TRIVIAL
        if not forms_isomorphic(total, q):
            raise FormError("block decomposition failed to reproduce the form")
    return blocks


def _decompose_p(q, p):
    out = []
    while not q.is_trivial():
        elems = q.elements()
        by_order = sorted(elems, key=lambda x: -q.element_order(x))
        single = None
        for x in by_order:
            o = q.element_order(x)
            if o > 1 and _full_order(q.q(x), o):
                single = x
                break
        if single is not None:
            o = q.element_order(single)
            k = o.bit_length() - 1 if p == 2 else _log(o, p)
            c = q.q(single) * o  # q(x) = c / p^k mod 2
            c = int(c) % (2 * o)
            if p != 2:
                if c % 2:
                    c += o
                eps = _legendre(c, p)
            else:
                eps = c
            out.append(GeneratorBlock("w", p, k, eps))
            q = subquotient(q, orthogonal_complement(q, [single], elems))
            continue
        if p != 2:
            raise FormError("odd part without a splitting element; form is degenerate")
        x = by_order[0]
        o = q.element_order(x)
        y = next((y for y in by_order if q.element_order(y) == o and _full_order(q.b(x, y), o)), None)
        if o == 1 or y is None:
            raise FormError("2-part cannot be split; form is degenerate")
        k = o.bit_length() - 1
        pair = FiniteQuadraticForm((o, o), [[q.q(x), q.b(x, y)], [q.b(x, y), q.q(y)]])
        for kind in ("u", "v"):
            blk = GeneratorBlock(kind, 2, k)
            if forms_isomorphic(pair, blk.form()):
                out.append(blk)
                break
        else:
            raise FormError("rank-2 block is neither u nor v")
        q = subquotient(q, orthogonal_complement(q, [x, y], elems))
    return out


def _log(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Gauss sums in cyclotomic fields

_PHI = {}


def _polydiv_exact(a, b):
    """Exact quotient of integer polynomials (lists, lowest degree first)."""
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    if any(a):
        raise ArithmeticError("non-exact polynomial division")
    return out


def cyclotomic_polynomial(n):
    if n not in _PHI:
        num = [-1] + [0] * (n - 1) + [1]
        for d in range(1, n):
            if n % d == 0:
                num = _polydiv_exact(num, cyclotomic_polynomial(d))
        _PHI[n] = num
    return _PHI[n]


def _reduce(coeffs, M):
    """Reduce a polynomial in ``zeta_M`` modulo the cyclotomic polynomial."""
    phi = cyclotomic_polynomial(M)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            for j in range(deg + 1):
                c[i - deg + j] -= t * phi[j]
    return c[:deg] + [0] * max(0, deg - len(c))


def _mul(a, b, M):
    out = [0] * (len(a) + len(b))
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _reduce(out, M)


def gauss_sum(q, M):
    """``sum_a exp(pi i q(a))`` as a reduced element of ``Z[zeta_M]``; ``2D | M``."""
    D = M // 2
    counts = [0] * M
    for v in q.q_numerators(D):
        counts[v] += 1
    return _reduce(counts, M)


def milgram_signature(q) -> int:
    """``sign q mod 8`` from the exact Gauss sum ``|A|^{1/2} zeta_8^{sign}``."""
    if isinstance(q, FormExpression):
        q = q.form()
    n = q.order
    if n == 1:
        return 0
    sq = [p for p in _prime_factors(n) if _vp(n, p) % 2]
    m = reduce(lambda a, b: a * b, sq, 1)
    s = isqrt(n // m)
    M = lcm(2 * q.D, 8, *(2 * p for p in sq))
    total = gauss_sum(q, M)
    shift = 0
    for p in sq:
        aux = FiniteQuadraticForm((p,), [[Fraction(-(p - 1), p)]])
        total = _mul(total, gauss_sum(aux, M), M)
        shift += p - 1
    k = s * m
    for t in range(8):
        e = [0] * M
        e[(M // 8) * t] = k
        if _reduce(e, M) == total:
            return (t + shift) % 8
    raise ArithmeticError("Gauss sum is not of the expected shape")


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
