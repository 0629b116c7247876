"""Exact integer and rational dense linear algebra.

Matrices are plain nested lists (or tuples) of Python ints / Fractions, so
every entry is arbitrary precision.  All functions are pure: inputs are
copied before any in-place work.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

__all__ = [
    "SmithDecomposition",
    "identity",
    "matmul",
    "transpose",
    "determinant",
    "rational_inverse",
    "integer_inverse",
    "smith_normal_form",
    "hermite_normal_form",
    "saturate",
    "rank",
    "signature",
    "is_symmetric",
    "common_denominator",
]


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _copy(M):
    return [list(row) for row in M]


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def is_symmetric(M):
    n = len(M)
    return all(len(row) == n for row in M) and all(
        M[i][j] == M[j][i] for i in range(n) for j in range(i)
    )


def common_denominator(M):
    d = 1
    for row in M:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def determinant(M):
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(M)
    if n == 0:
        return 1
    A = _copy(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rational_inverse(M):
    """Inverse over the rationals; raises ZeroDivisionError if singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def integer_inverse(M):
    """Inverse of a unimodular integer matrix."""
    inv = rational_inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


@dataclass(frozen=True)
class SmithDecomposition:
    """``A @ M @ B == S`` with ``A``, ``B`` unimodular and ``S`` diagonal."""

    S: tuple
    A: tuple
    B: tuple

    @property
    def diagonal(self):
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]


def smith_normal_form(M) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivots are chosen by minimal nonzero absolute value, ties broken by the
    first occurrence in row-major order, so the result is reproducible.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    S = _copy(M)
    A = identity(m)
    B = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        A[i], A[j] = A[j], A[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in B:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        S[dst] = [x + f * y for x, y in zip(S[dst], S[src])]
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]

    def add_col(dst, src, f):
        for row in S:
            row[dst] += f * row[src]
        for row in B:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = S[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(pi, t)
            if pj != t:
                swap_cols(pj, t)
            p = S[t][t]
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    dirty = dirty or S[i][t] != 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    dirty = dirty or S[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            A[t] = [-x for x in A[t]]

    return SmithDecomposition(
        S=tuple(map(tuple, S)), A=tuple(map(tuple, A)), B=tuple(map(tuple, B))
    )


def hermite_normal_form(rows):
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Returns the nonzero rows: upper echelon, positive pivots, entries above
    each pivot reduced into ``[0, pivot)``.  Canonical for the row lattice.
    """
    H = [list(r) for r in rows if any(r)]
    if not H:
        return []
    n = len(H[0])
    out = []
    col = 0
    while H and col < n:
        nz = [r for r in H if r[col]]
        zero = [r for r in H if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [x - q * y for x, y in zip(r, piv)]
                (rest if r[col] else zero).append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        H = [r for r in zero if any(r)]
        col += 1
    for i, row in enumerate(out):
        c = next(j for j, x in enumerate(row) if x)
        for k in range(i):
            q = out[k][c] // row[c]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], row)]
    return out


def rank(M):
    """Rank over the rationals."""
    rows = [[Fraction(x) for x in r] for r in M]
    rk = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        for i in range(rk + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[rk][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def saturate(generators):
    """Basis (in Hermite form) of the primitive closure of the span.

    The primitive closure is ``span_Q(generators) ∩ Z^n``.
    """
    gens = [list(g) for g in generators]
    if not gens:
        return []
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise ValueError("generators must share the ambient rank")
    snf = smith_normal_form(gens)
    r = sum(1 for d in snf.diagonal if d)
    if r == 0:
        return []
    Binv = integer_inverse(snf.B)
    return hermite_normal_form(Binv[:r])


def signature(G):
    """``(t_plus, t_minus, nullity)`` of a symmetric rational matrix.

    Congruence diagonalisation over Q (Sylvester's law of inertia).
    """
    n = len(G)
    A = [[Fraction(x) for x in row] for row in G]
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(
                ((i, j) for i in active for j in active if i != j and A[i][j] != 0),
                None,
            )
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the (i, i) entry 2 A[i][j] != 0
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            piv = i
        p = A[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = A[i][piv] / p
            if f:
                for k in range(n):
                    A[i][k] -= f * A[piv][k]
                for k in range(n):
                    A[k][i] -= f * A[k][piv]
    return pos, neg, n - pos - neg
