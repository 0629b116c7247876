"""Brute-force reference routines, written without the library's search code."""

from collections import Counter
from fractions import Fraction
from itertools import product
from math import gcd, prod

from k3mirror import exact


def _elements(q):
    return list(product(*(range(d) for d in q.orders)))


def _order(q, x):
    k = 1
    y = x
    while any(y):
        y = q.add(y, x)
        k += 1
    return k


def _multiples(q, x):
    out = [tuple(0 for _ in q.orders)]
    y = x
    while any(y):
        out.append(y)
        y = q.add(y, x)
    return out


def brute_isomorphic(q1, q2):
    """Exhaustive search for a bijective, value-preserving homomorphism."""
    e1, e2 = _elements(q1), _elements(q2)
    if Counter(_order(q1, x) for x in e1) != Counter(_order(q2, x) for x in e2):
        return False
    n = len(q1.orders)
    if n == 0:
        return True
    gens = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    # largest orders first, so a span collision shows up near the root
    seq = sorted(range(n), key=lambda i: -q1.orders[i])
    cands = {i: [y for y in e2 if _order(q2, y) == _order(q1, gens[i]) and q2.q(y) == q1.q(gens[i])] for i in seq}
    chosen = {}

    def image(x):
        y = tuple(0 for _ in q2.orders)
        for i, c in enumerate(x):
            for _ in range(c):
                y = q2.add(y, chosen[i])
        return y

    def leaf():
        seen = set()
        for x in e1:
            y = image(x)
            if y in seen or q2.q(y) != q1.q(x):
                return False
            seen.add(y)
        return True

    def span_size():
        span = {tuple(0 for _ in q2.orders)}
        for g in chosen.values():
            span = {q2.add(s, t) for s in span for t in _multiples(q2, g)}
        return len(span)

    def rec(k):
        if k == n:
            return leaf()
        i = seq[k]
        for y in cands[i]:
            if all(q2.b(y, chosen[j]) == q1.b(gens[i], gens[j]) for j in seq[:k]):
                chosen[i] = y
                # an injective map must keep the prefix span at full size
                if span_size() == prod(q1.orders[j] for j in seq[: k + 1]) and rec(k + 1):
                    return True
                del chosen[i]
        return False

    return rec(0)


def _frac(v):
    return tuple(x - (x.numerator // x.denominator) for x in v)


def dual_quotient(gram):
    """Coset representatives of ``L*/L`` as rational coordinate vectors in ``[0,1)``."""
    inv = exact.rational_inverse(gram)
    n = len(gram)
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    gens = [_frac(row) for row in inv]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _frac([a + b for a, b in zip(x, g)])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def _subgroups(elems):
    zero = elems[0]

    def close(H, g):
        out = set(H)
        frontier = list(out)
        while frontier:
            nxt = []
            for x in frontier:
                y = _frac([a + b for a, b in zip(x, g)])
                if y not in out:
                    out.add(y)
                    nxt.append(y)
            frontier = nxt
        return frozenset(out)

    seen = {frozenset([zero])}
    frontier = list(seen)
    while frontier:
        nxt = []
        for H in frontier:
            for g in elems:
                if g not in H:
                    K = close(H, g)
                    if K not in seen:
                        seen.add(K)
                        nxt.append(K)
        frontier = nxt
    return seen


def even_overlattices(gram):
    """HNF bases (scaled by the exponent) of every even lattice between ``L`` and ``L*``."""
    n = len(gram)
    elems = dual_quotient(gram)
    D = 1
    for v in elems:
        for x in v:
            D = D * x.denominator // gcd(D, x.denominator)
    found = set()
    for H in _subgroups(elems):
        rows = [[D * int(i == j) for j in range(n)] for i in range(n)]
        rows += [[int(x * D) for x in v] for v in H]
        B = exact.hermite_normal_form(rows)
        G = [[Fraction(sum(B[a][i] * gram[i][j] * B[b][j] for i in range(n) for j in range(n)), D * D)
              for b in range(n)] for a in range(n)]
        if all(x.denominator == 1 for r in G for x in r) and all(G[i][i] % 2 == 0 for i in range(n)):
            found.add(tuple(map(tuple, B)))
    return found
