"""Pure-Python versions of the hot loops (reference implementation)."""

from itertools import product

BACKEND = "python"


class BudgetExceeded(Exception):
    pass


def q_values(orders, N, mod):
    """``x^T N x mod mod`` for every ``x`` of the group, in lexicographic order."""
    n = len(orders)
    out = []
    for x in product(*(range(d) for d in orders)):
        s = 0
        for i in range(n):
            xi = x[i]
            if xi:
                row = N[i]
                t = row[i] * xi
                for j in range(i + 1, n):
                    t += 2 * row[j] * x[j]
                s += xi * t
        out.append(s % mod)
    return out


def iso_backtrack(cands, elems, N2, D, target, budget, prefix_ok=None):
    """Map generators ``i`` to elements of ``cands[i]`` matching ``target`` pairings.

    ``target[i][j]`` (``j < i``) is the required value of ``y_i^T N2 y_j mod D``.
    ``prefix_ok(chosen, m)``, if given, vets the first ``m`` choices after
    each extension.  Returns the chosen element indices, or ``None`` if no
    assignment exists.  Raises :class:`BudgetExceeded` after ``budget``
    visited nodes.
    """
    k = len(cands)
    n = len(N2)
    chosen = [0] * k
    wvec = [None] * k
    count = 0

    def rec(i):
        nonlocal count
        if i == k:
            return True
        ti = target[i]
        for c in cands[i]:
            count += 1
            if count > budget:
                raise BudgetExceeded
            y = elems[c]
            ok = True
            for j in range(i):
                w = wvec[j]
                if sum(y[t] * w[t] for t in range(n)) % D != ti[j]:
                    ok = False
                    break
            if not ok:
                continue
            chosen[i] = c
            if prefix_ok is not None and not prefix_ok(chosen, i + 1):
                continue
            wvec[i] = [sum(N2[a][b] * y[b] for b in range(n)) for a in range(n)]
            if rec(i + 1):
                return True
        return False

    return list(chosen) if rec(0) else None
