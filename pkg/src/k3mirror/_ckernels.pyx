# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled versions of the hot loops; same contracts as ``_pykernels``."""

from ._pykernels import BudgetExceeded

BACKEND = "cython"


def q_values(orders, N, long long mod):
    cdef Py_ssize_t n = len(orders), i, j, k, total = 1
    cdef long long s, t
    cdef long long[32] x
    cdef long long[32] d
    cdef long long[32][32] M
    if n > 32:
        from ._pykernels import q_values as slow
        return slow(orders, N, mod)
    for i in range(n):
        d[i] = orders[i]
        total *= d[i]
        x[i] = 0
        for j in range(n):
            M[i][j] = N[i][j] % mod
    out = [0] * total
    for k in range(total):
        s = 0
        for i in range(n):
            if x[i]:
                t = M[i][i] * x[i]
                for j in range(i + 1, n):
                    t += 2 * M[i][j] * x[j]
                s = (s + (x[i] * (t % mod))) % mod
        out[k] = s % mod
        # lexicographic increment, last coordinate fastest
        i = n - 1
        while i >= 0:
            x[i] += 1
            if x[i] < d[i]:
                break
            x[i] = 0
            i -= 1
    return out


cdef class _Search:
    cdef list cands, elems, target, N2
    cdef long long D, budget, count
    cdef Py_ssize_t k, n
    cdef list chosen, wvec
    cdef object prefix_ok

    def __init__(self, cands, elems, N2, D, target, budget, prefix_ok):
        self.cands = cands
        self.elems = elems
        self.N2 = N2
        self.D = D
        self.target = target
        self.budget = budget
        self.prefix_ok = prefix_ok
        self.k = len(cands)
        self.n = len(N2)
        self.count = 0
        self.chosen = [0] * self.k
        self.wvec = [None] * self.k

    cdef bint rec(self, Py_ssize_t i) except -1:
        cdef Py_ssize_t j, t, a
        cdef long long s, D = self.D
        cdef list ti, w, y, row
        if i == self.k:
            return True
        ti = self.target[i]
        for c in self.cands[i]:
            self.count += 1
            if self.count > self.budget:
                raise BudgetExceeded
            y = self.elems[c]
            ok = True
            for j in range(i):
                w = self.wvec[j]
                s = 0
                for t in range(self.n):
                    s += <long long>y[t] * <long long>w[t]
                s %= D
                if s != <long long>ti[j]:
                    ok = False
                    break
            if not ok:
                continue
            self.chosen[i] = c
            if self.prefix_ok is not None and not self.prefix_ok(self.chosen, i + 1):
                continue
            w = [0] * self.n
            for a in range(self.n):
                row = self.N2[a]
                s = 0
                for t in range(self.n):
                    s += <long long>row[t] * <long long>y[t]
                w[a] = s % D
            self.wvec[i] = w
            if self.rec(i + 1):
                return True
        return False


def iso_backtrack(cands, elems, N2, D, target, budget, prefix_ok=None):
    elems = [list(e) for e in elems]
    N2 = [[int(v) % D for v in row] for row in N2]
    s = _Search(cands, elems, N2, D, target, budget, prefix_ok)
    return list(s.chosen) if s.rec(0) else None
