# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=False
"""Compiled twins of the routines in ``_kernels_py``.

``smith_reduce`` works in 64-bit integers and raises ``OverflowError`` as
soon as an entry leaves the safe range; the caller then falls back to the
arbitrary-precision Python version.
"""

from libc.stdlib cimport malloc, free

cdef long long LIMIT = 1LL << 30


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x) noexcept:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def resolve_mask(Py_ssize_t n_members, a_pairs, b_pairs, long long mask):
    cdef Py_ssize_t n = len(a_pairs)
    cdef Py_ssize_t* parent = <Py_ssize_t*> malloc(max(n_members, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* seen = <Py_ssize_t*> malloc(max(n_members, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t x, p, u, v, ru, rv, r, count = 0
    try:
        for x in range(n_members):
            parent[x] = x
            seen[x] = -1
        for p in range(n):
            pairs = b_pairs[p] if (mask >> p) & 1 else a_pairs[p]
            for pair in pairs:
                u = pair[0]
                v = pair[1]
                ru = _find(parent, u)
                rv = _find(parent, v)
                if ru != rv:
                    parent[ru] = rv
        labels = [0] * n_members
        for x in range(n_members):
            r = _find(parent, x)
            if seen[r] < 0:
                seen[r] = count
                count += 1
            labels[x] = seen[r]
        return tuple(labels), count
    finally:
        free(parent)
        free(seen)


def all_resolutions(Py_ssize_t n_members, a_pairs, b_pairs):
    cdef long long mask
    cdef long long total = 1LL << len(a_pairs)
    return [resolve_mask(n_members, a_pairs, b_pairs, mask) for mask in range(total)]


cdef inline void _check(long long v) except *:
    if v >= LIMIT or v <= -LIMIT:
        raise OverflowError("entry exceeds native range")


cdef class _Work:
    cdef long long[:, :] a
    cdef long long[:, :] p
    cdef long long[:, :] pi
    cdef long long[:, :] q
    cdef long long[:, :] qi
    cdef Py_ssize_t m, n

    cdef void swap_rows(self, Py_ssize_t i, Py_ssize_t j) noexcept:
        cdef Py_ssize_t c
        cdef long long t
        for c in range(self.n):
            t = self.a[i, c]; self.a[i, c] = self.a[j, c]; self.a[j, c] = t
        for c in range(self.m):
            t = self.p[i, c]; self.p[i, c] = self.p[j, c]; self.p[j, c] = t
            t = self.pi[c, i]; self.pi[c, i] = self.pi[c, j]; self.pi[c, j] = t

    cdef void swap_cols(self, Py_ssize_t i, Py_ssize_t j) noexcept:
        cdef Py_ssize_t r
        cdef long long t
        for r in range(self.m):
            t = self.a[r, i]; self.a[r, i] = self.a[r, j]; self.a[r, j] = t
        for r in range(self.n):
            t = self.q[r, i]; self.q[r, i] = self.q[r, j]; self.q[r, j] = t
            t = self.qi[i, r]; self.qi[i, r] = self.qi[j, r]; self.qi[j, r] = t

    cdef void add_row(self, Py_ssize_t dst, Py_ssize_t src, long long k) except *:
        cdef Py_ssize_t c
        _check(k)
        for c in range(self.n):
            if self.a[src, c]:
                self.a[dst, c] += k * self.a[src, c]
                _check(self.a[dst, c])
        for c in range(self.m):
            if self.p[src, c]:
                self.p[dst, c] += k * self.p[src, c]
                _check(self.p[dst, c])
            if self.pi[c, dst]:
                self.pi[c, src] -= k * self.pi[c, dst]
                _check(self.pi[c, src])

    cdef void add_col(self, Py_ssize_t dst, Py_ssize_t src, long long k) except *:
        cdef Py_ssize_t r
        _check(k)
        for r in range(self.m):
            if self.a[r, src]:
                self.a[r, dst] += k * self.a[r, src]
                _check(self.a[r, dst])
        for r in range(self.n):
            if self.q[r, src]:
                self.q[r, dst] += k * self.q[r, src]
                _check(self.q[r, dst])
            if self.qi[dst, r]:
                self.qi[src, r] -= k * self.qi[dst, r]
                _check(self.qi[src, r])

    cdef void negate_row(self, Py_ssize_t i) noexcept:
        cdef Py_ssize_t c
        for c in range(self.n):
            self.a[i, c] = -self.a[i, c]
        for c in range(self.m):
            self.p[i, c] = -self.p[i, c]
            self.pi[c, i] = -self.pi[c, i]


cdef inline long long _floordiv(long long x, long long y):
    # cdivision is off, so // has Python floor semantics
    return x // y


def smith_reduce(a_in):
    import numpy as np
    cdef Py_ssize_t m = len(a_in)
    cdef Py_ssize_t n = len(a_in[0]) if m else 0
    cdef _Work w = _Work()
    cdef Py_ssize_t t = 0, i, j, bi, bj, bad
    cdef long long best, v, piv, k
    cdef bint moved
    for row in a_in:
        for x in row:
            if x >= LIMIT or x <= -LIMIT:
                raise OverflowError("entry exceeds native range")
    w.a = np.array(a_in, dtype=np.int64).reshape(m, n)
    w.p = np.eye(m, dtype=np.int64)
    w.pi = np.eye(m, dtype=np.int64)
    w.q = np.eye(n, dtype=np.int64)
    w.qi = np.eye(n, dtype=np.int64)
    w.m = m
    w.n = n
    while t < min(m, n):
        best = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                v = w.a[i, j]
                if v < 0:
                    v = -v
                if v and (best == 0 or v < best):
                    best = v
                    bi = i
                    bj = j
                    if best == 1:
                        break
            if best == 1:
                break
        if best == 0:
            break
        if bi != t:
            w.swap_rows(t, bi)
        if bj != t:
            w.swap_cols(t, bj)
        while True:
            piv = w.a[t, t]
            moved = False
            for i in range(t + 1, m):
                if w.a[i, t]:
                    k = _floordiv(w.a[i, t], piv)
                    w.add_row(i, t, -k)
                    if w.a[i, t]:
                        w.swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if w.a[t, j]:
                    k = _floordiv(w.a[t, j], piv)
                    w.add_col(j, t, -k)
                    if w.a[t, j]:
                        w.swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if w.a[i, j] % piv:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            w.add_row(t, bad, 1)
        if w.a[t, t] < 0:
            w.negate_row(t)
        t += 1

    def tolist(mv, r, c):
        return [[int(mv[x, y]) for y in range(c)] for x in range(r)]

    return tolist(w.a, m, n), tolist(w.p, m, m), tolist(w.pi, m, m), tolist(w.q, n, n), tolist(w.qi, n, n)
