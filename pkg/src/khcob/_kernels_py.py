"""Pure-Python kernels: resolution circles and Smith reduction.

This module is the reference implementation; ``_kernels.pyx`` mirrors it
function for function.
"""


def resolve_mask(n_members, a_pairs, b_pairs, mask):
    """Circle label for every member under the marker distribution ``mask``.

    Bit ``p`` of ``mask`` set means crossing ``p`` carries a negative
    marker. ``a_pairs[p]``/``b_pairs[p]`` hold the two member-index pairs
    joined by the positive/negative smoothing. Labels are numbered by first
    appearance in member order. Returns ``(labels, n_circles)``.
    """
    parent = list(range(n_members))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in range(len(a_pairs)):
        pairs = b_pairs[p] if (mask >> p) & 1 else a_pairs[p]
        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
    labels = [0] * n_members
    seen = {}
    for x in range(n_members):
        r = find(x)
        if r not in seen:
            seen[r] = len(seen)
        labels[x] = seen[r]
    return tuple(labels), len(seen)


def all_resolutions(n_members, a_pairs, b_pairs):
    n = len(a_pairs)
    return [resolve_mask(n_members, a_pairs, b_pairs, mask) for mask in range(1 << n)]


def smith_reduce(a):
    """Smith reduction of a dense integer matrix (list of lists, copied).

    Returns ``(s, p, p_inv, q, q_inv)`` with ``p @ a @ q == s``, ``s``
    diagonal with nonnegative entries forming a divisibility chain.
    Pivots are chosen of minimal absolute value.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    a = [list(row) for row in a]
    p = [[int(i == j) for j in range(m)] for i in range(m)]
    p_inv = [[int(i == j) for j in range(m)] for i in range(m)]
    q = [[int(i == j) for j in range(n)] for i in range(n)]
    q_inv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        p[i], p[j] = p[j], p[i]
        for row in p_inv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in q:
            row[i], row[j] = row[j], row[i]
        q_inv[i], q_inv[j] = q_inv[j], q_inv[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        ad, asr = a[dst], a[src]
        for c in range(n):
            if asr[c]:
                ad[c] += k * asr[c]
        pd, ps = p[dst], p[src]
        for c in range(m):
            if ps[c]:
                pd[c] += k * ps[c]
        for row in p_inv:
            if row[dst]:
                row[src] -= k * row[dst]

    def add_col(dst, src, k):
        # col_dst += k * col_src
        for row in a:
            if row[src]:
                row[dst] += k * row[src]
        for row in q:
            if row[src]:
                row[dst] += k * row[src]
        qs, qd = q_inv[src], q_inv[dst]
        for c in range(n):
            if qd[c]:
                qs[c] -= k * qd[c]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        p[i] = [-x for x in p[i]]
        for row in p_inv:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            piv = a[t][t]
            moved = False
            for i in range(t + 1, m):
                if a[i][t]:
                    k = a[i][t] // piv
                    add_row(i, t, -k)
                    if a[i][t]:
                        swap_rows(t, i)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    k = a[t][j] // piv
                    add_col(j, t, -k)
                    if a[t][j]:
                        swap_cols(t, j)
                        moved = True
                        break
            if moved:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return a, p, p_inv, q, q_inv
