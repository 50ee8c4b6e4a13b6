"""Smith normal form over Z with left-transform tracking.

Used for quotient structure, canonical direct sums, and abstracting a
subgroup into invariant-factor form.  Matrices here are tiny (rank of a
group, at most a couple dozen), so this stays in arbitrary-precision Python
integers; the hot column-Hermite path lives in the kernel instead.
"""


def smith_normal_form(mat):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns ``(diag, U, Uinv)`` with ``U @ mat @ V == diag(s)`` for some
    unimodular ``V`` (not returned), ``s[0] | s[1] | ...`` non-negative, and
    ``U @ Uinv == I``.
    """
    a = [list(row) for row in mat]
    r = len(a)
    c = len(a[0]) if r else 0
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    uinv = [[int(i == j) for j in range(r)] for i in range(r)]

    def row_sub(i, j, q):
        # row_i -= q * row_j ; inverse transform: col_j += q * col_i
        ai, aj = a[i], a[j]
        for k in range(c):
            ai[k] -= q * aj[k]
        ui, uj = u[i], u[j]
        for k in range(r):
            ui[k] -= q * uj[k]
        for k in range(r):
            uinv[k][j] += q * uinv[k][i]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        for k in range(r):
            uinv[k][i], uinv[k][j] = uinv[k][j], uinv[k][i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for k in range(r):
            uinv[k][i] = -uinv[k][i]

    def col_sub(i, j, q):
        for row in a:
            row[i] -= q * row[j]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]

    n = min(r, c)
    for t in range(n):
        while True:
            # Move a minimal nonzero entry of the trailing block to (t, t).
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    v = abs(a[i][j])
                    if v and (best is None or v < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            bi, bj = best
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            if a[t][t] < 0:
                row_neg(t)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                q = a[i][t] // p
                if q:
                    row_sub(i, t, q)
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, c):
                q = a[t][j] // p
                if q:
                    col_sub(j, t, q)
                if a[t][j]:
                    dirty = True
            if dirty:
                continue
            # Pivot divides every remaining entry, or absorb a bad row.
            ok = True
            for i in range(t + 1, r):
                for j in range(t + 1, c):
                    if a[i][j] % p:
                        row_sub(t, i, -1)
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                break

    diag = [a[t][t] for t in range(n)]
    return diag, [tuple(row) for row in u], [tuple(row) for row in uinv]
