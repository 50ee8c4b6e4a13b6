# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel: integer column reduction and F_p matrix primitives.

Same contract as ``_pure``; entries are kept reduced by the per-row moduli,
which bounds everything by the order cap and keeps the arithmetic inside
64-bit words (guarded: inputs that could overflow raise NeedsBigInts and the
caller falls back to the pure implementation).
"""

from libc.stdlib cimport malloc, free

BACKEND = "compiled"

DEF MOD_LIMIT = 1 << 20
DEF BM_LIMIT = 1 << 40


class NeedsBigInts(Exception):
    """Raised when word-size safety margins would be violated."""


def hnf_kernel(mods, cols, nbottom, bottom_mod):
    cdef Py_ssize_t r = len(mods)
    cdef Py_ssize_t nb = nbottom
    cdef Py_ssize_t total = r + nb
    cdef long long bm = bottom_mod if bottom_mod > 0 else 1
    cdef Py_ssize_t ncols_in = len(cols)
    cdef Py_ssize_t cap = ncols_in + r
    cdef Py_ssize_t i, j, k, t, idx, nlive, mpos, cnt, pi, pj
    cdef long long q, mv, val, d

    if bm > BM_LIMIT:
        raise NeedsBigInts("carried-block modulus too large for the compiled kernel")

    cdef long long *dmod = <long long *> malloc(r * sizeof(long long))
    cdef long long *buf = NULL
    cdef Py_ssize_t *live = NULL
    cdef Py_ssize_t *piv = NULL
    if dmod == NULL:
        raise MemoryError()
    try:
        for i in range(r):
            d = mods[i]
            if d > MOD_LIMIT:
                raise NeedsBigInts("row modulus too large for the compiled kernel")
            dmod[i] = d
        if cap == 0:
            cap = 1
        buf = <long long *> malloc(cap * total * sizeof(long long))
        live = <Py_ssize_t *> malloc(cap * sizeof(Py_ssize_t))
        piv = <Py_ssize_t *> malloc((r if r else 1) * sizeof(Py_ssize_t))
        if buf == NULL or live == NULL or piv == NULL:
            raise MemoryError()

        nlive = 0
        idx = 0
        for col in cols:
            t = 0
            cnt = 0
            for v in col:
                val = v
                if t < r:
                    val = val % dmod[t]
                    if val < 0:
                        val += dmod[t]
                else:
                    val = val % bm
                    if val < 0:
                        val += bm
                buf[idx * total + t] = val
                if val != 0:
                    cnt += 1
                t += 1
            if cnt:
                live[nlive] = idx
                nlive += 1
                idx += 1
        # rows: Euclid at row i against the fresh relation column
        for i in range(r):
            # fresh relation column d_i * e_i
            for t in range(total):
                buf[idx * total + t] = 0
            buf[idx * total + i] = dmod[i]
            live[nlive] = idx
            nlive += 1
            idx += 1
            while True:
                cnt = 0
                mpos = -1
                mv = 0
                for j in range(nlive):
                    val = buf[live[j] * total + i]
                    if val != 0:
                        cnt += 1
                        if mpos < 0 or val < mv:
                            mpos = j
                            mv = val
                if cnt <= 1:
                    break
                pi = live[mpos]
                for j in range(nlive):
                    if j == mpos:
                        continue
                    pj = live[j]
                    val = buf[pj * total + i]
                    if val == 0:
                        continue
                    q = val / mv
                    buf[pj * total + i] = val - q * mv
                    for k in range(i + 1, r):
                        val = (buf[pj * total + k] - q * buf[pi * total + k]) % dmod[k]
                        if val < 0:
                            val += dmod[k]
                        buf[pj * total + k] = val
                    for k in range(r, total):
                        val = (buf[pj * total + k] - q * buf[pi * total + k]) % bm
                        if val < 0:
                            val += bm
                        buf[pj * total + k] = val
            mpos = -1
            for j in range(nlive):
                if buf[live[j] * total + i] != 0:
                    mpos = j
                    break
            piv[i] = live[mpos]
            for j in range(mpos, nlive - 1):
                live[j] = live[j + 1]
            nlive -= 1
            pi = piv[i]
            for k in range(i + 1, r):
                val = buf[pi * total + k] % dmod[k]
                if val < 0:
                    val += dmod[k]
                buf[pi * total + k] = val
        # off-diagonal normalization
        for i in range(r):
            pi = piv[i]
            mv = buf[pi * total + i]
            for j in range(i):
                pj = piv[j]
                q = buf[pj * total + i] / mv
                if q:
                    buf[pj * total + i] -= q * mv
                    for k in range(i + 1, r):
                        val = (buf[pj * total + k] - q * buf[pi * total + k]) % dmod[k]
                        if val < 0:
                            val += dmod[k]
                        buf[pj * total + k] = val

        hrows = []
        for i in range(r):
            hrow = []
            for j in range(r):
                hrow.append(buf[piv[j] * total + i])
            hrows.append(tuple(hrow))
        kernels = []
        if nb:
            for j in range(nlive):
                pj = live[j]
                cnt = 0
                for k in range(r, total):
                    if buf[pj * total + k] != 0:
                        cnt = 1
                        break
                if cnt:
                    kvec = []
                    for k in range(r, total):
                        kvec.append(buf[pj * total + k])
                    kernels.append(tuple(kvec))
        return tuple(hrows), kernels
    finally:
        free(dmod)
        if buf != NULL:
            free(buf)
        if live != NULL:
            free(live)
        if piv != NULL:
            free(piv)


def box_reduce(mods, hrows, vec):
    cdef Py_ssize_t r = len(mods)
    cdef Py_ssize_t i, k
    cdef long long q, val
    if r == 0:
        return ()
    cdef long long *w = <long long *> malloc(r * sizeof(long long))
    cdef long long *h = <long long *> malloc(r * r * sizeof(long long))
    cdef long long *dmod = <long long *> malloc(r * sizeof(long long))
    if w == NULL or h == NULL or dmod == NULL:
        raise MemoryError()
    try:
        for i in range(r):
            dmod[i] = mods[i]
            if dmod[i] > MOD_LIMIT:
                raise NeedsBigInts("row modulus too large")
            row = hrows[i]
            for k in range(r):
                h[i * r + k] = row[k]
            val = vec[i] % dmod[i]
            if val < 0:
                val += dmod[i]
            w[i] = val
        for i in range(r):
            q = w[i] / h[i * r + i]
            if q:
                w[i] -= q * h[i * r + i]
                for k in range(i + 1, r):
                    val = (w[k] - q * h[k * r + i]) % dmod[k]
                    if val < 0:
                        val += dmod[k]
                    w[k] = val
        out = []
        for i in range(r):
            out.append(w[i])
        return tuple(out)
    finally:
        free(w)
        free(h)
        free(dmod)


cdef long long _inv_mod(long long a, long long p):
    cdef long long g = a % p, x = 0, x1 = 1, q, t, pp = p
    if g < 0:
        g += p
    # extended Euclid on (g, p)
    cdef long long r0 = g, r1 = p
    while r1 != 0:
        q = r0 / r1
        t = r0 - q * r1
        r0 = r1
        r1 = t
        t = x1 - q * x
        x1 = x
        x = t
    x1 = x1 % p
    if x1 < 0:
        x1 += p
    return x1


def mat_mul(p, a, b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t inner = len(b)
    cdef Py_ssize_t m = len(b[0]) if inner else 0
    cdef long long pp = p
    cdef Py_ssize_t i, jj, k
    cdef long long aik
    cdef long long *bb = <long long *> malloc((inner * m if inner * m else 1) * sizeof(long long))
    cdef long long *acc = <long long *> malloc((m if m else 1) * sizeof(long long))
    if bb == NULL or acc == NULL:
        raise MemoryError()
    try:
        for i in range(inner):
            row = b[i]
            for jj in range(m):
                bb[i * m + jj] = row[jj]
        out = []
        for i in range(n):
            rowa = a[i]
            for jj in range(m):
                acc[jj] = 0
            for k in range(inner):
                aik = rowa[k] % pp
                if aik:
                    for jj in range(m):
                        acc[jj] += aik * bb[k * m + jj]
            orow = []
            for jj in range(m):
                orow.append(acc[jj] % pp)
            out.append(tuple(orow))
        return tuple(out)
    finally:
        free(bb)
        free(acc)


def mat_vec(p, a, v):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t m = len(v)
    cdef long long pp = p
    cdef Py_ssize_t i, k
    cdef long long s
    cdef long long *vv = <long long *> malloc((m if m else 1) * sizeof(long long))
    if vv == NULL:
        raise MemoryError()
    try:
        for k in range(m):
            vv[k] = v[k]
        out = []
        for i in range(n):
            row = a[i]
            s = 0
            for k in range(m):
                s += <long long> row[k] * vv[k]
            out.append(s % pp)
        return tuple(out)
    finally:
        free(vv)


def rref(p, rows):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t ncols = len(rows[0]) if nrows else 0
    cdef long long pp = p
    cdef Py_ssize_t i, j, c, rank, pr
    cdef long long inv, f, val
    if nrows == 0:
        return (), ()
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                val = row[j] % pp
                if val < 0:
                    val += pp
                m[i * ncols + j] = val
        rank = 0
        piv = []
        for c in range(ncols):
            pr = -1
            for i in range(rank, nrows):
                if m[i * ncols + c]:
                    pr = i
                    break
            if pr < 0:
                continue
            if pr != rank:
                for j in range(ncols):
                    val = m[rank * ncols + j]
                    m[rank * ncols + j] = m[pr * ncols + j]
                    m[pr * ncols + j] = val
            inv = _inv_mod(m[rank * ncols + c], pp)
            for j in range(ncols):
                m[rank * ncols + j] = (m[rank * ncols + j] * inv) % pp
            for i in range(nrows):
                if i != rank and m[i * ncols + c]:
                    f = m[i * ncols + c]
                    for j in range(ncols):
                        val = (m[i * ncols + j] - f * m[rank * ncols + j]) % pp
                        if val < 0:
                            val += pp
                        m[i * ncols + j] = val
            piv.append(c)
            rank += 1
            if rank == nrows:
                break
        out = []
        for i in range(rank):
            orow = []
            for j in range(ncols):
                orow.append(m[i * ncols + j])
            out.append(tuple(orow))
        return tuple(out), tuple(piv)
    finally:
        free(m)


def spin(p, gens, seeds, limit):
    cdef long long pp = p
    cdef Py_ssize_t n = 0
    for s in seeds:
        n = len(s)
        break
    if n == 0:
        for g in gens:
            n = len(g)
            break
    if n == 0:
        return ()
    cdef Py_ssize_t ngens = len(gens)
    cdef Py_ssize_t i, k, t, nb, qhead, qcount
    cdef long long x, s_acc
    cdef long long *gbuf = <long long *> malloc((ngens * n * n if ngens else 1) * sizeof(long long))
    cdef long long *basis = <long long *> malloc(n * n * sizeof(long long))
    cdef Py_ssize_t *pivots = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    cdef long long *queue = <long long *> malloc((n + 1) * n * sizeof(long long))
    cdef long long *w = <long long *> malloc(n * sizeof(long long))
    cdef long long *img = <long long *> malloc(n * sizeof(long long))
    if gbuf == NULL or basis == NULL or pivots == NULL or queue == NULL or w == NULL or img == NULL:
        raise MemoryError()
    try:
        t = 0
        for g in gens:
            for i in range(n):
                row = g[i]
                for j in range(n):
                    gbuf[t * n * n + i * n + j] = row[j]
            t += 1
        nb = 0
        qhead = 0
        qcount = 0
        for s in seeds:
            for k in range(n):
                x = s[k] % pp
                if x < 0:
                    x += pp
                w[k] = x
            if _insert(w, basis, pivots, &nb, n, pp):
                for k in range(n):
                    queue[qcount * n + k] = w[k]
                qcount += 1
        while qhead < qcount and nb < limit:
            for t in range(ngens):
                for i in range(n):
                    s_acc = 0
                    for k in range(n):
                        s_acc += gbuf[t * n * n + i * n + k] * queue[qhead * n + k]
                    img[i] = s_acc % pp
                for k in range(n):
                    w[k] = img[k]
                if _insert(w, basis, pivots, &nb, n, pp):
                    if qcount <= n:
                        for k in range(n):
                            queue[qcount * n + k] = w[k]
                        qcount += 1
                    if nb >= limit:
                        break
            qhead += 1
        if nb == 0:
            return ()
        rows = []
        for i in range(nb):
            orow = []
            for k in range(n):
                orow.append(basis[i * n + k])
            rows.append(tuple(orow))
        return rref(p, tuple(rows))[0]
    finally:
        free(gbuf)
        free(basis)
        free(pivots)
        free(queue)
        free(w)
        free(img)


cdef int _insert(long long *w, long long *basis, Py_ssize_t *pivots, Py_ssize_t *nb, Py_ssize_t n, long long pp):
    """Eliminate w against the echelon rows; append if independent."""
    cdef Py_ssize_t i, j, k, pos
    cdef long long x, invv
    for i in range(nb[0]):
        x = w[pivots[i]] % pp
        if x:
            for j in range(n):
                w[j] = (w[j] - x * basis[i * n + j]) % pp
                if w[j] < 0:
                    w[j] += pp
    pos = -1
    for j in range(n):
        if w[j] % pp:
            pos = j
            break
    if pos < 0:
        return 0
    invv = _inv_mod(w[pos], pp)
    for j in range(n):
        w[j] = (w[j] * invv) % pp
    # keep rows sorted by pivot
    k = 0
    while k < nb[0] and pivots[k] < pos:
        k += 1
    for i in range(nb[0], k, -1):
        for j in range(n):
            basis[i * n + j] = basis[(i - 1) * n + j]
        pivots[i] = pivots[i - 1]
    for j in range(n):
        basis[k * n + j] = w[j]
    pivots[k] = pos
    nb[0] += 1
    return 1
