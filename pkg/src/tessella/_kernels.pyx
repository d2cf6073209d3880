# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled coset-table kernels, same interface as ``_kernels_py``."""
from cpython cimport array
import array as pyarray

from .errors import ResourceExhausted

cdef enum:
    NGEN = 3

cdef array.array _INT = pyarray.array("i")


cdef inline array.array _ints(seq):
    return pyarray.array("i", seq)


def standardize(table, Py_ssize_t n):
    """Renumber rows in BFS order from row 0 (scanning generators in order)."""
    cdef array.array tab = _ints(table)
    cdef int[:] t = tab
    cdef array.array new_a = array.clone(_INT, n, zero=False)
    cdef array.array old_a = array.clone(_INT, n, zero=False)
    cdef int[:] new_of = new_a
    cdef int[:] old_of = old_a
    cdef Py_ssize_t i, r, s, x, count = 1, k
    for i in range(n):
        new_of[i] = -1
    new_of[0] = 0
    old_of[0] = 0
    i = 0
    while i < count:
        r = old_of[i]
        for x in range(NGEN):
            s = t[r * NGEN + x]
            if new_of[s] < 0:
                new_of[s] = count
                old_of[count] = s
                count += 1
        i += 1
    out = [0] * (NGEN * count)
    for k in range(count):
        r = old_of[k]
        for x in range(NGEN):
            out[k * NGEN + x] = new_of[t[r * NGEN + x]]
    return out


def act(table, Py_ssize_t row, word):
    cdef Py_ssize_t x
    for x in word:
        row = table[row * NGEN + x]
    return row


# ---------------------------------------------------------------------------
# HLT coset enumeration


cdef class _Enumerator:
    cdef array.array table_a
    cdef array.array p_a
    cdef int *t
    cdef int *p
    cdef Py_ssize_t n, cap, max_cosets
    cdef array.array queue_a
    cdef int *queue
    cdef Py_ssize_t qcap

    def __init__(self, Py_ssize_t max_cosets):
        self.cap = 1024
        self.table_a = array.clone(_INT, NGEN * self.cap, zero=False)
        self.p_a = array.clone(_INT, self.cap, zero=False)
        self.t = self.table_a.data.as_ints
        self.p = self.p_a.data.as_ints
        self.t[0] = self.t[1] = self.t[2] = -1
        self.p[0] = 0
        self.n = 1
        self.max_cosets = max_cosets
        self.qcap = 1024
        self.queue_a = array.clone(_INT, self.qcap, zero=False)
        self.queue = self.queue_a.data.as_ints

    cdef void grow(self):
        self.cap *= 2
        array.resize(self.table_a, NGEN * self.cap)
        array.resize(self.p_a, self.cap)
        self.t = self.table_a.data.as_ints
        self.p = self.p_a.data.as_ints

    cdef inline int rep(self, int c):
        cdef int *p = self.p
        cdef int r = c, nxt
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            nxt = p[c]
            p[c] = r
            c = nxt
        return r

    cdef int define(self, int a, int x) except -1:
        cdef int b = <int>self.n
        if b >= self.max_cosets:
            raise ResourceExhausted(f"coset enumeration exceeded {self.max_cosets} cosets")
        if b >= self.cap:
            self.grow()
        self.p[b] = b
        self.t[b * NGEN] = -1
        self.t[b * NGEN + 1] = -1
        self.t[b * NGEN + 2] = -1
        self.n += 1
        self.t[a * NGEN + x] = b
        self.t[b * NGEN + x] = a
        return 0

    cdef void push(self, Py_ssize_t *qlen, int v):
        if qlen[0] >= self.qcap:
            self.qcap *= 2
            array.resize(self.queue_a, self.qcap)
            self.queue = self.queue_a.data.as_ints
        self.queue[qlen[0]] = v
        qlen[0] += 1

    cdef void merge(self, int k, int l, Py_ssize_t *qlen):
        cdef int a = self.rep(k), b = self.rep(l), lo, hi
        if a != b:
            if a < b:
                lo, hi = a, b
            else:
                lo, hi = b, a
            self.p[hi] = lo
            self.push(qlen, hi)

    cdef void coincidence(self, int a, int b):
        cdef Py_ssize_t qlen = 0, i = 0
        cdef int g, x, d, mu, nu, mx, nx
        self.merge(a, b, &qlen)
        while i < qlen:
            g = self.queue[i]
            i += 1
            for x in range(NGEN):
                d = self.t[g * NGEN + x]
                if d < 0:
                    continue
                self.t[d * NGEN + x] = -1
                mu = self.rep(g)
                nu = self.rep(d)
                mx = self.t[mu * NGEN + x]
                if mx >= 0:
                    self.merge(nu, mx, &qlen)
                else:
                    nx = self.t[nu * NGEN + x]
                    if nx >= 0:
                        self.merge(mu, nx, &qlen)
                    else:
                        self.t[mu * NGEN + x] = nu
                        self.t[nu * NGEN + x] = mu

    cdef int scan_and_fill(self, int a, int[:] w) except -1:
        cdef Py_ssize_t n = w.shape[0], i = 0, j = n - 1
        cdef int f = a, b = a, x
        while True:
            while i <= j and self.t[f * NGEN + w[i]] >= 0:
                f = self.t[f * NGEN + w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return 0
            while j >= i and self.t[b * NGEN + w[j]] >= 0:
                b = self.t[b * NGEN + w[j]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return 0
            if i == j:
                x = w[i]
                self.t[f * NGEN + x] = b
                self.t[b * NGEN + x] = f
                return 0
            self.define(f, w[i])


def todd_coxeter(relators, subgens, Py_ssize_t max_cosets):
    """Enumerate the cosets of the subgroup generated by ``subgens``.

    Returns ``(table, n)`` with the table compacted and standardized.
    """
    cdef _Enumerator e = _Enumerator(max_cosets)
    cdef list rels = [_ints(rel) for rel in relators]
    cdef array.array w
    cdef Py_ssize_t a = 0, c, x, k
    for sg in subgens:
        if len(sg):
            e.scan_and_fill(0, _ints(sg))
    while a < e.n:
        for w in rels:
            if e.p[a] != a:
                break
            e.scan_and_fill(<int>a, w)
        if e.p[a] == a:
            for x in range(NGEN):
                if e.t[a * NGEN + x] < 0:
                    e.define(<int>a, <int>x)
        a += 1
    cdef array.array idx_a = array.clone(_INT, e.n, zero=False)
    cdef int[:] index = idx_a
    cdef Py_ssize_t live = 0
    for c in range(e.n):
        if e.p[c] == c:
            index[c] = <int>live
            live += 1
    compact = [0] * (NGEN * live)
    for c in range(e.n):
        if e.p[c] == c:
            k = index[c]
            for x in range(NGEN):
                compact[k * NGEN + x] = index[e.rep(e.t[c * NGEN + x])]
    return standardize(compact, live), live


# ---------------------------------------------------------------------------
# Low-index subgroup search


cdef class _Search:
    cdef int *t
    cdef int *lab
    cdef int wt[NGEN]
    cdef list conj
    cdef list forced
    cdef int *queue
    cdef Py_ssize_t qlen, qcap
    cdef array.array queue_a

    def __init__(self, conj, forced, wt):
        self.conj = [[_ints(w) for w in conj[x]] for x in range(NGEN)]
        self.forced = [_ints(w) for w in forced]
        for x in range(NGEN):
            self.wt[x] = wt[x]
        self.qcap = 256
        self.queue_a = array.clone(_INT, 2 * self.qcap, zero=False)
        self.queue = self.queue_a.data.as_ints
        self.qlen = 0

    cdef void push(self, int r, int x):
        if self.qlen >= self.qcap:
            self.qcap *= 2
            array.resize(self.queue_a, 2 * self.qcap)
            self.queue = self.queue_a.data.as_ints
        self.queue[2 * self.qlen] = r
        self.queue[2 * self.qlen + 1] = x
        self.qlen += 1

    cdef bint assign(self, int r, int x, int s):
        cdef int cur = self.t[r * NGEN + x], back
        if cur == s:
            return True
        if cur >= 0:
            return False
        back = self.t[s * NGEN + x]
        if back >= 0 and back != r:
            return False
        if self.lab[s] != (self.lab[r] ^ self.wt[x]):
            return False
        self.t[r * NGEN + x] = s
        self.t[s * NGEN + x] = r
        self.push(r, x)
        return True

    cdef bint scan(self, int r, int[:] w):
        cdef Py_ssize_t n = w.shape[0], i = 0, j = n - 1
        cdef int f = r, b = r, nf, nb
        while i <= j:
            nf = self.t[f * NGEN + w[i]]
            if nf < 0:
                break
            f = nf
            i += 1
        if i > j:
            return f == b
        while j >= i:
            nb = self.t[b * NGEN + w[j]]
            if nb < 0:
                break
            b = nb
            j -= 1
        if j < i:
            return f == b
        if i == j:
            return self.assign(f, w[i], b)
        return True

    cdef bint propagate(self):
        cdef int r, x, s
        cdef array.array w
        while True:
            while self.qlen:
                self.qlen -= 1
                r = self.queue[2 * self.qlen]
                x = self.queue[2 * self.qlen + 1]
                s = self.t[r * NGEN + x]
                for w in self.conj[x]:
                    if not self.scan(r, w):
                        return False
                    if s != r and not self.scan(s, w):
                        return False
            for w in self.forced:
                if not self.scan(0, w):
                    return False
            if not self.qlen:
                return True


def low_index(conj, forced, Py_ssize_t max_rows, wt):
    """All standardized complete tables with at most ``max_rows`` rows.

    ``conj[x]`` lists the relator conjugates that begin with generator ``x``;
    ``forced`` are words that must fix row 0; ``wt[x]`` is the parity mask of
    generator ``x``.
    """
    cdef _Search S = _Search(conj, forced, wt)
    cdef list results = []
    cdef array.array t0 = array.clone(_INT, NGEN * max_rows, zero=False)
    cdef array.array lab0 = array.clone(_INT, max_rows, zero=True)
    cdef array.array t, lab, t2, lab2
    cdef Py_ssize_t i, nrows, pos, limit, r, x, s, nr, k
    for i in range(NGEN * max_rows):
        t0.data.as_ints[i] = -1
    S.t = t0.data.as_ints
    S.lab = lab0.data.as_ints
    S.qlen = 0
    if not S.propagate():
        return results
    cdef list stack = [(t0, lab0, 1, 0)]
    cdef list branches
    while stack:
        t, lab, nrows, pos = stack.pop()
        limit = nrows * NGEN
        while pos < limit and t.data.as_ints[pos] >= 0:
            pos += 1
        if pos == limit:
            results.append(list(t[:limit]))
            continue
        r = pos // NGEN
        x = pos % NGEN
        branches = []
        for s in range(r, nrows):
            if t.data.as_ints[s * NGEN + x] < 0:
                branches.append((s, nrows))
        if nrows < max_rows:
            branches.append((nrows, nrows + 1))
        for k in range(len(branches) - 1, -1, -1):
            s, nr = branches[k]
            t2 = array.copy(t)
            lab2 = array.copy(lab)
            if s == nrows:
                lab2.data.as_ints[s] = lab.data.as_ints[r] ^ S.wt[x]
            S.t = t2.data.as_ints
            S.lab = lab2.data.as_ints
            S.qlen = 0
            if not S.assign(<int>r, <int>x, <int>s) or not S.propagate():
                continue
            stack.append((t2, lab2, nr, pos + 1))
    return results
