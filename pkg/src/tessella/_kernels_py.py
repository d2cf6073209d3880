"""Pure-Python coset-table kernels.

Tables are flat lists with three entries per row (generators P, Q, R);
``-1`` marks an undefined entry.  All generators are involutions, so a
definition ``a^x = b`` always comes with ``b^x = a``.
"""
from __future__ import annotations

from .errors import ResourceExhausted

NGEN = 3


def standardize(table, n):
    """Renumber rows in BFS order from row 0 (scanning generators in order)."""
    new_of = [-1] * n
    old_of = [0]
    new_of[0] = 0
    i = 0
    while i < len(old_of):
        r = old_of[i]
        for x in range(NGEN):
            s = table[r * NGEN + x]
            if new_of[s] < 0:
                new_of[s] = len(old_of)
                old_of.append(s)
        i += 1
    out = [0] * (NGEN * len(old_of))
    for new, old in enumerate(old_of):
        for x in range(NGEN):
            out[new * NGEN + x] = new_of[table[old * NGEN + x]]
    return out


def act(table, row, word):
    for x in word:
        row = table[row * NGEN + x]
    return row


# ---------------------------------------------------------------------------
# HLT coset enumeration


class _Enumerator:
    def __init__(self, max_cosets):
        self.table = [-1, -1, -1]
        self.p = [0]
        self.max_cosets = max_cosets

    def rep(self, c):
        p = self.p
        r = c
        while p[r] != r:
            r = p[r]
        while p[c] != r:
            p[c], c = r, p[c]
        return r

    def define(self, a, x):
        b = len(self.p)
        if b >= self.max_cosets:
            raise ResourceExhausted(f"coset enumeration exceeded {self.max_cosets} cosets")
        self.p.append(b)
        self.table.extend((-1, -1, -1))
        self.table[a * NGEN + x] = b
        self.table[b * NGEN + x] = a

    def merge(self, k, l, queue):
        a = self.rep(k)
        b = self.rep(l)
        if a != b:
            lo, hi = (a, b) if a < b else (b, a)
            self.p[hi] = lo
            queue.append(hi)

    def coincidence(self, a, b):
        t = self.table
        queue = []
        self.merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(NGEN):
                d = t[g * NGEN + x]
                if d < 0:
                    continue
                t[d * NGEN + x] = -1
                mu = self.rep(g)
                nu = self.rep(d)
                mx = t[mu * NGEN + x]
                if mx >= 0:
                    self.merge(nu, mx, queue)
                else:
                    nx = t[nu * NGEN + x]
                    if nx >= 0:
                        self.merge(mu, nx, queue)
                    else:
                        t[mu * NGEN + x] = nu
                        t[nu * NGEN + x] = mu

    def scan_and_fill(self, a, w):
        t = self.table
        n = len(w)
        f = a
        b = a
        i = 0
        j = n - 1
        while True:
            while i <= j and t[f * NGEN + w[i]] >= 0:
                f = t[f * NGEN + w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b * NGEN + w[j]] >= 0:
                b = t[b * NGEN + w[j]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                x = w[i]
                t[f * NGEN + x] = b
                t[b * NGEN + x] = f
                return
            self.define(f, w[i])


def todd_coxeter(relators, subgens, max_cosets):
    """Enumerate the cosets of the subgroup generated by ``subgens``.

    Returns ``(table, n)`` with the table compacted and standardized.
    """
    e = _Enumerator(max_cosets)
    for w in subgens:
        if w:
            e.scan_and_fill(0, w)
    a = 0
    while a < len(e.p):
        for w in relators:
            if e.p[a] != a:
                break
            e.scan_and_fill(a, w)
        if e.p[a] == a:
            for x in range(NGEN):
                if e.table[a * NGEN + x] < 0:
                    e.define(a, x)
        a += 1
    live = [c for c in range(len(e.p)) if e.p[c] == c]
    index = {c: i for i, c in enumerate(live)}
    compact = [0] * (NGEN * len(live))
    for c in live:
        for x in range(NGEN):
            compact[index[c] * NGEN + x] = index[e.rep(e.table[c * NGEN + x])]
    out = standardize(compact, len(live))
    return out, len(live)


# ---------------------------------------------------------------------------
# Low-index subgroup search


class _Contradiction(Exception):
    pass


def _assign(t, lab, wt, r, x, s, queue):
    cur = t[r * NGEN + x]
    if cur == s:
        return
    if cur >= 0:
        raise _Contradiction
    back = t[s * NGEN + x]
    if back >= 0 and back != r:
        raise _Contradiction
    if lab[s] != lab[r] ^ wt[x]:
        raise _Contradiction
    t[r * NGEN + x] = s
    t[s * NGEN + x] = r
    queue.append((r, x))


def _scan(t, lab, wt, r, w, queue):
    n = len(w)
    f = r
    b = r
    i = 0
    j = n - 1
    while i <= j:
        nf = t[f * NGEN + w[i]]
        if nf < 0:
            break
        f = nf
        i += 1
    if i > j:
        if f != b:
            raise _Contradiction
        return
    while j >= i:
        nb = t[b * NGEN + w[j]]
        if nb < 0:
            break
        b = nb
        j -= 1
    if j < i:
        if f != b:
            raise _Contradiction
        return
    if i == j:
        _assign(t, lab, wt, f, w[i], b, queue)


def _propagate(t, lab, wt, conj, forced, queue):
    while True:
        while queue:
            r, x = queue.pop()
            s = t[r * NGEN + x]
            for w in conj[x]:
                _scan(t, lab, wt, r, w, queue)
                if s != r:
                    _scan(t, lab, wt, s, w, queue)
        for w in forced:
            _scan(t, lab, wt, 0, w, queue)
        if not queue:
            return


def low_index(conj, forced, max_rows, wt):
    """All standardized complete tables with at most ``max_rows`` rows.

    ``conj[x]`` lists the relator conjugates that begin with generator ``x``;
    ``forced`` are words that must fix row 0; ``wt[x]`` is the parity mask of
    generator ``x`` (rows carry labels, every edge must respect them, so all
    returned subgroups lie in the kernel of the parity map).
    """
    results = []
    t0 = [-1] * (NGEN * max_rows)
    lab0 = [0] * max_rows
    queue = []
    try:
        _propagate(t0, lab0, wt, conj, forced, queue)
    except _Contradiction:
        return results
    stack = [(t0, lab0, 1, 0)]
    while stack:
        t, lab, nrows, pos = stack.pop()
        limit = nrows * NGEN
        while pos < limit and t[pos] >= 0:
            pos += 1
        if pos == limit:
            results.append(t[:limit])
            continue
        r, x = divmod(pos, NGEN)
        branches = []
        for s in range(r, nrows):
            if t[s * NGEN + x] < 0:
                branches.append((s, nrows))
        if nrows < max_rows:
            branches.append((nrows, nrows + 1))
        # pushed in reverse so existing rows are explored first
        for s, nr in reversed(branches):
            t2 = t[:]
            lab2 = lab[:]
            if s == nrows:
                lab2[s] = lab[r] ^ wt[x]
            q = []
            try:
                _assign(t2, lab2, wt, r, x, s, q)
                _propagate(t2, lab2, wt, conj, forced, q)
            except _Contradiction:
                continue
            stack.append((t2, lab2, nr, pos + 1))
    return results
