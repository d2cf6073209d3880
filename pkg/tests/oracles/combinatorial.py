"""Tilings grown from a vertex configuration alone, with no geometry.

The patch is a topological disk whose boundary is a cycle of vertices.
Each step completes the shallowest boundary vertex by attaching the face in
its first missing corner; the face swallows every boundary vertex on either
side that has exactly one missing corner.  Face sizes come from the cyclic
configuration (rotations only, so every vertex has the same handedness).
Ambiguous face sizes are resolved by depth-first backtracking.
"""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field


class Contradiction(Exception):
    pass


@dataclass
class OVertex:
    nbrs: list[int]
    corners: list[int]  # corners[i] lies between nbrs[i] and nbrs[i+1], ccw
    depth: int
    complete: bool = False


@dataclass
class State:
    config: tuple[int, ...]
    verts: list[OVertex] = field(default_factory=list)
    succ: dict[int, int] = field(default_factory=dict)  # boundary, disk on the left
    pred: dict[int, int] = field(default_factory=dict)
    closed: bool = False
    heap: list[tuple[int, int, int]] = field(default_factory=list)  # lazy work queue


def _rotations(cfg):
    k = len(cfg)
    return {tuple(cfg[(i + j) % k] for j in range(k)) for i in range(k)}


class Grower:
    def __init__(self, config, depth: int, max_vertices: int = 20000):
        self.config = tuple(config)
        self.k = len(config)
        self.rots = sorted(_rotations(self.config) | _rotations(self.config[::-1]))
        self.depth = depth
        self.max_vertices = max_vertices
        self._memo: dict = {}

    def options(self, v: OVertex, pos: str) -> frozenset[int]:
        """Possible sizes of the first (pos='first') or last missing corner."""
        key = (tuple(v.corners), pos)
        out = self._memo.get(key)
        if out is None:
            m = len(v.corners)
            out = frozenset(
                r[m] if pos == "first" else r[self.k - 1]
                for r in self.rots
                if m < self.k and list(r[:m]) == v.corners
            )
            self._memo[key] = out
        return out

    def start(self) -> State:
        # seed: one face of size config[0] with a vertex ring around it
        g = self.config[0]
        st = State(self.config)
        for i in range(g):
            st.verts.append(OVertex([(i - 1) % g, (i + 1) % g], [g], min(i, g - i)))
        # ring orientation: the face is on the left of i -> i-1
        for i in range(g):
            st.succ[i] = (i - 1) % g
            st.pred[i] = (i + 1) % g
        # nbrs[0] must be the boundary successor
        for i in range(g):
            st.verts[i].nbrs = [st.succ[i], st.pred[i]]
            self.touch(st, i)
        return st

    def attach(self, st: State, v: int, g: int) -> None:
        """Glue a g-gon to the boundary edge (pred v, v), then zip."""
        verts = st.verts
        a = st.pred[v]
        depth = min(verts[a].depth, verts[v].depth) + 1
        new = []
        for _ in range(g - 2):
            new.append(len(verts))
            verts.append(OVertex([], [g], depth))
        if len(verts) > self.max_vertices:
            raise OverflowError("vertex budget exceeded")
        path = [a] + new + [v]
        verts[a].corners.insert(0, g)
        verts[a].nbrs.insert(0, path[1])
        verts[v].corners.append(g)
        verts[v].nbrs.append(path[-2])
        for j, w in enumerate(new):
            verts[w].nbrs = [path[j + 2], path[j]]
        for x, y in zip(path, path[1:]):
            st.succ[x] = y
            st.pred[y] = x
        for x in path:
            self.touch(st, x)
        self._zip(st, [a, v])

    def _fits(self, corners) -> bool:
        n = len(corners)
        return n <= self.k and any(list(r[:n]) == corners for r in self.rots)

    def _zip(self, st: State, todo) -> None:
        verts = st.verts
        todo = list(todo)
        while todo:
            c = todo.pop()
            if c not in st.succ or verts[c].complete:
                continue
            cv = verts[c]
            if not self._fits(cv.corners):
                raise Contradiction("vertex fan does not match the configuration")
            if len(cv.corners) < self.k:
                continue
            u, w = st.pred[c], st.succ[c]
            cv.complete = True
            del st.succ[c], st.pred[c]
            if u == w:
                # boundary was the 2-cycle (u, c): the surface closes up
                cv.nbrs.pop()
                uv = verts[u]
                uv.nbrs.pop()
                if not self._fits(uv.corners) or len(uv.corners) != self.k:
                    raise Contradiction("closing vertex is not full")
                uv.complete = True
                st.succ.clear()
                st.pred.clear()
                st.closed = True
                return
            # edges (u, c) and (c, w) become one edge: identify u with w
            if w in verts[u].nbrs:
                raise Contradiction("zip would create a double edge")
            cv.nbrs.pop()  # nbrs were [w, ..., u]; u is renamed to w
            wv, uv = verts[w], verts[u]
            wv.nbrs = wv.nbrs[:-1] + uv.nbrs
            wv.corners = wv.corners + uv.corners
            wv.depth = min(wv.depth, uv.depth)
            for x in uv.nbrs:
                xv = verts[x]
                xv.nbrs = [w if y == u else y for y in xv.nbrs]
            uv.nbrs, uv.corners = [], []
            uv.complete = False
            p = st.pred.pop(u)
            del st.succ[u]
            if p == u:
                raise Contradiction("degenerate boundary")
            st.succ[p] = w
            st.pred[w] = p
            self.touch(st, w)
            todo.append(w)

    def touch(self, st: State, v: int) -> None:
        cv = st.verts[v]
        heapq.heappush(st.heap, (cv.depth, self.k - len(cv.corners), v))

    def pick(self, st: State) -> int | None:
        """Shallowest open boundary vertex, preferring the fullest one."""
        heap = st.heap
        while heap:
            d, miss, v = heap[0]
            cv = st.verts[v]
            if v in st.succ and not cv.complete and d == cv.depth and miss == self.k - len(cv.corners) and d < self.depth:
                return v
            heapq.heappop(heap)
        return None

    def grow(self, accept=None) -> State:
        """First consistent growth, in depth-first order over ambiguous faces.

        ``accept(state, final)`` may reject a partial (final=False) or finished
        state; rejection counts as a contradiction and triggers backtracking.
        """
        self.branches = 0
        stack = [(self.start(), None)]
        while stack:
            st, choice = stack.pop()
            try:
                if choice is not None:
                    self.attach(st, *choice)
                    if accept is not None and not accept(st, False):
                        raise Contradiction("rejected")
                while True:
                    v = None if st.closed else self.pick(st)
                    if v is None:
                        if accept is not None and not accept(st, True):
                            raise Contradiction("rejected")
                        return st
                    opts = self.face_options(st, v)
                    if not opts:
                        raise Contradiction("no face fits")
                    if len(opts) == 1:
                        self.attach(st, v, opts[0])
                        continue
                    forced = self.forced_move(st)
                    if forced is not None:
                        self.attach(st, *forced)
                        continue
                    self.branches += 1
                    for g in reversed(opts[1:]):
                        stack.append((_clone(st), (v, g)))
                    self.attach(st, v, opts[0])
                    if accept is not None and not accept(st, False):
                        raise Contradiction("rejected")
            except Contradiction:
                continue
        raise Contradiction("no consistent growth")

    def forced_move(self, st: State) -> tuple[int, int] | None:
        """Some open vertex whose next face is determined, if any."""
        for w in list(st.succ):
            if st.verts[w].depth >= self.depth:
                continue
            opts = self.face_options(st, w)
            if not opts:
                raise Contradiction("no face fits")
            if len(opts) == 1:
                return w, opts[0]
        return None

    def face_options(self, st: State, v: int) -> list[int]:
        first = self.options(st.verts[v], "first")
        a = st.pred[v]
        if a == v:
            return sorted(first)
        return sorted(first & self.options(st.verts[a], "last"))


def _clone(st: State) -> State:
    out = State(st.config, [OVertex(list(v.nbrs), list(v.corners), v.depth, v.complete) for v in st.verts])
    out.succ, out.pred, out.closed = dict(st.succ), dict(st.pred), st.closed
    out.heap = list(st.heap)
    return out


def rotation_system(st: State) -> dict[int, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Complete vertices: (neighbors ccw, corner sizes) with corner i after neighbor i."""
    out = {}
    for i, v in enumerate(st.verts):
        if v.complete:
            out[i] = (tuple(v.nbrs), tuple(v.corners))
    return out


def patch_rotation_system(patch) -> dict[int, tuple[tuple[int, ...], tuple[int, ...]]]:
    """Same structure read off a geometric patch."""
    out = {}
    for vi, v in enumerate(patch.vertices):
        if not v.complete:
            continue
        tiles = [patch.tiles[t] for t in v.tiles]
        k = len(tiles)
        nbrs, corners = [], []
        for i in range(k):
            prev, cur = tiles[i - 1], tiles[i]
            common = [u for u in _polygon_nbrs(prev, vi) if u in _polygon_nbrs(cur, vi)]
            if len(common) != 1:
                raise ValueError(f"vertex {vi}: tiles share {len(common)} edges")
            nbrs.append(common[0])
            corners.append(len(cur.vertex_ids))
        out[vi] = (tuple(nbrs), tuple(corners))
    return out


def _polygon_nbrs(tile, v):
    ids = tile.vertex_ids
    i = ids.index(v)
    return (ids[i - 1], ids[(i + 1) % len(ids)])


def bfs_distances(rot, root) -> dict[int, int]:
    dist = {root: 0}
    q = deque([root])
    while q:
        v = q.popleft()
        if v not in rot:
            continue
        for u in rot[v][0]:
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    return dist


def embeds(rot_a, root_a, rot_b, root_b, radius: int = 10**9, strict: bool = True) -> bool:
    """Does ``rot_a`` map into ``rot_b`` with ``root_a`` going to ``root_b``?

    The map must be injective and preserve cyclic order (up to one global
    reflection) and face sizes.  Complete vertices of ``rot_a`` closer than
    ``radius`` are expanded; their images must be complete too, unless
    ``strict`` is off, in which case incomplete images are left unchecked.
    """
    if root_a not in rot_a:
        return False
    if root_b not in rot_b:
        return not strict
    k = len(rot_a[root_a][0])
    if len(rot_b[root_b][0]) != k:
        return False
    return any(
        _try_match(rot_a, root_a, rot_b, root_b, radius, s, e, strict) for e in (1, -1) for s in range(k)
    )


def _try_match(ra, a0, rb, b0, radius, s0, e, strict=True) -> bool:
    dist = bfs_distances(ra, a0)
    fwd = {a0: (b0, s0)}
    back = {b0: a0}
    q = deque([a0])
    while q:
        a = q.popleft()
        b, s = fwd[a]
        if dist[a] >= radius or a not in ra:
            continue
        if b not in rb:
            if strict:
                return False
            continue
        na, ca = ra[a]
        nb, cb = rb[b]
        k = len(na)
        if len(nb) != k:
            return False
        for i in range(k):
            j = (s + e * i) % k
            if ca[i] != cb[j if e == 1 else (j - 1) % k]:
                return False
            ua, ub = na[i], nb[j]
            if ua in fwd:
                if fwd[ua][0] != ub:
                    return False
                continue
            if ub in back:
                return False
            shift = 0
            if ua in ra and ub in rb:
                if len(ra[ua][0]) != len(rb[ub][0]):
                    return False
                shift = (rb[ub][0].index(b) - e * ra[ua][0].index(a)) % len(ra[ua][0])
            fwd[ua] = (ub, shift)
            back[ub] = ua
            q.append(ua)
    return True


def patch_depth(rot, root) -> int:
    """Graph radius of a rotation system around ``root``, one past its complete part."""
    return max(bfs_distances(rot, root).values())


@dataclass
class OracleResult:
    ok: bool
    radius: int  # graph radius around the seed vertex that was compared
    state: State | None
    branches: int


def oracle_embedding(patch, max_vertices: int = 3000, config=None) -> OracleResult:
    """Grow the tiling from the configuration and embed the patch into it.

    Where the configuration leaves face sizes open, the growth backtracks
    until a tiling is found that contains the patch; partial states are
    pruned as soon as their complete vertices disagree with it.  The
    compared radius shrinks if the grown ball would exceed ``max_vertices``.
    ``config`` overrides the patch's vertex configuration (for negative tests).
    """
    prot = patch_rotation_system(patch)
    for depth in range(patch_depth(prot, 0), 1, -1):
        grower = Grower(config or patch.instance.config, depth, max_vertices)

        def accept(st, final, depth=depth):
            return embeds(prot, 0, rotation_system(st), 0, radius=depth, strict=final)

        try:
            st = grower.grow(accept)
        except OverflowError:
            continue
        except Contradiction:
            return OracleResult(False, depth, None, grower.branches)
        return OracleResult(True, depth, st, grower.branches)
    return OracleResult(False, 0, None, 0)
