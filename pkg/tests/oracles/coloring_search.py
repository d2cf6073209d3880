"""Colorings of a finite patch found by plain backtracking.

No coset tables are involved.  The symmetry group enters only through the
tile permutations induced by a few generating isometries.  A coloring is
accepted when

* every complete vertex sees pairwise distinct colors, and
* each generator maps color classes to color classes, i.e. it induces a
  well-defined injective map on colors wherever both tiles lie in the patch.

Assigning a color propagates through the generator maps, so the search only
branches where the symmetry leaves a genuine choice.  Colors are introduced
in branching order, which makes every partition appear exactly once.
"""
from __future__ import annotations

from collections import deque

from tessella.words import free_reduce


class _Conflict(Exception):
    pass


def tile_permutation(patch, matrix) -> tuple[list[int], list[int]]:
    """Image and preimage of every tile (-1 when outside the patch)."""
    n = len(patch.tiles)
    img = [-1] * n
    pre = [-1] * n
    for i, t in enumerate(patch.tiles):
        j = patch.tile_index.find(matrix @ t.center)
        if j is not None and patch.tiles[j].orbit == t.orbit:
            img[i] = j
            pre[j] = i
    return img, pre


class ColoringSearch:
    def __init__(self, patch, generators, m: int, limit: int = 10**6):
        self.n = len(patch.tiles)
        self.m = m
        self.limit = limit
        self.maps = [tile_permutation(patch, patch.mirrors.matrix(g)) for g in generators]
        self.vertex_sets = [v.tiles for v in patch.vertices if v.complete]
        self.verts_of: list[list[int]] = [[] for _ in range(self.n)]
        for vi, ts in enumerate(self.vertex_sets):
            for t in ts:
                self.verts_of[t].append(vi)
        self.order = self._bfs_order(patch)

    def _bfs_order(self, patch) -> list[int]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for v in patch.vertices:
            for a in v.tiles:
                nbrs[a].update(v.tiles)
        seen, out = set(), []
        for s in range(self.n):
            if s in seen:
                continue
            seen.add(s)
            q = deque([s])
            while q:
                a = q.popleft()
                out.append(a)
                for b in sorted(nbrs[a]):
                    if b not in seen:
                        seen.add(b)
                        q.append(b)
        return out

    def run(self) -> list[tuple[int, ...]]:
        """All colorings with exactly ``m`` colors, as color tuples in canonical labels."""
        self.color = [-1] * self.n
        self.by_color: list[list[int]] = [[] for _ in range(self.m)]
        # per generator: forward and backward partial color maps
        self.pi = [({}, {}) for _ in self.maps]
        self.trail: list[tuple] = []
        self.found: list[tuple[int, ...]] = []
        self.nodes = 0
        self._branch(0, 0)
        return self.found

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            entry = self.trail.pop()
            if entry[0] == "t":
                _, t, c = entry
                self.color[t] = -1
                self.by_color[c].pop()
            else:
                _, d, key = entry
                del d[key]

    def _set_pair(self, gi: int, direction: int, c: int, d: int, queue) -> None:
        fwd, bwd = self.pi[gi] if direction == 0 else self.pi[gi][::-1]
        if c in fwd:
            if fwd[c] != d:
                raise _Conflict
            return
        if d in bwd:
            raise _Conflict
        fwd[c] = d
        bwd[d] = c
        self.trail.append(("p", fwd, c))
        self.trail.append(("p", bwd, d))
        img = self.maps[gi][direction]
        for t in self.by_color[c]:
            if img[t] >= 0:
                queue.append((img[t], d))
        back = self.maps[gi][1 - direction]
        for t in self.by_color[d]:
            if back[t] >= 0:
                queue.append((back[t], c))

    def _assign(self, t0: int, c0: int) -> None:
        queue = deque([(t0, c0)])
        color = self.color
        while queue:
            t, c = queue.popleft()
            if color[t] == c:
                continue
            if color[t] != -1:
                raise _Conflict
            for vi in self.verts_of[t]:
                for u in self.vertex_sets[vi]:
                    if color[u] == c:
                        raise _Conflict
            color[t] = c
            self.by_color[c].append(t)
            self.trail.append(("t", t, c))
            for gi, (img, pre) in enumerate(self.maps):
                for direction, target in ((0, img[t]), (1, pre[t])):
                    if target < 0:
                        continue
                    fwd = self.pi[gi][direction]
                    if c in fwd:
                        queue.append((target, fwd[c]))
                    elif color[target] != -1:
                        self._set_pair(gi, direction, c, color[target], queue)

    def _branch(self, pos: int, used: int) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise RuntimeError("search budget exceeded")
        order, color = self.order, self.color
        while pos < self.n and color[order[pos]] != -1:
            pos += 1
        if pos == self.n:
            if used == self.m:
                self.found.append(tuple(color))
            return
        t = order[pos]
        for c in range(min(used + 1, self.m)):
            mark = len(self.trail)
            try:
                self._assign(t, c)
            except _Conflict:
                self._undo(mark)
                continue
            self._branch(pos + 1, max(used, c + 1))
            self._undo(mark)


def h_elements(generators, length: int = 2) -> list[str]:
    """Nontrivial products of at most ``length`` generators or their inverses.

    Equivariance is imposed for all of them.  On a finite patch the single
    generators are not enough: a relation of the group may only close up
    outside the patch, and colorings violating it would slip through.
    """
    letters = set(generators) | {g[::-1] for g in generators}
    words, frontier = {""}, {""}
    for _ in range(length):
        frontier = {free_reduce(w + g) for w in frontier for g in letters} - words
        words |= frontier
    return sorted(words - {""}, key=lambda w: (len(w), w))


def canonical(colors) -> tuple[int, ...]:
    """Relabel colors by first appearance."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in colors)


def partitions(patch, generators, m: int, limit: int = 10**6, length: int = 2) -> set[tuple[int, ...]]:
    words = h_elements(generators, length)
    return {canonical(c) for c in ColoringSearch(patch, words, m, limit).run()}


def scheme_partitions(schemes, patch) -> set[tuple[int, ...]]:
    return {canonical(s.tile_colors(patch)) for s in schemes}
