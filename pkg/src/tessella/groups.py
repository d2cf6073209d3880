"""Exact computation in the triangle groups *pqr.

Coset tables are right-coset tables: row ``r`` stands for a coset ``J u``
and generator ``x`` sends it to ``J u x``.  Row 0 is ``J`` itself.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from . import _backend
from .errors import InvalidParameters, ResourceExhausted
from .words import ALPHABET, LETTER_INDEX, Word, free_reduce, inverse, mul, to_indices

DEFAULT_MAX_COSETS = 200_000


@dataclass(frozen=True)
class Presentation:
    """``<P, Q, R | P^2, Q^2, R^2, (QR)^a, (RP)^b, (PQ)^c>`` with orders (a, b, c)."""

    orders: tuple[int, int, int]

    @property
    def name(self) -> str:
        return "*" + "".join(str(n) if n < 10 else f"({n})" for n in self.orders)

    @property
    def relators(self) -> tuple[Word, ...]:
        a, b, c = self.orders
        return ("PP", "QQ", "RR", "QR" * a, "RP" * b, "PQ" * c)

    @property
    def rotation_relators(self) -> tuple[Word, ...]:
        return self.relators[3:]

    @cached_property
    def _conjugates(self) -> list[list[tuple[int, ...]]]:
        # cyclic conjugates of (xy)^n starting with each letter
        a, b, c = self.orders
        out: list[list[tuple[int, ...]]] = [[], [], []]
        for pair, n in (("QR", a), ("RP", b), ("PQ", c)):
            x, y = pair
            out[LETTER_INDEX[x]].append(to_indices((x + y) * n))
            out[LETTER_INDEX[y]].append(to_indices((y + x) * n))
        return out

    def curvature_sign(self) -> int:
        """+1 spherical, 0 Euclidean, -1 hyperbolic (sign of 1/a+1/b+1/c-1)."""
        a, b, c = self.orders
        num = b * c + a * c + a * b - a * b * c
        return (num > 0) - (num < 0)

    def __str__(self) -> str:
        return self.name


def build_triangle_group(p: int, q: int, r: int) -> Presentation:
    for n in (p, q, r):
        if not isinstance(n, int) or n < 2:
            raise InvalidParameters(f"triangle group orders must be integers >= 2, got {(p, q, r)}")
    return Presentation((p, q, r))


@dataclass(frozen=True)
class SubgroupSpec:
    parent: Presentation
    generators: tuple[Word, ...] = ()

    def __post_init__(self):
        gens = tuple(free_reduce(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True, eq=False)
class CosetTable:
    """A complete, standardized coset table."""

    presentation: Presentation
    table: tuple[int, ...]
    origin: SubgroupSpec | None = field(default=None, compare=False)

    @property
    def size(self) -> int:
        return len(self.table) // 3

    index = size

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CosetTable)
            and self.presentation == other.presentation
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.presentation, self.table))

    def image(self, row: int, letter: str) -> int:
        return self.table[3 * row + LETTER_INDEX[letter]]

    def act(self, row: int, word: Word) -> int:
        t = self.table
        for c in word:
            row = t[3 * row + LETTER_INDEX[c]]
        return row

    def contains(self, word: Word) -> bool:
        return self.act(0, word) == 0

    def column(self, letter: str) -> tuple[int, ...]:
        i = LETTER_INDEX[letter]
        return self.table[i::3]

    @cached_property
    def transversal(self) -> tuple[Word, ...]:
        """Shortest words ``u_r`` with ``act(0, u_r) == r`` (BFS, letters in order)."""
        words: list[Word | None] = [None] * self.size
        words[0] = ""
        queue = deque([0])
        while queue:
            r = queue.popleft()
            for c in ALPHABET:
                s = self.image(r, c)
                if words[s] is None:
                    words[s] = words[r] + c
                    queue.append(s)
        return tuple(words)  # type: ignore[arg-type]

    def schreier_generators(self) -> list[Word]:
        """Generators of the subgroup, one per non-tree edge of the BFS tree."""
        tr = self.transversal
        gens = []
        seen = set()
        for r in range(self.size):
            for c in ALPHABET:
                s = self.image(r, c)
                w = free_reduce(tr[r] + c + inverse(tr[s]))
                if w and w not in seen and inverse(w) not in seen:
                    seen.add(w)
                    gens.append(w)
        return gens

    def rerooted(self, row: int) -> "CosetTable":
        """Table of the conjugate ``u^-1 J u`` where ``row`` is ``J u``."""
        t = list(self.table)
        n = self.size
        # swap rows 0 and `row` in the labelling, then standardize
        perm = list(range(n))
        perm[0], perm[row] = perm[row], perm[0]
        relabel = [0] * (3 * n)
        for old in range(n):
            for x in range(3):
                relabel[3 * perm[old] + x] = perm[t[3 * old + x]]
        std = _backend.kernels.standardize(relabel, n)
        return CosetTable(self.presentation, tuple(std))

    def check(self, subgroup_words: Iterable[Word] = ()) -> list[str]:
        """Return a list of violated table invariants (empty when valid)."""
        problems = []
        n = self.size
        for c in ALPHABET:
            col = self.column(c)
            if any(col[col[r]] != r for r in range(n)):
                problems.append(f"column {c} is not an involution")
        for rel in self.presentation.rotation_relators:
            bad = [r for r in range(n) if self.act(r, rel) != r]
            if bad:
                problems.append(f"relator {rel} moves rows {bad[:5]}")
        for w in subgroup_words:
            if not self.contains(w):
                problems.append(f"subgroup word {w} does not fix row 0")
        seen = set(suborbits(self, ALPHABET)[0])
        if len(seen) != n:
            problems.append("table is not transitive")
        return problems


def coset_enumerate(sub: SubgroupSpec, max_cosets: int | None = None) -> CosetTable:
    """Todd-Coxeter (HLT) enumeration of the right cosets of ``sub``."""
    pres = sub.parent
    limit = DEFAULT_MAX_COSETS if max_cosets is None else max_cosets
    rels = [to_indices(r) for r in pres.rotation_relators]
    gens = [to_indices(w) for w in sub.generators]
    table, _ = _backend.kernels.todd_coxeter(rels, gens, limit)
    return CosetTable(pres, tuple(table), sub)


def subgroup_table(pres: Presentation, generators: Iterable[Word], max_cosets: int | None = None) -> CosetTable:
    return coset_enumerate(SubgroupSpec(pres, tuple(generators)), max_cosets)


def act(t: CosetTable, row: int, w: Word) -> int:
    return t.act(row, w)


def contains(t: CosetTable, w: Word) -> bool:
    return t.contains(w)


# ---------------------------------------------------------------------------
# index-2^k subgroups given by parity maps


@dataclass(frozen=True)
class ParitySubgroup:
    """Kernel of one or more homomorphisms ``{P,Q,R} -> Z/2``.

    ``weights`` holds one (P, Q, R) parity vector per map; membership of a
    word is the vanishing of every weighted letter count mod 2.
    """

    parent: Presentation
    weights: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for wv in self.weights:
            for rel in self.parent.relators:
                if sum(wv[LETTER_INDEX[c]] for c in rel) % 2:
                    raise InvalidParameters(
                        f"parity {wv} is not a homomorphism on {self.parent.name} (relator {rel})"
                    )

    @property
    def masks(self) -> list[int]:
        return [
            sum((wv[x] & 1) << k for k, wv in enumerate(self.weights)) for x in range(3)
        ]

    def parity(self, word: Word) -> int:
        m = self.masks
        v = 0
        for c in word:
            v ^= m[LETTER_INDEX[c]]
        return v

    def contains(self, word: Word) -> bool:
        return self.parity(word) == 0

    __call__ = contains

    @cached_property
    def coset_table(self) -> CosetTable:
        m = self.masks
        reach = {0: 0}
        order = [0]
        i = 0
        while i < len(order):
            v = order[i]
            for x in range(3):
                u = v ^ m[x]
                if u not in reach:
                    reach[u] = len(order)
                    order.append(u)
            i += 1
        table = []
        for v in order:
            for x in range(3):
                table.append(reach[v ^ m[x]])
        std = _backend.kernels.standardize(table, len(order))
        return CosetTable(self.parent, tuple(std))

    @property
    def index(self) -> int:
        return self.coset_table.size

    @cached_property
    def generators(self) -> tuple[Word, ...]:
        return tuple(self.coset_table.schreier_generators())


def even_subgroup(pres: Presentation) -> ParitySubgroup:
    return ParitySubgroup(pres, ((1, 1, 1),))


def intersect(a: ParitySubgroup, b: ParitySubgroup) -> ParitySubgroup:
    return ParitySubgroup(a.parent, tuple(dict.fromkeys(a.weights + b.weights)))


# ---------------------------------------------------------------------------
# low-index subgroups


def low_index_subgroups(
    pres: Presentation,
    max_index: int,
    forced: Sequence[Word] = (),
    ambient: ParitySubgroup | Callable[[Word], bool] | None = None,
    exact_index: int | None = None,
    max_results: int = 1_000_000,
) -> list[CosetTable]:
    """All subgroups of index <= ``max_index`` containing every forced word.

    Subgroups are returned as distinct standardized tables (conjugates are
    kept apart), sorted by (index, table).  ``ambient`` restricts the result
    to subgroups of an index-2^k parity subgroup (pruned during the search)
    or of any subgroup given by a word predicate (checked on Schreier
    generators afterwards).
    """
    if max_index < 1:
        raise InvalidParameters("max_index must be >= 1")
    masks = [0, 0, 0]
    predicate = None
    if isinstance(ambient, ParitySubgroup):
        masks = ambient.masks
    elif ambient is not None:
        predicate = ambient
    forced_idx = [to_indices(free_reduce(w)) for w in forced if free_reduce(w)]
    if isinstance(ambient, ParitySubgroup) and not all(ambient.contains(w) for w in forced):
        return []
    raw = _backend.kernels.low_index(pres._conjugates, forced_idx, max_index, masks)
    if len(raw) > max_results:
        raise ResourceExhausted(f"low-index search produced {len(raw)} subgroups")
    out = []
    for t in raw:
        n = len(t) // 3
        if exact_index is not None and n != exact_index:
            continue
        table = CosetTable(pres, tuple(t), SubgroupSpec(pres, tuple(forced)))
        if predicate is not None and not all(predicate(w) for w in table.schreier_generators()):
            continue
        out.append(table)
    out.sort(key=lambda t: (t.size, t.table))
    return out


# ---------------------------------------------------------------------------
# orbits on rows


def suborbits(t: CosetTable, sub_gens: Iterable[Word]) -> list[list[int]]:
    """Orbits of the rows under the group generated by ``sub_gens``.

    Orbits are listed by smallest row; rows inside an orbit are sorted.
    """
    gens = [w for w in sub_gens]
    n = t.size
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for w in gens:
        for r in range(n):
            a, b = find(r), find(t.act(r, w))
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for r in range(n):
        groups.setdefault(find(r), []).append(r)
    return [groups[k] for k in sorted(groups)]


def orbit_words(t: CosetTable, gens: Sequence[Word], start: int = 0) -> dict[int, Word]:
    """BFS orbit of ``start`` under ``gens``: row -> word reaching it."""
    words = {start: ""}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for g in gens:
            s = t.act(r, g)
            if s not in words:
                words[s] = words[r] + g
                queue.append(s)
    return words


def stabilizer_generators(t: CosetTable, gens: Sequence[Word], row: int = 0) -> list[Word]:
    """Schreier generators of the stabilizer of ``row`` in ``<gens>`` acting on ``t``."""
    orbit = orbit_words(t, gens, row)
    out = []
    seen = set()
    for r, u in orbit.items():
        for g in gens:
            s = t.act(r, g)
            w = free_reduce(u + g + inverse(orbit[s]))
            if w and w not in seen and inverse(w) not in seen:
                seen.add(w)
                out.append(w)
    return out


def group_order_bruteforce(pres: Presentation, limit: int = 10_000) -> int:
    """Order of a finite triangle group via the regular coset table."""
    return coset_enumerate(SubgroupSpec(pres, ()), max_cosets=limit * 20).size


__all__ = [
    "Presentation",
    "SubgroupSpec",
    "CosetTable",
    "ParitySubgroup",
    "build_triangle_group",
    "coset_enumerate",
    "subgroup_table",
    "act",
    "contains",
    "low_index_subgroups",
    "suborbits",
    "orbit_words",
    "stabilizer_generators",
    "even_subgroup",
    "intersect",
    "mul",
]
