"""Colorings whose colors are permuted by a symmetry subgroup ``H``.

A coloring is described by a grouping of the H-orbits of tiles, and for each
group ``i`` a subgroup ``J_i <= H`` together with one offset per member
orbit.  Colors of group ``i`` are the left cosets ``h J_i``; the tile
``h g_ij tau_j`` gets the color of ``h J_i``.

Subgroups are stored as right-coset tables of ``J_i`` in the ambient
triangle group, so the left coset ``h J_i`` is the row reached from the
offset row by reading ``h`` backwards.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import geometry as geo
from .catalog import CHIRALLY_PERFECT, PERFECT, FamilyId, Mode, TilingInstance, expected_count, instantiate
from .errors import InvalidParameters, ResourceExhausted
from .groups import CosetTable, ParitySubgroup, low_index_subgroups, stabilizer_generators, subgroup_table, suborbits
from .patch import Patch, PointIndex, realize_patch
from .words import Word, format_word, free_reduce, inverse, parse_word


@dataclass(frozen=True)
class HOrbit:
    """One H-orbit of tiles: the tiles ``h . tau`` with ``tau = representative . t_j``."""

    index: int
    tile_orbit: int
    rows: tuple[int, ...]  # rows of H's coset table forming the class H a S_j
    representative: Word
    stabilizer_words: tuple[Word, ...]  # generators of Stab_H(tau)


class SymmetryContext:
    """Group data shared by all colorings of one instance under one H."""

    def __init__(self, instance: TilingInstance, mode: Mode | str = Mode.FULL):
        self.instance = instance
        self.mode = Mode(mode)
        self.H: ParitySubgroup = instance.symmetry(self.mode)
        self.G: ParitySubgroup = instance.full_symmetry
        self.htable = self.H.coset_table
        self.ambient_index = self.H.index  # [A : H]
        # rows of H's table hit by the symmetry group, with G-words reaching them
        self.grows = _bfs_words(self.htable, self.G.generators)
        self.orbits: list[HOrbit] = []
        self._locate: list[dict[int, tuple[int, Word]]] = []
        for j, spec in enumerate(instance.tile_orbits):
            stab = list(spec.stabilizer)
            table: dict[int, tuple[int, Word]] = {}
            for cls in suborbits_within(self.htable, stab, self.grows):
                rep = cls[0]
                a = self.grows[rep]
                paths = _bfs_words(self.htable, stab, rep, allowed=set(cls))
                k = len(self.orbits)
                conj = tuple(
                    free_reduce(a + s + inverse(a)) for s in stabilizer_generators(self.htable, stab, rep)
                ) if stab else ()
                conj = tuple(w for w in dict.fromkeys(conj) if w)
                self.orbits.append(HOrbit(k, j, tuple(cls), a, conj))
                for r, s in paths.items():
                    table[r] = (k, inverse(s))  # act(r, inverse(s)) == rep
            self._locate.append(table)
        vstab = list(instance.vertex_stabilizer)
        self.vertex_classes: list[Word] = [
            self.grows[cls[0]] for cls in suborbits_within(self.htable, vstab, self.grows)
        ]
        # corona tiles of every vertex class, as (H-orbit, h) with tile = h . tau
        self.coronas: list[list[tuple[int, Word]]] = [
            [self.locate(o, u + c) for o, c in instance.vertex_corona] for u in self.vertex_classes
        ]

    @property
    def n_orbits(self) -> int:
        return len(self.orbits)

    def locate(self, orbit: int, word: Word) -> tuple[int, Word]:
        """Write the tile ``word . t_orbit`` as ``h . tau_k`` with ``h`` in H."""
        word = free_reduce(word)
        r = self.htable.act(0, word)
        try:
            k, s = self._locate[orbit][r]
        except KeyError:
            raise InvalidParameters(f"word {word!r} is not a symmetry of the tiling") from None
        h = free_reduce(word + s + inverse(self.orbits[k].representative))
        return k, h

    def multiplicity(self, members: Iterable[int]) -> int:
        """Largest number of corona tiles from ``members`` at one vertex."""
        ms = set(members)
        return max(sum(1 for k, _ in cor if k in ms) for cor in self.coronas)

    @cached_property
    def h_generators(self) -> tuple[Word, ...]:
        return tuple(self.H.generators) if self.H.weights else ("P", "Q", "R")


def suborbits_within(t: CosetTable, gens: Sequence[Word], rows: Iterable[int]) -> list[list[int]]:
    keep = set(rows)
    return [cls for cls in suborbits(t, gens) if cls[0] in keep]


def _bfs_words(t: CosetTable, gens: Sequence[Word], start: int = 0, allowed: set[int] | None = None) -> dict[int, Word]:
    words = {start: ""}
    queue = deque([start])
    while queue:
        r = queue.popleft()
        for g in gens:
            s = t.act(r, g)
            if s not in words and (allowed is None or s in allowed):
                words[s] = free_reduce(words[r] + g)
                queue.append(s)
    return dict(sorted(words.items()))


def h_orbits(instance: TilingInstance, mode: Mode | str = Mode.FULL) -> list[HOrbit]:
    return list(SymmetryContext(instance, mode).orbits)


# ---------------------------------------------------------------------------
# schemes


@dataclass(frozen=True)
class ColorGroup:
    members: tuple[int, ...]  # H-orbit indices, anchor first
    table: CosetTable  # J in the ambient group
    offsets: tuple[int, ...]  # one row of ``table`` per member, anchor row 0

    def key(self) -> tuple:
        return (self.members, self.table.size, self.table.table, self.offsets)


@dataclass(frozen=True, eq=False)
class ColoringScheme:
    context: SymmetryContext
    groups: tuple[ColorGroup, ...]
    overrides: tuple[tuple[int, int], ...] = field(default=(), compare=False)  # (patch tile index, color)

    @property
    def instance(self) -> TilingInstance:
        return self.context.instance

    @property
    def mode(self) -> Mode:
        return self.context.mode

    @cached_property
    def _lookups(self) -> list[tuple[dict[int, int], int]]:
        out = []
        base = 0
        for g in self.groups:
            rows = sorted(_bfs_words(g.table, self.context.h_generators))
            out.append(({r: i for i, r in enumerate(rows)}, base))
            base += len(rows)
        return out

    @cached_property
    def _member_of(self) -> dict[int, tuple[int, int]]:
        return {k: (i, j) for i, g in enumerate(self.groups) for j, k in enumerate(g.members)}

    @property
    def color_count(self) -> int:
        return sum(len(lk) for lk, _ in self._lookups)

    m = color_count

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(len(lk) for lk, _ in self._lookups)

    def color_in_orbit(self, k: int, h: Word) -> int:
        """Color of the tile ``h . tau_k``."""
        i, j = self._member_of[k]
        g = self.groups[i]
        lookup, base = self._lookups[i]
        return base + lookup[g.table.act(g.offsets[j], h[::-1])]

    def color_of(self, orbit: int, word: Word) -> int:
        """Color of the tile ``word . t_orbit``."""
        k, h = self.context.locate(orbit, word)
        return self.color_in_orbit(k, h)

    def key(self) -> tuple:
        return tuple(g.key() for g in self.groups)

    def __eq__(self, other) -> bool:
        return isinstance(other, ColoringScheme) and self.instance == other.instance and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def with_overrides(self, overrides: dict[int, int]) -> "ColoringScheme":
        return replace(self, overrides=tuple(sorted(overrides.items())))

    def tile_colors(self, patch: Patch) -> list[int]:
        colors = [self.color_of(t.orbit, t.word) for t in patch.tiles]
        for i, c in self.overrides:
            colors[i] = c
        return colors

    def to_text(self) -> str:
        return serialize(self)


def scheme_key(scheme: ColoringScheme) -> tuple:
    return scheme.key()


# ---------------------------------------------------------------------------
# enumeration


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """Set partitions in canonical form: blocks ordered by smallest element."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _compositions(total: int, lows: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not lows:
        if total == 0:
            yield ()
        return
    rest = sum(lows[1:])
    for n in range(lows[0], total - rest + 1):
        for tail in _compositions(total - n, lows[1:]):
            yield (n,) + tail


class Enumerator:
    """Caches subgroup searches and per-group options for one instance and mode."""

    def __init__(self, instance: TilingInstance, mode: Mode | str = Mode.FULL):
        self.ctx = SymmetryContext(instance, mode)
        self._subgroups: dict[tuple[int, int], list[CosetTable]] = {}
        self._options: dict[tuple, list[ColorGroup]] = {}

    def subgroups(self, anchor: int, n: int) -> list[CosetTable]:
        """All ``J <= H`` of index ``n`` in H containing Stab_H of the anchor's tile."""
        key = (anchor, n)
        if key not in self._subgroups:
            ctx = self.ctx
            idx = ctx.ambient_index * n
            forced = list(ctx.orbits[anchor].stabilizer_words)
            self._subgroups[key] = low_index_subgroups(
                ctx.instance.ambient, idx, forced=forced, ambient=ctx.H, exact_index=idx
            )
        return self._subgroups[key]

    def group_options(self, members: tuple[int, ...], n: int, precise: bool) -> list[ColorGroup]:
        key = (members, n, precise)
        if key in self._options:
            return self._options[key]
        ctx = self.ctx
        out: list[ColorGroup] = []
        for table in self.subgroups(members[0], n):
            hrows = _bfs_words(table, ctx.h_generators)
            choices = [[0]]
            for k in members[1:]:
                stab = ctx.orbits[k].stabilizer_words
                choices.append([r for r in hrows if all(table.act(r, s) == r for s in stab)])
            for offs in itertools.product(*choices):
                grp = ColorGroup(members, table, tuple(offs))
                if precise and not self._group_precise(grp, hrows):
                    continue
                out.append(grp)
        self._options[key] = out
        return out

    def _group_precise(self, grp: ColorGroup, hrows: dict[int, Word]) -> bool:
        pos = {k: j for j, k in enumerate(grp.members)}
        for cor in self.ctx.coronas:
            seen = set()
            for k, h in cor:
                if k in pos:
                    r = grp.table.act(grp.offsets[pos[k]], h[::-1])
                    if r in seen:
                        return False
                    seen.add(r)
        return True

    def enumerate(
        self,
        m: int,
        precise_only: bool = False,
        no_shared_orbit_colors: bool = False,
    ) -> list[ColoringScheme]:
        if not isinstance(m, int) or m < 1:
            raise InvalidParameters("number of colors must be >= 1")
        ctx = self.ctx
        out: list[ColoringScheme] = []
        seen: set[tuple] = set()
        for grouping in set_partitions(range(ctx.n_orbits)):
            if no_shared_orbit_colors and any(len(b) > 1 for b in grouping):
                continue
            blocks = [tuple(b) for b in grouping]
            lows = [ctx.multiplicity(b) if precise_only else 1 for b in blocks]
            if sum(lows) > m:
                continue
            for ns in _compositions(m, lows):
                per = [self.group_options(b, n, precise_only) for b, n in zip(blocks, ns)]
                for combo in itertools.product(*per):
                    s = ColoringScheme(ctx, tuple(combo))
                    key = s.key()
                    if key not in seen:
                        seen.add(key)
                        out.append(s)
        out.sort(key=scheme_key)
        return out


def enumerate_colorings(
    instance: TilingInstance,
    mode: Mode | str = Mode.FULL,
    m: int | None = None,
    precise_only: bool = False,
    no_shared_orbit_colors: bool = False,
) -> list[ColoringScheme]:
    """All colorings with ``m`` colors permuted by H, one per tile partition.

    Schemes are sorted by :func:`scheme_key`.  ``m`` defaults to the valency.
    """
    m = instance.valency if m is None else m
    return Enumerator(instance, mode).enumerate(m, precise_only, no_shared_orbit_colors)


def is_precise(scheme: ColoringScheme) -> bool:
    """No two tiles at a common vertex share a color (checked once per vertex H-class)."""
    for cor in scheme.context.coronas:
        cols = [scheme.color_in_orbit(k, h) for k, h in cor]
        if len(set(cols)) != len(cols):
            return False
    return True


# ---------------------------------------------------------------------------
# perfect versus chirally perfect


def _tile_map(patch: Patch, matrix: np.ndarray) -> list[int | None]:
    """Image of each patch tile under an isometry, or None if it leaves the patch."""
    out: list[int | None] = []
    for t in patch.tiles:
        out.append(patch.tile_index.find(matrix @ t.center))
    return out


def _induced_map(colors: Sequence[int], tmap: Sequence[int | None]) -> tuple[dict[int, int], list[tuple[int, int]]]:
    """Color map induced by a tile map and the conflicting tile pairs."""
    cmap: dict[int, int] = {}
    witness: dict[int, int] = {}
    bad: list[tuple[int, int]] = []
    for i, j in enumerate(tmap):
        if j is None:
            continue
        a, b = colors[i], colors[j]
        if a in cmap and cmap[a] != b:
            bad.append((witness[a], i))
        else:
            cmap[a] = b
            witness.setdefault(a, i)
    return cmap, bad


def _is_class_map(colors: Sequence[int], tmap: Sequence[int | None]) -> bool:
    cmap, bad = _induced_map(colors, tmap)
    return not bad and len(set(cmap.values())) == len(cmap)


def orientation_reversing_symmetry(instance: TilingInstance, patch: Patch) -> np.ndarray | None:
    """An orientation-reversing symmetry of the tiling as a matrix, if any.

    Word-representable when the full symmetry group contains odd words;
    otherwise (the snub family with p = q) the reflection in the shared edge
    of the two adjacent triangles at the seed vertex.
    """
    m = patch.mirrors
    if instance.mirror_symmetric:
        odd = next(w for w in instance.full_symmetry.generators if len(w) % 2)
        return m.matrix(odd)
    if instance.family is FamilyId.SNUB5 and instance.p == instance.q:
        tri = [t for t in patch.tiles[: instance.valency] if instance.tile_orbits[t.orbit].gon == 3]
        for a, b in itertools.combinations(tri, 2):
            shared = [v for v in a.vertex_ids if v in b.vertex_ids]
            if len(shared) == 2:
                x, y = (patch.vertices[v].point for v in shared)
                return m.reflection_through(x, y)
    return None


def classify(scheme: ColoringScheme, patch: Patch | None = None) -> str:
    """``perfect`` if an orientation-reversing symmetry permutes the color classes."""
    if scheme.mode is Mode.FULL:
        return PERFECT
    inst = scheme.instance
    patch = patch if patch is not None else realize_patch(inst, 3)
    mirror = orientation_reversing_symmetry(inst, patch)
    if mirror is None:
        return CHIRALLY_PERFECT
    colors = scheme.tile_colors(patch)
    return PERFECT if _is_class_map(colors, _tile_map(patch, mirror)) else CHIRALLY_PERFECT


# ---------------------------------------------------------------------------
# audits on a geometric patch


@dataclass
class AuditReport:
    vertex_violations: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)  # (vertex, colors)
    equivariance_violations: list[tuple[Word, int, int]] = field(default_factory=list)  # (generator, tile, tile)
    colors_seen: int = 0

    @property
    def ok(self) -> bool:
        return not self.vertex_violations and not self.equivariance_violations

    def __len__(self) -> int:
        return len(self.vertex_violations) + len(self.equivariance_violations)


def patch_audit(scheme: ColoringScheme, patch: Patch) -> AuditReport:
    """Brute-force check of preciseness and H-equivariance on a patch."""
    colors = scheme.tile_colors(patch)
    rep = AuditReport(colors_seen=len(set(colors)))
    for vi, v in enumerate(patch.vertices):
        if not v.complete:
            continue
        cols = tuple(colors[i] for i in v.tiles)
        if len(set(cols)) != len(cols):
            rep.vertex_violations.append((vi, cols))
    for g in scheme.context.h_generators:
        tmap = _tile_map(patch, patch.mirrors.matrix(g))
        cmap, bad = _induced_map(colors, tmap)
        rep.equivariance_violations.extend((g, a, b) for a, b in bad)
        if len(set(cmap.values())) != len(cmap):
            inv: dict[int, int] = {}
            for i, j in enumerate(tmap):
                if j is None:
                    continue
                c = cmap[colors[i]]
                if c in inv and colors[inv[c]] != colors[i]:
                    rep.equivariance_violations.append((g, inv[c], i))
                    break
                inv.setdefault(c, i)
    return rep


def corrupt(scheme: ColoringScheme, patch: Patch, rng: np.random.Generator) -> ColoringScheme:
    """Recolor one interior tile with a different color."""
    interior = sorted({i for v in patch.vertices if v.complete for i in v.tiles})
    inner = [i for i in interior if patch.tiles[i].layer <= max(1, patch.radius - 1)]
    i = int(rng.choice(inner))
    c = scheme.color_of(patch.tiles[i].orbit, patch.tiles[i].word)
    others = [k for k in range(scheme.color_count) if k != c]
    return scheme.with_overrides({i: int(rng.choice(others))})


# ---------------------------------------------------------------------------
# closed-form sweeps


@dataclass
class SweepRow:
    params: tuple[int, ...]
    enumerated: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.enumerated == self.expected


@dataclass
class SweepReport:
    family: FamilyId
    mode: str
    rows: list[SweepRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)


def _needs_geometric_mirror(instance: TilingInstance) -> bool:
    return instance.family is FamilyId.SNUB5 and instance.p == instance.q


def mirror_classes(schemes: Sequence[ColoringScheme], patch: Patch) -> list[list[int]]:
    """Group schemes whose partitions are mirror images of each other.

    Partitions are compared on the patch tiles whose mirror image is also
    in the patch, after renaming colors by first appearance.
    """
    if not schemes:
        return []
    mirror = orientation_reversing_symmetry(schemes[0].instance, patch)
    if mirror is None:
        return [[i] for i in range(len(schemes))]
    tmap = _tile_map(patch, mirror)
    dom = [i for i, j in enumerate(tmap) if j is not None]
    sig: dict[tuple, int] = {}
    images = []
    for n, sc in enumerate(schemes):
        cols = sc.tile_colors(patch)
        sig.setdefault(_renamed(cols[i] for i in dom), n)
        images.append(_renamed(cols[tmap[i]] for i in dom))
    parent = list(range(len(schemes)))
    for n, img in enumerate(images):
        k = sig.get(img)
        if k is not None:
            a, b = sorted((parent[n], parent[k]))
            parent = [a if x == b else x for x in parent]
    classes: dict[int, list[int]] = {}
    for n, r in enumerate(parent):
        classes.setdefault(r, []).append(n)
    return [classes[r] for r in sorted(classes)]


def _renamed(colors: Iterable[int]) -> tuple[int, ...]:
    names: dict[int, int] = {}
    return tuple(names.setdefault(c, len(names)) for c in colors)


def count_precise(instance: TilingInstance, mode: str = PERFECT, up_to_mirror: bool = True) -> int:
    """Precise colorings with as many colors as the valency, in the given counting mode.

    Chirally perfect colorings come in mirror pairs; with ``up_to_mirror``
    each pair counts once.
    """
    if mode == PERFECT and not _needs_geometric_mirror(instance):
        return len(enumerate_colorings(instance, Mode.FULL, precise_only=True))
    schemes = enumerate_colorings(instance, Mode.CHIRAL, precise_only=True)
    patch = realize_patch(instance, 3)
    wanted = [s for s in schemes if classify(s, patch) == mode]
    if mode == PERFECT or not up_to_mirror:
        return len(wanted)
    return len(mirror_classes(wanted, patch))


def sweep_params(family: FamilyId, p_range: Iterable[int], q_range: Iterable[int] | None, mode: str) -> list[tuple[int, ...]]:
    out = []
    qs = list(q_range) if q_range is not None else None
    for p in p_range:
        if family is FamilyId.HEX6_EQ:
            out.append((p,))
            continue
        for q in qs if qs is not None else [p]:
            if family in (FamilyId.RHOMBI, FamilyId.HEX6_NEQ) and p == q:
                continue
            if family is FamilyId.SNUB5 and (p == q) != (mode == CHIRALLY_PERFECT):
                continue
            out.append((p, q))
    return out


def verify_proposition(
    family: FamilyId | str,
    p_range: Iterable[int],
    q_range: Iterable[int] | None = None,
    mode: str | None = None,
    params: Iterable[tuple[int, ...]] | None = None,
) -> SweepReport:
    """Compare enumerated precise-coloring counts with the closed forms."""
    fam = FamilyId(family) if not isinstance(family, FamilyId) else family
    mode = mode or PERFECT
    cells = list(params) if params is not None else sweep_params(fam, p_range, q_range, mode)
    rows = []
    for ps in cells:
        inst = instantiate(fam, *ps)
        rows.append(SweepRow(tuple(ps), count_precise(inst, mode), expected_count(fam, tuple(ps), mode)))
    return SweepReport(fam, mode, rows)


# ---------------------------------------------------------------------------
# named schemes and text form


def _generated_index(pres, gens: list[Word], bound: int) -> int | None:
    try:
        return subgroup_table(pres, gens, max_cosets=bound).size
    except ResourceExhausted:
        return None


def minimal_generators(table: CosetTable) -> list[Word]:
    """A short generating set of the subgroup, picked from its Schreier generators."""
    pres = table.presentation
    bound = max(2000, 100 * table.size)
    cands = sorted(set(table.schreier_generators()), key=lambda w: (len(w), w))
    gens: list[Word] = []
    for w in cands:
        if _generated_index(pres, gens, bound) == table.size:
            break
        gens.append(w)
    for w in list(reversed(gens)):
        trial = [g for g in gens if g != w]
        if _generated_index(pres, trial, bound) == table.size:
            gens = trial
    return sorted(gens, key=lambda w: (len(w), w))


def serialize(scheme: ColoringScheme) -> str:
    ctx = scheme.context
    lines = [f"scheme {ctx.instance.spec} mode={ctx.mode.value} m={scheme.color_count}"]
    for i, g in enumerate(scheme.groups):
        gens = ", ".join(format_word(w) for w in minimal_generators(g.table))
        members = ",".join(str(k) for k in g.members)
        lines.append(f"group {i + 1}: orbits {members} index {scheme.indices[i]} J=<{gens}>")
        tr = _bfs_words(g.table, ("P", "Q", "R"))
        for k, off in zip(g.members[1:], g.offsets[1:]):
            lines.append(f"  offset {k}: {format_word(tr[off]) or 'e'}")
    return "\n".join(lines)


def scheme_from_subgroups(
    instance: TilingInstance,
    groups: Sequence[tuple[Sequence[int], Sequence[Word], Sequence[Word]]],
    mode: Mode | str = Mode.FULL,
) -> ColoringScheme:
    """Build a scheme from subgroup generators and offset words.

    Each entry is ``(members, J generators, offsets)``; J is taken relative
    to the anchor tile of its first member, offsets are words in H (anchor
    first, normally empty).
    """
    ctx = SymmetryContext(instance, mode)
    built = []
    for members, gens, offs in groups:
        table = subgroup_table(instance.ambient, [free_reduce(parse_word(w)) for w in gens])
        offsets = tuple(table.act(0, free_reduce(parse_word(w))) for w in offs)
        built.append(ColorGroup(tuple(members), table, offsets))
    return ColoringScheme(ctx, tuple(built))


def parse_scheme(text: str) -> ColoringScheme:
    """Inverse of :func:`serialize`."""
    from .catalog import parse_instance

    lines = [ln.rstrip() for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "scheme":
        raise InvalidParameters("not a scheme block")
    inst = parse_instance(head[1])
    mode = head[2].split("=", 1)[1]
    groups = []
    for ln in lines[1:]:
        if ln.startswith("group"):
            _, rest = ln.split(":", 1)
            parts = rest.split()
            members = [int(x) for x in parts[1].split(",")]
            gens_text = rest[rest.index("J=<") + 3 : rest.rindex(">")]
            gens = [g.strip() for g in gens_text.split(",") if g.strip()]
            groups.append((members, gens, [""]))
        else:
            word = ln.split(":", 1)[1].strip()
            groups[-1][2].append("" if word == "e" else word)
    return scheme_from_subgroups(inst, groups, mode)


def tile_at(instance: TilingInstance, mirrors: geo.Mirrors, orbit: int, rotation: Word, patch: Patch) -> Word:
    """Word of the tile of the given orbit whose center the rotation fixes."""
    mat = mirrors.matrix(free_reduce(parse_word(rotation)))
    for t in patch.tiles:
        if t.orbit == orbit and np.max(np.abs(mat @ t.center - t.center)) < geo.POINT_TOL * max(1.0, float(np.max(np.abs(t.center)))):
            return t.word
    raise InvalidParameters(f"no tile of orbit {orbit} is fixed by {rotation}")


def coset_union_group(
    ctx: SymmetryContext, members: Sequence[int], gens: Sequence[Word], tile_words: Sequence[Word]
) -> ColorGroup:
    """Group for ``{h (J t_1 u ... u J t_n)}`` with ``t_k = tile_words[k] . tau``.

    J is conjugated to the anchor: with ``t = w . tau`` the set ``J t`` equals
    ``w (w^-1 J w) tau``; other members become offsets.
    """
    pres = ctx.instance.ambient
    base = subgroup_table(pres, [free_reduce(parse_word(w)) for w in gens])
    w0 = free_reduce(tile_words[0])
    table = base.rerooted(base.act(0, w0))
    # the table is now that of w0^-1 J w0; an extra tile w_k . tau_k
    # sits at offset w0^-1 w_k
    offsets = tuple(table.act(0, free_reduce(inverse(w0) + free_reduce(w))) for w in tile_words)
    return ColorGroup(tuple(members), table, offsets)
