"""Finite patches of a tiling and the checks that tie catalog data to geometry."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import _dd
from . import geometry as geo
from .catalog import TilingInstance
from .errors import InvalidParameters, ToleranceCollision
from .words import Word, free_reduce, inverse

MAX_RADIUS = 5
AMBIGUOUS = 1e-5
_ULPS = 8 * np.finfo(float).eps


class PointIndex:
    """Identifies points of R^3 up to an absolute tolerance.

    Coordinates of far hyperbolic points are huge, but distinct points always
    differ by at least their chord length, so the test stays absolute.  A
    rounding allowance of a few ulps of ``|a|`` is added on top.
    """

    def __init__(self, tol: float = geo.POINT_TOL):
        self.tol = tol
        self.cell = 2.0 * tol
        self.cells: dict[tuple[int, int, int], list[int]] = {}
        self.points: list[tuple[float, float, float]] = []

    def find(self, x) -> int | None:
        x0, x1, x2 = float(x[0]), float(x[1]), float(x[2])
        lim = self.tol + _ULPS * max(abs(x0), abs(x1), abs(x2))
        if lim > self.cell:
            raise ToleranceCollision(f"coordinates of size {lim / _ULPS:.3g} exceed double precision")
        s = self.cell
        # only the cells the box [x - lim, x + lim] reaches, usually one
        r0 = range(math.floor((x0 - lim) / s), math.floor((x0 + lim) / s) + 1)
        r1 = range(math.floor((x1 - lim) / s), math.floor((x1 + lim) / s) + 1)
        r2 = range(math.floor((x2 - lim) / s), math.floor((x2 + lim) / s) + 1)
        cells, pts = self.cells, self.points
        for k0 in r0:
            for k1 in r1:
                for k2 in r2:
                    for i in cells.get((k0, k1, k2), ()):
                        p = pts[i]
                        if abs(p[0] - x0) <= lim and abs(p[1] - x1) <= lim and abs(p[2] - x2) <= lim:
                            return i
        return None

    def add(self, x) -> tuple[int, bool]:
        x = (float(x[0]), float(x[1]), float(x[2]))
        i = self.find(x)
        if i is not None:
            return i, False
        i = len(self.points)
        self.points.append(x)
        s = self.cell
        self.cells.setdefault((math.floor(x[0] / s), math.floor(x[1] / s), math.floor(x[2] / s)), []).append(i)
        return i, True

    def check_separation(self, gap: float = AMBIGUOUS) -> None:
        """Raise if two stored points are closer than ``gap``.

        Such pairs are neither clearly equal nor clearly distinct, which means
        floating-point error has grown too large for the patch radius.
        """
        coarse = PointIndex(gap)
        for x in self.points:
            hit = coarse.find(x)
            if hit is not None:
                raise ToleranceCollision(
                    f"points {hit} and {len(coarse)} are within {gap:g}: precision exhausted"
                )
            coarse.add(x)

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class PatchTile:
    orbit: int
    word: Word
    center: np.ndarray
    polygon: np.ndarray
    layer: int
    matrix: np.ndarray = field(repr=False)
    vertex_ids: tuple[int, ...] = ()


@dataclass
class PatchVertex:
    point: np.ndarray
    word: Word
    tiles: tuple[int, ...] = ()
    complete: bool = False


@dataclass
class Patch:
    instance: TilingInstance
    mirrors: geo.Mirrors
    seed: np.ndarray
    radius: int
    tiles: list[PatchTile]
    vertices: list[PatchVertex]
    tile_index: PointIndex = field(repr=False)
    vertex_index: PointIndex = field(repr=False)
    seed_centers: list[np.ndarray] = field(repr=False, default_factory=list)
    vertex_dd: tuple[np.ndarray, np.ndarray] | None = field(repr=False, default=None)

    @property
    def model(self) -> geo.ModelSpace:
        return self.mirrors.model

    def tile_at(self, center: np.ndarray) -> int | None:
        return self.tile_index.find(center)

    def locate(self, orbit: int, word: Word) -> int | None:
        """Index of the tile ``word . t_orbit`` if it lies in the patch."""
        c = self.mirrors.matrix(free_reduce(word)) @ self.seed_centers[orbit]
        i = self.tile_index.find(c)
        if i is not None and self.tiles[i].orbit != orbit:
            return None
        return i

    def complete_vertices(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.complete]

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for t in self.tiles:
            ids = t.vertex_ids
            for a, b in zip(ids, ids[1:] + ids[:1]):
                out.add((min(a, b), max(a, b)))
        return out


@dataclass
class SeedTiles:
    vertex: np.ndarray
    polygons: list[np.ndarray]
    centers: list[np.ndarray]


def seed_tiles(instance: TilingInstance, mirrors: geo.Mirrors, x: np.ndarray | None = None) -> SeedTiles:
    if x is None:
        x = geo.generator_point(instance, mirrors)
    polys, centers = [], []
    for spec in instance.tile_orbits:
        poly = np.array([mirrors.apply(w, x) for w in spec.vertex_words])
        polys.append(poly)
        centers.append(mirrors.model.midpoint(poly))
    return SeedTiles(x, polys, centers)


def realize_patch(instance: TilingInstance, radius: int, mirrors: geo.Mirrors | None = None) -> Patch:
    """All tiles within ``radius`` vertex-adjacency steps of the seed vertex.

    Radius 1 is the corona of the seed vertex; each further layer adds every
    tile sharing a vertex with the previous layer.  Group elements are
    multiplied in double-double precision so that far tiles of hyperbolic
    patches stay accurate.
    """
    if not isinstance(radius, int) or isinstance(radius, bool) or radius < 1:
        raise InvalidParameters("patch radius must be >= 1")
    if radius > MAX_RADIUS:
        raise InvalidParameters(f"patch radius is capped at {MAX_RADIUS}")
    m = mirrors if mirrors is not None else geo.mirror_setup(instance.ambient)
    seed = seed_tiles(instance, m)
    model = m.model
    orbits = instance.tile_orbits
    x_dd = _dd.from_float(seed.vertex[:, None])
    # seed polygons in double-double: columns are vertices
    polys_dd = []
    for spec in orbits:
        cols = [_dd.matmul(m.dd_matrix(free_reduce(v)), x_dd) for v in spec.vertex_words]
        polys_dd.append((np.hstack([c[0] for c in cols]), np.hstack([c[1] for c in cols])))
    corona = [(o, free_reduce(w)) for o, w in instance.vertex_corona]
    # per orbit: one step matrix per (vertex word, corona entry)
    steps = []
    for spec in orbits:
        entries = []
        for v in spec.vertex_words:
            for o, w in corona:
                entries.append((o, free_reduce(v + w), v))
        mats = [m.dd_matrix(e[1]) for e in entries]
        stack = (np.array([a[0] for a in mats]), np.array([a[1] for a in mats]))
        targets = np.array([seed.centers[e[0]] for e in entries])
        steps.append((entries, stack, targets))

    tiles: list[PatchTile] = []
    tile_dd: list[tuple[np.ndarray, np.ndarray]] = []
    tile_mats: list[tuple[np.ndarray, np.ndarray]] = []
    tindex, vindex = PointIndex(), PointIndex()
    vertices: list[PatchVertex] = []
    vdd_hi: list[np.ndarray] = []
    vdd_lo: list[np.ndarray] = []
    incid: list[list[int]] = []
    vfirst: list[tuple[int, int]] = []

    def add_tile(orbit: int, word: Word, mdd, center: np.ndarray, layer: int) -> None:
        i, new = tindex.add(center)
        if not new:
            if tiles[i].orbit != orbit:
                raise ToleranceCollision(f"tiles of orbits {tiles[i].orbit} and {orbit} share a center")
            return
        poly = _dd.matmul(mdd, polys_dd[orbit])
        tiles.append(PatchTile(orbit, free_reduce(word), model.normalize(center), _dd.to_float(poly).T, layer, mdd[0]))
        tile_dd.append(poly)
        tile_mats.append(mdd)

    for o, w in corona:
        mdd = m.dd_matrix(w)
        add_tile(o, w, mdd, mdd[0] @ seed.centers[o], 1)

    start = 0
    for layer in range(1, radius + 1):
        end = len(tiles)
        for ti in range(start, end):
            t = tiles[ti]
            poly = tile_dd[ti]
            spec = orbits[t.orbit]
            ids = []
            for k, v in enumerate(spec.vertex_words):
                pt = poly[0][:, k]
                i, new = vindex.add(pt)
                if new:
                    vertices.append(PatchVertex(model.normalize(pt), free_reduce(t.word + v)))
                    incid.append([])
                    vdd_hi.append(pt)
                    vdd_lo.append(poly[1][:, k])
                    vfirst.append((ti, k))
                incid[i].append(ti)
                ids.append(i)
            t.vertex_ids = tuple(ids)
        if layer < radius:
            for ti in range(start, end):
                t = tiles[ti]
                entries, stack, targets = steps[t.orbit]
                mdd = tile_mats[ti]
                cand = _dd.matmul((mdd[0][None], mdd[1][None]), stack)
                centers = np.einsum("nab,nb->na", cand[0], targets)
                for e, (o, w, _) in enumerate(entries):
                    add_tile(o, t.word + w, (cand[0][e], cand[1][e]), centers[e], layer + 1)
        start = end
    tindex.check_separation()
    vindex.check_separation()

    k = instance.valency
    incs = [sorted(set(x)) for x in incid]
    angles = _vertex_angles(model, seed, tiles, tile_mats, vfirst, incs)
    for vi, v in enumerate(vertices):
        inc = incs[vi]
        order = [i for _, i in sorted(zip(angles[vi], inc))]
        v.tiles = tuple(order)
        v.complete = len(order) == k
        if len(order) > k:
            raise ToleranceCollision(f"vertex {vi} has {len(order)} incident tiles")
    patch = Patch(instance, m, seed.vertex, radius, tiles, vertices, tindex, vindex, seed.centers)
    if vdd_hi:
        patch.vertex_dd = (np.array(vdd_hi), np.array(vdd_lo))
    return patch


def _vertex_angles(model, seed, tiles, tile_mats, vfirst, incs) -> list[np.ndarray]:
    """Angles of the incident tile centers around every vertex.

    Each vertex is pulled back to the seed polygon it was first read from, so
    far hyperbolic vertices keep full accuracy.
    """
    if not incs:
        return []
    pair_v = np.repeat(np.arange(len(incs)), [len(x) for x in incs])
    pair_t = np.fromiter((i for x in incs for i in x), dtype=np.intp, count=len(pair_v))
    first_t = np.array([a for a, _ in vfirst], dtype=np.intp)
    first_k = np.array([k for _, k in vfirst], dtype=np.intp)
    orbit = np.array([t.orbit for t in tiles], dtype=np.intp)
    mh = np.array([m[0] for m in tile_mats])
    ml = np.array([m[1] for m in tile_mats])
    centers = np.array(seed.centers)
    a = first_t[pair_v]
    if model.kind == geo.EUCLIDEAN:
        rel = np.linalg.inv(mh[a]) @ mh[pair_t]
    else:
        # reflections preserve the form, so the inverse is J M^T J
        j = np.diag(model.form)
        sign = j[:, None] * j[None, :]
        inv = (np.swapaxes(mh[a], -1, -2) * sign, np.swapaxes(ml[a], -1, -2) * sign)
        rel = _dd.to_float(_dd.matmul(inv, (mh[pair_t], ml[pair_t])))
    pts = np.einsum("nab,nb->na", rel, centers[orbit[pair_t]])
    bases = np.array([seed.polygons[orbit[a_]][k_] for a_, k_ in zip(first_t, first_k)])
    ang = _angles_batch(model, bases[pair_v], pts, pair_v)
    # a pull-back by an odd word mirrors the picture, so the order flips
    flip = np.linalg.det(mh[first_t]) < 0
    ang = np.where(flip[pair_v], -ang, ang)
    bounds = np.cumsum([0] + [len(x) for x in incs])
    return [ang[bounds[i] : bounds[i + 1]] for i in range(len(incs))]


def _angles_batch(model, x: np.ndarray, y: np.ndarray, group: np.ndarray) -> np.ndarray:
    form = np.diag(model.form)

    def inner(u, v):
        return np.sum(u * v * form, axis=-1)

    if model.kind == geo.EUCLIDEAN:
        t = y / y[:, 2:3] - x / x[:, 2:3]
        e1 = np.zeros_like(t)
        e1[:, 0] = 1.0
        e2 = np.zeros_like(t)
        e2[:, 1] = 1.0
    else:
        t = y - (inner(x, y) / inner(x, x))[:, None] * x
        # first incident tile of each vertex fixes the reference direction
        firsts = np.r_[0, np.flatnonzero(np.diff(group)) + 1]
        ref = np.repeat(t[firsts], np.diff(np.r_[firsts, len(group)]), axis=0)
        e1 = ref / np.sqrt(inner(ref, ref))[:, None]
        e2 = np.cross(x, e1) * form
        e2 = e2 / np.sqrt(inner(e2, e2))[:, None]
    return np.arctan2(inner(e2, t), inner(e1, t))


# ---------------------------------------------------------------------------
# validation of catalog constants


def derive_corona(instance: TilingInstance, mirrors: geo.Mirrors | None = None) -> list[tuple[int, Word]]:
    """Tiles around the seed vertex, read off the tile orbits' vertex words.

    The tile ``v^-1 . t_j`` contains the seed vertex whenever ``v . x`` is a
    vertex of ``t_j``; the result is sorted by direction around the vertex,
    starting from orbit 0's seed tile.
    """
    m = mirrors if mirrors is not None else geo.mirror_setup(instance.ambient)
    seed = seed_tiles(instance, m)
    index = PointIndex()
    found: list[tuple[int, Word, np.ndarray]] = []
    stab = _finite_closure(m, instance.vertex_stabilizer)
    for j, spec in enumerate(instance.tile_orbits):
        for s, v in product(stab, spec.vertex_words):
            w = free_reduce(s + inverse(v))
            c = m.apply(w, seed.centers[j])
            _, new = index.add(c)
            if new:
                found.append((j, w, c))
    angles = geo.tangent_angles(m.model, seed.vertex, [c for _, _, c in found])
    ordered = [(j, w) for _, (j, w, _) in sorted(zip(angles, found), key=lambda z: z[0])]
    start = next(i for i, (j, w) in enumerate(ordered) if j == 0 and w == "")
    return ordered[start:] + ordered[:start]


def _finite_closure(m: geo.Mirrors, gens, limit: int = 1000) -> list[Word]:
    """Words for the elements of the finite group generated by ``gens``."""
    words = [""]
    index = PointIndex(1e-9)
    probe = np.array([0.31, 0.17, 1.0])
    probe = m.model.normalize(probe) if m.model.kind != geo.SPHERICAL else probe / np.linalg.norm(probe)
    index.add(probe)
    i = 0
    while i < len(words):
        for g in gens:
            w = free_reduce(words[i] + g)
            if index.add(m.apply(w, probe))[1]:
                words.append(w)
                if len(words) > limit:
                    raise ValueError("stabilizer is not finite")
        i += 1
    return words


def tile_stabilizer(instance: TilingInstance, orbit: int, mode: str = "full", mirrors: geo.Mirrors | None = None) -> list[Word]:
    """Elements of H fixing the seed tile of ``orbit``, one word each."""
    m = mirrors if mirrors is not None else geo.mirror_setup(instance.ambient)
    h = instance.symmetry(mode)
    return [w for w in _finite_closure(m, instance.tile_orbits[orbit].stabilizer) if h.contains(w)]


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)
    relator_residual: float = 0.0
    newton_iterations: int = 0
    solve_residual: float = 0.0
    edge_spread: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def __str__(self) -> str:
        head = "ok" if self.ok else f"{len(self.failures)} failure(s)"
        return "\n".join([head] + [f"  - {f}" for f in self.failures])


def edge_lengths(patch: Patch) -> np.ndarray:
    """Length of every patch edge, from double-double vertex coordinates."""
    edges = sorted(patch.edges())
    if not edges or patch.vertex_dd is None:
        return np.zeros(0)
    a = np.array([e[0] for e in edges])
    b = np.array([e[1] for e in edges])
    hi, lo = patch.vertex_dd
    d = _dd.sub((hi[a], lo[a]), (hi[b], lo[b]))
    kind = patch.model.kind
    if kind == geo.EUCLIDEAN:
        # homogeneous coordinates with z == 1 up to rounding
        dx, dy = _dd.to_float((d[0][:, 0], d[1][:, 0])), _dd.to_float((d[0][:, 1], d[1][:, 1]))
        return np.hypot(dx, dy)
    sq = [_dd.mul((d[0][:, k], d[1][:, k]), (d[0][:, k], d[1][:, k])) for k in range(3)]
    n2 = _dd.add(sq[0], sq[1])
    n2 = _dd.sub(n2, sq[2]) if kind == geo.HYPERBOLIC else _dd.add(n2, sq[2])
    chord = np.sqrt(np.maximum(_dd.to_float(n2), 0.0))
    if kind == geo.SPHERICAL:
        return 2.0 * np.arcsin(np.minimum(1.0, chord / 2.0))
    return 2.0 * np.arcsinh(chord / 2.0)


def _same_cycle(a: list, b: list) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    for seq in (b, b[::-1]):
        for s in range(len(seq)):
            if seq[s:] + seq[:s] == a:
                return True
    return False


def validate_realization(instance: TilingInstance, radius: int = 2, full_symmetry=None, ball: int = 6) -> ValidationReport:
    """Cross-check the catalog constants of ``instance`` against geometry.

    Checks relators, tile and vertex stabilizers, the corona words, and that
    exactly the words of the full symmetry group map the tiling to itself.
    ``full_symmetry`` overrides the instance's predicate (for negative tests).
    """
    rep = ValidationReport()
    m = geo.mirror_setup(instance.ambient)
    rep.relator_residual = geo.relator_residual(m)
    if rep.relator_residual >= geo.RELATOR_TOL:
        rep.failures.append(f"relator residual {rep.relator_residual:.2e}")
    sol = geo.generator_point(instance, m, report=True)
    rep.newton_iterations, rep.solve_residual = sol.iterations, sol.residual
    seed = seed_tiles(instance, m, sol.point)
    model = m.model
    for j, spec in enumerate(instance.tile_orbits):
        c = seed.centers[j]
        for w in spec.stabilizer:
            if model.distance(m.apply(w, c), c) > geo.POINT_TOL:
                rep.failures.append(f"{spec.name}: stabilizer word {w} moves the seed tile")
        poly = seed.polygons[j]
        sides = [model.distance(poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly))]
        if max(sides) - min(sides) > geo.POINT_TOL * max(sides):
            rep.failures.append(f"{spec.name}: seed polygon is not equilateral")
    for w in instance.vertex_stabilizer:
        if model.distance(m.apply(w, seed.vertex), seed.vertex) > geo.POINT_TOL:
            rep.failures.append(f"vertex stabilizer word {w} moves the seed vertex")
    derived = derive_corona(instance, m)
    cat_centers = [_center_key(m, seed, o, w) for o, w in instance.vertex_corona]
    der_centers = [_center_key(m, seed, o, w) for o, w in derived]
    if len(derived) != instance.valency:
        rep.failures.append(f"seed vertex has {len(derived)} incident tiles, expected {instance.valency}")
    if not _same_cycle(cat_centers, der_centers):
        rep.failures.append(f"corona words {list(instance.vertex_corona)} disagree with geometry {derived}")
    gons = [instance.tile_orbits[o].gon for o, _ in instance.vertex_corona]
    if not _same_cycle(gons, list(instance.config)):
        rep.failures.append(f"corona gons {gons} do not read {instance.label}")
    try:
        patch = realize_patch(instance, radius, m)
    except Exception as exc:  # report, do not raise
        rep.failures.append(f"patch construction failed: {exc}")
        return rep
    lengths = edge_lengths(patch)
    if lengths.size:
        rep.edge_spread = float((lengths.max() - lengths.min()) / lengths.max())
        if rep.edge_spread > geo.POINT_TOL:
            rep.failures.append(f"edge length spread {rep.edge_spread:.2e}")
    for vi in patch.complete_vertices():
        gs = [instance.tile_orbits[patch.tiles[t].orbit].gon for t in patch.vertices[vi].tiles]
        if not _same_cycle(gs, list(instance.config)):
            rep.failures.append(f"vertex {vi} reads {gs}")
            break
    pred = full_symmetry if full_symmetry is not None else instance.full_symmetry.contains
    rep.failures.extend(_symmetry_failures(patch, pred, ball))
    return rep


def _center_key(m, seed, o, w):
    c = m.apply(free_reduce(w), seed.centers[o])
    d = c / np.linalg.norm(c)
    return tuple(np.round(d, 6))


def _symmetry_failures(patch: Patch, predicate, ball: int) -> list[str]:
    """Words of length <= ``ball`` map the tiling to itself iff they pass ``predicate``.

    A word is judged only where the patch settles the question: the seed
    vertex lands on a complete vertex (whose tiles are all known), or
    strictly inside a tile (so it is no vertex at all).  Other words are
    skipped.
    """
    from .words import word_ball

    m = patch.mirrors
    inner = [t for t in patch.tiles if t.layer == 1]
    inside = _tile_interiors(patch)
    out = []
    for w in word_ball(ball, "PQR"):
        mat = m.matrix(w)
        y = mat @ patch.seed
        j = patch.vertex_index.find(y)
        if j is not None:
            if not patch.vertices[j].complete:
                continue
            maps = all(_is_tile(patch, t.orbit, mat @ t.center, mat @ t.polygon[0]) for t in inner)
        elif inside(y):
            maps = False
        else:
            continue
        if maps != bool(predicate(w)):
            out.append(f"word {w or '1'}: symmetry={maps} but predicate says {bool(predicate(w))}")
            if len(out) > 5:
                break
    return out


def _tile_interiors(patch: Patch, margin: float = 1e-9):
    """Predicate: does a point lie strictly inside some patch tile?

    Geodesics are planes through the origin in all three models, so a tile
    is the intersection of the half-spaces cut by its edge planes.
    """
    normals, lens = [], []
    for t in patch.tiles:
        poly = t.polygon
        n = np.cross(poly, np.roll(poly, -1, axis=0))
        n = n / np.linalg.norm(n, axis=1)[:, None]
        n *= np.sign(n @ t.center)[:, None]
        normals.append(n)
        lens.append(len(poly))
    planes = np.vstack(normals)
    owner = np.repeat(np.arange(len(patch.tiles)), lens)

    def inside(y: np.ndarray) -> bool:
        y = y / np.linalg.norm(y)
        outside = np.zeros(len(patch.tiles), dtype=bool)
        np.logical_or.at(outside, owner, planes @ y <= margin)
        return not outside.all()

    return inside


def _is_tile(patch: Patch, orbit: int, center: np.ndarray, vertex: np.ndarray) -> bool:
    """Whether a polygon with this center and vertex is a tile of the tiling.

    Tiles near the seed vertex are compared against the seed tiles' images
    under the full symmetry group via the patch, which contains every tile
    within distance ``radius`` of the seed.
    """
    i = patch.tile_index.find(center)
    if i is None:
        return False
    t = patch.tiles[i]
    if t.orbit != orbit:
        return False
    return patch.vertex_index.find(vertex) is not None


# ---------------------------------------------------------------------------
# export


def export_patch(patch: Patch, digits: int = 6) -> str:
    """Line-oriented text form: a header, then one tile per line."""
    buf = io.StringIO()
    inst = patch.instance
    buf.write("tessella-patch v1\n")
    buf.write(f"# {inst.label} {inst.spec} {patch.model.kind} radius={patch.radius} tiles={len(patch.tiles)}\n")
    fmt = f"{{:.{digits}f}}"
    for t in patch.tiles:
        pts = [geo.project(v, patch.model, patch.seed) for v in t.polygon]
        coords = " ".join(fmt.format(x) + "," + fmt.format(y) for x, y in pts)
        buf.write(f"{t.orbit} {t.word or '1'} {len(t.polygon)} {coords}\n")
    return buf.getvalue()
