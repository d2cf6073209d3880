"""SVG pictures of patches, optionally colored and with mirror axes.

Hyperbolic patches are drawn in the Poincare disk and spherical ones by
stereographic projection, both centered on the seed vertex.  Euclidean
patches are scaled to fit the frame.  Geodesic edges become circular arcs
when they bend visibly, straight segments otherwise.
"""
from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from . import geometry as geo
from .errors import NotAReflection, PaletteTooSmall
from .words import Word, format_word, free_reduce

FRAME = 1.05
NEUTRAL = "#d9d9d9"
DIGITS = 5
_SPHERE_SCALE = 0.5  # the equator around the center lands at this radius
_FAR = 40.0  # stand-in for the point at infinity of the sphere picture


@dataclass
class RenderOptions:
    palette: list[str] | None = None
    stroke_width: float = 0.004
    frame: str = "disk"  # "disk" clips to the unit circle, "box" to the square
    overlay_words: list[Word] = field(default_factory=list)
    label: str | None = None
    overlay_color: str = "#c00000"


def default_palette(m: int, saturation: float = 0.62, lightness: float = 0.62) -> list[str]:
    """``m`` hues spaced evenly around the color wheel."""
    out = []
    for k in range(m):
        r, g, b = colorsys.hls_to_rgb(k / max(m, 1), lightness, saturation)
        out.append("#%02x%02x%02x" % (round(r * 255), round(g * 255), round(b * 255)))
    return out


def _num(x: float) -> str:
    s = f"{x:.{DIGITS}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


# ---------------------------------------------------------------------------
# the picture map


class Frame:
    """Maps model points to picture coordinates (y axis pointing up)."""

    def __init__(self, patch):
        self.model = patch.model
        self.kind = self.model.kind
        if self.kind == geo.EUCLIDEAN:
            self.center = np.array([patch.seed[0] / patch.seed[2], patch.seed[1] / patch.seed[2]])
            pts = [p for t in patch.tiles for p in t.polygon]
            far = max((math.hypot(p[0] / p[2] - self.center[0], p[1] / p[2] - self.center[1]) for p in pts), default=1.0)
            self.scale = 1.0 / far if far > 0 else 1.0
            self.iso = None
        else:
            center = patch.seed
            if self.kind == geo.SPHERICAL and patch.tiles:
                # a tile center: its antipode is a tile center too, never a vertex
                center = patch.tiles[0].center
            self.iso = _recenter(self.model, np.asarray(center, dtype=float))
            self.scale = 1.0 if self.kind == geo.HYPERBOLIC else _SPHERE_SCALE

    def to_model(self, x: np.ndarray) -> np.ndarray:
        return x if self.iso is None else self.iso @ x

    def point(self, x: np.ndarray) -> tuple[float, float]:
        if self.kind == geo.EUCLIDEAN:
            return ((x[0] / x[2] - self.center[0]) * self.scale, (x[1] / x[2] - self.center[1]) * self.scale)
        y = self.iso @ x
        d = 1.0 + y[2]
        if self.kind == geo.SPHERICAL:
            y = y / np.linalg.norm(y)
            d = 1.0 + y[2]
            if d < 1e-9:
                return (_FAR, 0.0)
            u, v = y[0] / d, y[1] / d
            r = math.hypot(u, v)
            if r * self.scale > _FAR:
                u, v = u / r * _FAR / self.scale, v / r * _FAR / self.scale
            return (u * self.scale, v * self.scale)
        return (y[0] / d, y[1] / d)

    def geodesic_mid(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == geo.EUCLIDEAN:
            return (a / a[2] + b / b[2]) / 2
        return self.model.normalize(a + b)


def _recenter(model: geo.ModelSpace, c: np.ndarray) -> np.ndarray:
    """Isometry taking ``c`` to the origin ``(0, 0, 1)``."""
    if model.kind == geo.HYPERBOLIC:
        c = model.normalize(c)
        s = c[:2]
        r = float(np.hypot(*s))
        if r < 1e-15:
            return np.eye(3)
        n = s / r
        out = np.eye(3)
        out[:2, :2] += (c[2] - 1.0) * np.outer(n, n)
        out[:2, 2] = -s
        out[2, :2] = -s
        out[2, 2] = c[2]
        return out
    c = c / np.linalg.norm(c)
    z = np.array([0.0, 0.0, 1.0])
    axis = np.cross(c, z)
    sn, cs = float(np.linalg.norm(axis)), float(np.dot(c, z))
    if sn < 1e-15:
        return np.eye(3) if cs > 0 else np.diag([1.0, -1.0, -1.0])
    k = axis / sn
    kx = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + sn * kx + (1 - cs) * kx @ kx


# ---------------------------------------------------------------------------
# paths


def _circle(p, q, r):
    """Center and radius of the circle through three points, or None if collinear."""
    ax, ay = p
    bx, by = q
    cx, cy = r
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if abs(d) < 1e-14:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return (ux, uy), math.hypot(ax - ux, ay - uy)


def _sagitta(p, q, m) -> float:
    dx, dy = q[0] - p[0], q[1] - p[1]
    n = math.hypot(dx, dy)
    if n < 1e-15:
        return math.hypot(m[0] - p[0], m[1] - p[1])
    return abs(dx * (m[1] - p[1]) - dy * (m[0] - p[0])) / n


def _svg_xy(p) -> str:
    return f"{_num(p[0])} {_num(-p[1])}"  # SVG's y axis points down


def _segment(p, q, m, stroke: float) -> str:
    """Path command from p to q along the circle through m (or a line)."""
    if _sagitta(p, q, m) <= stroke / 2:
        return f"L {_svg_xy(q)}"
    circ = _circle(p, q, m)
    if circ is None:
        return f"L {_svg_xy(q)}"
    _, rad = circ
    # picture coordinates have y up; flip for SVG
    cross = (q[0] - p[0]) * (m[1] - p[1]) - (q[1] - p[1]) * (m[0] - p[0])
    large = 1 if _sagitta(p, q, m) > rad else 0
    sweep = 1 if cross > 0 else 0
    return f"A {_num(rad)} {_num(rad)} 0 {large} {sweep} {_svg_xy(q)}"


def tile_path(frame: Frame, polygon: np.ndarray, stroke: float) -> str:
    pts = [frame.point(v) for v in polygon]
    cmds = [f"M {_svg_xy(pts[0])}"]
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        cmds.append(_segment(pts[i], pts[(i + 1) % n], frame.point(frame.geodesic_mid(a, b)), stroke))
    cmds.append("Z")
    path = " ".join(cmds)
    if frame.kind == geo.SPHERICAL and _contains_pole(frame, polygon):
        # the tile covers the far side of the picture: fill the outside
        big = _FAR * 2
        path += f" M {-big} {-big} L {big} {-big} L {big} {big} L {-big} {big} Z"
    return path


def _contains_pole(frame: Frame, polygon: np.ndarray) -> bool:
    ys = [frame.to_model(v) for v in polygon]
    pole = np.array([0.0, 0.0, -1.0])
    if np.dot(np.sum(ys, axis=0), pole) <= 0:
        return False
    signs = [np.dot(np.cross(ys[i], ys[(i + 1) % len(ys)]), pole) for i in range(len(ys))]
    return all(s > 0 for s in signs) or all(s < 0 for s in signs)


# ---------------------------------------------------------------------------
# mirror axes


def mirror_normal(patch, word: Word) -> np.ndarray:
    """Normal of the fixed line of a reflection word; raises for anything else."""
    m = patch.mirrors.matrix(free_reduce(word))
    if geo.orientation(m) > 0:
        raise NotAReflection(f"{format_word(word)} preserves orientation")
    if not np.allclose(m @ m, np.eye(3), atol=1e-8 * max(1.0, float(np.abs(m).max()) ** 2)):
        raise NotAReflection(f"{format_word(word)} is a glide reflection without a fixed line")
    w, v = np.linalg.eig(m.T)
    k = int(np.argmin(np.abs(w + 1.0)))
    n = np.real(v[:, k])
    return n / np.linalg.norm(n)


def _axis_path(frame: Frame, patch, word: Word) -> str:
    n = mirror_normal(patch, word)
    m = patch.mirrors.matrix(free_reduce(word))
    if frame.kind == geo.EUCLIDEAN:
        # fixed points: midpoints of x and its image
        pts = []
        for x in (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 1.0]), np.array([0.0, 1.0, 1.0])):
            y = m @ x
            pts.append((x + y / y[2]) / 2)
        pts.sort(key=lambda p: (round(p[0], 9), round(p[1], 9)))
        a = frame.point(pts[0])
        b = max((frame.point(p) for p in pts[1:]), key=lambda q: math.hypot(q[0] - a[0], q[1] - a[1]))
        dx, dy = b[0] - a[0], b[1] - a[1]
        L = math.hypot(dx, dy)
        ex, ey = dx / L * 4 * FRAME, dy / L * 4 * FRAME
        return f"M {_svg_xy((a[0] - ex, a[1] - ey))} L {_svg_xy((a[0] + ex, a[1] + ey))}"
    # in centered model coordinates the mirror plane is {x : <x, n'> = 0}
    iso = frame.iso
    form = frame.model.form
    normal = np.linalg.solve(iso.T, n)  # covector transforms by the inverse transpose
    plane = form @ normal if frame.kind == geo.HYPERBOLIC else normal  # vectors x with x . plane = 0
    u, v = _plane_basis(frame.model, plane)
    if frame.kind == geo.HYPERBOLIC:
        # u spacelike, v timelike: ideal end points v +- u, midpoint v
        p, q, mid = [_disk(x) for x in (v + u, v - u, v)]
    else:
        p, q, mid = [_stereo(frame, x) for x in (u, -u, v)]
        back = _stereo(frame, -v)
        if p is None or q is None or mid is None or back is None:
            pts = [z for z in (p, q, mid, back) if z is not None]
            a, b = pts[0], pts[1]
            dx, dy = b[0] - a[0], b[1] - a[1]
            L = math.hypot(dx, dy)
            ex, ey = dx / L * 4 * FRAME, dy / L * 4 * FRAME
            return f"M {_svg_xy((a[0] - ex, a[1] - ey))} L {_svg_xy((a[0] + ex, a[1] + ey))}"
        # a full circle: two half arcs
        return f"M {_svg_xy(p)} {_segment(p, q, mid, 0.0)} {_segment(q, p, back, 0.0)}"
    return f"M {_svg_xy(p)} {_segment(p, q, mid, 0.0)}"


def _plane_basis(model: geo.ModelSpace, plane: np.ndarray):
    """Basis (u, v) of {x : x . plane = 0}; hyperbolic: <u,u> = 1, <v,v> = -1, v_z > 0."""
    a = np.cross(plane, [1.0, 0.0, 0.0])
    if np.linalg.norm(a) < 1e-9:
        a = np.cross(plane, [0.0, 1.0, 0.0])
    b = np.cross(plane, a)
    if model.kind == geo.SPHERICAL:
        u = a / np.linalg.norm(a)
        w = b - np.dot(b, u) * u
        return u, w / np.linalg.norm(w)
    # Gram-Schmidt in the Lorentz form; pick the timelike direction first
    ia, ib = model.inner(a, a), model.inner(b, b)
    if ia < 0 or (ib >= 0 and ia < ib):
        a, b = b, a
    # a is spacelike-ish; make b orthogonal to it
    u = a / math.sqrt(model.inner(a, a))
    v = b - model.inner(b, u) * u
    v = v / math.sqrt(-model.inner(v, v))
    if v[2] < 0:
        v = -v
    return u, v


def _disk(x: np.ndarray) -> tuple[float, float]:
    """Poincare disk point of a hyperboloid point, or of an ideal (null) direction."""
    q = x[2] * x[2] - x[0] * x[0] - x[1] * x[1]
    if abs(q) <= 1e-12 * x[2] * x[2]:
        return (x[0] / x[2], x[1] / x[2])
    y = x / math.sqrt(q)
    return (y[0] / (1.0 + y[2]), y[1] / (1.0 + y[2]))


def _stereo(frame: Frame, y: np.ndarray):
    d = 1.0 + y[2]
    if d < 1e-9:
        return None
    return (y[0] / d * frame.scale, y[1] / d * frame.scale)


def overlay_mirrors(patch, words, options: RenderOptions | None = None) -> str:
    """SVG group drawing the fixed line of each reflection word."""
    options = options or RenderOptions()
    frame = Frame(patch)
    parts = [f'<g class="mirror-axes" fill="none" stroke="{options.overlay_color}" stroke-width="{_num(options.stroke_width * 2.5)}" stroke-dasharray="{_num(options.stroke_width * 8)} {_num(options.stroke_width * 5)}">']
    for w in words:
        parts.append(f'<path class="axis" data-word="{escape(format_word(w))}" d="{_axis_path(frame, patch, w)}"/>')
    parts.append("</g>")
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# document


def render(patch, scheme=None, options: RenderOptions | None = None) -> str:
    """Complete SVG document for ``patch``, colored by ``scheme`` if given."""
    options = options or RenderOptions()
    if scheme is not None and scheme.instance != patch.instance:
        raise ValueError("scheme belongs to a different instance")
    colors = scheme.tile_colors(patch) if scheme is not None else None
    m = scheme.color_count if scheme is not None else 0
    palette = options.palette if options.palette is not None else default_palette(m)
    if scheme is not None and len(palette) < m:
        raise PaletteTooSmall(f"palette has {len(palette)} colors, scheme needs {m}")
    for overlay in options.overlay_words:
        mirror_normal(patch, overlay)  # validate before drawing anything

    kind = patch.model.kind if patch.tiles else None
    clip_disk = kind == geo.HYPERBOLIC or (options.frame == "disk" and kind is not None and kind != geo.EUCLIDEAN)
    io_lines: list[str] = []
    io_lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    io_lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{-FRAME} {-FRAME} {2 * FRAME} {2 * FRAME}" width="600" height="600">'
    )
    title = options.label if options.label is not None else patch.instance.label
    io_lines.append(f"<title>{escape(title)}</title>")
    io_lines.append("<defs>")
    if clip_disk:
        io_lines.append('<clipPath id="frame"><circle cx="0" cy="0" r="1"/></clipPath>')
    else:
        io_lines.append(f'<clipPath id="frame"><rect x="{-FRAME}" y="{-FRAME}" width="{2 * FRAME}" height="{2 * FRAME}"/></clipPath>')
    if m:
        rules = " ".join(f".tile-c{k} {{ fill: {palette[k]}; }}" for k in range(m))
        io_lines.append(f"<style type=\"text/css\">{rules}</style>")
    io_lines.append("</defs>")
    if kind == geo.HYPERBOLIC:
        io_lines.append(f'<circle cx="0" cy="0" r="1" fill="none" stroke="#000000" stroke-width="{_num(options.stroke_width)}"/>')
    io_lines.append(f'<g clip-path="url(#frame)" stroke="#000000" stroke-width="{_num(options.stroke_width)}" stroke-linejoin="round" fill-rule="evenodd">')
    if patch.tiles:
        frame = Frame(patch)
        for i, t in enumerate(patch.tiles):
            d = tile_path(frame, t.polygon, options.stroke_width)
            if colors is None:
                io_lines.append(f'<path class="tile" fill="{NEUTRAL}" d="{d}"/>')
            else:
                c = colors[i]
                io_lines.append(f'<path class="tile tile-c{c}" fill="{palette[c]}" d="{d}"/>')
    io_lines.append("</g>")
    if options.overlay_words and patch.tiles:
        io_lines.append('<g clip-path="url(#frame)">')
        io_lines.append(overlay_mirrors(patch, options.overlay_words, options))
        io_lines.append("</g>")
    io_lines.append("</svg>")
    return "\n".join(io_lines) + "\n"
