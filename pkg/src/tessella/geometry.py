"""Geometric realization of the tilings.

Points live in R^3: unit vectors on the sphere, the upper sheet of the
hyperboloid ``x^2 + y^2 - z^2 = -1``, or homogeneous coordinates
``(x, y, 1)`` for the Euclidean plane.  Mirrors and all group elements are
3x3 matrices, so a word acts by the product of its letters' matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _dd
from .errors import GeometryMismatch, NoConvergence
from .groups import Presentation
from .words import ALPHABET, Word, free_reduce

SPHERICAL = "spherical"
EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"

SOLVE_TOL = 1e-12
RELATOR_TOL = 1e-9
POINT_TOL = 1e-7


@dataclass(frozen=True)
class ModelSpace:
    kind: str

    @property
    def form(self) -> np.ndarray:
        if self.kind == HYPERBOLIC:
            return np.diag([1.0, 1.0, -1.0])
        return np.eye(3)

    def inner(self, x: np.ndarray, y: np.ndarray) -> float:
        if self.kind == HYPERBOLIC:
            return float(x[0] * y[0] + x[1] * y[1] - x[2] * y[2])
        return float(np.dot(x, y))

    def normalize(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == SPHERICAL:
            return x / np.linalg.norm(x)
        if self.kind == EUCLIDEAN:
            return x / x[2]
        q = -(x[0] ** 2 + x[1] ** 2 - x[2] ** 2)
        if q <= 0:
            raise GeometryMismatch("point is not inside the light cone")
        y = x / math.sqrt(q)
        return y if y[2] > 0 else -y

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        """Geodesic distance, via the chord length to stay accurate for close points."""
        if self.kind == EUCLIDEAN:
            return math.hypot(x[0] / x[2] - y[0] / y[2], x[1] / x[2] - y[1] / y[2])
        d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
        chord = math.sqrt(max(0.0, self.inner(d, d)))
        if self.kind == SPHERICAL:
            return 2.0 * math.asin(min(1.0, chord / 2.0))
        return 2.0 * math.asinh(chord / 2.0)

    def midpoint(self, pts: np.ndarray) -> np.ndarray:
        """Centre of mass of a finite point set (exact centre for regular polygons)."""
        return self.normalize(np.mean(np.asarray(pts), axis=0))

    def from_chart(self, u: float, v: float) -> np.ndarray:
        """Gnomonic / Klein / affine chart around the origin; geodesics are lines."""
        return self.normalize(np.array([u, v, 1.0]))


def kind_of(pres: Presentation) -> str:
    return {1: SPHERICAL, 0: EUCLIDEAN, -1: HYPERBOLIC}[pres.curvature_sign()]


@dataclass(frozen=True, eq=False)
class Mirrors:
    """Normals and reflection matrices for the fundamental triangle.

    The corner where mirrors P and Q meet sits at the origin ``(0, 0, 1)``;
    the triangle is ``{x : <x, n_i> < 0 for all i}``.
    """

    presentation: Presentation
    model: ModelSpace
    normals: np.ndarray  # rows: P, Q, R
    matrices: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "_cache", {"": np.eye(3)})
        object.__setattr__(self, "_dd_cache", {})

    def matrix(self, word: Word) -> np.ndarray:
        cache = self._cache
        m = cache.get(word)
        if m is not None:
            return m
        head, last = word[:-1], word[-1]
        m = self.matrix(head) @ self.matrices[last]
        if len(cache) < 200_000:
            cache[word] = m
        return m

    def dd_matrix(self, word: Word):
        """Matrix of ``word`` in double-double precision, as ``(hi, lo)``."""
        cache = self._dd_cache  # type: ignore[attr-defined]
        m = cache.get(word)
        if m is None:
            if not word:
                m = _dd.from_float(np.eye(3))
            else:
                m = _dd.matmul(self.dd_matrix(word[:-1]), self._dd[word[-1]])  # type: ignore[attr-defined]
            if len(cache) < 100_000:
                cache[word] = m
        return m

    def apply(self, word: Word, x: np.ndarray) -> np.ndarray:
        return self.matrix(word) @ x

    def inside(self, x: np.ndarray, tol: float = 1e-12) -> bool:
        return all(self.signed(i, x) < tol for i in range(3))

    def signed(self, i: int, x: np.ndarray) -> float:
        n = self.normals[i]
        return float(np.dot(x, n)) if self.model.kind == EUCLIDEAN else self.model.inner(x, n)

    def corner(self, pair: str) -> np.ndarray:
        """Corner where the two named mirrors meet, e.g. ``"QR"``."""
        i, j = (ALPHABET.index(c) for c in pair)
        a = self._dual(self.normals[i])
        b = self._dual(self.normals[j])
        x = np.cross(a, b)
        k = 3 - i - j
        x = self._orient(x, k)
        return self.model.normalize(x)

    def _dual(self, n: np.ndarray) -> np.ndarray:
        return self.model.form @ n if self.model.kind != EUCLIDEAN else n

    def _orient(self, x: np.ndarray, k: int) -> np.ndarray:
        if self.model.kind == EUCLIDEAN:
            return x / x[2]
        if self.model.kind == HYPERBOLIC and x[2] < 0:
            x = -x
        if self.signed(k, x) > 0:
            x = -x
        return x

    def point_on_mirror_equidistant(self, on: str, a: str, b: str) -> np.ndarray:
        """Point on mirror ``on`` at equal distance from mirrors ``a`` and ``b``."""
        i, j, k = (ALPHABET.index(c) for c in (on, a, b))
        n = self.normals
        x = np.cross(self._dual(n[i]), self._dual(n[j] - n[k]))
        if self.model.kind == EUCLIDEAN:
            x = x / x[2]
        elif self.model.kind == HYPERBOLIC and x[2] < 0:
            x = -x
        if self.signed(j, x) > 0:
            x = -x
        return self.model.normalize(x)

    def incenter(self) -> np.ndarray:
        n = self.normals
        if self.model.kind == EUCLIDEAN:
            a = np.column_stack([n[:, 0], n[:, 1], np.ones(3)])
            x, y, _ = np.linalg.solve(a, -n[:, 2])
            return np.array([x, y, 1.0])
        a = n @ self.model.form
        x = np.linalg.solve(a, -np.ones(3))
        return self.model.normalize(x)

    def reflection_through(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Reflection in the geodesic through points ``a`` and ``b``."""
        line = np.cross(a, b)
        if self.model.kind == EUCLIDEAN:
            line = line / math.hypot(line[0], line[1])
            return _euclid_reflection(line)
        normal = np.linalg.solve(self.model.form, line)
        normal = normal / math.sqrt(abs(self.model.inner(normal, normal)))
        return _reflection(normal, self.model.form)


def _reflection(n: np.ndarray, form: np.ndarray) -> np.ndarray:
    jn = form @ n
    return np.eye(3) - 2.0 * np.outer(n, jn) / float(n @ jn)


def _euclid_reflection(line: np.ndarray) -> np.ndarray:
    a, b, c = line
    return np.array(
        [
            [1 - 2 * a * a, -2 * a * b, -2 * a * c],
            [-2 * a * b, 1 - 2 * b * b, -2 * b * c],
            [0.0, 0.0, 1.0],
        ]
    )


def _mirror_constants(orders, natural: str, dps: int = 40):
    """Normals and reflection matrices to ``dps`` digits (mpmath)."""
    import mpmath

    with mpmath.workdps(dps):
        a, b, c = (mpmath.pi / n for n in orders)  # angles at the QR, RP, PQ corners
        n_p = [mpmath.mpf(0), mpmath.mpf(-1), mpmath.mpf(0)]
        n_q = [-mpmath.sin(c), mpmath.cos(c), mpmath.mpf(0)]
        ra = (mpmath.cos(a) + mpmath.cos(b) * mpmath.cos(c)) / mpmath.sin(c)
        rb = mpmath.cos(b)
        if natural == SPHERICAL:
            rc = -mpmath.sqrt(max(mpmath.mpf(0), 1 - ra * ra - rb * rb))
        elif natural == HYPERBOLIC:
            rc = mpmath.sqrt(ra * ra + rb * rb - 1)
        else:
            rc = mpmath.mpf(-1)
        normals = [n_p, n_q, [ra, rb, rc]]
        sig = [1, 1, -1] if natural == HYPERBOLIC else [1, 1, 1]
        mats = []
        for n in normals:
            if natural == EUCLIDEAN:
                x, y, z = n
                mats.append(
                    [
                        [1 - 2 * x * x, -2 * x * y, -2 * x * z],
                        [-2 * x * y, 1 - 2 * y * y, -2 * y * z],
                        [mpmath.mpf(0), mpmath.mpf(0), mpmath.mpf(1)],
                    ]
                )
            else:
                jn = [sig[k] * n[k] for k in range(3)]
                nn = sum(n[k] * jn[k] for k in range(3))
                mats.append([[(1 if i == j else 0) - 2 * n[i] * jn[j] / nn for j in range(3)] for i in range(3)])
        return normals, mats


def mirror_setup(pres: Presentation, kind: str | None = None) -> Mirrors:
    """Mirrors P, Q, R of the triangle group ``pres`` in its natural geometry."""
    natural = kind_of(pres)
    if kind is not None and kind != natural:
        raise GeometryMismatch(f"{pres.name} is {natural}, not {kind}")
    model = ModelSpace(natural)
    normals_mp, mats_mp = _mirror_constants(pres.orders, natural)
    normals = np.array([[float(v) for v in n] for n in normals_mp])
    dd_mats = {L: _dd.from_mpmath(mats_mp[i]) for i, L in enumerate(ALPHABET)}
    mats = {L: dd_mats[L][0] for L in ALPHABET}
    out = Mirrors(pres, model, normals, mats)
    object.__setattr__(out, "_dd", dd_mats)
    return out


def relator_residual(m: Mirrors) -> float:
    worst = 0.0
    for rel in m.presentation.relators:
        prod = np.eye(3)
        for c in rel:
            prod = prod @ m.matrices[c]
        scale = max(1.0, float(np.abs(prod).max()))
        worst = max(worst, float(np.abs(prod - np.eye(3)).max()) / scale)
    return worst


def orientation(matrix: np.ndarray) -> int:
    return 1 if np.linalg.det(matrix) > 0 else -1


# ---------------------------------------------------------------------------
# Newton solve for generator points


@dataclass
class SolveReport:
    point: np.ndarray
    iterations: int
    residual: float


def newton(residual, x0: np.ndarray, max_iter: int = 100, tol: float = SOLVE_TOL, step: float = 1e-7) -> SolveReport:
    """Damped Newton iteration with a central-difference Jacobian.

    Steps are halved while they increase the residual norm.
    """
    x = np.asarray(x0, dtype=float).copy()
    f = np.atleast_1d(residual(x))
    norm = float(np.max(np.abs(f)))
    for it in range(1, max_iter + 1):
        if norm < tol:
            return SolveReport(x, it - 1, norm)
        jac = np.empty((f.size, x.size))
        for k in range(x.size):
            e = np.zeros_like(x)
            e[k] = step
            jac[:, k] = (np.atleast_1d(residual(x + e)) - np.atleast_1d(residual(x - e))) / (2 * step)
        delta = np.linalg.lstsq(jac, -f, rcond=None)[0]
        lam = 1.0
        for _ in range(40):
            cand = x + lam * delta
            try:
                fc = np.atleast_1d(residual(cand))
            except (GeometryMismatch, ValueError):
                fc = None
            if fc is not None and np.all(np.isfinite(fc)):
                nc = float(np.max(np.abs(fc)))
                if nc < norm or nc < tol:
                    break
            lam *= 0.5
        else:
            raise NoConvergence(f"line search failed at iteration {it} (residual {norm:.3g})")
        x, f, norm = cand, fc, nc
    if norm < tol:
        return SolveReport(x, max_iter, norm)
    raise NoConvergence(f"no convergence after {max_iter} iterations (residual {norm:.3g})")


# ---------------------------------------------------------------------------
# seed vertex


def _chart(x: np.ndarray) -> np.ndarray:
    return np.array([x[0] / x[2], x[1] / x[2]])


def generator_point(instance, mirrors: Mirrors | None = None, report: bool = False):
    """Seed vertex of the tiling inside the fundamental triangle.

    With ``report=True`` a :class:`SolveReport` is returned instead of the point.
    """
    m = mirrors if mirrors is not None else mirror_setup(instance.ambient)
    kind, *args = instance.seed.split(":")
    if kind == "corner":
        out = SolveReport(m.corner(args[0]), 0, 0.0)
    elif kind == "mirror":
        out = SolveReport(m.point_on_mirror_equidistant(*args), 0, 0.0)
    elif kind == "incenter":
        out = SolveReport(m.incenter(), 0, 0.0)
    elif kind == "snub":
        out = _solve_snub(m)
    elif kind == "hex6neq":
        out = _solve_hex6neq(m)
    else:  # pragma: no cover - catalog data error
        raise ValueError(f"unknown seed construction {instance.seed!r}")
    return out if report else out.point


def _solve_snub(m: Mirrors) -> SolveReport:
    model = m.model
    qr, rp, pq = (m.matrix(w) for w in ("QR", "RP", "PQ"))

    def residual(uv):
        x = model.from_chart(*uv)
        a = model.distance(x, qr @ x)
        b = model.distance(x, rp @ x)
        c = model.distance(x, pq @ x)
        return np.array([a - c, b - c])

    rep = newton(residual, _chart(m.incenter()))
    x = model.from_chart(*rep.point)
    if not m.inside(x):
        raise NoConvergence("snub solve left the fundamental triangle")
    return SolveReport(x, rep.iterations, rep.residual)


def _solve_hex6neq(m: Mirrors) -> SolveReport:
    model = m.model
    a, b = _chart(m.corner("QR")), _chart(m.corner("PQ"))
    rot, pr = m.matrix("QRQR"), m.matrix("PR")

    def residual(s):
        x = model.from_chart(*(a + s[0] * (b - a)))
        return np.array([model.distance(x, rot @ x) - model.distance(x, pr @ x)])

    rep = newton(residual, np.array([0.5]))
    s = float(rep.point[0])
    if not 0.0 < s < 1.0:
        raise NoConvergence(f"hex6neq solve left the mirror segment (s={s})")
    return SolveReport(model.from_chart(*(a + s * (b - a))), rep.iterations, rep.residual)


def _tangent(model: ModelSpace, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    if model.kind == EUCLIDEAN:
        return y / y[2] - x / x[2]
    return y - model.inner(x, y) / model.inner(x, x) * x


def tangent_frame(model: ModelSpace, x: np.ndarray, towards: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the tangent plane at ``x``.

    With ``towards`` the first axis points at that point, and the second is
    the form-cross product, which stays accurate far from the origin.
    """
    if model.kind == EUCLIDEAN:
        return np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    if towards is None:
        towards = x + np.eye(3)[int(np.argmin(np.abs(x)))]
    t = _tangent(model, x, towards)
    e1 = t / math.sqrt(model.inner(t, t))
    e2 = model.form @ np.cross(x, e1)
    e2 = e2 / math.sqrt(model.inner(e2, e2))
    return e1, e2


def tangent_angles(model: ModelSpace, x: np.ndarray, pts) -> list[float]:
    """Direction angle at ``x`` of the geodesic towards each point."""
    pts = [np.asarray(y, dtype=float) for y in pts]
    if not pts:
        return []
    e1, e2 = tangent_frame(model, x, pts[0])
    out = []
    for y in pts:
        v = _tangent(model, x, y)
        out.append(math.atan2(model.inner(e2, v), model.inner(e1, v)))
    return out


def project(point: np.ndarray, model: ModelSpace | str, seed: np.ndarray | None = None) -> tuple[float, float]:
    """Planar picture of a point.

    Hyperbolic points go to the Poincare disk, spherical points are projected
    stereographically from the antipode of ``seed``, Euclidean points are
    returned unchanged.
    """
    model = model if isinstance(model, ModelSpace) else ModelSpace(model)
    x = np.asarray(point, dtype=float)
    if model.kind == HYPERBOLIC:
        return float(x[0] / (1 + x[2])), float(x[1] / (1 + x[2]))
    if model.kind == EUCLIDEAN:
        return float(x[0] / x[2]), float(x[1] / x[2])
    s = np.array([0.0, 0.0, 1.0]) if seed is None else np.asarray(seed, dtype=float)
    e1, e2 = tangent_frame(model, s)
    d = 1.0 + float(np.dot(x, s))
    if d < 1e-12:
        return math.inf, math.inf
    return float(np.dot(x, e1) / d), float(np.dot(x, e2) / d)
