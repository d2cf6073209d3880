import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tessella import geometry as geo
from tessella.catalog import parse_instance
from tessella.errors import GeometryMismatch, NoConvergence
from tessella.groups import build_triangle_group

ORDERS = [(2, 3, 5), (2, 3, 6), (2, 4, 4), (3, 3, 3), (2, 3, 7), (4, 4, 4), (3, 8, 2), (2, 6, 9), (5, 5, 5)]


@pytest.mark.parametrize("orders", ORDERS)
def test_reflections_are_isometric_involutions(orders):
    pres = build_triangle_group(*orders)
    m = geo.mirror_setup(pres)
    form = m.model.form
    for L in "PQR":
        a = m.matrices[L]
        assert np.allclose(a @ a, np.eye(3), atol=1e-13)
        assert geo.orientation(a) == -1
        if m.model.kind != geo.EUCLIDEAN:
            assert np.allclose(a.T @ form @ a, form, atol=1e-13)
    assert geo.relator_residual(m) < geo.RELATOR_TOL


@pytest.mark.parametrize("orders", ORDERS)
def test_rotation_orders(orders):
    m = geo.mirror_setup(build_triangle_group(*orders))
    for pair, n in zip(("QR", "RP", "PQ"), orders):
        rot = m.matrix(pair)
        power = np.linalg.matrix_power(rot, n)
        assert np.allclose(power, np.eye(3), atol=1e-10)
        # and no smaller power is the identity
        for k in range(1, n):
            assert not np.allclose(np.linalg.matrix_power(rot, k), np.eye(3), atol=1e-6)


def test_geometry_mismatch():
    with pytest.raises(GeometryMismatch):
        geo.mirror_setup(build_triangle_group(2, 3, 7), kind=geo.SPHERICAL)


@given(st.text(alphabet="PQR", max_size=20))
def test_orientation_is_word_parity(w):
    m = geo.mirror_setup(build_triangle_group(2, 3, 7))
    assert geo.orientation(m.matrix(w)) == (-1) ** len(w)


@pytest.mark.parametrize("orders", [(2, 3, 5), (2, 4, 4), (2, 3, 7)])
def test_corners_fixed_by_their_mirrors(orders):
    m = geo.mirror_setup(build_triangle_group(*orders))
    for pair in ("QR", "RP", "PQ"):
        x = m.corner(pair)
        assert m.inside(x, tol=1e-9)
        for L in pair:
            assert np.allclose(m.apply(L, x), x, atol=1e-12)


def test_distance_agrees_with_closed_forms():
    hyp = geo.ModelSpace(geo.HYPERBOLIC)
    x = hyp.from_chart(0.1, -0.2)
    y = hyp.from_chart(-0.4, 0.3)
    assert math.isclose(hyp.distance(x, y), math.acosh(-hyp.inner(x, y)), rel_tol=1e-12)
    sph = geo.ModelSpace(geo.SPHERICAL)
    a, b = sph.normalize([1, 2, 3]), sph.normalize([-1, 0.5, 2])
    assert math.isclose(sph.distance(a, b), math.acos(float(np.dot(a, b))), rel_tol=1e-12)
    euc = geo.ModelSpace(geo.EUCLIDEAN)
    assert euc.distance(np.array([0.0, 0, 1]), np.array([3.0, 4, 1])) == 5.0


def test_distance_of_close_points_is_accurate():
    hyp = geo.ModelSpace(geo.HYPERBOLIC)
    x = hyp.from_chart(0.3, 0.3)
    y = hyp.from_chart(0.3 + 1e-10, 0.3)
    d = hyp.distance(x, y)
    assert 0 < d < 1e-9


def test_normalize_rejects_spacelike():
    with pytest.raises(GeometryMismatch):
        geo.ModelSpace(geo.HYPERBOLIC).normalize(np.array([2.0, 0.0, 1.0]))


def test_newton_solves_and_reports():
    rep = geo.newton(lambda x: np.array([x[0] ** 2 - 2.0]), np.array([1.0]))
    assert abs(rep.point[0] - math.sqrt(2)) < 1e-12
    assert 0 < rep.iterations < 10


def test_newton_raises_without_root():
    with pytest.raises(NoConvergence):
        geo.newton(lambda x: np.array([x[0] ** 2 + 1.0]), np.array([0.3]), max_iter=30)


@pytest.mark.parametrize(
    "spec", ["snub5:3,4", "snub5:4,4", "snub5:6,12", "snub5:7,9", "snub5:3,3", "hex6neq:5,4", "hex6neq:3,6", "hex6neq:15,7"]
)
def test_solved_seed_is_equidistant(spec):
    inst = parse_instance(spec)
    m = geo.mirror_setup(inst.ambient)
    rep = geo.generator_point(inst, m, report=True)
    x = rep.point
    assert rep.residual < geo.SOLVE_TOL and rep.iterations < 50
    assert m.inside(x, tol=1e-9)
    d = m.model.distance
    if inst.family.value == "snub5":
        ds = [d(x, m.apply(w, x)) for w in ("QR", "RP", "PQ")]
    else:
        ds = [d(x, m.apply(w, x)) for w in ("QRQR", "PR")]
    assert max(ds) - min(ds) < 1e-10


@pytest.mark.parametrize("spec", ["quasi:6,4", "rhombi:3,7", "hex6eq:5", "3val:4,6,8", "3val:8,6,6"])
def test_closed_form_seeds_need_no_iterations(spec):
    inst = parse_instance(spec)
    rep = geo.generator_point(inst, report=True)
    assert rep.iterations == 0


def test_project_hyperbolic_lands_in_disk():
    hyp = geo.ModelSpace(geo.HYPERBOLIC)
    for u, v in [(0, 0), (0.5, 0.5), (0.99, 0), (-0.3, 0.9)]:
        x, y = geo.project(hyp.from_chart(u, v), hyp)
        assert x * x + y * y < 1
    assert geo.project(hyp.from_chart(0, 0), "hyperbolic") == (0.0, 0.0)


def test_project_sphere_from_seed():
    sph = geo.ModelSpace(geo.SPHERICAL)
    seed = sph.normalize([1.0, 1.0, 1.0])
    assert np.allclose(geo.project(seed, sph, seed), (0.0, 0.0), atol=1e-15)
    assert geo.project(-seed, sph, seed) == (math.inf, math.inf)


def test_tangent_angles_of_regular_corona():
    pres = build_triangle_group(2, 3, 7)
    m = geo.mirror_setup(pres)
    x = m.corner("RP")  # rotation RP has order 3 there
    rot = m.matrix("RP")
    pts = [m.corner("QR")]
    for _ in range(2):
        pts.append(rot @ pts[-1])
    ang = sorted(a % (2 * math.pi) for a in geo.tangent_angles(m.model, x, pts))
    gaps = np.diff(ang + [ang[0] + 2 * math.pi])
    assert np.allclose(gaps, 2 * math.pi / 3, atol=1e-9)
