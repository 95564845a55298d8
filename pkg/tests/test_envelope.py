import numpy as np
import pytest
import sympy as sp

from flatext import scenes
from flatext.envelope import (classify_envelope_singularity, dual_boundary, dual_curve_point,
                              envelope_max_abs_K, envelope_mesh, flat_extension,
                              generating_family_residual, grid_faces, pair_label)
from flatext.errors import (AtInfinityError, ChartError, NotFiniteType,
                            OsculatingTangentInRange)
from flatext.frames import SurfacePatch, adapted_frame


def surface(name):
    return scenes.builtin(name).surface


TS = np.array([-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0])


def osculating_point_oracle(S, t0):
    """Solve p.n = gamma.n, p.n' = (gamma.n)', p.n'' = (gamma.n)'' symbolically."""
    t, u = sp.symbols("t u")
    x = sp.Matrix([sp.sympify(str(c).replace("^", "**")) for c in S.x])
    n = x.diff(t).cross(x.diff(u)).subs(u, 0)
    g = x.subs(u, 0)
    c = g.dot(n)
    A = sp.Matrix([n.T, n.diff(t).T, n.diff(t, 2).T]).subs(t, t0)
    b = sp.Matrix([c, c.diff(t), c.diff(t, 2)]).subs(t, t0)
    return np.array(A.LUsolve(b).evalf(), dtype=float).ravel()


def test_dual_curve_example_1_4():
    p = dual_curve_point(surface("example-1.4"), TS)
    np.testing.assert_allclose(p.affine, [6 * TS ** 2, -8 * TS ** 3, -3 * TS ** 4], atol=1e-12)
    np.testing.assert_allclose(p.cramer, p.affine, atol=1e-12)


def test_dual_curve_example_1_3_corrected_sign():
    p = dual_curve_point(surface("example-1.3"), TS)
    np.testing.assert_allclose(p.affine, [-3 * TS ** 2, 3 * TS, -TS ** 3], atol=1e-12)


INFINITY_PATCH = SurfacePatch(("t", "u", "t^2/2 + u*(t^3 - t)"), (-0.5, 0.5))


@pytest.mark.parametrize("name,t0", [("example-1.4", 0.37), ("example-1.3", -0.6),
                                     ("patch", 0.2)])
def test_dual_curve_against_symbolic_solve(name, t0):
    S = INFINITY_PATCH if name == "patch" else surface(name)
    p = dual_curve_point(S, t0)
    np.testing.assert_allclose(p.affine, osculating_point_oracle(S, t0), atol=1e-11)


def test_osculating_tangent_point_is_on_the_dual_curve():
    S = surface("example-1.4")
    p = dual_curve_point(S, 0.5)
    np.testing.assert_allclose(p.affine, S.evaluate(0.5), atol=1e-13)


def test_cylinder_dual_curve_at_infinity():
    p = dual_curve_point(surface("cylinder"), np.linspace(0, 6, 5))
    assert p.at_infinity.all() and np.isnan(p.affine).all()
    np.testing.assert_allclose(np.abs(p.direction[2]), 1.0, atol=1e-14)


def test_sphere_dual_curve_is_the_cone_apex():
    p = dual_curve_point(surface("sphere"), np.linspace(0, 6, 5))
    np.testing.assert_allclose(p.affine, np.array([[0, 0, 2.0]] * 5).T, atol=1e-12)


def test_plane_dual_curve_not_finite():
    with pytest.raises(NotFiniteType):
        dual_curve_point(SurfacePatch(("t", "u", "0"), (0.0, 1.0)), 0.3)


def test_dual_boundary_annihilates_the_boundary():
    S = surface("example-1.4")
    Y = dual_boundary(S, TS).hom.value
    g = S.evaluate(TS)
    np.testing.assert_allclose(Y[0] + (Y[1:] * g).sum(axis=0), 0, atol=1e-14)


def test_chart_of_example_1_4():
    # the chart coordinates are polynomial and reproduce the dual point
    S = surface("example-1.4")
    c = dual_boundary(S, 0.3).chart()
    assert c.shape == (3,)
    with pytest.raises(ChartError):
        dual_boundary(SurfacePatch(("t", "0", "u"), (0.0, 1.0)), 0.3).chart()


def test_generating_family_vanishes_on_the_envelope():
    S = surface("example-1.4")
    sheet = envelope_mesh(S, (-0.8, 0.8), 0.5, (9, 5))
    for i, t in enumerate(sheet.t):
        for v in sheet.grid[i]:
            G, Gt = generating_family_residual(S, t, v)
            assert abs(G) <= 1e-11 and abs(Gt) <= 1e-10


def test_envelope_mesh_shape_and_K():
    S = surface("example-1.4")
    sheet = envelope_mesh(S, (-1.0, 1.0), 1.0, (41, 9))
    assert sheet.vertices.shape == (41 * 9, 3)
    assert sheet.faces.shape == (2 * 40 * 8, 3)
    np.testing.assert_allclose(np.linalg.norm(sheet.rulings, axis=1), 1.0, atol=1e-14)
    assert envelope_max_abs_K(S, sheet) <= 1e-6


def test_envelope_sheet_contains_the_boundary():
    """Each ruling passes through gamma(t) and the dual point."""
    S = surface("example-1.4")
    sheet = envelope_mesh(S, (-0.9, 0.9), 1.0, (7, 3))
    g = S.evaluate(sheet.t).T
    off = g - sheet.locus
    cross = np.cross(off, sheet.rulings)
    np.testing.assert_allclose(cross, 0, atol=1e-12)


def test_envelope_mesh_errors():
    # both dual boundaries are planar conics, so their type is unresolved
    for name in ("cylinder", "sphere"):
        with pytest.raises(NotFiniteType):
            envelope_mesh(surface(name), (0.0, 1.0), 0.5, (5, 3))


def test_envelope_at_infinity():
    # Delta has a simple zero at t = 0 while the dual boundary has type (1,2,3)
    p = dual_curve_point(INFINITY_PATCH, [0.0, 0.2])
    assert p.at_infinity.tolist() == [True, False]
    with pytest.raises(AtInfinityError) as exc:
        envelope_mesh(INFINITY_PATCH, (-0.5, 0.5), 0.5, (5, 3))
    assert exc.value.t == 0.0
    assert classify_envelope_singularity(INFINITY_PATCH, 0.0) == "Regular"


def test_grid_faces_orientation():
    f = grid_faces(3, 2)
    assert f.shape == (4, 3)
    uv = np.array([(i, j) for i in range(3) for j in range(2)], dtype=float)
    a, b, c = uv[f[:, 0]], uv[f[:, 1]], uv[f[:, 2]]
    area = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    assert np.all(area > 0)


def test_envelope_singularity_classification():
    S = surface("example-1.4")
    assert classify_envelope_singularity(S, 0.0) == "Swallowtail"
    assert classify_envelope_singularity(S, 0.3) == "CuspidalEdge"
    assert classify_envelope_singularity(surface("cylinder"), 0.3) == "Regular"


def test_pair_labels():
    assert pair_label(surface("example-1.4"), 0.5) == "C3"
    assert pair_label(surface("example-1.4"), 0.25) == "B2"
    assert pair_label(surface("example-1.3"), 0.0) == "C3"
    assert pair_label(surface("parabolic"), 0.0) == "B3"


def check_extension(S, rng, width=0.5):
    mesh, rep = flat_extension(S, rng, width, (61, 11))
    assert rep.max_abs_K <= 1e-6
    assert rep.max_normal_angle_gap_on_boundary <= 1e-8
    # first vertex of each ruling is the boundary point
    np.testing.assert_allclose(mesh.grid[:, 0], S.evaluate(mesh.t).T, atol=1e-14)
    return mesh, rep


def test_extension_of_cylinder():
    S = surface("cylinder")
    mesh, rep = check_extension(S, (0.0, 2 * np.pi))
    np.testing.assert_allclose(mesh.rulings, np.tile([0, 0, -1.0], (61, 1)), atol=1e-14)
    assert rep.singular_clip == [] and rep.uniqueness_precondition


@pytest.mark.parametrize("rng", [(-0.3, 0.3), (0.2, 0.45), (-1.0, -0.34), (0.55, 1.0)])
def test_extension_of_example_1_4(rng):
    check_extension(surface("example-1.4"), rng)


def test_extension_points_away_from_the_surface():
    S = surface("example-1.4")
    mesh, _ = flat_extension(S, (-0.3, 0.3), 0.5, (11, 3))
    f = adapted_frame(S, mesh.t)
    assert np.all((mesh.rulings.T * f.e2).sum(axis=0) < 0)
    mesh2, _ = flat_extension(S.with_coorientation(-1), (-0.3, 0.3), 0.5, (11, 3))
    np.testing.assert_allclose(mesh2.rulings, mesh.rulings, atol=1e-14)


def test_extension_is_clipped_at_the_edge_of_regression():
    S = surface("example-1.4")
    mesh, rep = flat_extension(S, (0.55, 1.0), 50.0, (21, 5))
    assert rep.singular_clip
    assert np.all(mesh.lengths <= 50.0)


def test_extension_refuses_osculating_tangent_points():
    with pytest.raises(OsculatingTangentInRange) as exc:
        flat_extension(surface("example-1.4"), (0.2, 0.8), 0.5)
    assert exc.value.ts == pytest.approx([0.5])
    with pytest.raises(OsculatingTangentInRange):
        flat_extension(surface("example-1.3"), (-0.5, 0.5), 0.5)
