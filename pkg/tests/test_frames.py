import numpy as np
import pytest
import sympy as sp

from flatext import scenes
from flatext.errors import DegenerateError, UndefinedTorsion
from flatext.frames import (SurfacePatch, adapted_frame, boundary_jets, check_kappa_tau, frenet,
                            gaussian_curvature, graph_gaussian_curvature, invariants,
                            second_fundamental_form)


def surface(name):
    return scenes.builtin(name).surface


TS = np.linspace(-0.9, 0.9, 13)


def test_frame_is_orthonormal_and_right_handed():
    f = adapted_frame(surface("example-1.4"), TS)
    E = np.stack([f.e1, f.e2, f.e3])  # (3, 3, N)
    for i in range(TS.size):
        M = E[:, :, i]
        np.testing.assert_allclose(M @ M.T, np.eye(3), atol=1e-14)
        assert np.linalg.det(M) == pytest.approx(1.0, abs=1e-14)


def test_e2_points_into_the_surface():
    S = surface("example-1.4")
    f = adapted_frame(S, TS)
    xu = S.evaluate(TS, 0.0, "u")
    assert np.all((f.e2 * xu).sum(axis=0) > 0)


def test_example_1_4_frame_closed_form():
    t = sp.symbols("t")
    xt = sp.Matrix([1, 12 * t ** 2 - 4 * t - 2, 12 * t ** 3 - 3 * t ** 2 - 2 * t])
    xu = sp.Matrix([0, 1, t])
    n = xt.cross(xu)
    for t0 in (-0.7, 0.0, 0.4):
        f = adapted_frame(surface("example-1.4"), t0)
        e1 = np.array(xt.subs(t, t0).evalf(), dtype=float).ravel()
        e3 = np.array(n.subs(t, t0).evalf(), dtype=float).ravel()
        np.testing.assert_allclose(f.e1, e1 / np.linalg.norm(e1), atol=1e-14)
        np.testing.assert_allclose(f.e3, e3 / np.linalg.norm(e3), atol=1e-14)


def test_example_1_3_tangent_plane_at_origin():
    f = adapted_frame(surface("example-1.3"), 0.0)
    np.testing.assert_allclose(np.abs(f.e3), [0, 0, 1], atol=1e-15)


def test_structure_equations():
    """e1' = k1 e2 + k2 e3, e2' = -k1 e1 + k3 e3, e3' = -k2 e1 - k3 e2 in arc length."""
    bj = boundary_jets(surface("example-1.4"), TS, 4)
    k1, k2, k3 = (bj.kappa[n].value for n in ("k1", "k2", "k3"))
    e1, e2, e3 = bj.e1.value, bj.e2.value, bj.e3.value
    np.testing.assert_allclose(bj.ds(bj.e1).value, k1 * e2 + k2 * e3, atol=1e-12)
    np.testing.assert_allclose(bj.ds(bj.e2).value, -k1 * e1 + k3 * e3, atol=1e-12)
    np.testing.assert_allclose(bj.ds(bj.e3).value, -k2 * e1 - k3 * e2, atol=1e-12)


def test_example_1_4_normal_curvature_zeros():
    # gamma_tt . (x_t x x_u) = 2 (2t - 1)(3t + 1)
    iv = invariants(surface("example-1.4"), np.array([0.5, -1 / 3, 0.0]), 0)
    assert abs(iv.d("k2")[0]) <= 1e-14 and abs(iv.d("k2")[1]) <= 1e-14
    assert abs(iv.d("k2")[2]) > 0.1


def test_cylinder_invariants(backend):
    iv = invariants(surface("cylinder"), np.linspace(0, 6, 9), 2)
    np.testing.assert_allclose(iv.d("k1"), 0, atol=1e-12)
    np.testing.assert_allclose(iv.d("k2"), -1, atol=1e-12)
    np.testing.assert_allclose(iv.d("k3"), 0, atol=1e-12)
    np.testing.assert_allclose(iv.d("k2", 1), 0, atol=1e-10)


def test_coorientation_flip():
    S = surface("example-1.4")
    a = invariants(S, TS, 0)
    b = invariants(S.with_coorientation(-1), TS, 0)
    np.testing.assert_allclose(b.d("k1"), -a.d("k1"), atol=1e-13)
    np.testing.assert_allclose(b.d("k2"), -a.d("k2"), atol=1e-13)
    np.testing.assert_allclose(b.d("k3"), a.d("k3"), atol=1e-13)


def test_parametrization_invariance():
    """Reparametrizing t -> 2t + 0.1 keeps the arc-length invariants."""
    S = surface("example-1.4")
    R = SurfacePatch(("2*t + 0.1 + 1",
                      "4*(2*t + 0.1)^3 - 2*(2*t + 0.1)^2 - 2*(2*t + 0.1) + u",
                      "3*(2*t + 0.1)^4 - (2*t + 0.1)^3 - (2*t + 0.1)^2 + u*(2*t + 0.1)"),
                     (-0.55, 0.45))
    s = np.array([-0.3, 0.05, 0.2])
    a = invariants(S, 2 * s + 0.1, 2)
    b = invariants(R, s, 2)
    for name in ("k1", "k2", "k3"):
        for j in range(3):
            np.testing.assert_allclose(b.d(name, j), a.d(name, j), rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_helix_frenet(a):
    S = SurfacePatch((f"{a}*cos(t)", f"{a}*sin(t)", "t + u"), (0.0, 6.0))
    fr = frenet(S, np.linspace(0, 6, 7))
    np.testing.assert_allclose(fr.kappa, a / (a * a + 1), rtol=1e-13)
    np.testing.assert_allclose(fr.tau, 1 / (a * a + 1), rtol=1e-13)
    rk, rt = check_kappa_tau(S, np.linspace(0, 6, 7))
    assert rk.max() <= 1e-12 and rt.max() <= 1e-12


def test_undefined_torsion_on_straight_boundary():
    with pytest.raises(UndefinedTorsion):
        frenet(surface("parabolic"), 0.0)


def test_degenerate_patch():
    S = SurfacePatch(("t^2", "u", "0"), (-1.0, 1.0))
    with pytest.raises(DegenerateError) as exc:
        invariants(S, np.array([0.5, 0.0]), 0)
    assert exc.value.t == 0.0


def test_sphere_invariants_and_curvature():
    S = surface("sphere")
    iv = invariants(S, np.linspace(0, 6, 7), 0)
    np.testing.assert_allclose(np.abs(iv.d("k2")), 1, atol=1e-12)
    np.testing.assert_allclose(iv.d("k3"), 0, atol=1e-12)
    T, U = np.meshgrid(np.linspace(0, 6, 5), np.linspace(0, 0.4, 5))
    np.testing.assert_allclose(gaussian_curvature(S, T, U), 1, atol=1e-12)


@pytest.mark.parametrize("f", ["t^2*u", "sin(t)*cos(u)", "t^3 - 3*t*u^2", "exp(t*u)/(2 + t^2)"])
def test_gaussian_curvature_matches_graph_formula(f):
    S = SurfacePatch(("t", "u", f), (-1.0, 1.0), (-1.0, 1.0))
    T, U = np.meshgrid(np.linspace(-0.8, 0.8, 5), np.linspace(-0.8, 0.8, 5))
    np.testing.assert_allclose(gaussian_curvature(S, T, U), graph_gaussian_curvature(f, T, U),
                               atol=1e-13)


def test_second_form_sign_follows_coorientation():
    S = surface("sphere")
    a = second_fundamental_form(S, 0.3, 0.1)
    b = second_fundamental_form(S.with_coorientation(-1), 0.3, 0.1)
    np.testing.assert_allclose(a, -b)


def test_patch_is_validated():
    with pytest.raises(ValueError):
        SurfacePatch(("t", "u"), (0.0, 1.0))
    with pytest.raises(ValueError):
        SurfacePatch(("t", "u", "0"), (0.0, 1.0), coorientation=2)
