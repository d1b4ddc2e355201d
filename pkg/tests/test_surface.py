import math

import numpy as np
import pytest

from h1geom import catalog
from h1geom.errors import CharacteristicPointError
from h1geom.hgroup import coframe_eval, gl_inner
from h1geom.surface import (
    adapted_frame,
    beta,
    characteristic_test,
    frame_data,
    frame_derivatives,
    graph_patch,
    parametric_patch,
    pushforward_frame,
    structure_identity_residual,
    xl_basis,
)

RNG_SEED = 20260808


def catalog_samples():
    """(patch, u-span, v-span) triples covering all catalog geometries."""
    return [
        (catalog.plane(), (0.0, 2 * math.pi), (0.5, 3.0)),
        (catalog.cylinder(), (0.0, 2 * math.pi), (-2.0, 2.0)),
        (catalog.paraboloid(), (0.3, 1.9), (0.3, 1.9)),
        (catalog.constant_curvature(1.0), (0.0, 2 * math.pi), (-1.2, 1.2)),
        (catalog.constant_curvature(0.0), (0.0, 2 * math.pi), (0.3, 2.0)),
        (catalog.constant_curvature(-1.0), (0.0, 2 * math.pi), (-1.9, 1.9)),
    ]


# ---------------------------------------------------------------------------
# pushforward


def test_pushforward_cartesian_plane():
    patch = catalog.plane_cartesian()
    f_u, f_v = pushforward_frame(patch, 1.0, 0.0)
    assert np.allclose(f_u.coefficients(), [1.0, 0.0, 0.0])
    assert np.allclose(f_v.coefficients(), [0.0, 1.0, -0.5])


def test_pushforward_rotation_vertical_component():
    # the u-tangent of a rotation surface has e3-coefficient -(a^2+b^2)/2
    patch = catalog.constant_curvature(-1.0)
    for v in (-1.0, 0.3, 1.4):
        f_u, _ = pushforward_frame(patch, 0.8, v)
        pos = patch.position(0.8, v)
        r2 = pos.x**2 + pos.y**2
        assert f_u.c3 == pytest.approx(-0.5 * r2, rel=1e-12)


def test_pushforward_round_trip():
    patch = catalog.paraboloid()
    _, du, dv = patch.jet(0.7, -0.4)
    f_u, f_v = pushforward_frame(patch, 0.7, -0.4)
    assert np.allclose(f_u.to_coordinates(), du, atol=1e-15)
    assert np.allclose(f_v.to_coordinates(), dv, atol=1e-15)


# ---------------------------------------------------------------------------
# characteristic points


def test_characteristic_cartesian_plane():
    patch = catalog.plane_cartesian()
    f_u, f_v = pushforward_frame(patch, 0.0, 0.0)
    assert characteristic_test(f_u, f_v, 1e-10)
    f_u, f_v = pushforward_frame(patch, 1.0, 0.0)
    assert not characteristic_test(f_u, f_v, 1e-10)
    with pytest.raises(CharacteristicPointError):
        adapted_frame(patch, 0.0, 0.0)


def test_characteristic_cylinder_never():
    patch = catalog.cylinder()
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(20):
        f_u, f_v = pushforward_frame(patch, rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3))
        assert not characteristic_test(f_u, f_v, 1e-10)


def test_characteristic_paraboloid_origin():
    patch = catalog.paraboloid()
    with pytest.raises(CharacteristicPointError):
        adapted_frame(patch, 0.0, 0.0)
    adapted_frame(patch, 0.5, 0.1)  # fine away from the origin


# ---------------------------------------------------------------------------
# adapted frame


def test_plane_polar_hand_values():
    # at (x, y) = (1, 0): f2 radial, A = 2, alpha = -pi/2
    patch = catalog.plane()
    s = adapted_frame(patch, 0.0, 1.0)
    assert s.A == pytest.approx(2.0, abs=1e-12)
    assert s.alpha == pytest.approx(-math.pi / 2, abs=1e-12)
    assert np.allclose(s.f2.coefficients(), [1.0, 0.0, 0.0], atol=1e-12)
    assert np.allclose(s.f1.coefficients(), [0.0, -1.0, 0.0], atol=1e-12)


def test_adapted_frame_invariants():
    rng = np.random.default_rng(RNG_SEED)
    for patch, u_span, v_span in catalog_samples():
        for _ in range(10):
            u = float(rng.uniform(*u_span))
            v = float(rng.uniform(*v_span))
            s = adapted_frame(patch, u, v)
            # horizontality and normalization in the horizontal metric
            assert abs(s.f1.c3) <= 1e-12 and abs(s.f2.c3) <= 1e-12
            assert math.hypot(s.f1.c1, s.f1.c2) == pytest.approx(1.0, abs=1e-12)
            assert math.hypot(s.f2.c1, s.f2.c2) == pytest.approx(1.0, abs=1e-12)
            assert s.f1.c1 * s.f2.c1 + s.f1.c2 * s.f2.c2 == pytest.approx(0.0, abs=1e-12)
            # rotation relations and f3 = e3 + A f1
            assert s.f1.c1 == pytest.approx(math.cos(s.alpha), abs=1e-12)
            assert s.f1.c2 == pytest.approx(math.sin(s.alpha), abs=1e-12)
            assert s.f2.c1 == pytest.approx(-math.sin(s.alpha), abs=1e-12)
            assert s.f2.c2 == pytest.approx(math.cos(s.alpha), abs=1e-12)
            assert np.allclose(
                s.f3.coefficients(),
                [s.A * s.f1.c1, s.A * s.f1.c2, 1.0],
                atol=1e-12,
            )
            assert s.area_density > 0.0


def test_conormal_annihilates_tangent_plane():
    rng = np.random.default_rng(RNG_SEED + 1)
    for patch, u_span, v_span in catalog_samples():
        for _ in range(6):
            u = float(rng.uniform(*u_span))
            v = float(rng.uniform(*v_span))
            s = adapted_frame(patch, u, v)
            f_u, f_v = pushforward_frame(patch, u, v)
            ca, sa = math.cos(s.alpha), math.sin(s.alpha)
            for t in (f_u, f_v):
                w = t.to_coordinates()
                value = (
                    ca * coframe_eval(1, s.point, w)
                    + sa * coframe_eval(2, s.point, w)
                    - s.A * coframe_eval(3, s.point, w)
                )
                scale = max(1.0, float(np.max(np.abs(w))))
                assert abs(value) <= 1e-10 * scale


def test_frame_coefficients_reconstruct_tangents():
    # f_u must equal p1 f2 + q1 f3 with the stored change of basis
    patch = catalog.constant_curvature(1.0)
    s = adapted_frame(patch, 1.2, 0.4)
    f_u, f_v = pushforward_frame(patch, 1.2, 0.4)
    minv = np.array([s.f2_uv, s.f3_uv])
    m = np.linalg.inv(minv)
    for row, t in zip(m, (f_u, f_v)):
        rebuilt = row[0] * s.f2.coefficients() + row[1] * s.f3.coefficients()
        assert np.allclose(rebuilt, t.coefficients(), atol=1e-10)


def test_cylinder_tilt_vanishes():
    patch = catalog.cylinder()
    rng = np.random.default_rng(2)
    for _ in range(10):
        s = adapted_frame(patch, rng.uniform(0, 2 * math.pi), rng.uniform(-3, 3))
        assert s.A == pytest.approx(0.0, abs=1e-12)


def test_rotation_tilt_matches_profile_log_derivative():
    # A = d/dv ln r^2, checked through the geometric frame
    from h1geom.rotsurf import A_family, r_family

    for K in (1.0, 0.0, -1.0):
        patch = catalog.constant_curvature(K)
        for v in (0.35, 0.8) if K == 0.0 else (-0.6, 0.4):
            s = adapted_frame(patch, 2.0, v)
            assert s.A == pytest.approx(A_family(K, v), abs=1e-11)
            h = 1e-6
            fd = (
                math.log(r_family(K, 1.0, v + h) ** 2)
                - math.log(r_family(K, 1.0, v - h) ** 2)
            ) / (2 * h)
            assert s.A == pytest.approx(fd, abs=1e-8)


# ---------------------------------------------------------------------------
# frame derivatives


def test_plane_polar_derivative_hand_values():
    patch = catalog.plane()
    for method in ("analytic", "fd"):
        fd = frame_derivatives(patch, 0.0, 1.0, method=method)
        assert fd.dA_f2 == pytest.approx(-2.0, abs=1e-6)
        assert fd.dalpha_f3 == pytest.approx(-2.0, abs=1e-6)
        assert fd.dalpha_f2 == pytest.approx(0.0, abs=1e-8)
        assert fd.dA_f3 == pytest.approx(0.0, abs=1e-8)


def test_structure_identity_on_catalog():
    rng = np.random.default_rng(RNG_SEED + 2)
    for patch, u_span, v_span in catalog_samples():
        for _ in range(8):
            u = float(rng.uniform(*u_span))
            v = float(rng.uniform(*v_span))
            s = adapted_frame(patch, u, v)
            fd = frame_derivatives(patch, u, v, method="fd")
            assert abs(structure_identity_residual(fd, s.A)) <= 1e-6


def test_fd_matches_analytic_on_rotation_patches():
    rng = np.random.default_rng(RNG_SEED + 3)
    for K in (1.0, 0.0, -1.0):
        patch = catalog.constant_curvature(K)
        v_span = (0.3, 2.0) if K == 0.0 else (-1.0, 1.0)
        for _ in range(6):
            u = float(rng.uniform(0, 2 * math.pi))
            v = float(rng.uniform(*v_span))
            fd = frame_derivatives(patch, u, v, method="fd")
            an = frame_derivatives(patch, u, v, method="analytic")
            for name in ("dA_f2", "dA_f3", "dalpha_f2", "dalpha_f3"):
                got, want = getattr(fd, name), getattr(an, name)
                assert abs(got - want) <= 1e-6 * max(1.0, abs(want))


def test_constant_curvature_recovered_by_fd_pipeline():
    for K, v in ((1.0, 0.7), (0.0, 1.1), (-1.0, -1.3)):
        patch = catalog.constant_curvature(K)
        s, fd = frame_data(patch, 2.2, v, method="fd")
        assert -fd.dA_f2 - s.A**2 == pytest.approx(K, abs=1e-6)


def test_orientation_flip():
    patch = catalog.plane()
    flipped = patch.with_orientation(-1)
    s = adapted_frame(patch, 0.3, 1.5)
    t = adapted_frame(flipped, 0.3, 1.5)
    assert t.A == pytest.approx(-s.A, abs=1e-12)
    delta = (t.alpha - s.alpha) % (2 * math.pi)
    assert delta == pytest.approx(math.pi, abs=1e-12)
    assert t.area_density == pytest.approx(-s.area_density, rel=1e-12)
    fd_s = frame_derivatives(patch, 0.3, 1.5)
    fd_t = frame_derivatives(flipped, 0.3, 1.5)
    # limit curvature inputs are orientation invariant
    assert fd_t.dA_f2 == pytest.approx(fd_s.dA_f2, abs=1e-10)
    assert -fd_t.dA_f2 - t.A**2 == pytest.approx(-fd_s.dA_f2 - s.A**2, abs=1e-10)


# ---------------------------------------------------------------------------
# beta and the g_L basis


def test_beta_values():
    assert beta(4.0, 0.0) == 0.0
    L = 2.7
    assert beta(L, math.sqrt(L)) == pytest.approx(math.pi / 4)


def test_beta_derivative():
    # d(beta)/dA = sqrt(L)/(L+A^2)
    L, A, h = 3.0, 1.2, 1e-6
    fd = (beta(L, A + h) - beta(L, A - h)) / (2 * h)
    assert fd == pytest.approx(math.sqrt(L) / (L + A * A), rel=1e-8)


def test_xl_basis_orthonormal():
    rng = np.random.default_rng(RNG_SEED + 4)
    for patch, u_span, v_span in catalog_samples():
        u = float(rng.uniform(*u_span))
        v = float(rng.uniform(*v_span))
        s = adapted_frame(patch, u, v)
        for L in (1.0, 10.0, 100.0):
            basis = xl_basis(s, L)
            for i, x in enumerate(basis):
                for j, y in enumerate(basis):
                    want = 1.0 if i == j else 0.0
                    assert gl_inner(x, y, L) == pytest.approx(want, abs=1e-12)


def test_xl_basis_zero_tilt():
    patch = catalog.cylinder()
    s = adapted_frame(patch, 0.5, 0.5)
    L = 9.0
    x1, x2, x3 = xl_basis(s, L)
    assert np.allclose(x1.coefficients(), s.f1.coefficients(), atol=1e-12)
    assert np.allclose(x3.coefficients(), [0, 0, 1 / math.sqrt(L)], atol=1e-12)


def test_xl_basis_plane_hand_values():
    # A = 2, L = 1: X1 = (1/sqrt5) f1 - (2/sqrt5) e3^L
    patch = catalog.plane()
    s = adapted_frame(patch, 0.0, 1.0)
    x1, _, _ = xl_basis(s, 1.0)
    expected = (1 / math.sqrt(5)) * s.f1.coefficients() + np.array(
        [0.0, 0.0, -2 / math.sqrt(5)]
    )
    assert np.allclose(x1.coefficients(), expected, atol=1e-12)


# ---------------------------------------------------------------------------
# expression-backed patches


def test_graph_patch_jet():
    patch = graph_patch("u^2+v", name="test")
    pos, du, dv = patch.jet(0.5, 1.0)
    assert np.allclose(pos, [0.5, 1.0, 1.25])
    assert np.allclose(du, [1.0, 0.0, 1.0])
    assert np.allclose(dv, [0.0, 1.0, 1.0])


def test_parametric_patch_jet():
    patch = parametric_patch("cos(u)", "sin(u)", "v", (0, 2 * math.pi), (-1, 1), closed_u=True)
    pos, du, dv = patch.jet(0.0, 0.3)
    assert np.allclose(pos, [1.0, 0.0, 0.3])
    assert np.allclose(du, [0.0, 1.0, 0.0])
    assert np.allclose(dv, [0.0, 0.0, 1.0])
    s = adapted_frame(patch, 0.7, 0.1)
    assert s.A == pytest.approx(0.0, abs=1e-12)


def test_frame_derivatives_method_validation():
    patch = catalog.paraboloid()
    with pytest.raises(ValueError):
        frame_derivatives(patch, 0.5, 0.5, method="nope")
    with pytest.raises(ValueError):
        frame_derivatives(patch, 0.5, 0.5, method="analytic")  # no closed forms
