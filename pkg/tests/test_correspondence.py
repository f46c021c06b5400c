import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from rectcurves import correspondence as corr
from rectcurves import curves, frames, rectify
from rectcurves.correspondence import CorrespondenceError
from rectcurves.curves import CurveError

from conftest import unit_curve


def small_circle_rectifying(a, t0, domain):
    spec = rectify.construct_rectifying(curves.small_circle_sphere(math.pi / 4), a, t0,
                                        domain=domain)
    return rectify.rectifying_sample(spec, 1001, 3)


def torus_knot_rectifying(a=1.3, t0=0.4, vertex=(0.5, -1.0, 0.2, 0.7)):
    p = np.asarray(vertex, dtype=float)
    beta = curves.torus_knot_sphere(0.8, 2.0).moved(None, p)
    spec = rectify.construct_rectifying(beta, a, t0, p, (t0 + 0.1, t0 + 0.9))
    return rectify.rectifying_sample(spec, 1001, 4), p


def sphere_window(center, radius, seed=0):
    beta = curves.random_spherical_curve(3, seed, 3, center, radius)
    curve = curves.reparameterize_arclength(
        curves.sample_jets(beta, (0.0, 2 * math.pi), 4001, 3))
    lo, hi = frames.twisted_window(frames.frenet_apparatus(curve), 0.1)
    assert hi - lo >= 200
    return curve.window(lo, hi)


# -- transport algebra -----------------------------------------------------------

@pytest.mark.parametrize("a,t0,domain", [(1.0, 0.0, (0.05, 1.0)), (2.0, 0.2, (0.25, 1.2))])
def test_constant_ratio_maps_to_circle_of_radius_a(a, t0, domain):
    curve = small_circle_rectifying(a, t0, domain)
    b = rectify.check_rectifying(curve, np.zeros(3)).b
    sph = corr.rectifying_to_spherical(corr.measure_profile(curve, "rectifying", b))
    assert sph.dimension == 2 and sph.side == "spherical"
    np.testing.assert_allclose(sph.values[0], 1.0 / a, atol=1e-6)
    assert "torsion slot dropped" in sph.notes[0]


def test_kappa1_equal_to_shift_maps_to_one():
    s = np.linspace(0.0, 1.0, 101)
    rec = corr.make_profile(s, [np.ones_like(s), s + 0.5, np.cos(s)], "rectifying", b=0.5)
    sph = corr.rectifying_to_spherical(rec)
    np.testing.assert_allclose(sph.values[0], 1.0, rtol=1e-15)
    # Higher slots and the torsion pass through.
    np.testing.assert_array_equal(sph.values[1], np.cos(s))


def test_circle_maps_to_linear_second_curvature():
    s = np.linspace(0.5, 2.0, 61)
    sph = corr.make_profile(s, [np.full_like(s, 0.25)], "spherical")
    rec = corr.spherical_to_rectifying(sph, 1.0, 0.0)
    np.testing.assert_allclose(rec.values[0], 1.0)
    np.testing.assert_allclose(rec.values[1], s / 4.0, rtol=1e-15)
    assert rec.dimension == 3


def test_inverse_transport_formula_matches_direct_evaluation(rng):
    s = np.linspace(0.0, 3.0, 31)
    k = rng.uniform(0.2, 2.0, s.size)
    t = rng.normal(size=s.size)
    kappa0 = rng.uniform(0.5, 1.5, s.size)
    rec = corr.spherical_to_rectifying(corr.make_profile(s, [k, t], "spherical"), kappa0, 0.3)
    np.testing.assert_allclose(rec.values[1], k * (s + 0.3) * kappa0, rtol=1e-15)
    np.testing.assert_array_equal(rec.values[2], t)


@settings(max_examples=30, deadline=None)
@given(hnp.arrays(float, (3, 21), elements=st.floats(0.05, 5.0)), st.floats(0.01, 2.0),
       st.floats(0.0, 3.0))
def test_transport_round_trip_is_bitwise(F, b, start):
    s = start + np.linspace(0.0, 1.0, 21)
    sph = corr.make_profile(s, F, "spherical")
    kappa0 = 0.5 + F[0] / 10
    back = corr.rectifying_to_spherical(corr.spherical_to_rectifying(sph, kappa0, b))
    assert np.array_equal(back.values, sph.values)


def test_default_shift_and_kappa0_note():
    assert corr.default_b(np.linspace(-0.5, 1.0, 5)) == pytest.approx(0.6)
    assert corr.default_b(np.linspace(1.0, 2.0, 5)) == 0.0
    s = np.linspace(0.0, 1.0, 11)
    rec = corr.spherical_to_rectifying(corr.make_profile(s, [np.ones_like(s)], "spherical"))
    assert rec.b == pytest.approx(0.1)
    assert corr.KAPPA0_NOTE in rec.notes
    np.testing.assert_array_equal(rec.values[0], 1.0)


def test_kappa0_may_be_callable():
    s = np.linspace(0.0, 1.0, 11)
    rec = corr.spherical_to_rectifying(corr.make_profile(s, [np.ones_like(s)], "spherical"),
                                       lambda x: 1.0 + x, 1.0)
    np.testing.assert_allclose(rec.values[0], 1.0 + s)
    assert corr.KAPPA0_NOTE not in rec.notes


def test_transport_errors():
    s = np.linspace(-1.0, 1.0, 21)
    ones = np.ones_like(s)
    rec = corr.make_profile(s, [ones, ones], "rectifying", b=0.0)
    with pytest.raises(CorrespondenceError, match="tangential coordinate vanishes"):
        corr.rectifying_to_spherical(rec)
    sph = corr.make_profile(s, [ones], "spherical")
    with pytest.raises(CorrespondenceError, match="strictly positive"):
        corr.spherical_to_rectifying(sph, -ones, 2.0)
    with pytest.raises(CorrespondenceError, match="expected a spherical"):
        corr.spherical_to_rectifying(rec)
    with pytest.raises(CorrespondenceError, match="expected a rectifying"):
        corr.rectifying_to_spherical(sph)
    with pytest.raises(CorrespondenceError, match="kappa_0 must be positive"):
        corr.rectifying_to_spherical(corr.make_profile(s, [-ones, ones], "rectifying", 2.0))
    with pytest.raises(CorrespondenceError, match="unknown profile side"):
        corr.make_profile(s, [ones], "planar")
    with pytest.raises(CorrespondenceError, match="uniform"):
        corr.make_profile(s**3, [ones], "spherical")


# -- synthesis -------------------------------------------------------------------

def test_constant_curvature_synthesizes_closed_circle():
    r = 2.0
    s = np.linspace(0.0, 2 * math.pi * r, 4001)
    curve = corr.curve_from_curvatures(corr.make_profile(s, [np.full_like(s, 1 / r)],
                                                         "spherical"))
    assert np.linalg.norm(curve.points[-1] - curve.points[0]) < 1e-6
    # Initial frame e_1, e_2 puts the center at (0, r).
    np.testing.assert_allclose(np.linalg.norm(curve.points - [0.0, r], axis=1), r, atol=1e-9)
    np.testing.assert_allclose(np.linalg.norm(curve.jet(1), axis=1), 1.0, atol=1e-8)


def test_helix_curvatures_round_trip():
    s = np.linspace(0.0, 10.0, 2001)
    half = np.full_like(s, 0.5)
    curve = corr.curve_from_curvatures(corr.make_profile(s, [half, half], "rectifying"))
    assert curve.jet_source == "frenet-synthesis"
    app = frames.frenet_apparatus(curve)
    np.testing.assert_allclose(app.curvatures, 0.5, atol=1e-8)


def test_smooth_profile_round_trip_in_e4():
    s = np.linspace(0.0, 10.0, 2001)
    P = np.vstack([1.0 + 0.3 * np.sin(s), 0.8 + 0.2 * np.cos(0.5 * s), 0.5 * np.cos(0.7 * s)])
    curve = corr.curve_from_curvatures(corr.make_profile(s, P, "rectifying"))
    app = frames.frenet_apparatus(curve)
    assert np.max(np.abs(app.curvatures - P)) < 1e-6


def test_initial_frame_and_start_point_are_a_rigid_motion(rng):
    s = np.linspace(0.0, 5.0, 1001)
    half = np.full_like(s, 0.5)
    prof = corr.make_profile(s, [half, half], "rectifying")
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    x0 = rng.normal(size=3)
    base = corr.curve_from_curvatures(prof)
    moved = corr.curve_from_curvatures(prof, Q, x0)
    np.testing.assert_allclose(moved.points, base.points @ Q + x0, atol=1e-9)


def test_initial_frame_must_be_orthonormal():
    s = np.linspace(0.0, 1.0, 11)
    prof = corr.make_profile(s, [np.ones_like(s)], "spherical")
    with pytest.raises(CurveError, match="orthonormal"):
        corr.curve_from_curvatures(prof, 2 * np.eye(2))


def test_spherical_profile_synthesizes_rectifying_curve():
    center = np.array([0.3, -0.2, 0.5])
    source = sphere_window(center, 1.5)
    rec = corr.spherical_to_rectifying(corr.measure_profile(source, "spherical"))
    syn = corr.curve_from_curvatures(rec)
    assert syn.dimension == 4
    vertex = rectify.find_vertex(syn).vertex
    rep = rectify.check_rectifying(syn, vertex, 1e-4)
    assert rep.verdict
    assert corr.rectifying_equation_residual_4d(syn, vertex)[1] < 1e-4


def test_rectifying_profile_synthesizes_spherical_curve():
    curve, p = torus_knot_rectifying()
    b = rectify.check_rectifying(curve, p).b
    sph = corr.rectifying_to_spherical(corr.measure_profile(curve, "rectifying", b))
    syn = corr.curve_from_curvatures(sph)
    assert syn.dimension == 3
    assert corr.spherical_equation_residual_3d(syn)[1] < 1e-4
    fit = frames.classify_rm_normal(syn.points)
    assert fit.verdict == "sphere"


# -- characteristic equations ----------------------------------------------------

@pytest.mark.parametrize("a,t0,domain", [(1.0, 0.0, (0.05, 1.0)), (2.0, 0.2, (0.25, 1.2))])
def test_3d_equation_recovers_a(a, t0, domain):
    curve = small_circle_rectifying(a, t0, domain)
    a_hat, res = corr.rectifying_equation_residual_3d(curve, np.zeros(3))
    assert a_hat == pytest.approx(a, abs=1e-6)
    assert res < 1e-6


def test_3d_equation_on_helix_matches_closed_form():
    helix = curves.reparameterize_arclength(
        curves.sample_jets(curves.helix(1.0, 1.0), (0.0, 6.0), 1001, 3))
    p = np.array([0.0, 0.0, -10.0])
    b = 3.0
    _, res = corr.rectifying_equation_residual_3d(helix, p, b)
    # kappa = tau = 1/2, so g = 1 / (s + b).
    g = 1.0 / (helix.s + b)
    assert res == pytest.approx(np.max(np.abs(g - g.mean())), rel=1e-6)
    assert res > 1e-2


def test_3d_equation_errors():
    line = unit_curve(curves.straight_line(n=4), (0.0, 1.0), 51, 4)
    with pytest.raises(CorrespondenceError, match="E\\^3"):
        corr.rectifying_equation_residual_3d(line, np.zeros(4))


def test_4d_equation_on_constructed_curve():
    curve, p = torus_knot_rectifying()
    _, res = corr.rectifying_equation_residual_4d(curve, p)
    assert res < 1e-4


def test_4d_equation_on_constant_curvature_helix_is_h_tau():
    helix = curves.reparameterize_arclength(
        curves.sample_jets(curves.clifford_helix(), (0.0, 6.0), 2001, 4))
    k0, k1, tau = frames.frenet_apparatus(helix).curvatures
    b = 1.0
    r, res = corr.rectifying_equation_residual_4d(helix, np.zeros(4), b)
    # h is linear in s, so (h'/tau)' = 0 and r = h tau.
    np.testing.assert_allclose(r, (helix.s + b) * k0[0] / k1[0] * tau[0], atol=1e-8)
    assert res > 1e-2


def test_4d_equation_needs_torsion():
    spec = curves.helix().embedded(4)
    curve = unit_curve(spec, (0.0, 4.0), 401, 4)
    with pytest.raises((CorrespondenceError, frames.FrameError)):
        corr.rectifying_equation_residual_4d(curve, np.zeros(4), 1.0)


def test_spherical_equation_on_sphere_curve():
    curve = sphere_window(np.array([1.0, 2.0, -1.0]), 2.0, seed=1)
    assert corr.spherical_equation_residual_3d(curve)[1] < 1e-4


def test_spherical_equation_on_helix_is_one():
    helix = curves.reparameterize_arclength(
        curves.sample_jets(curves.helix(1.0, 1.0), (0.0, 6.0), 1001, 3))
    r, _ = corr.spherical_equation_residual_3d(helix)
    np.testing.assert_allclose(r, 1.0, atol=1e-8)


def test_spherical_equation_rejects_plane_curve():
    curve = unit_curve(curves.plane_circle(1.0, 3), (0.0, 2.0), 201, 3)
    with pytest.raises((CorrespondenceError, frames.FrameError)):
        corr.spherical_equation_residual_3d(curve)


# -- coordinate claims -----------------------------------------------------------

def test_rectifying_coordinates_in_e4():
    curve, p = torus_knot_rectifying()
    b = rectify.check_rectifying(curve, p).b
    app = frames.frenet_apparatus(curve)
    A = frames.coordinate_functions(curve, app, p).A
    k0, k1 = app.curvatures[:2]
    x = curve.s + b
    assert np.max(np.abs(A[0] - x)) < 1e-5
    assert np.max(np.abs(A[1])) < 1e-5
    assert np.max(np.abs(A[2] - x * k0 / k1)) < 1e-5


def test_spherical_coordinates_in_e3():
    center = np.array([0.3, -0.2, 0.5])
    curve = sphere_window(center, 1.5)
    app = frames.frenet_apparatus(curve)
    C = frames.coordinate_functions(curve, app, center).A
    assert np.max(np.abs(C[0])) < 1e-5
    assert np.max(np.abs(C[1] + 1.0 / app.curvatures[0])) < 1e-5


# -- I/O -------------------------------------------------------------------------

def test_profile_csv_round_trip(tmp_path):
    s = np.linspace(0.0, 1.0, 11)
    prof = corr.make_profile(s, [1.0 + s, np.sin(s)], "rectifying", 0.2)
    path = tmp_path / "profile.csv"
    corr.write_profile_csv(path, prof)
    assert path.read_text().splitlines()[0] == "s,kappa0,kappa1"
    back = corr.read_profile_csv(path, "rectifying", 0.2)
    np.testing.assert_array_equal(back.values, prof.values)
    np.testing.assert_array_equal(back.s, s)


def test_profile_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,k\n0,1\n")
    with pytest.raises(CorrespondenceError, match="header"):
        corr.read_profile_csv(path)


def test_profile_to_dict():
    s = np.linspace(0.0, 1.0, 11)
    d = corr.make_profile(s, [np.ones_like(s)], "spherical").to_dict()
    assert d == {"side": "spherical", "dimension": 2, "b": 0.0, "samples": 11, "notes": []}
