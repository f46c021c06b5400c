"""Cones over spherical curves: geodesics, the Euler-Lagrange residual, the
flat development, circularity and slant-helix detection."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import curves, numerics
from . import taylor as tj
from .curves import CurveError, CurveSpec, SampledCurve
from .linalg import DirectionFit, fit_constant_direction
from .rectify import VALIDATION_TOL, default_tolerance, validate_spherical_profile

TOL_CIRCULAR = 1e-6
TOL_SLANT = 1e-6
RULING_ANGLE = 1e-8
PLANAR_TOL = 1e-8


@dataclass(frozen=True)
class Cone:
    """Cone with vertex ``p`` over a unit-speed profile on ``S^{n-1}(p, 1)``.

    ``profile`` is stored relative to the vertex (it lies on the unit sphere
    about the origin); ``domain`` is the validated profile interval.
    """

    vertex: np.ndarray
    profile: CurveSpec
    domain: tuple
    planar: bool
    dimensionality: int = 2

    @property
    def dimension(self):
        return self.vertex.size

    def profile_samples(self, count=2001):
        t = np.linspace(self.domain[0], self.domain[1], count)
        return t, self.profile.evaluate(t)


def _profile_domain(beta, domain):
    if domain is not None:
        return float(domain[0]), float(domain[1])
    if beta.domain is not None:
        return beta.domain
    return 0.0, 2 * math.pi


def make_cone(p, beta, domain=None):
    """Validate ``beta`` (on the unit sphere about ``p``, unit speed) and build the cone.

    ``planar`` is set when the profile is a great circle, in which case the
    cone is a flat 2-plane through ``p``.
    """
    p = np.asarray(p, dtype=float)
    if p.size != beta.dimension:
        raise CurveError("vertex and profile differ in dimension")
    centered = beta.moved(None, -p)
    dom = _profile_domain(beta, domain)
    radial, speed = validate_spherical_profile(centered, dom)
    if radial > VALIDATION_TOL or speed > VALIDATION_TOL:
        raise CurveError(f"cone profile invalid: max radial deviation {radial:.3e}, "
                         f"max speed deviation {speed:.3e}")
    P = centered.evaluate(np.linspace(dom[0], dom[1], 401))
    sv = np.linalg.svd(P, compute_uv=False)
    planar = bool(sv.size < 3 or sv[2] <= PLANAR_TOL * sv[0])
    return Cone(p, centered, dom, planar)


def cone_geodesic(cone, a, t0=0.0, domain=None):
    """The secant geodesic ``p + a sec(t - t0) beta(t)``.

    Without an explicit ``domain`` the curve is restricted to ``t0 +- 1``
    inside the secant window and the profile interval.
    """
    spec = curves.sec_cone_curve(a, t0, cone.profile, cone.vertex)
    lo, hi = spec.domain
    lo, hi = max(lo, cone.domain[0], t0 - 1.0), min(hi, cone.domain[1], t0 + 1.0)
    if domain is not None:
        spec.check_domain(*domain)
        if domain[0] < cone.domain[0] - 1e-12 or domain[1] > cone.domain[1] + 1e-12:
            raise CurveError("geodesic domain leaves the validated profile interval")
        lo, hi = domain
    spec.validated_domain = (lo, hi)
    return spec


def euler_lagrange_residual(u, h):
    """``r = u u'' - 2 u'^2 - u^2`` with 4th-order finite differences.

    Runs in the precision of ``u``; float64 samples put the residual at a
    rounding floor near ``1e-8`` on ``10^3``-point grids, extended-precision
    samples lower it by about three orders of magnitude.  Returns
    ``(r, max |r|)``.
    """
    u = np.asarray(u)
    if not np.issubdtype(u.dtype, np.floating):
        u = u.astype(float)
    if u.size < 5:
        raise ValueError("need at least 5 samples")
    du = numerics.fd_derivative(u, h, 1)
    ddu = numerics.fd_derivative(u, h, 2)
    r = u * ddu - 2.0 * du * du - u * u
    return r, float(np.max(np.abs(r)))


@dataclass(frozen=True)
class ConeCoordinates:
    """Cone coordinates ``(u, t)`` of a curve ``p + u beta(t)`` and their
    arc-length derivatives."""

    s: np.ndarray
    u: np.ndarray
    t: np.ndarray
    u_s: np.ndarray
    t_s: np.ndarray
    u_ss: np.ndarray
    t_ss: np.ndarray


def cone_coordinates(curve, vertex):
    """Recover ``u = |alpha - p|`` and the profile arc length ``t`` along a
    unit-speed curve, with first and second arc-length derivatives from the
    curve's order-2 jets."""
    X = curve.points - np.asarray(vertex, dtype=float)
    u = np.linalg.norm(X, axis=1)
    if np.min(u) <= 1e-12:
        raise CurveError("curve passes through the cone vertex")
    A0 = np.einsum("ij,ij->i", X, curve.jet(1))
    u_s = A0 / u
    q = np.sqrt(np.maximum(1.0 - u_s * u_s, 0.0))
    t_s = q / u
    u_ss = (1.0 + np.einsum("ij,ij->i", X, curve.jet(2)) - u_s * u_s) / u
    with np.errstate(divide="ignore", invalid="ignore"):
        q_s = np.where(q > 0, -u_s * u_ss / q, 0.0)
    t_ss = (q_s * u - q * u_s) / (u * u)
    t = numerics.cumulative_integral(t_s, curve.h)
    return ConeCoordinates(curve.s, u, t, u_s, t_s, u_ss, t_ss)


def euler_lagrange_from_jets(coords):
    """Pointwise Euler-Lagrange residual divided by ``u^2``.

    The ``t``-derivatives of ``u`` come from the chain rule applied to the
    arc-length derivatives, so no numerical differentiation is involved.
    """
    u, u_s, t_s = coords.u, coords.u_s, coords.t_s
    u_t = u_s / t_s
    u_tt = (coords.u_ss * t_s - u_s * coords.t_ss) / t_s**3
    return (u * u_tt - 2.0 * u_t * u_t - u * u) / (u * u)


@dataclass(frozen=True)
class GeodesicReport:
    normality_residual: float
    tangency_residual: float
    euler_lagrange_residual: float
    is_ruling: bool
    tolerance: float
    verdict: bool
    flags: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {"normality_residual": self.normality_residual,
                "tangency_residual": self.tangency_residual,
                "euler_lagrange_residual": self.euler_lagrange_residual,
                "is_ruling": bool(self.is_ruling), "tolerance": self.tolerance,
                "verdict": bool(self.verdict), "flags": list(self.flags)}


def ruling_angle(curve, vertex):
    """Max sine of the angle between ``alpha - p`` and ``alpha'``."""
    X = curve.points - np.asarray(vertex, dtype=float)
    T = curve.jet(1)
    un = np.linalg.norm(X, axis=1)
    along = np.einsum("ij,ij->i", X, T)
    perp = np.linalg.norm(X - along[:, None] * T, axis=1)
    return float(np.max(perp / np.maximum(un, 1e-300)))


def geodesic_check(curve, vertex, tol=None):
    """Geodesic test for a curve on the cone with vertex ``vertex``.

    The curvature vector must be normal to the cone: orthogonal to
    ``alpha - p`` (normalized by ``max |alpha''|``) and to ``alpha'``.  Rulings
    are geodesics and are accepted directly.
    """
    if not curve.unit_speed:
        raise CurveError("geodesic_check needs a unit-speed curve")
    tol = default_tolerance(curve) if tol is None else float(tol)
    p = np.asarray(vertex, dtype=float)
    X = curve.points - p
    acc = curve.jet(2)
    knorm = float(np.max(np.linalg.norm(acc, axis=1)))
    orth = float(np.max(np.abs(np.einsum("ij,ij->i", X, acc))))
    normality = orth / knorm if knorm > 1e-12 else orth
    tangency = float(np.max(np.abs(np.einsum("ij,ij->i", acc, curve.jet(1)))))
    ruling = ruling_angle(curve, p) < RULING_ANGLE
    flags = []
    if ruling:
        el = 0.0
        flags.append("ruling")
    else:
        coords = cone_coordinates(curve, p)
        if np.min(coords.t_s) <= 1e-10:
            el = float("inf")
            flags.append("touches a ruling direction")
        else:
            el = float(np.max(np.abs(euler_lagrange_from_jets(coords))))
    verdict = ruling or (max(normality, tangency) < tol and el < tol)
    return GeodesicReport(max(normality, tangency), tangency, el, ruling, tol, verdict,
                          tuple(flags))


def unroll_2cone(cone, curve):
    """Flat development ``(u, t) -> (u cos t, u sin t)`` of a curve on the cone.

    The angle ``t`` is the profile arc length swept by the radial projection,
    anchored at 0 on the first sample.  Returns a planar unit-speed
    :class:`SampledCurve` with order-2 jets.
    """
    p = cone.vertex
    X = curve.points - p
    u = np.linalg.norm(X, axis=1)
    radial = X / u[:, None]
    T = curve.jet(1)
    dir_rate = (T - np.einsum("ij,ij->i", T, radial)[:, None] * radial) / u[:, None]
    if ruling_angle(curve, p) < RULING_ANGLE:
        th = np.zeros_like(u)
        u_s = np.einsum("ij,ij->i", X, T) / u
        P = np.stack([u, np.zeros_like(u)], axis=1)
        d1 = np.stack([u_s, np.zeros_like(u)], axis=1)
        d2 = np.zeros_like(d1)
        return SampledCurve(curve.s, P, np.stack([d1, d2]), curve.jet_source, None, th,
                            curve.unit_speed)
    if np.any(np.einsum("ij,ij->i", dir_rate[:-1], dir_rate[1:]) < 0):
        raise CurveError("curve doubles back over profile")
    c = cone_coordinates(curve, p)
    cos, sin = np.cos(c.t), np.sin(c.t)
    P = np.stack([c.u * cos, c.u * sin], axis=1)
    # Chain rule through the polar map.
    ur, ut = c.u_s, c.u * c.t_s
    d1 = np.stack([ur * cos - ut * sin, ur * sin + ut * cos], axis=1)
    rr = c.u_ss - c.u * c.t_s**2
    tt = 2.0 * c.u_s * c.t_s + c.u * c.t_ss
    d2 = np.stack([rr * cos - tt * sin, rr * sin + tt * cos], axis=1)
    unit = bool(np.max(np.abs(np.linalg.norm(d1, axis=1) - 1.0)) < 1e-6)
    return SampledCurve(curve.s, P, np.stack([d1, d2]), curve.jet_source, None, c.t, unit)


def lift_development(cone, start, direction, length, t_start=None):
    """Lift the planar segment ``start + sigma direction`` back onto the cone.

    The plane is the development anchored at profile parameter ``t_start``
    (default: the start of the cone's profile domain).  Returns an analytic
    spec in the segment parameter ``sigma in [0, length]``.
    """
    x0 = np.asarray(start, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    base_t = cone.domain[0] if t_start is None else float(t_start)
    profile = cone.profile
    p = cone.vertex

    def jet(sig, order):
        if order == 0:
            return jet(sig, 1)[:1]
        K = order
        pts = np.zeros((K + 1, sig.size, 2))
        pts[0] = x0 + np.outer(sig, d)
        if K >= 1:
            pts[1] = d
        r2 = tj.dot(pts, pts)
        u = tj.sqrt(r2)
        x, y = pts[..., 0], pts[..., 1]
        # theta' = (x y' - y x') / (x^2 + y^2), integrated from atan2.
        rate = tj.div(tj.mul(x, tj.derivative(y)) - tj.mul(y, tj.derivative(x)), r2[:K])
        theta = tj.integral(rate, np.arctan2(pts[0, :, 1], pts[0, :, 0]))
        theta = theta[: K + 1]
        beta = profile.taylor(base_t + theta[0], K)
        shift = theta.copy()
        shift[0] = base_t + theta[0]
        out = tj.mul(u, tj.compose(beta, shift))
        out[0] += p
        return out

    th0 = math.atan2(x0[1], x0[0])
    end = x0 + length * d
    th1 = math.atan2(end[1], end[0])
    for th in (th0, th1):
        if not cone.domain[0] <= base_t + th <= cone.domain[1]:
            raise CurveError("lifted segment leaves the profile domain")
    return CurveSpec("lifted_segment", cone.dimension, jet, (0.0, float(length)),
                     {"start": x0.tolist(), "direction": d.tolist()})


def _fit_with_verdict(samples, tol):
    fit = fit_constant_direction(samples)
    return DirectionFit(fit.direction, fit.level, fit.residual, fit.degenerate,
                        bool(fit.residual < tol), tol)


def circularity_check(cone, count=2001, tol=TOL_CIRCULAR):
    """Fit ``<beta - p, d> = const`` over the profile; circular iff residual < tol."""
    _, B = cone.profile_samples(count)
    return _fit_with_verdict(B, tol)


def principal_normals(curve):
    acc = curve.jet(2)
    k = np.linalg.norm(acc, axis=1)
    if np.min(k) <= 1e-10 * max(1.0, float(np.max(k))):
        raise CurveError("principal normal undefined: first curvature vanishes")
    return acc / k[:, None]


def slant_helix_check(curve, tol=TOL_SLANT):
    """Fit a fixed direction making a constant angle with the principal normal."""
    if not curve.unit_speed:
        raise CurveError("slant_helix_check needs a unit-speed curve")
    return _fit_with_verdict(principal_normals(curve), tol)


def direction_level_spread(samples, direction):
    """``max - min`` of ``<v_i, d>``: zero when ``d`` is an admissible axis."""
    v = np.asarray(samples, dtype=float) @ np.asarray(direction, dtype=float)
    return float(v.max() - v.min())
