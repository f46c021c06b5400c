"""Curvature-function transport between spherical curves in E^{m+1} and
rectifying curves in E^{m+2}, curve synthesis from curvatures, and the
characteristic-equation residuals in dimensions 3 and 4."""
import csv
from dataclasses import dataclass, field

import numpy as np

from . import kernels, numerics
from .curves import CurveError, SampledCurve
from .frames import RENORM_EVERY, frenet_apparatus, frenet_matrix
from .rectify import check_rectifying

# Transport arithmetic runs in extended precision so that the forward and
# inverse maps compose to the identity on float64 inputs.
PROFILE_DTYPE = np.longdouble
DEFAULT_MARGIN = 0.1
KAPPA0_NOTE = "kappa_0 chosen by convention (the inverse map leaves it free)"


class CorrespondenceError(ValueError):
    pass


@dataclass(frozen=True)
class CurvatureProfile:
    """Curvature functions on a uniform arc-length grid.

    ``functions[i]`` is ``kappa_i``; the last row is the signed torsion.
    ``side`` is ``"rectifying"`` (curve in E^n, ``n - 1`` functions) or
    ``"spherical"``.  ``b`` is the tangential translation constant.
    """

    s: np.ndarray
    functions: np.ndarray
    side: str
    b: float = 0.0
    notes: tuple = field(default_factory=tuple)

    @property
    def dimension(self):
        return self.functions.shape[0] + 1

    @property
    def values(self):
        """Functions as float64."""
        return np.asarray(self.functions, dtype=float)

    def to_dict(self):
        return {"side": self.side, "dimension": self.dimension, "b": float(self.b),
                "samples": int(self.s.size), "notes": list(self.notes)}


def make_profile(s, functions, side, b=0.0, notes=()):
    if side not in ("rectifying", "spherical"):
        raise CorrespondenceError(f"unknown profile side {side!r}")
    s = np.asarray(s, dtype=float)
    F = np.atleast_2d(np.asarray(functions)).astype(PROFILE_DTYPE)
    if F.shape[1] != s.size:
        raise CorrespondenceError("profile functions and grid differ in length")
    if not numerics.is_uniform(s):
        raise CorrespondenceError("profile grid must be uniform")
    return CurvatureProfile(s, F, side, float(b), tuple(notes))


def measure_profile(curve, side="rectifying", b=None, vertex=None):
    """Curvature profile of a unit-speed curve from its Frenet apparatus.

    For the rectifying side ``b`` is taken from ``check_rectifying`` when a
    ``vertex`` is supplied.
    """
    app = frenet_apparatus(curve)
    if b is None:
        b = check_rectifying(curve, vertex).b if vertex is not None else 0.0
    return make_profile(curve.s, app.curvatures, side, b)


def _shift(s, b):
    x = np.asarray(s, dtype=PROFILE_DTYPE) + PROFILE_DTYPE(b)
    if np.any(x <= 0):
        raise CorrespondenceError("tangential coordinate vanishes; split the domain")
    return x


def rectifying_to_spherical(profile):
    """``(kappa_0, kappa_1, ..., tau) -> (kappa_1 / ((s + b) kappa_0), kappa_2, ..., tau)``."""
    if profile.side != "rectifying":
        raise CorrespondenceError("expected a rectifying-side profile")
    F = profile.functions
    if F.shape[0] < 2:
        raise CorrespondenceError("rectifying profiles need at least two functions")
    x = _shift(profile.s, profile.b)
    if np.any(F[0] <= 0):
        raise CorrespondenceError("kappa_0 must be positive")
    if F.shape[0] > 2 and np.any(F[1] <= 0):
        raise CorrespondenceError("kappa_1 must be positive")
    out = np.empty((F.shape[0] - 1, F.shape[1]), dtype=PROFILE_DTYPE)
    out[0] = F[1] / (x * F[0])
    out[1:] = F[2:]
    notes = () if F.shape[0] > 2 else ("plane spherical side: torsion slot dropped",)
    return CurvatureProfile(profile.s, out, "spherical", profile.b, notes)


def default_b(s, margin=DEFAULT_MARGIN):
    """Smallest nonnegative shift with ``s + b >= margin`` on the grid."""
    return max(0.0, margin - float(np.min(s)))


def spherical_to_rectifying(profile, kappa0=None, b=None):
    """Inverse transport: ``kappa_0`` free, ``kappa_1 = k_0 (s + b) kappa_0``.

    Parameters
    ----------
    kappa0 : callable, array_like or float, optional
        Strictly positive choice of the first curvature; default 1.
    b : float, optional
        Default: the smallest nonnegative shift with ``s + b >= 0.1``.
    """
    if profile.side != "spherical":
        raise CorrespondenceError("expected a spherical-side profile")
    s = profile.s
    b = default_b(s) if b is None else float(b)
    x = _shift(s, b)
    notes = list(profile.notes)
    if kappa0 is None:
        k0 = np.ones(s.size, dtype=PROFILE_DTYPE)
        notes.append(KAPPA0_NOTE)
    elif callable(kappa0):
        k0 = np.asarray(kappa0(s), dtype=PROFILE_DTYPE)
    else:
        k0 = np.broadcast_to(np.asarray(kappa0, dtype=PROFILE_DTYPE), s.shape).copy()
    if np.any(k0 <= 0):
        raise CorrespondenceError("kappa0 choice must be strictly positive")
    F = profile.functions
    out = np.empty((F.shape[0] + 1, F.shape[1]), dtype=PROFILE_DTYPE)
    out[0] = k0
    out[1] = F[0] * x * k0
    out[2:] = F[1:]
    return CurvatureProfile(s, out, "rectifying", b, tuple(notes))


def _frenet_jets(curv, h, order):
    """Frame-basis coefficients of ``alpha^(k)``, ``k = 1..order``.

    Uses ``c^(k+1)_j = (c^(k)_j)' + sum_i c^(k)_i k_ij`` with derivatives of
    the coefficients by finite differences.
    """
    m, N = curv.shape
    n = m + 1
    K = frenet_matrix(curv)
    c = np.zeros((N, n))
    c[:, 0] = 1.0
    out = [c]
    for _ in range(order - 1):
        c = numerics.fd_derivative(c, h, 1) + np.einsum("ni,nij->nj", c, K)
        out.append(c)
    return out


def curve_from_curvatures(profile, initial_frame=None, start_point=None):
    """Integrate the Frenet system with RK4 and return the unit-speed curve.

    Jets up to order ``n`` are rebuilt from the curvatures in the integrated
    frame (source ``"frenet-synthesis"``); only derivatives of the
    curvature functions themselves are taken by finite differences.
    """
    curv = profile.values
    s = profile.s
    n = curv.shape[0] + 1
    F0 = np.eye(n) if initial_frame is None else np.asarray(initial_frame, dtype=float)
    if F0.shape != (n, n) or np.max(np.abs(F0 @ F0.T - np.eye(n))) > 1e-10:
        raise CurveError("initial frame must be an orthonormal n x n matrix")
    x0 = np.zeros(n) if start_point is None else np.asarray(start_point, dtype=float)
    h = numerics.grid_step(s)
    K = frenet_matrix(curv)
    Kmid = frenet_matrix(numerics.midpoints(curv.T).T)
    points, frames = kernels.rk4_frenet(K, Kmid, F0, x0, h, RENORM_EVERY)
    coeffs = _frenet_jets(curv, h, n)
    jets = np.stack([np.einsum("nj,njk->nk", c, frames) for c in coeffs])
    return SampledCurve(s, points, jets, "frenet-synthesis", None, s, True,
                        ("synthesized from curvatures",))


def rectifying_equation_residual_3d(curve, p, b=None):
    """``g = tau / ((s + b) kappa)``; returns ``(a_hat, max |g - mean g|)``.

    ``a_hat = 1 / |mean g|``; the sign of ``mean g`` only reflects orientation.
    """
    if curve.dimension != 3:
        raise CorrespondenceError("the 3d rectifying equation needs a curve in E^3")
    app = frenet_apparatus(curve)
    kappa, tau = app.curvatures
    if np.min(np.abs(kappa)) <= 1e-12:
        raise CorrespondenceError("curvature vanishes")
    b = check_rectifying(curve, p).b if b is None else b
    x = curve.s + b
    if np.min(x) * np.max(x) <= 0:
        raise CorrespondenceError("tangential coordinate vanishes; split the domain")
    g = tau / (x * kappa)
    mean = float(np.mean(g))
    return 1.0 / abs(mean), float(np.max(np.abs(g - mean)))


def rectifying_equation_residual_4d(curve, p, b=None):
    """``r = h tau + (h' / tau)'`` with ``h = (s + b) kappa_0 / kappa_1``.

    Returns ``(r, max |r|)``.
    """
    if curve.dimension != 4:
        raise CorrespondenceError("the 4d rectifying equation needs a curve in E^4")
    app = frenet_apparatus(curve)
    k0, k1, tau = app.curvatures
    if np.min(np.abs(tau)) <= 1e-12:
        raise CorrespondenceError("torsion vanishes")
    if np.min(np.abs(k1)) <= 1e-12:
        raise CorrespondenceError("second curvature vanishes")
    b = check_rectifying(curve, p).b if b is None else b
    hstep = curve.h
    hfun = (curve.s + b) * k0 / k1
    r = hfun * tau + numerics.fd_derivative(numerics.fd_derivative(hfun, hstep) / tau, hstep)
    return r, float(np.max(np.abs(r)))


def spherical_equation_residual_3d(curve):
    """``r = tau / kappa + ((1 / tau) (1 / kappa)')'``; returns ``(r, max |r|)``."""
    if curve.dimension != 3:
        raise CorrespondenceError("the spherical equation needs a curve in E^3")
    app = frenet_apparatus(curve)
    kappa, tau = app.curvatures
    if np.min(np.abs(kappa)) <= 1e-12:
        raise CorrespondenceError("curvature vanishes")
    if np.min(np.abs(tau)) <= 1e-12:
        raise CorrespondenceError("torsion vanishes")
    h = curve.h
    rho = 1.0 / kappa
    r = tau / kappa + numerics.fd_derivative(numerics.fd_derivative(rho, h) / tau, h)
    return r, float(np.max(np.abs(r)))


def write_profile_csv(path, profile):
    """Header ``s,kappa0,...,kappa{n-2}``."""
    F = profile.values
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(["s"] + [f"kappa{i}" for i in range(F.shape[0])]) + "\n")
        for i, si in enumerate(profile.s):
            fh.write(",".join(repr(float(v)) for v in (si, *F[:, i])) + "\n")


def read_profile_csv(path, side="rectifying", b=0.0):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    m = len(header) - 1
    if header != ["s"] + [f"kappa{i}" for i in range(m)] or m < 1:
        raise CorrespondenceError(f"{path}: header must be s,kappa0,...")
    data = np.array([[float(v) for v in r] for r in rows[1:] if r])
    return make_profile(data[:, 0], data[:, 1:].T, side, b)
