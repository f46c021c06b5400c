"""Detectors and constructors for rectifying and j-rectifying curves."""
import math
from dataclasses import dataclass, field

import numpy as np

from . import curves
from .curves import CurveError
from .frames import FrameError, coordinate_functions, frenet_apparatus

TOL_ANALYTIC = 1e-6
TOL_FINITE_DIFFERENCE = 1e-4
VALIDATION_TOL = 1e-8
RANK_RATIO = 1e-10


def default_tolerance(curve, analytic=TOL_ANALYTIC, finite_difference=TOL_FINITE_DIFFERENCE):
    return analytic if curve.analytic else finite_difference


def constancy_deviation(values, floor=1e-8):
    """Max deviation from the mean, relative when the mean exceeds ``floor``."""
    v = np.asarray(values, dtype=float)
    mean = float(np.mean(v))
    dev = float(np.max(np.abs(v - mean)))
    return (dev / abs(mean) if abs(mean) > floor else dev), mean


@dataclass(frozen=True)
class RectifyingReport:
    vertex: np.ndarray
    b: float
    c: float
    a: float
    cond1_residual: float
    cond2_residual: float
    cond4_residual: float
    tangent_residual: float
    normal_length: float
    tolerance: float
    verdict: bool
    flags: tuple = field(default_factory=tuple)

    @property
    def a_squared_gap(self):
        """``|a^2 - (c - b^2)|``; nonzero only when ``c < b^2`` was clipped."""
        return abs(self.a**2 - (self.c - self.b**2))

    def to_dict(self):
        return {
            "vertex": [float(x) for x in self.vertex],
            "b": self.b, "c": self.c, "a": self.a,
            "residuals": {
                "cond1": self.cond1_residual,
                "cond2": self.cond2_residual,
                "cond4": self.cond4_residual,
                "tangent": self.tangent_residual,
            },
            "normal_length": self.normal_length,
            "tolerance": self.tolerance,
            "verdict": bool(self.verdict),
            "flags": list(self.flags),
        }


def check_rectifying(curve, p, tol=None):
    """Test the rectifying characterizations against vertex ``p``.

    ``b`` is fitted from ``<alpha - p, T> - s`` and ``c`` from
    ``rho^2 - s^2 - 2 b s`` by least squares; no reparameterization shift is
    applied.  The verdict requires the orthogonality (cond1), quadratic
    distance (cond2) and constant normal length (cond4) residuals below
    ``tol``.
    """
    if not curve.unit_speed:
        raise CurveError("check_rectifying needs a unit-speed curve")
    tol = default_tolerance(curve) if tol is None else float(tol)
    p = np.asarray(p, dtype=float)
    s = curve.s
    X = curve.points - p
    T = curve.jet(1)
    acc = curve.jet(2)
    A0 = np.einsum("ij,ij->i", X, T)
    rho2 = np.einsum("ij,ij->i", X, X)
    b = float(np.mean(A0 - s))
    c = float(np.mean(rho2 - s * s - 2.0 * b * s))
    a = math.sqrt(max(c - b * b, 0.0))
    flags = []
    knorm = float(np.max(np.linalg.norm(acc, axis=1)))
    orth = np.abs(np.einsum("ij,ij->i", X, acc))
    if knorm < 1e-12:
        cond1 = float(np.max(orth))
        flags.append("straight-line")
    else:
        cond1 = float(np.max(orth)) / knorm
    cond2 = float(np.max(np.abs(rho2 - (s * s + 2.0 * b * s + c))))
    tangent = float(np.max(np.abs(A0 - s - b)))
    normal = np.sqrt(np.maximum(rho2 - A0 * A0, 0.0))
    cond4, nmean = constancy_deviation(normal)
    if a * a <= 1e-12:
        flags.append("degenerate: a^2 = 0")
    verdict = cond1 < tol and cond2 < tol and cond4 < tol
    return RectifyingReport(p, b, c, a, cond1, cond2, cond4, tangent, nmean, tol, verdict,
                            tuple(flags))


def validate_spherical_profile(beta, domain, center=None, count=401):
    """Max deviations ``(| |beta - c| - 1 |, | |beta'| - 1 |)`` on ``domain``."""
    c = np.zeros(beta.dimension) if center is None else np.asarray(center, dtype=float)
    t = np.linspace(domain[0], domain[1], count)
    d = beta.derivatives(t, 1)
    radial = float(np.max(np.abs(np.linalg.norm(d[0] - c, axis=1) - 1.0)))
    speed = float(np.max(np.abs(np.linalg.norm(d[1], axis=1) - 1.0)))
    return radial, speed


def construct_rectifying(beta, a, t0=0.0, vertex=None, domain=None):
    """``alpha(t) = p + a sec(t - t0) (beta(t) - p)``.

    Parameters
    ----------
    beta : CurveSpec
        Unit-speed curve on the unit sphere about ``vertex``.
    a : float
        Positive scale; the distance from the vertex at ``t = t0``.
    domain : (float, float), optional
        Interval on which the profile is validated; defaults to the secant
        window clipped to ``t0 +- 1`` and to the profile's own domain.
    """
    if a <= 0:
        raise CurveError("construct_rectifying needs a > 0")
    n = beta.dimension
    p = np.zeros(n) if vertex is None else np.asarray(vertex, dtype=float)
    centered = beta.moved(None, -p)
    spec = curves.sec_cone_curve(a, t0, centered, p)
    if domain is None:
        lo, hi = spec.domain
        domain = (max(lo, t0 - 1.0), min(hi, t0 + 1.0))
    spec.check_domain(*domain)
    radial, speed = validate_spherical_profile(centered, domain)
    if radial > VALIDATION_TOL or speed > VALIDATION_TOL:
        raise CurveError(
            f"profile must be unit speed on the unit sphere about the vertex "
            f"(radial error {radial:.2e}, speed error {speed:.2e})")
    spec.params["profile"] = beta.name
    spec.validated_domain = tuple(domain)
    return spec


@dataclass(frozen=True)
class JRectifyingReport:
    j: int
    Aj_residual: float
    normal_tail_residual: float
    normal_tail_length: float
    tolerance: float
    verdict: bool
    flags: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {"j": self.j, "Aj_residual": self.Aj_residual,
                "normal_tail_residual": self.normal_tail_residual,
                "normal_tail_length": self.normal_tail_length,
                "tolerance": self.tolerance, "verdict": bool(self.verdict),
                "flags": list(self.flags)}


def check_j_rectifying(curve, p, j, tol=None, apparatus=None):
    """Test ``<alpha - p, N_j> = 0`` and constancy of the normal tail length.

    The tail is the projection of ``alpha - p`` onto ``span{N_{j+1}, ...}``.
    Requires a full Frenet frame (rank at least ``n - 1`` everywhere).
    """
    n = curve.dimension
    if not 0 <= j <= n - 1:
        raise ValueError(f"j must lie in 0..{n - 1}")
    app = frenet_apparatus(curve) if apparatus is None else apparatus
    if not app.frame_complete:
        raise FrameError("Frenet frame rank-deficient")
    tol = default_tolerance(curve) if tol is None else float(tol)
    coords = coordinate_functions(curve, app, p)
    Aj = float(np.max(np.abs(coords.A[j])))
    tail = np.sqrt((coords.A[j + 1:] ** 2).sum(axis=0))
    dev, mean = constancy_deviation(tail)
    flags = []
    if j == n - 1:
        flags.append("empty normal tail")
    if not app.twisted:
        flags.append("not twisted")
    return JRectifyingReport(j, Aj, dev, mean, tol, Aj < tol and dev < tol, tuple(flags))


@dataclass(frozen=True)
class VertexFit:
    vertex: np.ndarray
    residual: float
    rank_deficient: bool
    singular_values: np.ndarray

    def __iter__(self):
        return iter((self.vertex, self.residual, self.rank_deficient))


def find_vertex(curve):
    """Least-squares vertex from ``<alpha_i - p, alpha''_i> = 0``.

    Returns the minimum-norm solution with a rank-deficiency flag when the
    curvature vectors do not span the ambient space (plane curves in E^3).
    """
    acc = curve.jet(2)
    if np.max(np.linalg.norm(acc, axis=1)) < 1e-12:
        raise CurveError("vertex undetermined: the curvature vector vanishes identically")
    rhs = np.einsum("ij,ij->i", curve.points, acc)
    p, _, rank, sv = np.linalg.lstsq(acc, rhs, rcond=RANK_RATIO)
    deficient = bool(sv[-1] <= RANK_RATIO * sv[0])
    residual = check_rectifying(curve, p).cond1_residual
    return VertexFit(p, residual, deficient, sv)


def rectifying_sample(spec, count=1001, jet_order=None, domain=None, source="analytic"):
    """Sample a constructed rectifying spec and reparameterize by arc length
    with ``s = 0`` at the secant minimum (so the fitted ``b`` is 0)."""
    n = spec.dimension
    jet_order = n if jet_order is None else jet_order
    if domain is None:
        domain = getattr(spec, "validated_domain", None) or spec.domain
    t0 = spec.params.get("t0", domain[0])
    origin = t0 if domain[0] <= t0 <= domain[1] else None
    base = curves.sample_jets(spec, domain, count, jet_order, source)
    return curves.reparameterize_arclength(base, origin=origin)
