"""Frenet apparatus, rotation-minimizing frames, coordinate functions and the
RM-normal (hyperplane / sphere) classifier."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels, numerics
from .curves import SampledCurve
from .linalg import fit_constant_direction

RANK_TOL = 1e-10
RENORM_EVERY = 16
TOL_CLASSIFY = 1e-6
# Jet sources whose higher derivatives are exact enough for norm-ratio
# curvatures; synthesized jets carry the products of curvatures exactly.
RATIO_SOURCES = ("analytic", "frenet-synthesis")


class FrameError(ValueError):
    """Frame construction failed or a precondition does not hold."""


def frenet_tolerance(curve):
    return 1e-6 if curve.analytic else 1e-4


@dataclass(frozen=True)
class FrenetApparatus:
    """Per-sample Frenet frame and curvature functions.

    ``frames[i]`` has rows ``N_0 = T, N_1, ..., N_{n-1} = B``.
    ``curvatures[i]`` is ``kappa_i(s)`` for ``i = 0..n-2``; the last one is the
    signed torsion (the frame is completed with determinant +1).
    ``rank`` is the per-sample rank of ``{alpha', ..., alpha^(n)}``;
    ``twisted`` means rank ``n`` everywhere and ``frame_complete`` means rank
    at least ``n - 1`` everywhere, so a full oriented frame exists.
    """

    s: np.ndarray
    frames: np.ndarray
    curvatures: np.ndarray
    rank: np.ndarray
    twisted: bool
    frame_complete: bool
    first_deficient: Optional[int]
    deficient_index: Optional[int]
    jet_source: str

    @property
    def dimension(self):
        return self.frames.shape[1]

    @property
    def tangent(self):
        return self.frames[:, 0]

    @property
    def torsion(self):
        return self.curvatures[-1]

    @property
    def coefficients(self):
        """Skew coefficient matrices ``k_ij`` with ``N_i' = sum_j k_ij N_j``."""
        return frenet_matrix(self.curvatures)

    def to_dict(self):
        return {
            "dimension": int(self.dimension),
            "twisted": bool(self.twisted),
            "frame_complete": bool(self.frame_complete),
            "first_deficient_sample": self.first_deficient,
            "first_deficient_derivative": self.deficient_index,
            "jet_source": self.jet_source,
            "curvature_mean": [float(np.mean(k)) for k in self.curvatures],
            "curvature_min": [float(np.min(k)) for k in self.curvatures],
            "curvature_max": [float(np.max(k)) for k in self.curvatures],
        }


def frenet_matrix(curvatures):
    """Stack ``(N, n, n)`` of Frenet coefficient matrices from ``(n-1, N)`` curvatures."""
    kap = np.atleast_2d(curvatures)
    m, N = kap.shape
    K = np.zeros((N, m + 1, m + 1))
    idx = np.arange(m)
    K[:, idx, idx + 1] = kap.T
    K[:, idx + 1, idx] = -kap.T
    return K


def _oriented_completion(Q):
    """Unit vectors completing each ``(n-1, n)`` orthonormal set with det +1."""
    N, r, n = Q.shape
    _, _, vt = np.linalg.svd(Q)
    last = vt[:, -1, :]
    full = np.concatenate([Q, last[:, None, :]], axis=1)
    sign = np.sign(np.linalg.det(full))
    sign[sign == 0] = 1.0
    return last * sign[:, None]


def _tangent_normal_2d(T):
    return np.stack([-T[:, 1], T[:, 0]], axis=1)


def frenet_apparatus(curve, rank_tol=RANK_TOL):
    """Frenet frame and curvatures of a unit-speed curve.

    Analytic jets give curvatures as ratios of successive Gram-Schmidt norms;
    finite-difference sources differentiate the frame numerically and read
    ``kappa_i = <N_i', N_{i+1}>``.  The frame's last vector always comes from
    the oriented completion of the first ``n - 1``, so torsion is signed.
    """
    if not isinstance(curve, SampledCurve):
        raise FrameError("frenet_apparatus needs a SampledCurve")
    if not curve.unit_speed:
        raise FrameError("frenet_apparatus needs a unit-speed curve; reparameterize first")
    n = curve.dimension
    if curve.jet_order < n:
        raise FrameError(f"Frenet apparatus in E^{n} needs jets up to order {n}")
    D = np.stack([curve.jet(k) for k in range(1, n + 1)], axis=1)
    Q, norms, accepted = kernels.gram_schmidt_batch(D, rank_tol)
    acc = accepted.astype(bool)
    rank = acc.sum(axis=1)
    leading = np.cumprod(acc, axis=1).sum(axis=1)
    complete = leading >= n - 1
    frames = np.zeros_like(Q)
    frames[:, : n - 1] = Q[:, : n - 1]
    if np.any(complete):
        if n == 2:
            frames[complete, 1] = _tangent_normal_2d(Q[complete, 0])
        else:
            frames[complete, n - 1] = _oriented_completion(Q[complete, : n - 1])
    twisted_mask = rank == n
    N = curve.count
    kap = np.zeros((n - 1, N))
    if curve.jet_source in RATIO_SOURCES:
        with np.errstate(divide="ignore", invalid="ignore"):
            for i in range(n - 2):
                kap[i] = np.where(acc[:, i + 1], norms[:, i + 1] / norms[:, i], 0.0)
            if n == 2:
                orient = np.sign(np.einsum("ij,ij->i", curve.jet(2), frames[:, 1]))
            else:
                orient = np.sign(np.einsum("ij,ij->i", D[:, n - 1], frames[:, n - 1]))
            kap[n - 2] = orient * norms[:, n - 1] / norms[:, n - 2]
        kap[n - 2] = np.where(complete, kap[n - 2], 0.0)
    else:
        dF = numerics.fd_derivative(frames, curve.h, 1)
        for i in range(n - 1):
            kap[i] = np.einsum("ij,ij->i", dF[:, i], frames[:, i + 1])
    bad = np.flatnonzero(~twisted_mask)
    first = int(bad[0]) if bad.size else None
    dindex = None
    if first is not None:
        dindex = int(np.flatnonzero(~acc[first])[0]) + 1
    return FrenetApparatus(
        s=curve.s, frames=frames, curvatures=kap, rank=rank,
        twisted=bool(twisted_mask.all()), frame_complete=bool(complete.all()),
        first_deficient=first, deficient_index=dindex, jet_source=curve.jet_source)


def frenet_residual(app, h=None):
    """Max discrete Frenet-equation residual ``|N_i' - sum_j k_ij N_j|``."""
    h = numerics.grid_step(app.s) if h is None else h
    dF = numerics.fd_derivative(app.frames, h, 1)
    model = np.einsum("nij,njk->nik", app.coefficients, app.frames)
    return float(np.max(np.linalg.norm(dF - model, axis=2)))


def orthonormality_error(frames):
    G = np.einsum("nik,njk->nij", frames, frames)
    return float(np.max(np.abs(G - np.eye(frames.shape[1]))))


def twisted_window(app, fraction=0.1):
    """Index range ``(start, stop)`` of the longest run where every curvature
    magnitude exceeds ``fraction`` of its maximum."""
    ok = np.ones(app.s.size, dtype=bool)
    for k in app.curvatures:
        a = np.abs(k)
        ok &= a > fraction * a.max()
    best, start, bl = (0, 0), None, 0
    for i, flag in enumerate(np.append(ok, False)):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            if i - start > bl:
                best, bl = (start, i), i - start
            start = None
    return best


@dataclass(frozen=True)
class MovingFrame:
    """Orthonormal frame along a curve with ``V_0 = T``.

    ``coefficients[i]`` is the skew matrix ``k_ij`` with ``V_i' = sum_j k_ij V_j``.
    """

    s: np.ndarray
    frames: np.ndarray
    coefficients: np.ndarray
    tag: str


def frenet_moving_frame(app):
    return MovingFrame(app.s, app.frames, app.coefficients, "frenet")


def _complete_normals(T0, normals):
    n = T0.size
    basis = [T0] + [np.asarray(v, dtype=float) for v in normals]
    Q, _, acc = kernels.gram_schmidt_batch(
        np.concatenate([np.array(basis), np.eye(n)])[None], 1e-8)
    rows = Q[0][acc[0].astype(bool)]
    return rows[1:n]


def rm_frame(curve, initial_normals=None):
    """Rotation-minimizing frame by RK4 transport ``V' = -<V, T'> T``.

    Parameters
    ----------
    curve : SampledCurve
        Unit-speed curve with jets to order 2.
    initial_normals : array_like, shape (k, n), optional
        Orthonormal vectors orthogonal to ``T(s_0)``; completed to a full
        normal basis when fewer than ``n - 1`` are given.

    Returns
    -------
    MovingFrame
        Rows ``T, V_1, ..., V_{n-1}``; the given normals come first.
    """
    if not curve.unit_speed:
        raise FrameError("rm_frame needs a unit-speed curve")
    n = curve.dimension
    T = curve.jet(1)
    dT = curve.jet(2)
    T0 = T[0]
    if initial_normals is None:
        initial_normals = np.zeros((0, n))
    V0 = np.atleast_2d(np.asarray(initial_normals, dtype=float)).reshape(-1, n)
    if V0.shape[0] > n - 1:
        raise FrameError("too many initial normals")
    if V0.shape[0]:
        if np.max(np.abs(V0 @ T0)) > 1e-8:
            raise FrameError("initial normals must be orthogonal to T(s_0) within 1e-8")
        if np.max(np.abs(V0 @ V0.T - np.eye(V0.shape[0]))) > 1e-8:
            raise FrameError("initial normals must be orthonormal")
    V0 = _complete_normals(T0, V0) if V0.shape[0] < n - 1 else V0
    h = curve.h
    V = kernels.rk4_transport(T, dT, numerics.midpoints(T), numerics.midpoints(dT), V0, h,
                              RENORM_EVERY)
    frames = np.concatenate([T[:, None, :], V], axis=1)
    N = curve.count
    K = np.zeros((N, n, n))
    # k_0j = <T', V_j>, k_ij = 0 among normals by construction.
    K[:, 0, 1:] = np.einsum("nk,njk->nj", dT, V)
    K[:, 1:, 0] = -K[:, 0, 1:]
    return MovingFrame(curve.s, frames, K, "rotation-minimizing")


def rm_residual(frame, interior=2):
    """RM defect measured by finite differences.

    Returns ``(normal_part, cross)``: the largest norm of the part of ``V_i'``
    orthogonal to ``T``, and the largest ``|<V_i', V_j>|`` for ``i, j >= 1``.
    """
    dF = numerics.fd_derivative(frame.frames, numerics.grid_step(frame.s), 1)
    T = frame.frames[:, 0]
    dV = dF[:, 1:]
    along = np.einsum("nik,nk->ni", dV, T)
    normal = dV - along[..., None] * T[:, None, :]
    cross = np.einsum("nik,njk->nij", dV, frame.frames[:, 1:])
    sl = slice(interior, frame.s.size - interior)
    return float(np.max(np.linalg.norm(normal[sl], axis=2))), float(np.max(np.abs(cross[sl])))


def tangent_component(frame, index):
    """``<V_index', T>`` by finite differences (diagnostic)."""
    dV = numerics.fd_derivative(frame.frames[:, index], numerics.grid_step(frame.s), 1)
    return np.einsum("nk,nk->n", dV, frame.frames[:, 0])


@dataclass(frozen=True)
class CoordinateFunctions:
    """``A[i](s) = <alpha(s) - p, V_i(s)>`` and ``rho = |alpha - p|``."""

    s: np.ndarray
    vertex: np.ndarray
    A: np.ndarray
    rho: np.ndarray
    frame_tag: str

    def sum_squares_error(self):
        return float(np.max(np.abs((self.A**2).sum(axis=0) - self.rho**2)))


def _frame_of(frame):
    if isinstance(frame, FrenetApparatus):
        return frame.frames, "frenet"
    if isinstance(frame, MovingFrame):
        return frame.frames, frame.tag
    raise FrameError("frame must be a FrenetApparatus or MovingFrame")


def coordinate_functions(curve, frame, p):
    frames, tag = _frame_of(frame)
    if frames.shape[0] != curve.count or not np.array_equal(np.asarray(frame.s), curve.s):
        raise FrameError("frame and curve are defined on different sample grids")
    p = np.asarray(p, dtype=float)
    X = curve.points - p
    A = np.einsum("nik,nk->in", frames, X)
    return CoordinateFunctions(curve.s, p, A, np.linalg.norm(X, axis=1), tag)


def integrate_coordinate_ode(coeffs, A_init, grid, vertex=None):
    """RK4 solution of ``A' = K(s) A + e_0`` on a uniform grid.

    ``coeffs`` is the ``(N, n, n)`` stack of ``k_ij``; the ``+1`` forcing
    enters only the ``A_0`` equation.
    """
    K = np.asarray(coeffs, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if K.shape[0] != grid.size:
        raise FrameError("coefficient stack and grid differ in length")
    if not numerics.is_uniform(grid):
        raise FrameError("grid must be uniform")
    n = K.shape[1]
    f = np.zeros(n)
    f[0] = 1.0
    Y = kernels.rk4_affine(K, numerics.midpoints(K), f, np.asarray(A_init, dtype=float),
                           numerics.grid_step(grid))
    v = np.zeros(n) if vertex is None else np.asarray(vertex, dtype=float)
    return CoordinateFunctions(grid, v, Y.T, np.linalg.norm(Y, axis=1), "ode")


def rho_squared_defect(coords):
    """Max ``|(rho^2)' - 2 A_0|`` with the derivative by finite differences."""
    d = numerics.fd_derivative(coords.rho**2, numerics.grid_step(coords.s), 1)
    return float(np.max(np.abs(d - 2.0 * coords.A[0])))


@dataclass(frozen=True)
class ClassificationResult:
    """Hyperplane / sphere / neither verdict for a curve."""

    verdict: str
    residual: float
    normal: Optional[np.ndarray] = None
    offset: Optional[float] = None
    center: Optional[np.ndarray] = None
    radius: Optional[float] = None
    hyperplane_residual: float = float("nan")
    sphere_residual: float = float("nan")
    tolerance: float = TOL_CLASSIFY

    def to_dict(self):
        out = {"verdict": self.verdict, "residual": float(self.residual),
               "tolerance": self.tolerance,
               "hyperplane_residual": float(self.hyperplane_residual),
               "sphere_residual": float(self.sphere_residual)}
        if self.verdict == "hyperplane":
            out["normal"] = [float(x) for x in self.normal]
            out["offset"] = float(self.offset)
        elif self.verdict == "sphere":
            out["center"] = [float(x) for x in self.center]
            out["radius"] = float(self.radius)
        return out


def fit_hyperplane(points):
    """Least-squares hyperplane ``<x, normal> = offset``; returns (normal, offset, residual)."""
    fit = fit_constant_direction(points)
    return fit.direction, fit.level, fit.residual


def fit_sphere(points):
    """Least-squares sphere through points via ``2<x, c> + r~ = |x|^2``."""
    P = np.asarray(points, dtype=float)
    M = np.concatenate([2.0 * P, np.ones((P.shape[0], 1))], axis=1)
    rhs = (P * P).sum(axis=1)
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    c = sol[:-1]
    r2 = sol[-1] + c @ c
    if r2 <= 0:
        return c, 0.0, float("inf")
    R = float(np.sqrt(r2))
    return c, R, float(np.max(np.abs(np.linalg.norm(P - c, axis=1) - R)))


def classify_rm_normal(curve, tol=TOL_CLASSIFY):
    """Classify a curve as lying in a hyperplane, on a sphere, or neither.

    Hyperplane wins when both fits are within ``tol``.
    """
    P = curve.points if isinstance(curve, SampledCurve) else np.asarray(curve, dtype=float)
    n = P.shape[1]
    if P.shape[0] < n + 2:
        raise FrameError(f"classification needs at least {n + 2} samples")
    nor, off, hres = fit_hyperplane(P)
    c, R, sres = fit_sphere(P)
    if hres < tol:
        return ClassificationResult("hyperplane", hres, normal=nor, offset=off, center=c,
                                    radius=R, hyperplane_residual=hres, sphere_residual=sres,
                                    tolerance=tol)
    if sres < tol:
        return ClassificationResult("sphere", sres, normal=nor, offset=off, center=c, radius=R,
                                    hyperplane_residual=hres, sphere_residual=sres,
                                    tolerance=tol)
    return ClassificationResult("neither", min(hres, sres), normal=nor, offset=off, center=c,
                                radius=R, hyperplane_residual=hres, sphere_residual=sres,
                                tolerance=tol)


def frenet_report(app, curve=None):
    out = app.to_dict()
    if curve is not None:
        out["frenet_residual"] = frenet_residual(app)
        out["frenet_tolerance"] = frenet_tolerance(curve)
    out["orthonormality_error"] = orthonormality_error(app.frames)
    return out

