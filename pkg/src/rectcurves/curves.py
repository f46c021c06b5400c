"""Curve representations: analytic families with exact jets, sampled tables,
arc-length reparameterization and random spherical curves.

Analytic curves are callables ``t -> jet`` returning normalized Taylor
coefficients (see :mod:`rectcurves.taylor`), so every derived curve
(embedding, rigid motion, secant cone curve, arc-length version) keeps
exact derivatives of any order.
"""
import csv
import inspect
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.interpolate import PchipInterpolator, make_interp_spline

from . import numerics
from . import taylor as tj

MAX_JET_ORDER = 6
SEC_GUARD = 1e-3
REGULARITY_TOL = 1e-10
ARCLENGTH_PANELS = 2048
SPHERICAL_PERTURBATION = 0.2
MIN_SPEED_RATIO = 0.05


class CurveError(ValueError):
    """Invalid curve specification or sampling request."""


class CurveInputError(CurveError):
    """Unreadable curve table or malformed builtin specification."""


class NonRegularCurveError(CurveError):
    """The velocity vanishes (numerically) somewhere on the sampled domain."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class CurveSpec:
    """A parametric curve in E^n.

    Parameters
    ----------
    name : str
        Family name, used in reports.
    dimension : int
    jet : callable or None
        ``jet(t, order)`` returning an array of shape ``(order + 1, len(t), n)``
        of normalized Taylor coefficients.  ``None`` for sampled tables.
    domain : (float, float) or None
        Closed admissible parameter interval; ``None`` means unbounded.
    params : dict
        Parameters as given, echoed into reports.
    """

    kind = "builtin"

    def __init__(self, name, dimension, jet, domain=None, params=None, domain_error=None,
                 unit_speed=False):
        if dimension < 2:
            raise CurveError("ambient dimension must be at least 2")
        self.name = name
        self.dimension = int(dimension)
        self._jet = jet
        self.domain = None if domain is None else (float(domain[0]), float(domain[1]))
        self.params = dict(params or {})
        self.domain_error = domain_error or f"domain outside the admissible interval of {name}"
        self.unit_speed = unit_speed

    @property
    def analytic(self):
        return self._jet is not None

    def __repr__(self):
        return f"CurveSpec({self.name!r}, n={self.dimension})"

    def taylor(self, t, order):
        """Normalized Taylor coefficients at ``t``, shape ``(order+1, N, n)``."""
        if order > MAX_JET_ORDER + 1:
            raise CurveError(f"jet order {order} exceeds the supported maximum")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self._jet(t, order)

    def derivatives(self, t, order):
        """Plain derivatives ``d^k alpha / dt^k`` for ``k = 0..order``."""
        return tj.to_derivatives(self.taylor(t, order))

    def evaluate(self, t):
        return self.taylor(t, 0)[0]

    def check_domain(self, lo, hi):
        if not lo < hi:
            raise CurveError("domain must satisfy start < end")
        if self.domain is not None:
            tol = 1e-12 * max(1.0, abs(lo), abs(hi))
            if lo < self.domain[0] - tol or hi > self.domain[1] + tol:
                raise CurveError(self.domain_error)

    def embedded(self, n):
        """The same curve in E^n, padding with zero coordinates."""
        if n < self.dimension:
            raise CurveError("cannot embed into a lower dimension")
        base = self
        extra = n - self.dimension

        def jet(t, order):
            c = base.taylor(t, order)
            return np.concatenate([c, np.zeros(c.shape[:2] + (extra,))], axis=2)

        return CurveSpec(self.name, n, jet, self.domain, self.params, self.domain_error,
                         self.unit_speed)

    def moved(self, rotation=None, translation=None):
        """Rigid motion ``x -> R x + v``."""
        n = self.dimension
        R = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
        v = np.zeros(n) if translation is None else np.asarray(translation, dtype=float)
        if R.shape != (n, n) or v.shape != (n,):
            raise CurveError("rigid motion does not match the curve dimension")
        base = self

        def jet(t, order):
            c = base.taylor(t, order) @ R.T
            c[0] += v
            return c

        return CurveSpec(self.name, n, jet, self.domain, self.params, self.domain_error,
                         self.unit_speed)


class SampledSpec(CurveSpec):
    """A curve given by a table of ``(t, point)`` rows.

    Positions between rows come from a quintic not-a-knot interpolating
    spline; jets are estimated by finite differences after resampling.
    """

    kind = "sampled"

    def __init__(self, t, points, name="sampled"):
        t = np.asarray(t, dtype=float)
        P = np.asarray(points, dtype=float)
        if P.ndim != 2 or P.shape[0] != t.shape[0]:
            raise CurveError("sample table must have one point per parameter value")
        if t.size < 7:
            raise CurveError("sampled curves need at least 7 rows")
        if not np.all(np.isfinite(P)) or not np.all(np.isfinite(t)):
            raise CurveError("sample table contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise CurveError("sample parameter must be strictly increasing")
        super().__init__(name, P.shape[1], None, (t[0], t[-1]), {"rows": int(t.size)})
        self.table_t = t
        self.table_points = P
        self.spline = make_interp_spline(t, P, k=5)

    def evaluate(self, t):
        return self.spline(np.atleast_1d(np.asarray(t, dtype=float)))

    def taylor(self, t, order):
        raise CurveError("sampled curves have no analytic jets")

    def embedded(self, n):
        P = np.concatenate([self.table_points, np.zeros((self.table_t.size, n - self.dimension))], 1)
        return SampledSpec(self.table_t, P, self.name)

    def moved(self, rotation=None, translation=None):
        n = self.dimension
        R = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
        v = np.zeros(n) if translation is None else np.asarray(translation, dtype=float)
        return SampledSpec(self.table_t, self.table_points @ R.T + v, self.name)


@dataclass(frozen=True)
class SampledCurve:
    """A curve sampled on a uniform parameter grid together with its jets.

    ``jets[k - 1]`` holds ``d^k alpha / ds^k`` at every sample.  ``s`` is arc
    length when ``unit_speed`` is true and the native parameter otherwise.
    ``param`` holds the parameter of ``spec`` at each sample.
    """

    s: np.ndarray
    points: np.ndarray
    jets: np.ndarray
    jet_source: str
    spec: Optional[CurveSpec] = None
    param: Optional[np.ndarray] = None
    unit_speed: bool = False
    notes: tuple = field(default_factory=tuple)

    @property
    def h(self):
        return numerics.grid_step(self.s)

    @property
    def dimension(self):
        return self.points.shape[1]

    @property
    def jet_order(self):
        return self.jets.shape[0]

    @property
    def count(self):
        return self.s.shape[0]

    @property
    def analytic(self):
        return self.jet_source == "analytic"

    def jet(self, k):
        """``d^k alpha / ds^k`` (``k = 0`` gives the points)."""
        if k == 0:
            return self.points
        if k > self.jet_order:
            raise CurveError(f"curve carries jets only up to order {self.jet_order}")
        return self.jets[k - 1]

    def translated(self, v):
        v = np.asarray(v, dtype=float)
        spec = None if self.spec is None else self.spec.moved(None, v)
        return SampledCurve(self.s, self.points + v, self.jets, self.jet_source, spec,
                            self.param, self.unit_speed, self.notes)

    def window(self, start, stop):
        """Sub-curve on sample indices ``start:stop``."""
        sl = slice(start, stop)
        return SampledCurve(self.s[sl], self.points[sl], self.jets[:, sl], self.jet_source,
                            self.spec, None if self.param is None else self.param[sl],
                            self.unit_speed, self.notes)


def _speed_deviation(jet1):
    return float(np.max(np.abs(np.linalg.norm(jet1, axis=1) - 1.0)))


def _fd_jets(points, h, order):
    return np.stack([numerics.fd_derivative(points, h, k) for k in range(1, order + 1)])


def sample_jets(spec, domain, count, jet_order, source="analytic"):
    """Sample ``spec`` on a uniform grid of ``count`` points with jets.

    Parameters
    ----------
    spec : CurveSpec
    domain : (float, float)
    count : int
        At least 7.
    jet_order : int
        Highest derivative order carried, at most 6.
    source : {"analytic", "finite-difference"}
        Analytic specs may be forced onto the finite-difference path, which is
        the path every sampled table takes.
    """
    if count < 7:
        raise CurveError("need at least 7 samples")
    if not 1 <= jet_order <= MAX_JET_ORDER:
        raise CurveError(f"jet_order must lie in 1..{MAX_JET_ORDER}")
    if source not in ("analytic", "finite-difference"):
        raise CurveError(f"unknown jet source {source!r}")
    lo, hi = float(domain[0]), float(domain[1])
    spec.check_domain(lo, hi)
    t = np.linspace(lo, hi, count)
    if spec.analytic and source == "analytic":
        d = spec.derivatives(t, jet_order)
        points, jets, src = d[0], d[1:], "analytic"
    else:
        points = spec.evaluate(t)
        jets, src = _fd_jets(points, t[1] - t[0], jet_order), "finite-difference"
    unit = _speed_deviation(jets[0]) < 1e-6
    return SampledCurve(t, points, jets, src, spec, t, unit)


def _first_irregular(speed, s, scale):
    bad = np.flatnonzero(speed <= REGULARITY_TOL * max(scale, 1.0))
    return None if bad.size == 0 else float(s[bad[0]])


class ArcLengthMap:
    """Arc-length function of an analytic curve and its inverse.

    The table is built by composite Simpson with midpoint evaluations; the
    inverse starts from a monotone interpolant and is polished by Newton steps
    on the exact partial-panel Simpson integral.
    """

    def __init__(self, spec, lo, hi, panels=ARCLENGTH_PANELS):
        self.spec = spec
        self.lo, self.hi = float(lo), float(hi)
        self.t = np.linspace(self.lo, self.hi, panels + 1)
        dt = self.t[1] - self.t[0]
        mids = 0.5 * (self.t[:-1] + self.t[1:])
        v = self._speed(self.t)
        vm = self._speed(mids)
        scale = float(np.max(v))
        loc = _first_irregular(np.concatenate([v, vm]), np.concatenate([self.t, mids]), scale)
        if loc is not None:
            raise NonRegularCurveError(f"velocity vanishes near parameter {loc:.6g}", loc)
        self.sigma = np.concatenate([[0.0], np.cumsum(dt / 6.0 * (v[:-1] + 4.0 * vm + v[1:]))])
        self.length = float(self.sigma[-1])
        self._guess = PchipInterpolator(self.sigma, self.t)
        self._v = v

    def _speed(self, t):
        c = self.spec.taylor(t, 1)
        return np.linalg.norm(c[1], axis=1)

    def arclength(self, t):
        """Arc length from ``lo`` to ``t`` (vectorized)."""
        t = np.asarray(t, dtype=float)
        j = np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, self.t.size - 2)
        tj_ = self.t[j]
        w = t - tj_
        part = w / 6.0 * (self._v[j] + 4.0 * self._speed(tj_ + 0.5 * w) + self._speed(t))
        return self.sigma[j] + part

    def parameter(self, sigma):
        """Parameter ``t`` at arc length ``sigma`` from ``lo``."""
        sigma = np.asarray(sigma, dtype=float)
        t = np.clip(self._guess(sigma), self.lo, self.hi)
        for _ in range(8):
            step = (self.arclength(t) - sigma) / self._speed(t)
            t = np.clip(t - step, self.lo, self.hi)
            if np.max(np.abs(step)) < 1e-15 * max(1.0, abs(self.hi)):
                break
        return t


def arclength_spec(spec, lo, hi, origin=None):
    """Unit-speed version of an analytic curve on ``[lo, hi]``.

    The returned spec is parameterized by arc length with ``s = 0`` at the
    parameter ``origin`` (default ``lo``).  Jets come from composing the base
    jets with the series reversion of the arc-length function.
    """
    if not spec.analytic:
        raise CurveError("arclength_spec needs an analytic curve")
    spec.check_domain(lo, hi)
    amap = ArcLengthMap(spec, lo, hi)
    origin = lo if origin is None else float(origin)
    if not lo <= origin <= hi:
        raise CurveError("arc-length origin must lie inside the domain")
    offset = float(amap.arclength(np.array([origin]))[0])

    def jet(s, order):
        t = amap.parameter(s + offset)
        if order == 0:
            return spec.taylor(t, 0)
        base = spec.taylor(t, order + 1)
        speed = tj.sqrt(tj.dot(tj.derivative(base), tj.derivative(base)))
        sigma = tj.integral(speed[:order], s)
        inverse = tj.reverse(sigma)
        inverse[0] = t
        return tj.compose(base[: order + 1], inverse)

    s_lo, s_hi = -offset, amap.length - offset
    params = dict(spec.params)
    params["reparameterized"] = "arc length"
    out = CurveSpec(spec.name, spec.dimension, jet, (s_lo, s_hi), params, spec.domain_error,
                    unit_speed=True)
    out.arclength_map = amap
    out.arclength_offset = offset
    return out


def reparameterize_arclength(curve, origin=None, count=None):
    """Resample ``curve`` uniformly in arc length with unit-speed jets.

    Analytic curves are transformed exactly by the chain rule; sampled curves
    get their jets re-estimated on the new grid.  ``origin`` is the native
    parameter value where ``s = 0`` (default: the start of the domain).
    """
    count = curve.count if count is None else int(count)
    speed = np.linalg.norm(curve.jet(1), axis=1)
    loc = _first_irregular(speed, curve.s, float(np.max(speed)))
    if loc is not None:
        raise NonRegularCurveError(
            f"curve is not regular: velocity vanishes near parameter {loc:.6g}", loc)
    lo, hi = float(curve.s[0]), float(curve.s[-1])
    if curve.analytic and curve.spec is not None and curve.spec.analytic:
        spec = arclength_spec(curve.spec, lo, hi, origin)
        s = np.linspace(spec.domain[0], spec.domain[1], count)
        d = spec.derivatives(s, curve.jet_order)
        t = spec.arclength_map.parameter(s + spec.arclength_offset)
        return SampledCurve(s, d[0], d[1:], "analytic", spec, t, True, curve.notes)
    # A smooth arc-length table: the exact antiderivative of a quintic spline
    # through the speed samples, inverted by Newton from a monotone guess.
    rate = make_interp_spline(curve.s, speed, k=5)
    table = rate.antiderivative()
    sigma = table(curve.s)
    origin = lo if origin is None else float(origin)
    offset = float(table(origin))
    s = np.linspace(0.0, sigma[-1], count)
    t = PchipInterpolator(sigma, curve.s)(s)
    for _ in range(4):
        t = np.clip(t - (table(t) - s) / rate(t), lo, hi)
    t[0], t[-1] = lo, hi
    if curve.spec is not None and curve.param is not None:
        # The CurveSpec has its own native parameter, which need not be curve.s.
        native = t if curve.param is curve.s else make_interp_spline(curve.s, curve.param, k=5)(t)
        points = curve.spec.evaluate(native)
    else:
        native = t
        points = make_interp_spline(curve.s, curve.points, k=5)(t)
    jets = _fd_jets(points, s[1] - s[0], curve.jet_order)
    return SampledCurve(s - offset, points, jets, "finite-difference", curve.spec, native,
                        _speed_deviation(jets[0]) < 1e-6, curve.notes)


def arc_length(curve):
    """Length of a sampled curve by Simpson's rule on the speed."""
    speed = np.linalg.norm(curve.jet(1), axis=1)
    return float(numerics.cumulative_integral(speed, curve.h)[-1])


def chord_deviation(points):
    """Max distance of ``points`` from the line through the first and last."""
    P = np.asarray(points, dtype=float)
    d = P[-1] - P[0]
    d = d / np.linalg.norm(d)
    X = P - P[0]
    return float(np.max(np.linalg.norm(X - np.outer(X @ d, d), axis=1)))


# ---------------------------------------------------------------- families

def _trig(t, order, freq):
    return tj.sincos(freq * tj.variable(t, order))


def _stack(coords):
    return np.stack(coords, axis=-1)


def helix(a=1.0, b=1.0, n=3):
    """``(a cos t, a sin t, b t)``."""
    a, b, n = float(a), float(b), int(n)
    if a <= 0:
        raise CurveError("helix needs a > 0")
    if n < 3:
        raise CurveError("helix needs n >= 3")

    def jet(t, order):
        s, c = _trig(t, order, 1.0)
        return _stack([a * c, a * s, b * tj.variable(t, order)])

    return CurveSpec("helix", 3, jet, None, {"a": a, "b": b, "n": n}).embedded(n)


def plane_circle(r=1.0, n=2):
    """Circle of radius ``r`` about the origin in the first coordinate plane."""
    r, n = float(r), int(n)
    if r <= 0:
        raise CurveError("plane_circle needs r > 0")

    def jet(t, order):
        s, c = _trig(t, order, 1.0 / r)
        return _stack([r * c, r * s])

    return CurveSpec("plane_circle", 2, jet, None, {"r": r, "n": n},
                     unit_speed=True).embedded(n)


def small_circle_sphere(phi=math.pi / 4, n=3, center=None):
    """Unit-speed latitude circle on the unit sphere, ``<beta - center, e_3> = cos phi``.

    ``phi = pi/2`` gives a great circle.
    """
    phi, n = float(phi), int(n)
    if not 0 < phi <= math.pi / 2:
        raise CurveError("small_circle_sphere needs 0 < phi <= pi/2")
    if n < 3:
        raise CurveError("small_circle_sphere needs n >= 3")
    sp, cp = math.sin(phi), math.cos(phi)

    def jet(t, order):
        s, c = _trig(t, order, 1.0 / sp)
        return _stack([sp * c, sp * s, tj.constant(np.full(t.shape, cp), order)])

    spec = CurveSpec("small_circle_sphere", 3, jet, None, {"phi": phi, "n": n},
                     unit_speed=True).embedded(n)
    if center is not None:
        spec = spec.moved(None, _vector(center, n, "center"))
        spec.params["center"] = [float(x) for x in _vector(center, n, "center")]
    return spec


def great_circle(n=3):
    return small_circle_sphere(math.pi / 2, n)


def straight_line(point=None, direction=None, n=3):
    """``point + t * direction``."""
    n = int(n)
    p = np.zeros(n) if point is None else _vector(point, n, "point")
    d = np.eye(n)[0] if direction is None else _vector(direction, n, "direction")
    if np.linalg.norm(d) == 0:
        raise CurveError("straight_line needs a nonzero direction")
    n = p.size

    def jet(t, order):
        c = np.zeros((order + 1, t.size, n))
        c[0] = p + np.outer(t, d)
        if order >= 1:
            c[1] = d
        return c

    return CurveSpec("straight_line", n, jet, None,
                     {"point": p.tolist(), "direction": d.tolist(), "n": n},
                     unit_speed=bool(abs(np.linalg.norm(d) - 1) < 1e-15))


def clifford_helix(a=1.0, b=1.0, w=2.0):
    """``(a cos t, a sin t, b cos wt, b sin wt)`` in E^4; constant curvatures."""
    a, b, w = float(a), float(b), float(w)
    if a <= 0 or b <= 0 or w <= 0 or w == 1:
        raise CurveError("clifford_helix needs a, b, w > 0 and w != 1")

    def jet(t, order):
        s1, c1 = _trig(t, order, 1.0)
        s2, c2 = _trig(t, order, w)
        return _stack([a * c1, a * s1, b * c2, b * s2])

    return CurveSpec("clifford_helix", 4, jet, None, {"a": a, "b": b, "w": w})


def torus_knot_sphere(theta=math.pi / 4, ratio=2.0):
    """Unit-speed curve on the Clifford torus of the unit sphere ``S^3``.

    ``(cos theta cos(w t), cos theta sin(w t), sin theta cos(q w t),
    sin theta sin(q w t))`` with ``q = ratio`` and ``w`` fixed by unit speed.
    Its curvatures are constant and nonzero for ``ratio != 1``.
    """
    theta, q = float(theta), float(ratio)
    if not 0 < theta < math.pi / 2:
        raise CurveError("torus_knot_sphere needs 0 < theta < pi/2")
    if q <= 0 or q == 1:
        raise CurveError("torus_knot_sphere needs ratio > 0 and ratio != 1")
    ct, st = math.cos(theta), math.sin(theta)
    w = 1.0 / math.hypot(ct, q * st)

    def jet(t, order):
        s1, c1 = _trig(t, order, w)
        s2, c2 = _trig(t, order, q * w)
        return _stack([ct * c1, ct * s1, st * c2, st * s2])

    return CurveSpec("torus_knot_sphere", 4, jet, None, {"theta": theta, "ratio": q},
                     unit_speed=True)


def _fourier_coefficients(n, seed, modes, spherical=False, perturbation=None, decay=1.0):
    rng = np.random.default_rng(seed)
    if not spherical:
        offset = rng.normal(size=n)
        amp = rng.normal(size=(modes, 2, n)) / np.arange(1, modes + 1)[:, None, None] ** decay
        return offset, amp
    # A random great circle plus a decaying random perturbation keeps the
    # projected curve well away from cusps.
    plane, _ = np.linalg.qr(rng.normal(size=(n, 2)))
    eps = SPHERICAL_PERTURBATION if perturbation is None else perturbation
    offset = eps * rng.normal(size=n)
    amp = eps * rng.normal(size=(modes, 2, n))
    amp /= np.arange(1, modes + 1)[:, None, None] ** 2
    amp[0, 0] += plane[:, 0]
    amp[0, 1] += plane[:, 1]
    return offset, amp


def _fourier_jet(offset, amp):
    modes, _, n = amp.shape

    def jet(t, order):
        c = np.zeros((order + 1, t.size, n))
        c[0] = offset
        for k in range(1, modes + 1):
            s, co = _trig(t, order, float(k))
            c += co[..., None] * amp[k - 1, 0] + s[..., None] * amp[k - 1, 1]
        return c

    return jet


def fourier(n=3, seed=0, modes=3, decay=1.0):
    """Random closed trigonometric curve in E^n (generic, not spherical).

    Mode ``k`` has amplitude ``N(0, 1) / k**decay``.
    """
    n, seed, modes, decay = int(n), int(seed), int(modes), float(decay)
    if n < 2 or modes < 1:
        raise CurveError("fourier needs n >= 2 and modes >= 1")
    offset, amp = _fourier_coefficients(n, seed, modes, decay=decay)
    return CurveSpec("fourier", n, _fourier_jet(offset, amp), None,
                     {"n": n, "seed": seed, "modes": modes, "decay": decay})


def latitude_wave(phi=math.pi / 4, seed=0, amplitude=0.2, modes=3):
    """Curve on the unit sphere whose polar angle oscillates about ``phi``.

    ``(sin f cos t, sin f sin t, cos f)`` with
    ``f(t) = phi + sum_k c_k sin(k t + psi_k)`` over ``k = 2..modes+1``; the
    random ``c_k`` have magnitudes in ``[amplitude / 2, amplitude]`` so the
    latitude varies on every arc.  Not unit speed.
    """
    phi, seed, amp = float(phi), int(seed), float(amplitude)
    rng = np.random.default_rng(seed)
    ks = np.arange(2, int(modes) + 2, dtype=float)
    coef = rng.uniform(0.5, 1.0, ks.size) * amp * rng.choice([-1.0, 1.0], ks.size)
    phase = rng.uniform(0.0, 2 * math.pi, ks.size)
    if not 0 < phi - np.abs(coef).sum() and phi + np.abs(coef).sum() < math.pi:
        raise CurveError("latitude_wave leaves the open hemisphere range; lower amplitude")

    def jet(t, order):
        f = tj.constant(np.full(np.shape(t), phi), order)
        for k, c, ps in zip(ks, coef, phase):
            f = f + c * tj.sincos(k * tj.variable(t, order) + tj.constant(np.full(np.shape(t), ps), order))[0]
        sf, cf = tj.sincos(f)
        s, c = _trig(t, order, 1.0)
        return _stack([tj.mul(sf, c), tj.mul(sf, s), cf])

    return CurveSpec("latitude_wave", 3, jet, None,
                     {"phi": phi, "seed": seed, "amplitude": amp, "modes": int(modes)})


def random_twisted_curve(n=4, seed=0, perturbation=0.1, modes=3):
    """Randomly rotated multi-frequency helix plus a small trigonometric
    perturbation; twisted in ``E^n`` for small ``perturbation``.

    Coordinate pair ``i`` turns at frequency ``i + 1`` with a random radius;
    odd dimensions add a random pitch along the last axis.
    """
    n, seed, eps = int(n), int(seed), float(perturbation)
    if n < 2:
        raise CurveError("random_twisted_curve needs n >= 2")
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.5, 1.5, n // 2)
    pitch = float(rng.uniform(0.5, 1.5))
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    offset, amp = _fourier_coefficients(n, int(rng.integers(0, 2**31 - 1)), modes, decay=2.0)
    wobble = _fourier_jet(eps * offset, eps * amp)

    def jet(t, order):
        cols = []
        for i, r in enumerate(radii):
            s, c = _trig(t, order, float(i + 1))
            cols += [r * c, r * s]
        if n % 2:
            cols.append(pitch * tj.variable(t, order))
        return _stack(cols) @ Q.T + wobble(t, order)

    return CurveSpec("random_twisted_curve", n, jet, None,
                     {"n": n, "seed": seed, "perturbation": eps, "modes": int(modes)})


def random_spherical_curve(n=3, seed=0, modes=3, center=None, radius=1.0, perturbation=None):
    """Random trigonometric curve radially projected onto a sphere.

    Returns a spec (not unit speed) on ``[0, 2 pi]`` lying on the sphere of
    the given ``radius`` about ``center``.  Coefficients are a deterministic
    function of ``(n, seed, modes)``; ``perturbation`` scales the departure
    from a random great circle (default 0.2).
    """
    n, seed, modes, radius = int(n), int(seed), int(modes), float(radius)
    if n < 2 or modes < 1:
        raise CurveError("random_spherical_curve needs n >= 2 and modes >= 1")
    if radius <= 0:
        raise CurveError("radius must be positive")
    c0 = np.zeros(n) if center is None else _vector(center, n, "center")
    offset, amp = _fourier_coefficients(n, seed, modes, spherical=True,
                                        perturbation=perturbation)
    base = _fourier_jet(offset, amp)

    def jet(t, order):
        x = base(t, order)
        inv = tj.recip(tj.sqrt(tj.dot(x, x)))
        out = radius * tj.mul(inv, x)
        out[0] += c0
        return out

    params = {"n": n, "seed": seed, "modes": modes, "radius": radius, "center": c0.tolist()}
    if perturbation is not None:
        params["perturbation"] = float(perturbation)
    spec = CurveSpec("fourier_spherical", n, jet, (0.0, 2 * math.pi), params)
    spec.coefficients = (offset, amp)
    probe = np.linspace(0.0, 2 * math.pi, 4001)
    xn = np.linalg.norm(base(probe, 0)[0], axis=1)
    speed = np.linalg.norm(spec.taylor(probe, 1)[1], axis=1)
    if xn.min() < 1e-3 * xn.max() or speed.min() < MIN_SPEED_RATIO * speed.max():
        raise NonRegularCurveError(
            f"random spherical curve for seed {seed} is not regular; choose another seed")
    return spec


fourier_spherical = random_spherical_curve


def sec_cone_curve(a=1.0, t0=0.0, profile=None, vertex=None, phi=None):
    """``vertex + a sec(t - t0) beta(t)`` for a unit-speed profile on the unit sphere.

    ``profile`` defaults to the latitude circle of angle ``phi`` (default
    pi/4).  The domain excludes a guard band of width 1e-3 around the
    secant's asymptotes.
    """
    a, t0 = float(a), float(t0)
    if a <= 0:
        raise CurveError("sec_cone_curve needs a > 0")
    if profile is None:
        profile = small_circle_sphere(math.pi / 4 if phi is None else phi, 3)
    if not isinstance(profile, CurveSpec):
        raise CurveError("profile must be a curve spec")
    n = profile.dimension
    p = np.zeros(n) if vertex is None else _vector(vertex, n, "vertex")
    lo, hi = t0 - math.pi / 2 + SEC_GUARD, t0 + math.pi / 2 - SEC_GUARD
    if profile.domain is not None:
        lo, hi = max(lo, profile.domain[0]), min(hi, profile.domain[1])

    def jet(t, order):
        beta = profile.taylor(t, order)
        _, cos = tj.sincos(tj.variable(t - t0, order))
        out = a * tj.mul(tj.recip(cos), beta)
        out[0] += p
        return out

    params = {"a": a, "t0": t0, "profile": profile.name, "vertex": p.tolist()}
    spec = CurveSpec("sec_cone_curve", n, jet, (lo, hi), params,
                     "domain crosses cone ruling asymptote")
    spec.profile = profile
    spec.vertex = p
    return spec


def _vector(v, n, label):
    x = np.asarray(v, dtype=float).ravel()
    if x.size != n:
        raise CurveError(f"{label} must have {n} coordinates")
    return x


BUILTINS = {
    "helix": helix,
    "plane_circle": plane_circle,
    "small_circle_sphere": small_circle_sphere,
    "sec_cone_curve": sec_cone_curve,
    "fourier_spherical": random_spherical_curve,
    "straight_line": straight_line,
    "fourier": fourier,
    "clifford_helix": clifford_helix,
    "torus_knot_sphere": torus_knot_sphere,
    "random_twisted_curve": random_twisted_curve,
    "latitude_wave": latitude_wave,
}

DEFAULT_DOMAINS = {
    "helix": (0.0, 2 * math.pi),
    "plane_circle": None,
    "small_circle_sphere": None,
    "sec_cone_curve": None,
    "fourier_spherical": (0.0, 2 * math.pi),
    "straight_line": (-1.0, 1.0),
    "fourier": (0.0, 2 * math.pi),
    "clifford_helix": (0.0, 2 * math.pi),
    "torus_knot_sphere": (0.0, 2 * math.pi),
    "random_twisted_curve": (0.0, 2 * math.pi),
    "latitude_wave": (0.0, 2 * math.pi),
}


def make_builtin_curve(family, params=None):
    """Instantiate a registered family by name.

    Raises
    ------
    CurveInputError
        Unknown family, unknown parameter or unusable value, naming the offender.
    """
    if family not in BUILTINS:
        raise CurveInputError(f"unknown curve family {family!r}; known: {', '.join(sorted(BUILTINS))}")
    params = dict(params or {})
    factory = BUILTINS[family]
    accepted = inspect.signature(factory).parameters
    for key in params:
        if key not in accepted:
            raise CurveInputError(f"unknown parameter {key!r} for family {family!r}")
    if family == "sec_cone_curve" and isinstance(params.get("profile"), str):
        params["profile"] = make_builtin_curve(params["profile"])
    try:
        return factory(**params)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, CurveError):
            raise
        raise CurveInputError(f"bad parameter value for family {family!r}: {exc}") from None


def default_domain(spec):
    """A reasonable sampling interval for a spec (used by the CLI)."""
    dom = DEFAULT_DOMAINS.get(spec.name)
    if spec.name == "sec_cone_curve":
        t0 = spec.params["t0"]
        lo, hi = spec.domain
        return max(lo, t0 - 1.0), min(hi, t0 + 1.0)
    if spec.name in ("plane_circle",):
        r = spec.params["r"]
        return 0.0, 2 * math.pi * r
    if spec.name == "small_circle_sphere":
        return 0.0, 2 * math.pi * math.sin(spec.params["phi"])
    if dom is None:
        dom = spec.domain or (0.0, 1.0)
    return dom


# ---------------------------------------------------------------- CSV I/O

def _position_columns(header):
    """Dimension of a ``t,x0,...`` header; ``s``-headed emitted tables with
    trailing jet columns are accepted and their jets ignored."""
    if len(header) < 3 or header[0] not in ("t", "s"):
        return None
    n = 0
    while n + 1 < len(header) and header[n + 1] == f"x{n}":
        n += 1
    jets = header[n + 1:]
    if len(jets) % max(n, 1):
        return None
    for k in range(len(jets) // n):
        prefix = "dx" if k == 0 else f"d{k + 1}x"
        if jets[k * n:(k + 1) * n] != [f"{prefix}{i}" for i in range(n)]:
            return None
    return n


def read_curve_csv(path):
    """Read a ``t,x0,...`` table into a :class:`SampledSpec`."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise CurveInputError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise CurveInputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    n = _position_columns(header)
    if n is None or n < 2:
        raise CurveInputError(f"{path}: header must be t,x0,...,x{{n-1}} with n >= 2")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise CurveInputError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise CurveInputError(f"{path}: ragged rows")
    try:
        return SampledSpec(data[:, 0], data[:, 1:n + 1], name=str(path))
    except CurveError as exc:
        raise CurveInputError(f"{path}: {exc}") from None


def write_curve_csv(path, curve, jets=0, parameter_name="s"):
    """Write samples with header ``s,x0,...`` plus ``dx..``/``d{k}x..`` jet columns."""
    n = curve.dimension
    header = [parameter_name] + [f"x{i}" for i in range(n)]
    cols = [curve.s[:, None], curve.points]
    for k in range(1, jets + 1):
        prefix = "dx" if k == 1 else f"d{k}x"
        header += [f"{prefix}{i}" for i in range(n)]
        cols.append(curve.jet(k))
    table = np.concatenate(cols, axis=1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in table:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_table_csv(path, t, points):
    """Write a raw ``t,x0,...`` input table."""
    P = np.asarray(points, dtype=float)
    n = P.shape[1]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(["t"] + [f"x{i}" for i in range(n)]) + "\n")
        for ti, row in zip(t, P):
            fh.write(",".join(repr(float(v)) for v in (ti, *row)) + "\n")
