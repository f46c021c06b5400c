"""Named verification suite: each check constructs its own randomized inputs,
runs the detectors and compares every measured residual with its tolerance."""
import math
import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import cones, correspondence, curves, frames, numerics, rectify
from .curves import NonRegularCurveError

DEFAULT_SEED = 42
RUNTIME_T1 = 10.0
SAMPLES = 1001


@dataclass(frozen=True)
class Measurement:
    """One measured quantity against its limit.

    ``kind="max"`` passes when ``value < limit``; ``kind="min"`` when
    ``value > limit``; ``kind="equal"`` when ``value == limit``.
    """

    quantity: str
    value: float
    limit: float
    kind: str = "max"
    wallclock: bool = False

    @property
    def passed(self):
        if self.kind == "max":
            return bool(self.value < self.limit)
        if self.kind == "min":
            return bool(self.value > self.limit)
        return bool(self.value == self.limit)

    def describe(self):
        """``"quantity: value < limit"`` with the required relation."""
        rel = {"max": "<", "min": ">", "equal": "=="}[self.kind]
        return f"{self.quantity}: {self.value:.3g} (need {rel} {self.limit:.3g})"

    def to_dict(self):
        # Wall-clock values live in the timing block so reports stay reproducible.
        value = "see timing" if self.wallclock else _num(self.value)
        return {"quantity": self.quantity, "value": value,
                "limit": _num(self.limit), "kind": self.kind, "passed": self.passed}


def _num(x):
    x = float(x)
    return x if math.isfinite(x) else repr(x)


@dataclass
class CheckResult:
    name: str
    measurements: list
    notes: list = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self):
        return all(m.passed for m in self.measurements)

    def headline(self):
        """The measurement closest to (or furthest past) its limit."""
        failing = [m for m in self.measurements if not m.passed]
        steady = [m for m in self.measurements if not m.wallclock]
        pool = failing or steady or self.measurements
        return max(pool, key=_badness)

    def to_dict(self):
        head = self.headline()
        residual = "see timing" if head.wallclock else _num(head.value)
        return {"name": self.name, "passed": self.passed, "residual": residual,
                "tolerance": _num(head.limit), "quantity": head.quantity,
                "measurements": [m.to_dict() for m in self.measurements],
                "notes": list(self.notes)}


def _badness(m):
    if m.kind == "equal":
        return 0.0 if m.passed else math.inf
    v, lim = abs(float(m.value)), abs(float(m.limit))
    if m.kind == "max":
        return v / lim if lim > 0 else math.inf
    return lim / v if v > 0 else math.inf


class Collector:
    """Accumulates measurements as per-quantity worst cases."""

    def __init__(self):
        self._worst = {}
        self.notes = []

    def add(self, quantity, value, limit, kind="max", wallclock=False):
        m = Measurement(quantity, float(value), float(limit), kind, wallclock)
        old = self._worst.get(quantity)
        if old is None or _badness(m) > _badness(old):
            self._worst[quantity] = m

    def measurements(self):
        return list(self._worst.values())


@dataclass
class SuiteConfig:
    seed: int = DEFAULT_SEED
    tol_rect: float = None
    tol_geo: float = None

    def __post_init__(self):
        for name in ("tol_rect", "tol_geo"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name} must be positive")

    def rng(self, name):
        return np.random.default_rng([int(self.seed), zlib.crc32(name.encode())])

    def rect_tol(self, curve):
        return rectify.default_tolerance(curve) if self.tol_rect is None else self.tol_rect

    def geo_tol(self, curve):
        return rectify.default_tolerance(curve) if self.tol_geo is None else self.tol_geo


class Pool:
    """Twisted sample curves gathered across checks for the exclusion check."""

    def __init__(self):
        self.entries = []
        self.frame_errors = []

    def add(self, label, curve, vertex, app=None):
        app = frames.frenet_apparatus(curve) if app is None else app
        self.frame_errors.append(frames.orthonormality_error(app.frames))
        if app.twisted:
            self.entries.append((label, curve, np.asarray(vertex, dtype=float), app))
        return app


def _seed_stream(rng):
    while True:
        yield int(rng.integers(0, 2**31 - 1))


def spherical_profiles(rng, n, count, **kwargs):
    """Unit-speed random spherical profiles, skipping non-regular seeds."""
    out = []
    for seed in _seed_stream(rng):
        try:
            beta = curves.random_spherical_curve(n, seed, **kwargs)
        except NonRegularCurveError:
            continue
        out.append(curves.arclength_spec(beta, 0.0, 2 * math.pi))
        if len(out) == count:
            return out


def _rotation(rng, n):
    Q, R = np.linalg.qr(rng.normal(size=(n, n)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


def _constructed(rng, n, count, a_range=(0.5, 2.0)):
    """Random rectifying specs ``(spec, vertex, a)`` in ``E^n``."""
    out = []
    for beta in spherical_profiles(rng, n, count):
        p = rng.normal(size=n)
        a = float(rng.uniform(*a_range))
        L = beta.domain[1]
        t0 = float(rng.uniform(1.0, L - 1.0))
        out.append((rectify.construct_rectifying(beta.moved(None, p), a, t0, p), p, a))
    return out


# -- individual checks -------------------------------------------------------


def check_t1_equiv(cfg, pool):
    """Rectifying characterizations hold together on constructed curves."""
    rng = cfg.rng("T1-equiv")
    col = Collector()
    start = time.perf_counter()
    for m in (1, 2, 3):
        n = m + 2
        for spec, p, a in _constructed(rng, n, 10):
            curve = rectify.rectifying_sample(spec, SAMPLES, n)
            tol = cfg.rect_tol(curve)
            rep = rectify.check_rectifying(curve, p, tol)
            col.add("cond1 (analytic)", rep.cond1_residual, tol)
            col.add("cond2 (analytic)", rep.cond2_residual, tol)
            col.add("cond4 (analytic)", rep.cond4_residual, tol)
            col.add("|a^2 - (c - b^2)|", rep.a_squared_gap, 1e-8)
            col.add("|a_fit - a|", abs(rep.a - a), tol)
            col.add("tangential coordinate vs s + b", rep.tangent_residual, tol)
            pool.add(f"T1 n={n}", curve, p)
    col.add("runtime [s] (analytic set)", time.perf_counter() - start, RUNTIME_T1,
            wallclock=True)
    # Finite-difference subset: the same construction sampled without jets.
    for n in (3, 4, 5):
        for spec, p, a in _constructed(rng, n, 2):
            curve = rectify.rectifying_sample(spec, SAMPLES, 2, source="finite-difference")
            tol = cfg.rect_tol(curve)
            rep = rectify.check_rectifying(curve, p, tol)
            col.add("cond1 (finite-difference)", rep.cond1_residual, tol)
            col.add("cond2 (finite-difference)", rep.cond2_residual, tol)
            col.add("cond4 (finite-difference)", rep.cond4_residual, tol)
    return col


def check_el_residual(cfg, pool):
    """Secant profiles solve the radial geodesic equation on 1000-point grids.

    The samples are taken in extended precision; in float64 the one-sided
    boundary stencils alone put the residual near the 1e-8 limit.
    """
    rng = cfg.rng("EL-residual")
    col = Collector()
    wide = np.longdouble
    for _ in range(10):
        a = wide(rng.uniform(0.5, 2.0))
        t0 = wide(rng.uniform(-1.0, 1.0))
        t = np.linspace(t0 - wide(0.7), t0 + wide(0.7), 1000)
        _, r = cones.euler_lagrange_residual(a / np.cos(t - t0), t[1] - t[0])
        col.add("max |u u'' - 2 u'^2 - u^2|", r, 1e-8)
    col.notes.append("a in [0.5, 2], t0 in [-1, 1], grids span t0 +- 0.7, long double samples")
    return col


def _development(col, cone, curve):
    image = cones.unroll_2cone(cone, curve)
    col.add("development chord deviation", curves.chord_deviation(image.points), 1e-6)
    col.add("development length change",
            abs(curves.arc_length(image) - curves.arc_length(curve)), 1e-8)


def check_t2_geodesic(cfg, pool):
    """Rectifying curves are cone geodesics and conversely."""
    rng = cfg.rng("T2-geodesic")
    col = Collector()
    for n, count in ((3, 4), (4, 2), (5, 2)):
        for spec, p, a in _constructed(rng, n, count):
            curve = rectify.rectifying_sample(spec, SAMPLES, 2)
            tol = cfg.geo_tol(curve)
            rep = cones.geodesic_check(curve, p, tol)
            col.add("geodesic residual of constructed curves", max(
                rep.normality_residual, rep.euler_lagrange_residual), tol)
            col.add("geodesic verdict failures", 0 if rep.verdict else 1, 1)
    cases = [(np.zeros(3), curves.small_circle_sphere(math.pi / 4), 1.0, 0.0)]
    for beta in spherical_profiles(rng, 3, 3):
        p = rng.normal(size=3)
        L = beta.domain[1]
        cases.append((p, beta.moved(None, p), float(rng.uniform(0.5, 2.0)),
                      float(rng.uniform(1.0, L - 1.0))))
    for beta in spherical_profiles(rng, 4, 2):
        p = rng.normal(size=4)
        cases.append((p, beta.moved(None, p), float(rng.uniform(0.5, 2.0)),
                      float(rng.uniform(1.0, beta.domain[1] - 1.0))))
    for p, beta, a, t0 in cases:
        cone = cones.make_cone(p, beta)
        spec = cones.cone_geodesic(cone, a, t0)
        curve = rectify.rectifying_sample(spec, SAMPLES, 2)
        tol = cfg.rect_tol(curve)
        rep = rectify.check_rectifying(curve, p, tol)
        col.add("cond1 of cone geodesics", rep.cond1_residual, tol)
        col.add("cond2 of cone geodesics", rep.cond2_residual, tol)
        col.add("cond4 of cone geodesics", rep.cond4_residual, tol)
        if cone.dimension == 3:
            _development(col, cone, curve)
    return col


def check_l1_rho(cfg, pool):
    """``(rho^2)' = 2 A_0`` and the coordinate ODE on random twisted curves."""
    rng = cfg.rng("L1-rho")
    col = Collector()
    found = 0
    for seed in _seed_stream(rng):
        n = 4 if found < 10 else 5
        spec = curves.arclength_spec(curves.random_twisted_curve(n, seed), 0.0, 2 * math.pi)
        curve = curves.sample_jets(spec, spec.domain, 2001, n)
        app = frames.frenet_apparatus(curve)
        if not app.twisted:
            continue
        p = rng.normal(size=n)
        coords = frames.coordinate_functions(curve, app, p)
        col.add("max |(rho^2)' - 2 A_0|", frames.rho_squared_defect(coords), 1e-6)
        ode = frames.integrate_coordinate_ode(app.coefficients, coords.A[:, 0], curve.s, p)
        col.add("coordinate ODE vs projection", float(np.max(np.abs(ode.A - coords.A))), 1e-6)
        pool.add(f"L1 n={n}", curve, p, app)
        found += 1
        if found == 20:
            break
    return col


def _hyperplane_curve(rng, n):
    """Generic curve in a random affine hyperplane of ``E^n``; returns
    ``(spec, unit normal, point of the plane)``."""
    Q = _rotation(rng, n)
    shift = rng.normal(size=n)
    for seed in _seed_stream(rng):
        base = curves.fourier(n - 1, seed, 3)
        try:
            spec = curves.arclength_spec(base.embedded(n).moved(Q, shift), 0.0, 2 * math.pi)
        except NonRegularCurveError:
            continue
        return spec, Q[:, n - 1], shift


def _twisted_spherical(rng, n, center, radius, min_samples=200):
    """Analytic spherical curve restricted to its longest well-twisted run."""
    for seed in _seed_stream(rng):
        try:
            beta = curves.random_spherical_curve(n, seed, 3, center, radius)
        except NonRegularCurveError:
            continue
        spec = curves.arclength_spec(beta, 0.0, 2 * math.pi)
        curve = curves.sample_jets(spec, spec.domain, SAMPLES, n)
        lo, hi = frames.twisted_window(frames.frenet_apparatus(curve), 0.05)
        if hi - lo >= min_samples:
            return curve.window(lo, hi)


def check_t4_jrect(cfg, pool):
    """Constructed j-rectifying positives for ``j = 0, 1, n - 1``."""
    rng = cfg.rng("T4-jrect")
    col = Collector()
    tol = rectify.TOL_ANALYTIC
    for n in (3, 4, 5):
        # j = 0: spherical curves about their center.
        for _ in range(2):
            center = rng.normal(size=n)
            radius = float(rng.uniform(0.5, 2.0))
            curve = _twisted_spherical(rng, n, center, radius)
            app = pool.add(f"T4 j=0 n={n}", curve, center)
            _j_measure(col, curve, center, 0, app, tol)
        # j = 1: rectifying curves.
        for spec, p, a in _constructed(rng, n, 2):
            curve = rectify.rectifying_sample(spec, SAMPLES, n)
            app = pool.add(f"T4 j=1 n={n}", curve, p)
            _j_measure(col, curve, p, 1, app, tol)
        # j = n - 1: hyperplane curves with the vertex in the plane.
        spec, normal, shift = _hyperplane_curve(rng, n)
        curve = curves.sample_jets(spec, spec.domain, SAMPLES, n)
        app = frames.frenet_apparatus(curve)
        _j_measure(col, curve, shift, n - 1, app, tol)
    return col


def _j_measure(col, curve, p, j, app, tol):
    rep = rectify.check_j_rectifying(curve, p, j, tol, app)
    col.add(f"A_j residual (j={'n-1' if j > 1 else j})", rep.Aj_residual, tol)
    col.add(f"normal tail deviation (j={'n-1' if j > 1 else j})", rep.normal_tail_residual, tol)


def check_l2_exclusion(cfg, pool):
    """No twisted curve in the pool is both j- and (j+1)-rectifying."""
    col = Collector()
    violations = 0
    for label, curve, p, app in pool.entries:
        n = curve.dimension
        tol = rectify.default_tolerance(curve)
        verdicts = [rectify.check_j_rectifying(curve, p, j, tol, app).verdict
                    for j in range(n)]
        for j in range(n - 1):
            if verdicts[j] and verdicts[j + 1]:
                violations += 1
                col.notes.append(f"{label}: j={j} and j={j + 1} both fire")
    col.add("consecutive j verdict collisions", violations, 1)
    col.add("twisted curves examined", len(pool.entries), 0, "min")
    return col


def _noncircular_cone(rng):
    """Cone over a latitude wave and its geodesic across ``t0 +- 1.4``."""
    phi = float(rng.uniform(0.6, 1.2))
    beta = curves.latitude_wave(phi, int(rng.integers(0, 2**31 - 1)), 0.15)
    beta = curves.arclength_spec(beta, 0.0, 2 * math.pi)
    cone = cones.make_cone(np.zeros(3), beta)
    t0 = float(rng.uniform(1.5, beta.domain[1] - 1.5))
    return cone, cones.cone_geodesic(cone, float(rng.uniform(0.5, 2.0)), t0,
                                     (t0 - 1.4, t0 + 1.4))


def _slant_vs_circular(col, cone, spec):
    curve = rectify.rectifying_sample(spec, SAMPLES, 2)
    slant = cones.slant_helix_check(curve)
    circ = cones.circularity_check(cone)
    col.add("slant verdict differs from circularity verdict",
            int(slant.verdict != circ.verdict), 1)
    return slant, circ


def check_t3_slant(cfg, pool):
    """Slant helices among cone geodesics are exactly those of circular cones."""
    rng = cfg.rng("T3-slant")
    col = Collector()
    for phi in (math.pi / 4, math.pi / 6, math.pi / 3):
        cone = cones.make_cone(np.zeros(3), curves.small_circle_sphere(phi))
        slant, circ = _slant_vs_circular(col, cone, cones.cone_geodesic(cone, 1.0, 0.0))
        col.add("slant residual (circular cones)", slant.residual, cones.TOL_SLANT)
    for _ in range(10):
        cone, spec = _noncircular_cone(rng)
        slant, circ = _slant_vs_circular(col, cone, spec)
        col.add("slant residual (non-circular cones)", slant.residual, 1e-2, "min")
    return col


def check_p1_circular(cfg, pool):
    """The geodesic of the circular cone at phi = pi/4 and a = 1."""
    col = Collector()
    phi = math.pi / 4
    cone = cones.make_cone(np.zeros(3), curves.small_circle_sphere(phi))
    circ = cones.circularity_check(cone)
    col.add("circularity residual", circ.residual, cones.TOL_CIRCULAR)
    curve = rectify.rectifying_sample(cones.cone_geodesic(cone, 1.0, 0.0), SAMPLES, 2)
    slant = cones.slant_helix_check(curve)
    col.add("slant residual", slant.residual, cones.TOL_SLANT)
    col.add("axis error | |<d, e_3>| - 1 |", abs(abs(slant.direction[2]) - 1.0), 1e-6)
    col.add("| |level| - sin(pi/4) |", abs(abs(slant.level) - math.sin(phi)), 1e-6)
    return col


def check_c2_hyperdim(cfg, pool):
    """Geodesics of circular hypercones in ``E^4`` are slant helices."""
    rng = cfg.rng("C2-hyperdim")
    col = Collector()
    for _ in range(3):
        phi = float(rng.uniform(0.4, 1.2))
        Q = _rotation(rng, 4)
        profile = curves.small_circle_sphere(phi, 3).embedded(4).moved(Q)
        cone = cones.make_cone(np.zeros(4), profile)
        a = float(rng.uniform(0.5, 2.0))
        t0 = float(rng.uniform(1.0, 2 * math.pi * math.sin(phi) - 1.0))
        curve = rectify.rectifying_sample(cones.cone_geodesic(cone, a, t0), SAMPLES, 2)
        slant = cones.slant_helix_check(curve)
        col.add("slant residual", slant.residual, cones.TOL_SLANT)
        _, B = cone.profile_samples()
        col.add("profile level spread along the slant axis",
                cones.direction_level_spread(B, slant.direction), 1e-6)
    return col


def _small_circle_rectifying(rng):
    """Rectifying curve over a rotated latitude circle, sampled after ``t0``
    so that ``s + b`` keeps one sign."""
    phi = float(rng.uniform(0.4, 1.2))
    p = rng.normal(size=3)
    beta = curves.small_circle_sphere(phi).moved(_rotation(rng, 3), p)
    a = float(rng.uniform(0.5, 2.0))
    t0 = float(rng.uniform(-1.0, 1.0))
    return rectify.construct_rectifying(beta, a, t0, p, (t0 + 0.05, t0 + 1.0)), p, a


def _torus_knot_rectifying(rng):
    """Rectifying curve in ``E^4`` over a rotated torus-knot profile."""
    p = rng.normal(size=4)
    beta = curves.torus_knot_sphere(float(rng.uniform(0.4, 1.2)),
                                    float(rng.uniform(1.5, 3.0))).moved(_rotation(rng, 4), p)
    a = float(rng.uniform(0.5, 2.0))
    t0 = float(rng.uniform(-1.0, 1.0))
    return rectify.construct_rectifying(beta, a, t0, p, (t0 + 0.1, t0 + 0.9)), p, a


def check_3d_eq(cfg, pool):
    rng = cfg.rng("3d-eq")
    col = Collector()
    sc = curves.small_circle_sphere(math.pi / 4)
    builds = [(rectify.construct_rectifying(sc, 1.0, 0.0, domain=(0.05, 1.0)), np.zeros(3), 1.0),
              (rectify.construct_rectifying(sc, 2.0, 0.2, domain=(0.25, 1.2)), np.zeros(3), 2.0)]
    builds += [_small_circle_rectifying(rng) for _ in range(4)]
    for spec, p, a in builds:
        curve = rectify.rectifying_sample(spec, SAMPLES, 3)
        a_hat, res = correspondence.rectifying_equation_residual_3d(curve, p)
        col.add("|a_hat - a|", abs(a_hat - a), 1e-5)
        col.add("tau / ((s + b) kappa) spread", res, 1e-5)
    helix = curves.reparameterize_arclength(
        curves.sample_jets(curves.helix(1.0, 1.0), (0.0, 6.0), SAMPLES, 3))
    _, res = correspondence.rectifying_equation_residual_3d(helix, np.array([0.0, 0.0, -10.0]))
    col.add("helix spread", res, 1e-2, "min")
    return col


def check_4d_eq(cfg, pool):
    rng = cfg.rng("4d-eq")
    col = Collector()
    for _ in range(4):
        spec, p, a = _torus_knot_rectifying(rng)
        curve = rectify.rectifying_sample(spec, SAMPLES, 4)
        _, res = correspondence.rectifying_equation_residual_4d(curve, p)
        col.add("max |r| (constructed)", res, 1e-4)
    helix = curves.reparameterize_arclength(
        curves.sample_jets(curves.clifford_helix(), (0.0, 6.0), SAMPLES, 4))
    _, res = correspondence.rectifying_equation_residual_4d(helix, np.zeros(4))
    col.add("max |r| (constant-curvature helix)", res, 1e-2, "min")
    return col


def _sphere_window(rng, n, center, radius):
    for seed in _seed_stream(rng):
        try:
            beta = curves.random_spherical_curve(n, seed, 3, center, radius)
        except NonRegularCurveError:
            continue
        curve = curves.reparameterize_arclength(
            curves.sample_jets(beta, (0.0, 2 * math.pi), 4001, n))
        app = frames.frenet_apparatus(curve)
        lo, hi = frames.twisted_window(app, 0.1)
        if hi - lo >= 200:
            return curve.window(lo, hi)


def check_t5_map(cfg, pool):
    """Curvature transport, synthesis and the opposite-side detectors."""
    rng = cfg.rng("T5-map")
    col = Collector()
    s = np.linspace(0.0, 10.0, 1001)
    mismatches = 0
    for m in (2, 3):
        F = np.vstack([rng.uniform(0.1, 3.0, s.size)] + [rng.normal(size=s.size)] * (m - 1))
        sph = correspondence.make_profile(s, F, "spherical")
        kappa0 = rng.uniform(0.2, 2.0, s.size)
        rec = correspondence.spherical_to_rectifying(sph, kappa0, float(rng.uniform(0.1, 1.0)))
        back = correspondence.rectifying_to_spherical(rec)
        mismatches += int(np.count_nonzero(back.values != sph.values))
    col.add("transport round-trip mismatches", mismatches, 0, "equal")
    # Spherical curves in E^3 -> rectifying curves in E^4.
    for _ in range(3):
        center = rng.normal(size=3)
        w = _sphere_window(rng, 3, center, float(rng.uniform(1.0, 2.0)))
        col.add("spherical residual of the source", correspondence.spherical_equation_residual_3d(w)[1], 1e-4)
        rec = correspondence.spherical_to_rectifying(correspondence.measure_profile(w, "spherical"))
        syn = correspondence.curve_from_curvatures(rec)
        vertex = rectify.find_vertex(syn).vertex
        rep = rectify.check_rectifying(syn, vertex, 1e-4)
        col.add("synthesized rectifying cond1", rep.cond1_residual, 1e-4)
        col.add("synthesized rectifying cond2", rep.cond2_residual, 1e-4)
        col.add("synthesized rectifying cond4", rep.cond4_residual, 1e-4)
        col.add("synthesized 4d residual", correspondence.rectifying_equation_residual_4d(syn, vertex)[1], 1e-4)
        _a_coordinates(col, syn, vertex, rep.b, "synthesized")
        app = frames.frenet_apparatus(w)
        C = frames.coordinate_functions(w, app, center).A
        col.add("C_0 (spherical source)", float(np.max(np.abs(C[0]))), 1e-5)
        col.add("C_1 + 1/k_0 (spherical source)",
                float(np.max(np.abs(C[1] + 1.0 / app.curvatures[0]))), 1e-5)
    # Rectifying curves in E^4 -> spherical curves in E^3.
    for _ in range(3):
        spec, p, a = _torus_knot_rectifying(rng)
        curve = rectify.rectifying_sample(spec, SAMPLES, 4)
        b = rectify.check_rectifying(curve, p).b
        _a_coordinates(col, curve, p, b, "constructed")
        sph = correspondence.rectifying_to_spherical(
            correspondence.measure_profile(curve, "rectifying", b))
        syn = correspondence.curve_from_curvatures(sph)
        col.add("synthesized spherical residual",
                correspondence.spherical_equation_residual_3d(syn)[1], 1e-4)
    return col


def _a_coordinates(col, curve, p, b, label):
    app = frames.frenet_apparatus(curve)
    A = frames.coordinate_functions(curve, app, p).A
    k0, k1 = app.curvatures[0], app.curvatures[1]
    x = curve.s + b
    col.add(f"A_0 - (s + b) ({label})", float(np.max(np.abs(A[0] - x))), 1e-5)
    col.add(f"A_1 ({label})", float(np.max(np.abs(A[1]))), 1e-5)
    col.add(f"A_2 - (s + b) k_0 / k_1 ({label})",
            float(np.max(np.abs(A[2] - x * k0 / k1))), 1e-5)


def check_t6_rm(cfg, pool):
    """Hyperplane / sphere / neither classification and the sphere normal."""
    rng = cfg.rng("T6-rm")
    col = Collector()
    for i in range(20):
        n = 3 + i % 3
        center = rng.normal(size=n)
        radius = float(rng.uniform(0.5, 3.0))
        for seed in _seed_stream(rng):
            try:
                beta = curves.random_spherical_curve(n, seed, 3, center, radius)
                break
            except NonRegularCurveError:
                continue
        pts = beta.evaluate(np.linspace(0.0, 2 * math.pi, 2001))
        res = frames.classify_rm_normal(pts)
        col.add("spherical curves not classified sphere", int(res.verdict != "sphere"), 1)
        if res.verdict == "sphere":
            col.add("center error", float(np.linalg.norm(res.center - center)), 1e-6)
            col.add("radius error", abs(res.radius - radius), 1e-6)
    for i in range(20):
        n = 3 + i % 2
        spec, normal, _ = _hyperplane_curve(rng, n)
        pts = spec.evaluate(np.linspace(*spec.domain, 2001))
        res = frames.classify_rm_normal(pts)
        col.add("plane curves not classified hyperplane", int(res.verdict != "hyperplane"), 1)
        if res.verdict == "hyperplane":
            err = min(np.linalg.norm(res.normal - normal), np.linalg.norm(res.normal + normal))
            col.add("hyperplane normal error", float(err), 1e-6)
    helix = curves.helix().evaluate(np.linspace(0.0, 12.0, 2001))
    col.add("helix not classified neither",
            int(frames.classify_rm_normal(helix).verdict != "neither"), 1)
    # Sphere normal xi = (alpha - p) / R along a spherical curve.
    center = np.array([1.0, 2.0, 3.0])
    radius = 2.0
    beta = curves.random_spherical_curve(3, 0, 3, center, radius)
    spec = curves.arclength_spec(beta, 0.0, 2 * math.pi)
    curve = curves.sample_jets(spec, spec.domain, 2001, 2)
    xi = (curve.points - center) / radius
    rm = frames.rm_frame(curve, xi[:1])
    col.add("transported field vs xi", float(np.max(np.abs(rm.frames[:, 1] - xi))), 1e-6)
    dxi = numerics.fd_derivative(xi, curve.h, 1)
    T = curve.jet(1)
    along = np.einsum("ij,ij->i", dxi, T)
    normal_part = np.linalg.norm(dxi - along[:, None] * T, axis=1)
    col.add("normal part of xi'", float(np.max(normal_part[2:-2])), 1e-8)
    col.add("|<xi', T>|", float(np.max(np.abs(along))), 1e-8)
    col.notes.append("<xi', T> = 1/R identically for the sphere normal; the RM property "
                     "holds in the normal-connection sense (normal part of xi' vanishes)")
    return col


def check_frame_hygiene(cfg, pool):
    rng = cfg.rng("frame-hygiene")
    col = Collector()
    for err in pool.frame_errors:
        col.add("Frenet orthonormality error", err, 1e-8)
    tests = [curves.arclength_spec(curves.helix(), 0.0, 12.0)]
    tests += spherical_profiles(rng, 3, 1)
    tests += [curves.arclength_spec(curves.random_twisted_curve(n, int(rng.integers(0, 2**31 - 1))),
                                    0.0, 2 * math.pi) for n in (4, 5)]
    for spec in tests:
        curve = curves.sample_jets(spec, spec.domain, 16001, 2)
        rm = frames.rm_frame(curve)
        normal, cross = frames.rm_residual(rm)
        col.add("RM normal-part residual", normal, 1e-8)
        col.add("RM normal cross coefficients", cross, 1e-6)
        col.add("RM orthonormality error", frames.orthonormality_error(rm.frames), 1e-8)
    s = np.linspace(0.0, 10.0, 2001)
    for n in (3, 4):
        phase = rng.uniform(0, 2 * math.pi, n - 1)
        F = np.vstack([1.0 + 0.3 * np.sin(0.7 * (i + 1) * s + phase[i]) for i in range(n - 1)])
        prof = correspondence.make_profile(s, F, "rectifying")
        syn = correspondence.curve_from_curvatures(prof)
        app = frames.frenet_apparatus(syn)
        col.add("synthesis round-trip error", float(np.max(np.abs(app.curvatures - F))), 1e-6)
        col.add("synthesized speed error",
                float(np.max(np.abs(np.linalg.norm(syn.jet(1), axis=1) - 1.0))), 1e-8)
    return col


# Order matters only for the pool: exclusion and hygiene read what the
# earlier checks gathered.
CHECKS = [
    ("T1-equiv", check_t1_equiv),
    ("EL-residual", check_el_residual),
    ("T2-geodesic", check_t2_geodesic),
    ("L1-rho", check_l1_rho),
    ("T4-jrect", check_t4_jrect),
    ("T3-slant", check_t3_slant),
    ("P1-circular", check_p1_circular),
    ("C2-hyperdim", check_c2_hyperdim),
    ("3d-eq", check_3d_eq),
    ("4d-eq", check_4d_eq),
    ("T5-map", check_t5_map),
    ("T6-rm", check_t6_rm),
    ("L2-exclusion", check_l2_exclusion),
    ("frame-hygiene", check_frame_hygiene),
]
CHECK_NAMES = tuple(sorted(name for name, _ in CHECKS))


def run_check(name, fn, cfg, pool):
    start = time.perf_counter()
    try:
        col = fn(cfg, pool)
        result = CheckResult(name, col.measurements(), col.notes)
    except Exception as exc:  # failures are data
        result = CheckResult(name, [Measurement("exception", math.inf, 0.0)],
                             [f"{type(exc).__name__}: {exc}"])
    result.elapsed = time.perf_counter() - start
    return result


def run_suite(cfg=None, only=None):
    """Run the checks in dependency order; results are sorted by name."""
    cfg = SuiteConfig() if cfg is None else cfg
    pool = Pool()
    results = []
    for name, fn in CHECKS:
        if only is not None and name not in only:
            continue
        results.append(run_check(name, fn, cfg, pool))
    return sorted(results, key=lambda r: r.name)


def suite_report(results, cfg):
    """``(report, timing)``: the deterministic report and the wall-clock part."""
    report = {
        "seed": int(cfg.seed),
        "tol_rect": cfg.tol_rect,
        "tol_geo": cfg.tol_geo,
        "passed": all(r.passed for r in results),
        "checks": [r.to_dict() for r in results],
    }
    timing = {"checks": {r.name: r.elapsed for r in results},
              "measurements": {f"{r.name}: {m.quantity}": m.value for r in results
                               for m in r.measurements if m.wallclock},
              "total": sum(r.elapsed for r in results)}
    return report, timing
