"""Command-line front end: ``rectcurves {analyze,construct,geodesic,map,unroll,verify}``.

Exit codes: 0 success (verdicts are data), 1 library error, 2 unreadable
input, 3 non-regular curve; ``verify`` exits 1 when any check fails.
"""
import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import cones, correspondence, curves, frames, rectify, verify
from .correspondence import CorrespondenceError
from .curves import CurveError, CurveInputError, NonRegularCurveError
from .frames import FrameError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NONREGULAR = 3


class InputError(Exception):
    """Unreadable or malformed command-line input."""


@dataclass
class RunConfig:
    command: str
    builtin: str = None
    csv: str = None
    profile: str = None
    vertex: tuple = None
    a: float = 1.0
    t0: float = 0.0
    j: int = None
    seed: int = verify.DEFAULT_SEED
    tol_rect: float = None
    tol_geo: float = None
    out: str = "."
    domain: tuple = None
    count: int = 1001
    finite_difference: bool = False
    to: str = None
    only: tuple = None


# -- parsing -------------------------------------------------------------------


def _scalar(text):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_builtin(text):
    """``family:key=val,...``; vector values separate components with ``;``."""
    family, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq or not key:
            raise InputError(f"bad builtin parameter {item!r}; expected key=value")
        if ";" in value:
            try:
                params[key.strip()] = [float(v) for v in value.split(";")]
            except ValueError:
                raise InputError(f"bad vector value {value!r} for {key!r}") from None
        else:
            params[key.strip()] = _scalar(value.strip())
    return family.strip(), params


def _vector(text):
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="rectcurves", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, source=True):
        if source:
            p.add_argument("--builtin", help="family:key=val,... (vectors: 1;2;3)")
            p.add_argument("--csv", help="curve table with header t,x0,...")
            p.add_argument("--domain", type=_vector, help="lo,hi parameter interval")
            p.add_argument("--count", type=int, default=1001, help="samples (default 1001)")
            p.add_argument("--finite-difference", action="store_true",
                           help="estimate jets by finite differences for builtins")
        p.add_argument("--vertex", type=_vector, help="comma-separated vertex")
        p.add_argument("--tol-rect", type=_positive, help="rectifying tolerance override")
        p.add_argument("--tol-geo", type=_positive, help="geodesic tolerance override")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)

    p = sub.add_parser("analyze", help="run every detector on a curve")
    common(p)
    p.add_argument("--j", type=int, help="report only this j-rectifying index")
    for name, help_text in (("construct", "build a rectifying curve over a spherical profile"),
                            ("geodesic", "sample a secant geodesic of a cone"),
                            ("unroll", "develop a cone geodesic into the plane")):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--a", type=float, default=1.0)
        p.add_argument("--t0", type=float, default=0.0)
    p = sub.add_parser("map", help="transport a curvature profile to the opposite side")
    common(p)
    p.add_argument("--profile", help="curvature profile CSV (header s,kappa0,...)")
    p.add_argument("--to", choices=("spherical", "rectifying"), required=True)
    p = sub.add_parser("verify", help="run the named verification suite")
    common(p, source=False)
    p.add_argument("--only", nargs="+", choices=verify.CHECK_NAMES, help="subset of checks")
    return parser


def config_from_args(args):
    cfg = RunConfig(args.command)
    for key in vars(args):
        if hasattr(cfg, key):
            setattr(cfg, key, getattr(args, key))
    return cfg


# -- curve sources -------------------------------------------------------------


def load_spec(cfg):
    if (cfg.builtin is None) == (cfg.csv is None):
        raise InputError("give exactly one of --builtin or --csv")
    if cfg.csv is not None:
        return curves.read_curve_csv(cfg.csv)
    family, params = parse_builtin(cfg.builtin)
    return curves.make_builtin_curve(family, params)


def _domain(cfg, spec):
    if cfg.domain is not None:
        if len(cfg.domain) != 2:
            raise InputError("--domain needs lo,hi")
        return cfg.domain
    if isinstance(spec, curves.SampledSpec):
        return float(spec.table_t[0]), float(spec.table_t[-1])
    return getattr(spec, "validated_domain", None) or curves.default_domain(spec)


def sample_unit_speed(cfg, spec, jet_order):
    source = "analytic" if spec.analytic and not cfg.finite_difference else "finite-difference"
    base = curves.sample_jets(spec, _domain(cfg, spec), cfg.count, jet_order, source)
    return curves.reparameterize_arclength(base)


def _vertex(cfg, n):
    if cfg.vertex is None:
        return None
    if len(cfg.vertex) != n:
        raise InputError(f"--vertex has {len(cfg.vertex)} components, curve lives in E^{n}")
    return np.asarray(cfg.vertex, dtype=float)


# -- output --------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


def write_json(path, payload):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def _out(cfg, name):
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, name)


def _guard(fn, *args, **kwargs):
    """Run a detector, turning library errors into an ``error`` entry."""
    try:
        return fn(*args, **kwargs)
    except (CurveError, FrameError, CorrespondenceError, ValueError) as exc:
        return {"error": str(exc)}


def _dict(result):
    return result if isinstance(result, dict) else result.to_dict()


# -- commands ------------------------------------------------------------------


def cmd_analyze(cfg):
    spec = load_spec(cfg)
    n = spec.dimension
    curve = sample_unit_speed(cfg, spec, min(max(n, 2), curves.MAX_JET_ORDER))
    app = frames.frenet_apparatus(curve)
    p = _vertex(cfg, n)
    report = {"curve": {"name": spec.name, "dimension": n, "samples": curve.count,
                        "jet_source": curve.jet_source, "length": curves.arc_length(curve)},
              "frenet": frames.frenet_report(app, curve)}
    fit = None
    if p is None:
        fit = _guard(rectify.find_vertex, curve)
        if not isinstance(fit, dict):
            p = fit.vertex
            report["vertex_fit"] = {"vertex": fit.vertex, "residual": fit.residual,
                                    "rank_deficient": fit.rank_deficient}
        else:
            report["vertex_fit"] = fit
    if p is not None:
        tol = cfg.tol_rect
        report["vertex"] = p
        report["rectifying"] = _dict(_guard(rectify.check_rectifying, curve, p, tol))
        js = range(n) if cfg.j is None else [cfg.j]
        report["j_rectifying"] = {str(j): _dict(_guard(rectify.check_j_rectifying, curve, p, j,
                                                       tol, app)) for j in js}
        report["geodesic"] = _dict(_guard(cones.geodesic_check, curve, p, cfg.tol_geo))
    else:
        report["rectifying"] = {"error": "no vertex available"}
    report["slant_helix"] = _dict(_guard(cones.slant_helix_check, curve))
    report["rm_normal"] = _dict(_guard(frames.classify_rm_normal, curve))
    eqs = {}
    if n == 3:
        if p is not None:
            res = _guard(correspondence.rectifying_equation_residual_3d, curve, p)
            eqs["rectifying_3d"] = res if isinstance(res, dict) else {
                "a_hat": res[0], "residual": res[1]}
        res = _guard(correspondence.spherical_equation_residual_3d, curve)
        eqs["spherical_3d"] = res if isinstance(res, dict) else {"residual": res[1]}
    if n == 4 and p is not None:
        res = _guard(correspondence.rectifying_equation_residual_4d, curve, p)
        eqs["rectifying_4d"] = res if isinstance(res, dict) else {"residual": res[1]}
    report["equations"] = eqs
    write_json(_out(cfg, "analysis.json"), report)
    correspondence.write_profile_csv(
        _out(cfg, "frenet.csv"), correspondence.make_profile(curve.s, app.curvatures, "rectifying"))
    return EXIT_OK


def _profile_spec(cfg):
    spec = load_spec(cfg)
    if isinstance(spec, curves.SampledSpec):
        raise InputError("the cone profile must be a builtin curve")
    n = spec.dimension
    p = _vertex(cfg, n)
    p = np.zeros(n) if p is None else p
    if not spec.unit_speed:
        lo, hi = curves.default_domain(spec)
        spec = curves.arclength_spec(spec, lo, hi)
    return spec.moved(None, p), p


def cmd_construct(cfg):
    beta, p = _profile_spec(cfg)
    spec = rectify.construct_rectifying(beta, cfg.a, cfg.t0, p, cfg.domain)
    curve = rectify.rectifying_sample(spec, cfg.count, 2)
    rep = rectify.check_rectifying(curve, p, cfg.tol_rect)
    curves.write_curve_csv(_out(cfg, "curve.csv"), curve, jets=2)
    write_json(_out(cfg, "construct.json"), {
        "a": cfg.a, "t0": cfg.t0, "vertex": p, "domain": spec.validated_domain,
        "profile": beta.name, "rectifying": rep.to_dict()})
    return EXIT_OK


def _cone_and_geodesic(cfg):
    beta, p = _profile_spec(cfg)
    cone = cones.make_cone(p, beta)
    spec = cones.cone_geodesic(cone, cfg.a, cfg.t0, cfg.domain)
    return cone, rectify.rectifying_sample(spec, cfg.count, 2), spec


def cmd_geodesic(cfg):
    cone, curve, spec = _cone_and_geodesic(cfg)
    report = {"a": cfg.a, "t0": cfg.t0, "vertex": cone.vertex, "domain": spec.validated_domain,
              "planar_cone": cone.planar,
              "geodesic": cones.geodesic_check(curve, cone.vertex, cfg.tol_geo).to_dict(),
              "rectifying": rectify.check_rectifying(curve, cone.vertex, cfg.tol_rect).to_dict(),
              "circularity": cones.circularity_check(cone).to_dict(),
              "slant_helix": _dict(_guard(cones.slant_helix_check, curve))}
    curves.write_curve_csv(_out(cfg, "geodesic.csv"), curve, jets=2)
    write_json(_out(cfg, "geodesic.json"), report)
    return EXIT_OK


def cmd_unroll(cfg):
    cone, curve, spec = _cone_and_geodesic(cfg)
    if cone.dimension != 3:
        raise InputError("unroll needs a cone in E^3")
    image = cones.unroll_2cone(cone, curve)
    curves.write_curve_csv(_out(cfg, "unrolled.csv"), image, jets=1)
    write_json(_out(cfg, "unroll.json"), {
        "a": cfg.a, "t0": cfg.t0, "vertex": cone.vertex,
        "chord_deviation": curves.chord_deviation(image.points),
        "length": curves.arc_length(curve), "unrolled_length": curves.arc_length(image)})
    return EXIT_OK


def cmd_map(cfg):
    source_side = "rectifying" if cfg.to == "spherical" else "spherical"
    if cfg.profile is not None:
        try:
            prof = correspondence.read_profile_csv(cfg.profile, source_side)
        except OSError as exc:
            raise InputError(f"cannot read {cfg.profile}: {exc.strerror}")
    else:
        spec = load_spec(cfg)
        curve = sample_unit_speed(cfg, spec, min(spec.dimension, curves.MAX_JET_ORDER))
        b = None
        if source_side == "rectifying":
            p = _vertex(cfg, spec.dimension)
            p = rectify.find_vertex(curve).vertex if p is None else p
            b = rectify.check_rectifying(curve, p).b
        prof = correspondence.measure_profile(curve, source_side, b)
    if cfg.to == "spherical":
        mapped = correspondence.rectifying_to_spherical(prof)
    else:
        mapped = correspondence.spherical_to_rectifying(prof)
    correspondence.write_profile_csv(_out(cfg, "profile.csv"), mapped)
    report = {"from": source_side, "to": cfg.to, "profile": mapped.to_dict()}
    syn = correspondence.curve_from_curvatures(mapped)
    curves.write_curve_csv(_out(cfg, "mapped_curve.csv"), syn)
    if cfg.to == "rectifying":
        fit = rectify.find_vertex(syn)
        report["rectifying"] = rectify.check_rectifying(syn, fit.vertex, cfg.tol_rect or 1e-4).to_dict()
        if syn.dimension == 4:
            report["rectifying_4d_residual"] = _guard(
                lambda: correspondence.rectifying_equation_residual_4d(syn, fit.vertex)[1])
    elif syn.dimension == 3:
        report["spherical_3d_residual"] = _guard(
            lambda: correspondence.spherical_equation_residual_3d(syn)[1])
    report["rm_normal"] = _dict(_guard(frames.classify_rm_normal, syn))
    write_json(_out(cfg, "map.json"), report)
    return EXIT_OK


def cmd_verify(cfg):
    suite = verify.SuiteConfig(cfg.seed, cfg.tol_rect, cfg.tol_geo)
    results = verify.run_suite(suite, None if cfg.only is None else set(cfg.only))
    report, timing = verify.suite_report(results, suite)
    report["timing"] = timing
    write_json(_out(cfg, "verify.json"), report)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name:14s} {r.headline().describe()}")
    return EXIT_OK if report["passed"] else EXIT_FAILED


COMMANDS = {"analyze": cmd_analyze, "construct": cmd_construct, "geodesic": cmd_geodesic,
            "map": cmd_map, "unroll": cmd_unroll, "verify": cmd_verify}


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return COMMANDS[cfg.command](cfg)
    except NonRegularCurveError as exc:
        print(f"rectcurves: non-regular curve: {exc}", file=sys.stderr)
        return EXIT_NONREGULAR
    except (InputError, CurveInputError) as exc:
        print(f"rectcurves: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CurveError, FrameError, CorrespondenceError, ValueError) as exc:
        print(f"rectcurves: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
