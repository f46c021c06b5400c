"""Acceptance criteria, each run at its stated tolerance through the verify suite.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""
import time

import pytest

from rectcurves import verify

from conftest import ACCEPTANCE_LINES


@pytest.fixture(scope="module")
def suite():
    start = time.perf_counter()
    results = verify.run_suite(verify.SuiteConfig())
    return {r.name: r for r in results}, time.perf_counter() - start


def _measurements(suite, names, exclude=()):
    results, _ = suite
    return [m for name in names for m in results[name].measurements
            if m.quantity not in exclude]


def _record(number, title, measurements):
    passed = all(m.passed for m in measurements)
    failing = [m for m in measurements if not m.passed]
    head = failing[0] if failing else max(measurements, key=verify._badness)
    ACCEPTANCE_LINES[number] = (f"{'PASS' if passed else 'FAIL'} {number:2d}. {title}: "
                                f"{head.describe()}")
    return passed, failing


def _assert(number, title, measurements):
    assert measurements, "no measurements gathered"
    passed, failing = _record(number, title, measurements)
    assert passed, "; ".join(m.describe() for m in failing)


def test_criterion_01_rectifying_equivalence(suite):
    _assert(1, "T1-equiv", _measurements(suite, ["T1-equiv"]))


def test_criterion_02_euler_lagrange_residual(suite):
    _assert(2, "EL-residual", _measurements(suite, ["EL-residual"]))


def test_criterion_03_geodesics(suite):
    _assert(3, "T2-geodesic", _measurements(suite, ["T2-geodesic"]))


def test_criterion_04_rho_and_coordinate_ode(suite):
    _assert(4, "L1-rho", _measurements(suite, ["L1-rho"]))


def test_criterion_05_j_rectifying_and_exclusion(suite):
    _assert(5, "T4-jrect + L2-exclusion", _measurements(suite, ["T4-jrect", "L2-exclusion"]))


def test_criterion_06_slant_helices(suite):
    _assert(6, "T3-slant + P1-circular", _measurements(suite, ["T3-slant", "P1-circular"]))


def test_criterion_07_hypercone_slant_helix(suite):
    _assert(7, "C2-hyperdim", _measurements(suite, ["C2-hyperdim"]))


def test_criterion_08_characteristic_equations(suite):
    _assert(8, "3d-eq + 4d-eq", _measurements(suite, ["3d-eq", "4d-eq"]))


def test_criterion_09_correspondence(suite):
    _assert(9, "T5-map", _measurements(suite, ["T5-map"]))


TANGENTIAL_RATE = "|<xi', T>|"


def test_criterion_10_rm_classification(suite):
    """Everything in T6-rm except the tangential-rate bound on the sphere normal."""
    ms = _measurements(suite, ["T6-rm"], exclude=(TANGENTIAL_RATE,))
    assert ms
    passed, failing = _record(10, "T6-rm", _measurements(suite, ["T6-rm"]))
    assert all(m.passed for m in ms), "; ".join(m.describe() for m in ms if not m.passed)


@pytest.mark.xfail(strict=True, reason="<xi', T> = 1/R for the unit sphere normal xi = "
                   "(alpha - p) / R, so the 1e-8 bound cannot hold; the normal part of "
                   "xi' is what vanishes")
def test_criterion_10_sphere_normal_tangential_rate(suite):
    ms = [m for m in _measurements(suite, ["T6-rm"]) if m.quantity == TANGENTIAL_RATE]
    assert len(ms) == 1
    assert ms[0].passed, ms[0].describe()


def test_criterion_11_frame_hygiene(suite):
    _assert(11, "frame-hygiene", _measurements(suite, ["frame-hygiene"]))


def test_suite_wall_time(suite):
    _, elapsed = suite
    m = verify.Measurement("verify suite wall time [s]", elapsed, 60.0, wallclock=True)
    _assert(12, "total wall time", [m])
