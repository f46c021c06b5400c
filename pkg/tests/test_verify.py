import math

import pytest

from rectcurves import verify
from rectcurves.verify import CheckResult, Collector, Measurement


@pytest.mark.parametrize("kind,value,limit,passed", [
    ("max", 1e-9, 1e-8, True), ("max", 1e-8, 1e-8, False),
    ("min", 0.5, 1e-2, True), ("min", 1e-3, 1e-2, False),
    ("equal", 0, 0, True), ("equal", 2, 0, False),
])
def test_measurement_kinds(kind, value, limit, passed):
    assert Measurement("q", value, limit, kind).passed is passed


def test_measurement_describe_shows_relation():
    assert Measurement("spread", 0.5, 0.01, "min").describe() == "spread: 0.5 (need > 0.01)"
    assert Measurement("err", 2e-9, 1e-8).describe() == "err: 2e-09 (need < 1e-08)"


def test_wallclock_value_is_kept_out_of_report():
    m = Measurement("runtime [s]", 1.23, 10.0, wallclock=True)
    assert m.to_dict()["value"] == "see timing"
    result = CheckResult("X", [m, Measurement("err", 1e-9, 1e-6)])
    # A passing wall-clock measurement never becomes the headline.
    assert result.headline().quantity == "err"
    assert result.to_dict()["residual"] == 1e-9


def test_collector_keeps_worst_case():
    col = Collector()
    for v in (1e-9, 5e-7, 1e-8):
        col.add("err", v, 1e-6)
    col.add("spread", 0.3, 1e-2, "min")
    col.add("spread", 0.05, 1e-2, "min")
    worst = {m.quantity: m.value for m in col.measurements()}
    assert worst == {"err": 5e-7, "spread": 0.05}


def test_non_finite_values_serialize():
    d = Measurement("exception", math.inf, 0.0).to_dict()
    assert d["value"] == "inf" and d["passed"] is False


def test_suite_config_rejects_nonpositive_tolerance():
    with pytest.raises(ValueError):
        verify.SuiteConfig(tol_rect=0.0)


def test_check_rng_streams_are_named_and_seeded():
    a, b = verify.SuiteConfig(42), verify.SuiteConfig(42)
    assert a.rng("T1-equiv").random() == b.rng("T1-equiv").random()
    assert a.rng("T1-equiv").random() != a.rng("T2-geodesic").random()
    assert a.rng("T1-equiv").random() != verify.SuiteConfig(7).rng("T1-equiv").random()


def test_exceptions_become_failed_results():
    def broken(cfg, pool):
        raise RuntimeError("boom")

    result = verify.run_check("broken", broken, verify.SuiteConfig(), verify.Pool())
    assert not result.passed
    assert "RuntimeError: boom" in result.notes[0]


def test_run_suite_subset_and_report():
    cfg = verify.SuiteConfig()
    results = verify.run_suite(cfg, {"EL-residual", "P1-circular"})
    assert [r.name for r in results] == ["EL-residual", "P1-circular"]
    report, timing = verify.suite_report(results, cfg)
    assert report["passed"] is True
    assert set(timing["checks"]) == {"EL-residual", "P1-circular"}
    assert timing["total"] >= 0
