"""Black-box tests of the command-line front end."""
import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from rectcurves import curves


def run(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "rectcurves", *map(str, args)],
                          capture_output=True, text=True, cwd=cwd, timeout=300)


def load(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def test_analyze_helix_writes_reports(tmp_path):
    proc = run("analyze", "--builtin", "helix:a=1,b=1", "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    with open(tmp_path / "frenet.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["s", "kappa0", "kappa1"]
    values = np.array(rows[1:], dtype=float)
    np.testing.assert_allclose(values[:, 1:], 0.5, atol=1e-8)
    report = load(tmp_path / "analysis.json")
    for key in ("curve", "frenet", "slant_helix", "rm_normal", "equations"):
        assert key in report
    assert report["rm_normal"]["verdict"] == "neither"


def test_analyze_csv_with_vertex(tmp_path):
    t = np.linspace(0.0, 2.0, 401)
    spec = curves.helix()
    curves.write_table_csv(tmp_path / "curve.csv", t, spec.evaluate(t))
    proc = run("analyze", "--csv", tmp_path / "curve.csv", "--vertex", "0,0,0",
               "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    report = load(tmp_path / "analysis.json")
    assert isinstance(report["rectifying"]["verdict"], bool)
    assert report["curve"]["jet_source"] == "finite-difference"
    assert set(report["j_rectifying"]) == {"0", "1", "2"}


def test_analyze_plane_circle_is_hyperplane(tmp_path):
    proc = run("analyze", "--builtin", "plane_circle:r=2,n=3", "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert load(tmp_path / "analysis.json")["rm_normal"]["verdict"] == "hyperplane"


def test_analyze_output_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run("analyze", "--builtin", "helix", "--out", tmp_path / name).returncode == 0
    for f in ("analysis.json", "frenet.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


@pytest.mark.parametrize("args,code,message", [
    (["--csv", "missing.csv"], 2, "missing.csv"),
    (["--builtin", "nosuchcurve"], 2, "nosuchcurve"),
    (["--builtin", "helix", "--csv", "x.csv"], 2, "exactly one"),
    (["--builtin", "helix:a=1", "--vertex", "0,0"], 2, "--vertex"),
])
def test_bad_input_exits_2(tmp_path, args, code, message):
    proc = run("analyze", *args, "--out", tmp_path, cwd=tmp_path)
    assert proc.returncode == code
    assert message in proc.stderr


def test_malformed_csv_exits_2(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,x0,x1\n0,1\n")
    proc = run("analyze", "--csv", path, "--out", tmp_path)
    assert proc.returncode == 2
    assert "bad.csv" in proc.stderr


def test_cusp_exits_3(tmp_path):
    # (t^2, t^3) has a cusp at t = 0.
    t = np.linspace(-1.0, 1.0, 201)
    curves.write_table_csv(tmp_path / "cusp.csv", t, np.stack([t**2, t**3, 0 * t], 1))
    proc = run("analyze", "--csv", tmp_path / "cusp.csv", "--out", tmp_path)
    assert proc.returncode == 3
    assert "non-regular" in proc.stderr


def test_construct_writes_rectifying_curve(tmp_path):
    proc = run("construct", "--builtin", "small_circle_sphere", "--a", "1.5", "--t0", "0.3",
               "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    report = load(tmp_path / "construct.json")
    assert report["rectifying"]["verdict"] is True
    spec = curves.read_curve_csv(tmp_path / "curve.csv")
    assert spec.dimension == 3
    # The emitted table feeds straight back into analyze.
    proc = run("analyze", "--csv", tmp_path / "curve.csv", "--vertex", "0,0,0",
               "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert load(tmp_path / "analysis.json")["rectifying"]["verdict"] is True


def test_geodesic_on_circular_cone(tmp_path):
    proc = run("geodesic", "--builtin", "small_circle_sphere", "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    report = load(tmp_path / "geodesic.json")
    assert report["geodesic"]["verdict"] and report["rectifying"]["verdict"]
    assert report["circularity"]["verdict"] and report["slant_helix"]["verdict"]
    assert report["planar_cone"] is False


def test_unroll_gives_a_line(tmp_path):
    proc = run("unroll", "--builtin", "small_circle_sphere", "--a", "2", "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    report = load(tmp_path / "unroll.json")
    assert report["chord_deviation"] < 1e-6
    assert report["unrolled_length"] == pytest.approx(report["length"], abs=1e-8)


def test_map_profile_to_rectifying(tmp_path):
    s = np.linspace(0.0, 2 * math.pi, 1001)
    with open(tmp_path / "in.csv", "w") as fh:
        fh.write("s,kappa0,kappa1\n")
        for v in s.tolist():
            fh.write(f"{v!r},{1.0 + 0.2 * math.cos(v)!r},{0.3 * math.sin(v) + 0.5!r}\n")
    proc = run("map", "--profile", tmp_path / "in.csv", "--to", "rectifying", "--out", tmp_path)
    assert proc.returncode == 0, proc.stderr
    report = load(tmp_path / "map.json")
    assert report["profile"]["dimension"] == 4
    with open(tmp_path / "profile.csv") as fh:
        assert fh.readline().strip() == "s,kappa0,kappa1,kappa2"


def test_map_builtin_without_positive_shift_exits_1(tmp_path):
    proc = run("map", "--builtin", "helix", "--to", "spherical", "--out", tmp_path)
    assert proc.returncode == 1
    assert "tangential coordinate vanishes" in proc.stderr


def test_nonpositive_tolerance_is_rejected(tmp_path):
    proc = run("verify", "--tol-rect", "0", "--out", tmp_path)
    assert proc.returncode == 2


# -- verify ----------------------------------------------------------------------

@pytest.fixture(scope="module")
def default_runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("verify")
    procs = {name: run("verify", *extra, "--out", base / name)
             for name, extra in (("first", []), ("second", []), ("seed7", ["--seed", "7"]))}
    return base, procs


def _deterministic_part(path):
    report = load(path)
    report.pop("timing")
    return report


def test_verify_lists_every_named_check(default_runs):
    base, procs = default_runs
    report = load(base / "first" / "verify.json")
    names = [c["name"] for c in report["checks"]]
    assert names == sorted(names)
    assert set(names) >= {"T1-equiv", "T2-geodesic", "EL-residual", "P1-circular", "T3-slant",
                          "C2-hyperdim", "L1-rho", "L2-exclusion", "T4-jrect", "T5-map",
                          "T6-rm", "3d-eq", "4d-eq"}
    for c in report["checks"]:
        assert {"passed", "residual", "tolerance", "measurements"} <= set(c)
        assert c["name"] in report["timing"]["checks"]
    lines = procs["first"].stdout.splitlines()
    assert len(lines) == len(names)
    assert all(line.split()[0] in ("PASS", "FAIL") for line in lines)


def test_verify_only_rm_check_fails(default_runs):
    # T6-rm holds the unattainable tangential-rate bound on the sphere normal.
    base, procs = default_runs
    report = load(base / "first" / "verify.json")
    failing = {c["name"] for c in report["checks"] if not c["passed"]}
    assert failing == {"T6-rm"}
    assert procs["first"].returncode == 1


def test_verify_is_byte_deterministic(default_runs):
    base, _ = default_runs
    assert _deterministic_part(base / "first" / "verify.json") == \
        _deterministic_part(base / "second" / "verify.json")
    first = load(base / "first" / "verify.json")
    assert all(m["value"] == "see timing" for c in first["checks"] for m in c["measurements"]
               if "runtime" in m["quantity"])


def test_verify_seed_keeps_pass_set(default_runs):
    base, _ = default_runs
    a = load(base / "first" / "verify.json")
    b = load(base / "seed7" / "verify.json")
    assert b["seed"] == 7
    assert {c["name"]: c["passed"] for c in a["checks"]} == \
        {c["name"]: c["passed"] for c in b["checks"]}


def test_verify_tight_tolerance_fails_t1(tmp_path):
    proc = run("verify", "--only", "T1-equiv", "--tol-rect", "1e-12", "--out", tmp_path)
    assert proc.returncode == 1
    assert proc.stdout.startswith("FAIL T1-equiv")
    report = load(tmp_path / "verify.json")
    assert report["tol_rect"] == 1e-12
