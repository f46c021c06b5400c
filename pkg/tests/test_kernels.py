import math
import os
import pathlib
import runpy
import subprocess
import sys

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from rectcurves import _pykernels, kernels


def _frenet_stack(n, N, rng):
    K = np.zeros((N, n, n))
    kap = 0.5 + rng.random((N, n - 1))
    idx = np.arange(n - 1)
    K[:, idx, idx + 1] = kap
    K[:, idx + 1, idx] = -kap
    return K


def test_backend_is_selected():
    assert kernels.BACKEND in kernels.available_backends()
    assert "python" in kernels.available_backends()


def test_environment_forces_python_backend():
    env = dict(os.environ, RECTCURVES_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "from rectcurves import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_gram_schmidt_batch(backend, rng):
    V = rng.standard_normal((50, 4, 5))
    V[3, 2] = V[3, 0] + V[3, 1]  # dependent row
    Q, norms, acc = backend.gram_schmidt_batch(V, 1e-10)
    assert acc[3].tolist() == [1, 1, 0, 1]
    assert norms[3, 2] < 1e-12
    for i in range(50):
        keep = acc[i].astype(bool)
        q = Q[i][keep]
        assert np.max(np.abs(q @ q.T - np.eye(keep.sum()))) < 1e-13
    # Norms are the diagonal of R in a QR factorization.
    R = np.linalg.qr(V[0].T)[1]
    np.testing.assert_allclose(norms[0], np.abs(np.diag(R)), rtol=1e-12)


def _rotation_system(N, h, omega=1.3):
    K = np.zeros((N, 2, 2))
    K[:, 0, 1], K[:, 1, 0] = omega, -omega
    return K


def test_rk4_affine_matches_scipy_at_fourth_order(backend):
    f = np.array([1.0, 0.0])
    errs = []
    for N, h in ((201, 0.02), (401, 0.01)):
        K = _rotation_system(N, h)
        s = np.arange(N) * h
        Y = backend.rk4_affine(K, K[:-1], f, np.array([0.0, 1.0]), h)
        ref = solve_ivp(lambda t, y: K[0] @ y + f, (0, s[-1]), [0.0, 1.0], t_eval=s,
                        rtol=1e-13, atol=1e-14, method="DOP853").y.T
        errs.append(np.max(np.abs(Y - ref)))
    assert errs[1] < 5e-9
    assert 14 < errs[0] / errs[1] < 18


def test_rk4_frenet_circle_closes(backend):
    r = 2.0
    N = 2001
    h = 2 * math.pi * r / (N - 1)
    K = np.zeros((N, 2, 2))
    K[:, 0, 1], K[:, 1, 0] = 1 / r, -1 / r
    pts, frames = backend.rk4_frenet(K, K[:-1], np.eye(2), np.zeros(2), h, 16)
    assert np.linalg.norm(pts[-1] - pts[0]) < 1e-10
    np.testing.assert_allclose(np.linalg.norm(pts - [0, r], axis=1), r, atol=1e-10)


def test_rk4_transport_preserves_orthonormality(backend):
    N = 2001
    s = np.linspace(0, 6, N)
    h = s[1] - s[0]

    def tangent(t):
        return np.stack([np.cos(t), np.sin(t), np.zeros_like(t)], 1)

    T = tangent(s)
    dT = np.stack([-np.sin(s), np.cos(s), 0 * s], 1)
    mid = 0.5 * (s[:-1] + s[1:])
    V0 = np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
    V = backend.rk4_transport(T, dT, tangent(mid), np.stack([-np.sin(mid), np.cos(mid), 0 * mid], 1),
                              V0, h, 16)
    # The in-plane normal rotates with the tangent; the plane normal is fixed.
    np.testing.assert_allclose(V[:, 0], np.tile([0, 0, 1.0], (N, 1)), atol=1e-12)
    np.testing.assert_allclose(V[:, 1], dT, atol=1e-9)


@pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")
def test_backends_agree(rng):
    c, p = kernels.compiled, _pykernels
    V = rng.standard_normal((30, 5, 5))
    for a, b in zip(c.gram_schmidt_batch(V, 1e-10), p.gram_schmidt_batch(V, 1e-10)):
        np.testing.assert_allclose(a, b, atol=1e-13)
    K = _frenet_stack(4, 300, rng)
    Km = 0.5 * (K[1:] + K[:-1])
    F0 = np.eye(4)
    for a, b in zip(c.rk4_frenet(K, Km, F0, np.zeros(4), 0.01, 16),
                    p.rk4_frenet(K, Km, F0, np.zeros(4), 0.01, 16)):
        np.testing.assert_allclose(a, b, atol=1e-12)
    f = np.eye(4)[0]
    np.testing.assert_allclose(c.rk4_affine(K, Km, f, np.ones(4), 0.01),
                               p.rk4_affine(K, Km, f, np.ones(4), 0.01), atol=1e-12)
    T = rng.standard_normal((300, 4))
    T /= np.linalg.norm(T, axis=1)[:, None]
    dT = rng.standard_normal((300, 4)) * 0.1
    V0 = np.linalg.qr(rng.standard_normal((4, 4)))[0][:3]
    args = (T, dT, T[1:], dT[1:], V0, 0.01, 16)
    np.testing.assert_allclose(c.rk4_transport(*args), p.rk4_transport(*args), atol=1e-12)


def test_benchmark_script_runs(capsys):
    path = pathlib.Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    bench = runpy.run_path(str(path))
    bench["main"](["--samples", "50", "--repeat", "1"])
    out = capsys.readouterr().out
    for name in ("gram_schmidt_batch", "rk4_affine", "rk4_frenet", "rk4_transport"):
        assert name in out
