"""Pure-Python (numpy) reference implementations of the hot kernels.

Signatures match ``_ckernels`` and results agree to rounding; this module is used
whenever the compiled extension is unavailable.
"""
import numpy as np


def _mgs_rows(F, start=0):
    # In-place modified Gram-Schmidt on rows, one reorthogonalization pass.
    for i in range(start, F.shape[0]):
        w = F[i]
        for _ in range(2):
            for j in range(i):
                w -= np.dot(w, F[j]) * F[j]
        w /= np.sqrt(np.dot(w, w))


def gram_schmidt_batch(vectors, rel_tol):
    """Orthonormalize the rows of each ``vectors[i]`` (shape ``(N, k, n)``).

    Returns ``(Q, norms, accepted)``.  A row is accepted when its norm after
    projection exceeds ``rel_tol`` times the largest input norm of its sample;
    rejected rows are zero in ``Q`` and do not take part in later projections.
    """
    V = np.ascontiguousarray(vectors, dtype=float)
    N, k, n = V.shape
    Q = np.zeros_like(V)
    norms = np.zeros((N, k))
    accepted = np.zeros((N, k), dtype=np.int8)
    scale = np.sqrt((V * V).sum(axis=2)).max(axis=1)
    for i in range(N):
        basis = []
        for j in range(k):
            w = V[i, j].copy()
            for _ in range(2):
                for q in basis:
                    w -= np.dot(w, q) * q
            r = np.sqrt(np.dot(w, w))
            norms[i, j] = r
            if scale[i] > 0.0 and r > rel_tol * scale[i]:
                q = w / r
                Q[i, j] = q
                accepted[i, j] = 1
                basis.append(q)
    return Q, norms, accepted


def rk4_affine(K, Kmid, forcing, y0, h):
    """Classic RK4 for ``y' = K(s) y + forcing`` on a uniform grid."""
    K = np.asarray(K, dtype=float)
    Kmid = np.asarray(Kmid, dtype=float)
    f = np.asarray(forcing, dtype=float)
    N = K.shape[0]
    Y = np.empty((N, K.shape[1]))
    y = np.array(y0, dtype=float)
    Y[0] = y
    for i in range(N - 1):
        k1 = K[i] @ y + f
        k2 = Kmid[i] @ (y + 0.5 * h * k1) + f
        k3 = Kmid[i] @ (y + 0.5 * h * k2) + f
        k4 = K[i + 1] @ (y + h * k3) + f
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        Y[i + 1] = y
    return Y


def rk4_frenet(K, Kmid, frame0, x0, h, renorm_every):
    """RK4 for the frame system ``F' = K F`` together with ``x' = F[0]``."""
    K = np.asarray(K, dtype=float)
    Kmid = np.asarray(Kmid, dtype=float)
    N = K.shape[0]
    F = np.array(frame0, dtype=float)
    x = np.array(x0, dtype=float)
    n = F.shape[1]
    frames = np.empty((N,) + F.shape)
    points = np.empty((N, n))
    frames[0] = F
    points[0] = x
    for i in range(N - 1):
        d1 = K[i] @ F
        F2 = F + 0.5 * h * d1
        d2 = Kmid[i] @ F2
        F3 = F + 0.5 * h * d2
        d3 = Kmid[i] @ F3
        F4 = F + h * d3
        d4 = K[i + 1] @ F4
        x = x + (h / 6.0) * (F[0] + 2.0 * F2[0] + 2.0 * F3[0] + F4[0])
        F = F + (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
        if renorm_every > 0 and (i + 1) % renorm_every == 0:
            _mgs_rows(F)
        frames[i + 1] = F
        points[i + 1] = x
    return points, frames


def _transport_rhs(V, T, dT):
    return -np.outer(V @ dT, T)


def rk4_transport(T, dT, Tmid, dTmid, V0, h, renorm_every):
    """RK4 for the normal transport ``V' = -<V, T'> T`` of each row of ``V``."""
    T = np.asarray(T, dtype=float)
    dT = np.asarray(dT, dtype=float)
    Tmid = np.asarray(Tmid, dtype=float)
    dTmid = np.asarray(dTmid, dtype=float)
    V = np.array(V0, dtype=float)
    N = T.shape[0]
    out = np.empty((N,) + V.shape)
    out[0] = V
    for i in range(N - 1):
        k1 = _transport_rhs(V, T[i], dT[i])
        k2 = _transport_rhs(V + 0.5 * h * k1, Tmid[i], dTmid[i])
        k3 = _transport_rhs(V + 0.5 * h * k2, Tmid[i], dTmid[i])
        k4 = _transport_rhs(V + h * k3, T[i + 1], dT[i + 1])
        V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if renorm_every > 0 and (i + 1) % renorm_every == 0:
            t = T[i + 1]
            V -= np.outer(V @ t, t)
            _mgs_rows(V)
        out[i + 1] = V
    return out
