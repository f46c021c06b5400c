# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: batched Gram-Schmidt and fixed-step RK4 integrators.

Mirrors ``_pykernels`` function for function.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef inline double _dot(double[::1] a, double[::1] b, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(n):
        acc += a[i] * b[i]
    return acc


cdef void _mgs_rows(double[:, ::1] F) noexcept nogil:
    cdef Py_ssize_t rows = F.shape[0], n = F.shape[1]
    cdef Py_ssize_t i, j, k, p
    cdef double c, nrm
    for i in range(rows):
        for p in range(2):
            for j in range(i):
                c = 0.0
                for k in range(n):
                    c += F[i, k] * F[j, k]
                for k in range(n):
                    F[i, k] -= c * F[j, k]
        nrm = 0.0
        for k in range(n):
            nrm += F[i, k] * F[i, k]
        nrm = sqrt(nrm)
        for k in range(n):
            F[i, k] /= nrm


def gram_schmidt_batch(vectors, double rel_tol):
    cdef double[:, :, ::1] V = np.ascontiguousarray(vectors, dtype=np.float64)
    cdef Py_ssize_t N = V.shape[0], kk = V.shape[1], n = V.shape[2]
    Q_arr = np.zeros((N, kk, n))
    norms_arr = np.zeros((N, kk))
    acc_arr = np.zeros((N, kk), dtype=np.int8)
    cdef double[:, :, ::1] Q = Q_arr
    cdef double[:, ::1] norms = norms_arr
    cdef cnp.int8_t[:, ::1] accepted = acc_arr
    cdef double[::1] w = np.empty(n)
    cdef Py_ssize_t i, j, l, k, p
    cdef double scale, r, c
    with nogil:
        for i in range(N):
            scale = 0.0
            for j in range(kk):
                r = 0.0
                for k in range(n):
                    r += V[i, j, k] * V[i, j, k]
                if r > scale:
                    scale = r
            scale = sqrt(scale)
            for j in range(kk):
                for k in range(n):
                    w[k] = V[i, j, k]
                for p in range(2):
                    for l in range(j):
                        if accepted[i, l]:
                            c = 0.0
                            for k in range(n):
                                c += w[k] * Q[i, l, k]
                            for k in range(n):
                                w[k] -= c * Q[i, l, k]
                r = sqrt(_dot(w, w, n))
                norms[i, j] = r
                if scale > 0.0 and r > rel_tol * scale:
                    accepted[i, j] = 1
                    for k in range(n):
                        Q[i, j, k] = w[k] / r
    return Q_arr, norms_arr, acc_arr


cdef inline void _matvec_add(double[:, ::1] A, double[::1] x, double[::1] f,
                             double[::1] out, Py_ssize_t d) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(d):
        acc = f[i]
        for j in range(d):
            acc += A[i, j] * x[j]
        out[i] = acc


def rk4_affine(K, Kmid, forcing, y0, double h):
    cdef double[:, :, ::1] Kv = np.ascontiguousarray(K, dtype=np.float64)
    cdef double[:, :, ::1] Km = np.ascontiguousarray(Kmid, dtype=np.float64)
    cdef double[::1] f = np.ascontiguousarray(forcing, dtype=np.float64)
    cdef Py_ssize_t N = Kv.shape[0], d = Kv.shape[1]
    Y_arr = np.empty((N, d))
    cdef double[:, ::1] Y = Y_arr
    cdef double[::1] y = np.array(y0, dtype=np.float64)
    cdef double[::1] k1 = np.empty(d), k2 = np.empty(d), k3 = np.empty(d), k4 = np.empty(d)
    cdef double[::1] tmp = np.empty(d)
    cdef Py_ssize_t i, j
    with nogil:
        for j in range(d):
            Y[0, j] = y[j]
        for i in range(N - 1):
            _matvec_add(Kv[i], y, f, k1, d)
            for j in range(d):
                tmp[j] = y[j] + 0.5 * h * k1[j]
            _matvec_add(Km[i], tmp, f, k2, d)
            for j in range(d):
                tmp[j] = y[j] + 0.5 * h * k2[j]
            _matvec_add(Km[i], tmp, f, k3, d)
            for j in range(d):
                tmp[j] = y[j] + h * k3[j]
            _matvec_add(Kv[i + 1], tmp, f, k4, d)
            for j in range(d):
                y[j] = y[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
                Y[i + 1, j] = y[j]
    return Y_arr


cdef inline void _matmat(double[:, ::1] A, double[:, ::1] B, double[:, ::1] out,
                         Py_ssize_t r, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j, k
    cdef double acc
    for i in range(r):
        for k in range(n):
            acc = 0.0
            for j in range(r):
                acc += A[i, j] * B[j, k]
            out[i, k] = acc


def rk4_frenet(K, Kmid, frame0, x0, double h, int renorm_every):
    cdef double[:, :, ::1] Kv = np.ascontiguousarray(K, dtype=np.float64)
    cdef double[:, :, ::1] Km = np.ascontiguousarray(Kmid, dtype=np.float64)
    cdef double[:, ::1] F = np.array(frame0, dtype=np.float64)
    cdef double[::1] x = np.array(x0, dtype=np.float64)
    cdef Py_ssize_t N = Kv.shape[0], r = F.shape[0], n = F.shape[1]
    frames_arr = np.empty((N, r, n))
    points_arr = np.empty((N, n))
    cdef double[:, :, ::1] frames = frames_arr
    cdef double[:, ::1] points = points_arr
    cdef double[:, ::1] d1 = np.empty((r, n)), d2 = np.empty((r, n))
    cdef double[:, ::1] d3 = np.empty((r, n)), d4 = np.empty((r, n))
    cdef double[:, ::1] S = np.empty((r, n))
    cdef double[::1] xs = np.empty(n)
    cdef Py_ssize_t i, a, k
    with nogil:
        frames[0, :, :] = F
        points[0, :] = x
        for i in range(N - 1):
            for k in range(n):
                xs[k] = F[0, k]
            _matmat(Kv[i], F, d1, r, n)
            for a in range(r):
                for k in range(n):
                    S[a, k] = F[a, k] + 0.5 * h * d1[a, k]
            for k in range(n):
                xs[k] += 2.0 * S[0, k]
            _matmat(Km[i], S, d2, r, n)
            for a in range(r):
                for k in range(n):
                    S[a, k] = F[a, k] + 0.5 * h * d2[a, k]
            for k in range(n):
                xs[k] += 2.0 * S[0, k]
            _matmat(Km[i], S, d3, r, n)
            for a in range(r):
                for k in range(n):
                    S[a, k] = F[a, k] + h * d3[a, k]
            for k in range(n):
                xs[k] += S[0, k]
            _matmat(Kv[i + 1], S, d4, r, n)
            for k in range(n):
                x[k] = x[k] + (h / 6.0) * xs[k]
            for a in range(r):
                for k in range(n):
                    F[a, k] = F[a, k] + (h / 6.0) * (d1[a, k] + 2.0 * d2[a, k]
                                                      + 2.0 * d3[a, k] + d4[a, k])
            if renorm_every > 0 and (i + 1) % renorm_every == 0:
                _mgs_rows(F)
            frames[i + 1, :, :] = F
            points[i + 1, :] = x
    return points_arr, frames_arr


cdef inline void _transport_rhs(double[:, ::1] V, double[::1] T, double[::1] dT,
                                double[:, ::1] out, Py_ssize_t r, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t a, k
    cdef double c
    for a in range(r):
        c = 0.0
        for k in range(n):
            c += V[a, k] * dT[k]
        for k in range(n):
            out[a, k] = -c * T[k]


def rk4_transport(T, dT, Tmid, dTmid, V0, double h, int renorm_every):
    cdef double[:, ::1] Tv = np.ascontiguousarray(T, dtype=np.float64)
    cdef double[:, ::1] dTv = np.ascontiguousarray(dT, dtype=np.float64)
    cdef double[:, ::1] Tm = np.ascontiguousarray(Tmid, dtype=np.float64)
    cdef double[:, ::1] dTm = np.ascontiguousarray(dTmid, dtype=np.float64)
    cdef double[:, ::1] V = np.array(V0, dtype=np.float64)
    cdef Py_ssize_t N = Tv.shape[0], r = V.shape[0], n = V.shape[1]
    out_arr = np.empty((N, r, n))
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, ::1] k1 = np.empty((r, n)), k2 = np.empty((r, n))
    cdef double[:, ::1] k3 = np.empty((r, n)), k4 = np.empty((r, n))
    cdef double[:, ::1] S = np.empty((r, n))
    cdef Py_ssize_t i, a, k
    cdef double c
    with nogil:
        out[0, :, :] = V
        for i in range(N - 1):
            _transport_rhs(V, Tv[i], dTv[i], k1, r, n)
            for a in range(r):
                for k in range(n):
                    S[a, k] = V[a, k] + 0.5 * h * k1[a, k]
            _transport_rhs(S, Tm[i], dTm[i], k2, r, n)
            for a in range(r):
                for k in range(n):
                    S[a, k] = V[a, k] + 0.5 * h * k2[a, k]
            _transport_rhs(S, Tm[i], dTm[i], k3, r, n)
            for a in range(r):
                for k in range(n):
                    S[a, k] = V[a, k] + h * k3[a, k]
            _transport_rhs(S, Tv[i + 1], dTv[i + 1], k4, r, n)
            for a in range(r):
                for k in range(n):
                    V[a, k] = V[a, k] + (h / 6.0) * (k1[a, k] + 2.0 * k2[a, k]
                                                      + 2.0 * k3[a, k] + k4[a, k])
            if renorm_every > 0 and (i + 1) % renorm_every == 0:
                for a in range(r):
                    c = 0.0
                    for k in range(n):
                        c += V[a, k] * Tv[i + 1, k]
                    for k in range(n):
                        V[a, k] -= c * Tv[i + 1, k]
                _mgs_rows(V)
            out[i + 1, :, :] = V
    return out_arr
