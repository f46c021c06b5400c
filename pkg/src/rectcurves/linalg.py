"""Dimension-generic vector utilities: orthonormalization and direction fits."""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels


@dataclass(frozen=True)
class DirectionFit:
    """A fixed unit direction ``d`` with ``<v_i, d> ~ level`` over samples.

    ``residual`` is the largest absolute deviation ``|<v_i, d> - level|``.
    Detectors built on the fit also fill ``verdict`` and ``tolerance``.
    """

    direction: np.ndarray
    level: float
    residual: float
    degenerate: bool = False
    verdict: Optional[bool] = None
    tolerance: Optional[float] = None

    def to_dict(self):
        return {
            "direction": [float(x) for x in self.direction],
            "level": float(self.level),
            "residual": float(self.residual),
            "degenerate": bool(self.degenerate),
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }


def as_vectors(vectors):
    V = np.asarray(vectors, dtype=float)
    if V.ndim == 1:
        V = V[None, :]
    if V.ndim != 2:
        raise ValueError("vectors must form a 2-d array (count, dimension)")
    return V


def orthonormalize(vectors, rank_tol=1e-10):
    """Gram-Schmidt with renormalization.

    Parameters
    ----------
    vectors : sequence of array_like
        Input vectors, all of the same dimension.
    rank_tol : float
        A vector is kept when its norm after projection exceeds
        ``rank_tol`` times the largest input norm.

    Returns
    -------
    basis : ndarray, shape (rank, n)
        Orthonormal vectors spanning the numerically detected span.
    rank : int
    """
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    try:
        V = as_vectors(vectors)
    except ValueError as exc:
        raise ValueError(f"dimension mismatch among input vectors: {exc}") from None
    if V.shape[0] == 0:
        raise ValueError("orthonormalize needs at least one vector")
    Q, _, accepted = kernels.gram_schmidt_batch(V[None, :, :], rank_tol)
    keep = accepted[0].astype(bool)
    return Q[0][keep], int(keep.sum())


def _canonical_sign(d):
    nz = np.flatnonzero(np.abs(d) > 1e-14)
    if nz.size and d[nz[0]] < 0:
        return -d
    return d


def _tie_representative(eigvecs, count):
    # Deterministic unit vector inside a degenerate eigenspace: the normalized
    # projection of the first standard basis vector that is not orthogonal to it.
    E = eigvecs[:, :count]
    n = E.shape[0]
    for i in range(n):
        v = E @ E[i]
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            return _canonical_sign(v / nv)
    return _canonical_sign(E[:, 0])


def fit_constant_direction(samples, tie_tol=1e-12):
    """Unit ``d`` and level ``c`` minimizing ``sum_i (<v_i, d> - c)^2``.

    For fixed ``d`` the optimal level is the mean projection, so the problem
    reduces to the smallest eigenvector of the sample covariance.  Ties in the
    smallest eigenvalue are broken deterministically and the sign is chosen so
    that ``level >= 0``.
    """
    V = as_vectors(samples)
    N, n = V.shape
    spread = np.abs(V - V[0]).max() if N else 0.0
    if N == 0:
        raise ValueError("fit_constant_direction needs samples")
    if spread <= 1e-14 * max(1.0, np.abs(V[0]).max()):
        d = V[0] / np.linalg.norm(V[0])
        return DirectionFit(direction=d, level=1.0, residual=0.0, degenerate=True)
    mean = V.mean(axis=0)
    X = V - mean
    C = X.T @ X / N
    w, U = np.linalg.eigh(C)
    scale = max(w[-1], 1e-300)
    ties = int(np.sum(w - w[0] <= tie_tol * scale))
    if ties > 1:
        d = _tie_representative(U, ties)
    else:
        d = _canonical_sign(U[:, 0])
    level = float(mean @ d)
    if level < 0:
        d = -d
        level = -level
    resid = float(np.max(np.abs(V @ d - level)))
    return DirectionFit(direction=d, level=level, residual=resid, degenerate=ties > 1)
