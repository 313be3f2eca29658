"""Smallest positive eigenpair of the generalized problem K x = lam W x.

K is the (symmetric, positive semidefinite) stiffness matrix whose kernel
contains the constants, W the diagonal lumped mass.  Shifted inverse
iteration on (K + sigma W)^-1 W with W-orthogonal deflation of the constant
vector converges to the first positive eigenvalue; the start vector is a
fixed function of the node coordinates, so the result is deterministic.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from ..errors import NumericalError

_MAX_ITER = 500
_RTOL = 1e-12


def smallest_positive_eigenpair(K, weights, coords):
    n = K.shape[0]
    w = np.asarray(weights, dtype=float)
    wtotal = w.sum()

    def deflate(x):
        return x - (w @ x) / wtotal

    # fixed, coordinate-based start vector (deterministic, non-constant)
    x = coords[:, 0] + 0.5 * coords[:, 1] + 0.25 * coords[:, 2]
    x = deflate(x)
    nrm = np.sqrt(w @ (x * x))
    if nrm < 1e-12 * np.sqrt(wtotal):
        x = deflate(np.arange(n, dtype=float))
        nrm = np.sqrt(w @ (x * x))
    x /= nrm

    # small positive shift keeps the factorization nonsingular; its size only
    # affects the convergence rate, not the limit
    sigma = 1e-3 * (K.diagonal().sum() / max(wtotal, np.finfo(float).tiny)) / n
    sigma = max(sigma, 1e-12)
    lu = splu((K + sigma * sparse.diags(w)).tocsc())

    lam_prev = np.inf
    for it in range(_MAX_ITER):
        y = lu.solve(w * x)
        y = deflate(y)
        nrm = np.sqrt(w @ (y * y))
        if not np.isfinite(nrm) or nrm == 0.0:
            raise NumericalError(
                "inverse iteration collapsed",
                {"iteration": it, "norm": float(nrm)},
            )
        x = y / nrm
        lam = float((x @ (K @ x)) / (w @ (x * x)))
        if abs(lam - lam_prev) <= _RTOL * max(abs(lam), 1.0):
            return lam, x
        lam_prev = lam
    residual = K @ x - lam_prev * (w * x)
    raise NumericalError(
        f"eigensolver did not converge in {_MAX_ITER} iterations",
        {
            "last_rayleigh": lam_prev,
            "residual_norm": float(np.linalg.norm(residual)),
            "iterations": _MAX_ITER,
        },
    )
