"""Closed base manifolds with volume, curvature and Laplacian calculus.

Every backend provides the analytic constants (volume, scalar curvature,
first positive Laplace eigenvalue, Ricci lower bound).  Backends with an
assembled calculus additionally provide nodes, quadrature weights and the
discrete gradient/Laplacian operators; on those, the quadrature weights are
strictly positive, the Laplacian annihilates constants and is self-adjoint
with respect to the quadrature inner product.
"""

from __future__ import annotations

import numpy as np

from ..errors import FieldMismatchError, UnsupportedBackendError
from ..fields import ScalarField


class BaseManifold:
    """Common interface of all base-manifold backends.

    Constants-only backends represent scalar fields by a single node whose
    quadrature weight is the total volume; calculus operators on them act on
    constants (Laplacian and gradient vanish identically).
    """

    #: human-readable backend tag, set by subclasses
    kind = "abstract"
    #: True when a discrete gradient/Laplacian is assembled
    has_calculus = False

    def __init__(self, dimension: int, node_count: int, weights, coords):
        self.dimension = int(dimension)
        self.node_count = int(node_count)
        w = np.asarray(weights, dtype=float)
        w.setflags(write=False)
        self.weights = w
        c = np.asarray(coords, dtype=float)
        c.setflags(write=False)
        self.coords = c

    # -- field helpers ----------------------------------------------------

    def field(self, values) -> ScalarField:
        return ScalarField(self, values)

    def constant_field(self, value: float) -> ScalarField:
        return ScalarField(self, np.full(self.node_count, float(value)))

    def _check(self, u: ScalarField) -> np.ndarray:
        if u.base is not self:
            raise FieldMismatchError("field does not belong to this manifold")
        return u.values

    # -- analytic constants (implemented by subclasses) --------------------

    def volume(self) -> float:
        raise NotImplementedError

    def scalar_curvature_field(self) -> ScalarField:
        raise NotImplementedError

    def first_eigenvalue(self) -> float:
        raise NotImplementedError

    def ricci_lower_bound(self):
        raise NotImplementedError

    # -- calculus ----------------------------------------------------------

    def integrate(self, u: ScalarField) -> float:
        vals = self._check(u)
        return float(np.dot(self.weights, vals))

    def laplacian(self, u: ScalarField) -> ScalarField:
        vals = self._check(u)
        return self.field(self._apply_laplacian(vals))

    def gradient_sq_norm(self, u: ScalarField) -> ScalarField:
        vals = self._check(u)
        return self.field(self._apply_gradient_sq(vals))

    def _apply_laplacian(self, vals: np.ndarray) -> np.ndarray:
        if self.has_calculus:
            raise NotImplementedError
        # constants-only backend: Laplacian of a constant vanishes
        return np.zeros_like(vals)

    def _apply_gradient_sq(self, vals: np.ndarray) -> np.ndarray:
        if self.has_calculus:
            raise NotImplementedError
        return np.zeros_like(vals)

    def first_eigenpair(self):
        """(lambda_1, eigenfunction) of -Laplacian on the assembled calculus."""
        raise UnsupportedBackendError(
            f"{self.kind} backend has no assembled calculus; "
            "only the analytic eigenvalue is available"
        )

    def sample_field(self, rng: np.random.Generator, scale: float = 1.0) -> ScalarField:
        """A random field in the space the discrete calculus resolves.

        Nodal white noise for grid/mesh backends; spectral backends override
        this to draw band-limited samples.
        """
        return self.field(scale * rng.standard_normal(self.node_count))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dimension}, nodes={self.node_count})"


# ---------------------------------------------------------------------------
# Free-function API (thin wrappers over the backend methods)
# ---------------------------------------------------------------------------

def volume(base: BaseManifold) -> float:
    return base.volume()


def scalar_curvature_field(base: BaseManifold) -> ScalarField:
    return base.scalar_curvature_field()


def laplacian(base: BaseManifold, u: ScalarField) -> ScalarField:
    return base.laplacian(u)


def gradient_sq_norm(base: BaseManifold, u: ScalarField) -> ScalarField:
    return base.gradient_sq_norm(u)


def integrate(base: BaseManifold, u: ScalarField) -> float:
    return base.integrate(u)


def first_eigenvalue(base: BaseManifold) -> float:
    return base.first_eigenvalue()


def ricci_lower_bound(base: BaseManifold):
    return base.ricci_lower_bound()
