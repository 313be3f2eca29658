"""Product of base manifolds, supported for analytic constants only."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .manifold import BaseManifold


class ProductManifold(BaseManifold):
    kind = "product"

    def __init__(self, factors):
        factors = list(factors)
        if len(factors) < 2:
            raise DomainError("a product needs at least two factors")
        for f in factors:
            scal = f.scalar_curvature_field().values
            if scal.max() - scal.min() > 1e-12 * max(1.0, abs(scal.max())):
                raise DomainError(
                    "product factors must have constant scalar curvature"
                )
        self.factors = factors
        dim = sum(f.dimension for f in factors)
        vol = float(np.prod([f.volume() for f in factors]))
        super().__init__(dim, 1, np.array([vol]), np.zeros((1, 3)))

    def volume(self) -> float:
        return float(np.prod([f.volume() for f in self.factors]))

    def scalar_curvature_field(self):
        total = sum(float(f.scalar_curvature_field().values[0]) for f in self.factors)
        return self.constant_field(total)

    def first_eigenvalue(self) -> float:
        # product spectrum is the set of sums of factor eigenvalues
        return min(f.first_eigenvalue() for f in self.factors)

    def ricci_lower_bound(self):
        bounds = [f.ricci_lower_bound() for f in self.factors]
        if any(b == "unknown" for b in bounds):
            return "unknown"
        return min(bounds)
