"""Base manifolds: construction, calculus and spectral data."""

from __future__ import annotations

from ..errors import DomainError
from .manifold import (
    BaseManifold,
    first_eigenvalue,
    gradient_sq_norm,
    integrate,
    laplacian,
    ricci_lower_bound,
    scalar_curvature_field,
    volume,
)
from .product import ProductManifold
from .sphere import RoundSphere
from .torus import FlatTorus
from .trimesh import TriMesh, icosphere, load_mesh, load_obj, load_off

__all__ = [
    "BaseManifold",
    "FlatTorus",
    "ProductManifold",
    "RoundSphere",
    "TriMesh",
    "build_base",
    "first_eigenvalue",
    "gradient_sq_norm",
    "icosphere",
    "integrate",
    "laplacian",
    "load_mesh",
    "load_obj",
    "load_off",
    "ricci_lower_bound",
    "scalar_curvature_field",
    "volume",
]


def build_base(spec: dict) -> BaseManifold:
    """Construct a manifold from a backend description.

    Recognized kinds: round_sphere (n, radius, band), flat_torus (periods,
    nodes), icosphere (level, radius), tri_mesh (path), product (factors).
    """
    if not isinstance(spec, dict):
        raise DomainError("base spec must be a mapping")
    kind = spec.get("kind")
    if kind == "round_sphere":
        kwargs = {}
        if "band" in spec:
            kwargs["band"] = int(spec["band"])
        return RoundSphere(int(spec.get("n", 2)), float(spec.get("radius", 1.0)), **kwargs)
    if kind == "flat_torus":
        if "periods" not in spec:
            raise DomainError("flat_torus spec requires 'periods'")
        return FlatTorus(spec["periods"], spec.get("nodes"))
    if kind == "icosphere":
        return icosphere(int(spec.get("level", 4)), float(spec.get("radius", 1.0)))
    if kind == "tri_mesh":
        if "path" not in spec:
            raise DomainError("tri_mesh spec requires 'path'")
        return load_mesh(spec["path"])
    if kind == "product":
        factors = spec.get("factors")
        if not factors:
            raise DomainError("product spec requires 'factors'")
        return ProductManifold([build_base(f) for f in factors])
    raise DomainError(f"unknown base kind: {kind!r}")
