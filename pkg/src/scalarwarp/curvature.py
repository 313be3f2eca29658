"""Curvature formula evaluators for vertically warped submersion metrics.

Everything here is pure algebra over scalar fields or plain numbers: the
dimensional constants, the scalar curvature of a warped product and of a
general vertical warping, the canonical-deformation interpolation, the
horizontal-integrability correction term, and the sectional-curvature
formula sets for the three deformation models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base_geometry import BaseManifold
from .errors import DomainError, InputError
from .fields import ScalarField

__all__ = [
    "DimConstants",
    "FiberSpec",
    "SubmersionData",
    "canonical_ratio_limit",
    "canonical_scal_t",
    "constants",
    "delta_A",
    "fiber_second_fundamental_form",
    "general_warped_scalar",
    "sectional_curvatures",
    "warped_scalar",
]


@dataclass(frozen=True)
class DimConstants:
    """Constants attached to the fiber dimension k."""

    k: int
    b_k: float
    c_k: float
    theta: float
    gamma: float


def constants(k: int) -> DimConstants:
    """b_k = (k+1)/8k, c_k = (k+1)^2/8(k-1)k, theta = 2(k-1)/(k+1), gamma = (2k+6)/(k+1)."""
    if int(k) != k or k < 2:
        raise DomainError("fiber dimension k must be an integer >= 2")
    k = int(k)
    return DimConstants(
        k=k,
        b_k=(k + 1) / (8.0 * k),
        c_k=(k + 1) ** 2 / (8.0 * (k - 1) * k),
        theta=2.0 * (k - 1) / (k + 1),
        gamma=(2.0 * k + 6) / (k + 1),
    )


@dataclass(frozen=True)
class FiberSpec:
    """Fiber dimension and (constant) scalar curvature, optionally a range."""

    k: int
    c: float = 0.0
    scal_range: tuple[float, float] | None = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise DomainError("fiber dimension k must be an integer >= 2")
        if self.scal_range is not None:
            lo, hi = self.scal_range
            if lo > hi:
                raise DomainError("fiber scal_range must satisfy min <= max")
            object.__setattr__(self, "scal_range", (float(lo), float(hi)))

    @property
    def dims(self) -> DimConstants:
        return constants(self.k)


@dataclass(frozen=True)
class SubmersionData:
    """Per-node submersion data for the non-product pipeline.

    delta_A must equal 3*a_horiz_sq - 2*a_norm_sq pointwise;
    mean_curvature_pairing carries du(H) data and vanishes for minimal fibers.
    """

    scal_g: ScalarField
    delta_A: ScalarField
    a_horiz_sq: ScalarField
    a_norm_sq: ScalarField
    mean_curvature_pairing: ScalarField

    def __post_init__(self):
        base = self.scal_g.base
        for f in (self.delta_A, self.a_horiz_sq, self.a_norm_sq, self.mean_curvature_pairing):
            if f.base is not base:
                raise DomainError("submersion fields must share one base manifold")
        if self.a_horiz_sq.min() < 0 or self.a_norm_sq.min() < 0:
            raise DomainError("squared tensor norms must be nonnegative")
        expected = 3.0 * self.a_horiz_sq.values - 2.0 * self.a_norm_sq.values
        scale = max(1.0, np.abs(expected).max())
        if np.abs(self.delta_A.values - expected).max() > 1e-12 * scale:
            raise DomainError("delta_A must equal 3*a_horiz_sq - 2*a_norm_sq")

    @property
    def base(self) -> BaseManifold:
        return self.scal_g.base

    @classmethod
    def from_tensor_norms(cls, scal_g, a_horiz_sq, a_norm_sq, mean_curvature_pairing=None):
        base = scal_g.base
        if mean_curvature_pairing is None:
            mean_curvature_pairing = base.constant_field(0.0)
        return cls(
            scal_g=scal_g,
            delta_A=delta_A(a_horiz_sq, a_norm_sq),
            a_horiz_sq=a_horiz_sq,
            a_norm_sq=a_norm_sq,
            mean_curvature_pairing=mean_curvature_pairing,
        )

    @classmethod
    def product_like(cls, base: BaseManifold, fiber_c: float):
        """Integrable-horizontal data equivalent to a metric product."""
        zero = base.constant_field(0.0)
        return cls(
            scal_g=base.scalar_curvature_field() + fiber_c,
            delta_A=zero,
            a_horiz_sq=zero,
            a_norm_sq=zero,
            mean_curvature_pairing=zero,
        )


def delta_A(a_horiz_sq: ScalarField, a_norm_sq: ScalarField) -> ScalarField:
    """3*sum |A_X Y|^2 - 2*sum |A*_X V|^2, both sums over ordered index pairs."""
    a_horiz_sq.same_base(a_norm_sq)
    if a_horiz_sq.min() < 0 or a_norm_sq.min() < 0:
        raise DomainError("squared tensor norms must be nonnegative")
    return 3.0 * a_horiz_sq - 2.0 * a_norm_sq


def warped_scalar(base: BaseManifold, phi: ScalarField, fiber: FiberSpec) -> ScalarField:
    """Scalar curvature of the fiber-warped metric with warping exp(2*phi).

    scal_B + exp(-2 phi) c - k(k-1)|grad phi|^2 - 2k|grad phi|^2 - 2k lap(phi).
    """
    k = fiber.k
    scal_b = base.scalar_curvature_field()
    gsq = base.gradient_sq_norm(phi)
    lap = base.laplacian(phi)
    e = np.exp(-2.0 * phi.values)
    vals = (
        scal_b.values
        + e * fiber.c
        - k * (k - 1) * gsq.values
        - 2.0 * k * gsq.values
        - 2.0 * k * lap.values
    )
    return base.field(vals)


def general_warped_scalar(
    base: BaseManifold, u: ScalarField, fiber: FiberSpec, sub: SubmersionData
) -> ScalarField:
    """Scalar curvature after vertical warping by u^(4/(k+1)) of a submersion metric."""
    if u.min() <= 0:
        raise DomainError("warping function u must be positive")
    if sub.base is not base:
        raise DomainError("submersion data lives on a different base")
    k = fiber.k
    uv = u.values
    lap = base.laplacian(u).values
    p = 4.0 / (k + 1)
    u_pow = uv**p
    vals = (
        sub.scal_g.values
        - (4.0 * k / (k + 1)) / uv * lap
        + (4.0 + 2.0 * (k - 1)) * (2.0 / (k + 1)) / uv * sub.mean_curvature_pairing.values
        + (1.0 / u_pow - 1.0) * fiber.c
        + (1.0 - u_pow) * sub.delta_A.values
    )
    return base.field(vals)


def canonical_scal_t(
    t: float,
    scal_B: ScalarField,
    scal_g_horiz: ScalarField,
    a_norm_sq: ScalarField,
    scal_F_value: float,
) -> ScalarField:
    """Scalar curvature of the canonical deformation g_t at vertical scale exp(2t)."""
    scal_B.same_base(scal_g_horiz)
    scal_B.same_base(a_norm_sq)
    e2t = math.exp(2.0 * t)
    em2t = math.exp(-2.0 * t)
    vals = (
        scal_B.values * (1.0 - e2t)
        + e2t * scal_g_horiz.values
        + 2.0 * e2t * a_norm_sq.values
        + em2t * scal_F_value
    )
    return scal_B.base.field(vals)


def canonical_ratio_limit(fiber: FiberSpec) -> float:
    """Limit of min/max of the deformed scalar curvature as t -> -infinity."""
    if fiber.scal_range is None:
        raise DomainError("fiber scal_range required for the canonical ratio limit")
    lo, hi = fiber.scal_range
    if hi <= 0:
        raise DomainError("canonical ratio limit requires max fiber scal > 0")
    return lo / hi


def fiber_second_fundamental_form(
    exp_two_phi: float, t1_dot_t2: float, grad_phi_norm: float
) -> float:
    """Coefficient of the fibers' second fundamental form in a warped product.

    Returns -exp(2 phi) <T1, T2> |grad phi|; zero for orthogonal arguments.
    """
    return -exp_two_phi * t1_dot_t2 * grad_phi_norm


# ---------------------------------------------------------------------------
# sectional curvature formula sets
# ---------------------------------------------------------------------------

_MODEL_INPUTS = {
    "warped_product": {
        "hh": ("k_base",),
        "vv": ("warp", "k_fiber", "grad_warp_sq", "v1_sq", "v2_sq", "v1_dot_v2"),
        "mixed": ("warp", "v_sq", "dwarp_x", "hess_warp_xx"),
    },
    "canonical_variation": {
        "hh": ("t", "k_base", "k_ambient_horizontal"),
        "vv": ("t", "k_ambient_vertical"),
        "mixed": ("t", "a_star_sq"),
        "r4": ("t", "nabla_a_pairing"),
    },
    "general_vertical_warping": {
        "hh": ("warp", "k_base", "k_ambient_horizontal"),
        "vv": (
            "warp",
            "k_fiber",
            "k_ambient_vertical",
            "grad_warp_sq",
            "v1_sq",
            "v2_sq",
            "dwarp_sigma_v1",
            "dwarp_sigma_v2",
        ),
        "mixed": (
            "warp",
            "k_ambient_mixed",
            "a_star_sq",
            "v_sq",
            "dwarp_x",
            "hess_warp_xx",
            "shape_pairing",
        ),
    },
}


def sectional_curvatures(model: str, inputs: dict) -> dict:
    """Plane curvatures of the deformed metric for one of the three models.

    Returns a dict with keys "hh" (horizontal-horizontal), "vv"
    (vertical-vertical), "mixed", and for the canonical variation also "r4"
    (the mixed 4-tensor entry).  Raises InputError naming any missing scalar.
    """
    if model not in _MODEL_INPUTS:
        raise InputError(f"unknown model {model!r}")
    needed = sorted({name for names in _MODEL_INPUTS[model].values() for name in names})
    missing = [name for name in needed if name not in inputs]
    if missing:
        raise InputError(f"{model} requires missing input(s): {', '.join(missing)}")
    g = {name: float(inputs[name]) for name in needed}

    if model == "warped_product":
        e2 = math.exp(2.0 * g["warp"])
        hh = g["k_base"]
        vv = e2 * (
            g["k_fiber"]
            - e2 * g["grad_warp_sq"] * (g["v1_sq"] * g["v2_sq"] - g["v1_dot_v2"]) ** 2
        )
        mixed = -e2 * g["v_sq"] * (g["dwarp_x"] ** 2 + g["hess_warp_xx"])
        return {"hh": hh, "vv": vv, "mixed": mixed}

    if model == "canonical_variation":
        e2 = math.exp(2.0 * g["t"])
        hh = (1.0 - e2) * g["k_base"] + e2 * g["k_ambient_horizontal"]
        vv = e2 * g["k_ambient_vertical"]
        mixed = e2 * e2 * g["a_star_sq"]
        r4 = e2 * g["nabla_a_pairing"]
        return {"hh": hh, "vv": vv, "mixed": mixed, "r4": r4}

    e2 = math.exp(2.0 * g["warp"])
    e4 = e2 * e2
    hh = (1.0 - e2) * g["k_base"] + e2 * g["k_ambient_horizontal"]
    vv = (
        (e2 - e4) * g["k_fiber"]
        + e4 * g["k_ambient_vertical"]
        - e4 * g["v1_sq"] * g["v2_sq"] * g["grad_warp_sq"]
        + e4 * g["dwarp_sigma_v1"] * g["v2_sq"]
        + e4 * g["dwarp_sigma_v2"] * g["v1_sq"]
    )
    mixed = (
        e2 * g["k_ambient_mixed"]
        - e2 * (1.0 - e2) * g["a_star_sq"]
        - (g["hess_warp_xx"] + g["dwarp_x"] ** 2) * e2 * g["v_sq"]
        + 2.0 * e2 * g["dwarp_x"] * g["shape_pairing"]
    )
    return {"hh": hh, "vv": vv, "mixed": mixed}
