"""Constrained minimization of the warping functionals.

The functional is minimized over the discrete constraint set
{u >= epsilon0, integral of u^theta >= 1} by projected gradient descent
with Armijo backtracking.  A critical point solves the semilinear
Euler-Lagrange equation whose residual field el_residual reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .base_geometry import BaseManifold
from .curvature import FiberSpec, SubmersionData
from .errors import DomainError, NumericalError
from .fields import ScalarField

__all__ = [
    "Problem",
    "Solution",
    "SolverConfig",
    "el_residual",
    "functional_J",
    "functional_J_general",
    "minimize",
    "project",
    "recover_warping",
]


@dataclass(frozen=True)
class Problem:
    """A prescribed-curvature problem on a base manifold.

    mode "product": reference_scal is the base scalar curvature;
    mode "general": reference_scal is the submersion total-space curvature
    and sub must carry nonpositive delta_A with vanishing mean curvature.
    """

    base: BaseManifold
    fiber: FiberSpec
    f: ScalarField
    reference_scal: ScalarField
    sub: SubmersionData | None = None
    mode: str = "product"

    def __post_init__(self):
        if self.mode not in ("product", "general"):
            raise DomainError(f"unknown mode {self.mode!r}")
        if self.f.base is not self.base or self.reference_scal.base is not self.base:
            raise DomainError("f and reference_scal must be fields on the base")
        if self.mode == "general":
            if self.sub is None:
                raise DomainError("general mode requires submersion data")
            if self.sub.base is not self.base:
                raise DomainError("submersion data lives on a different base")
            if self.sub.delta_A.max() > 0:
                raise DomainError("general mode requires max delta_A <= 0")
            if np.any(self.sub.mean_curvature_pairing.values != 0.0):
                raise DomainError("general mode requires minimal fibers (H = 0)")

    @classmethod
    def product(cls, base, fiber, f):
        return cls(base, fiber, f, base.scalar_curvature_field(), None, "product")

    @classmethod
    def general(cls, base, fiber, f, sub):
        return cls(base, fiber, f, sub.scal_g, sub, "general")


@dataclass(frozen=True)
class SolverConfig:
    epsilon0: float = 1e-3
    tol: float = 1e-8
    max_iter: int = 50_000
    step: float = 1.0
    backtrack_contraction: float = 0.5
    backtrack_sufficient_decrease: float = 1e-4

    def __post_init__(self):
        if min(self.epsilon0, self.tol, self.step, self.backtrack_sufficient_decrease) <= 0:
            raise DomainError("solver parameters must be positive")
        if self.max_iter < 1:
            raise DomainError("max_iter must be >= 1")
        if not 0.0 < self.backtrack_contraction < 1.0:
            raise DomainError("backtracking contraction must lie in (0, 1)")


@dataclass
class Solution:
    u: ScalarField
    phi: ScalarField
    J_value: float
    el_residual_norm: float
    iterations: int
    active_floor: np.ndarray
    constraint_integral: float
    converged: bool
    status: str
    epsilon0: float
    j_trace: np.ndarray = dc_field(repr=False, default=None)

    @property
    def boundary_active(self) -> bool:
        return bool(self.active_floor.any())


# ---------------------------------------------------------------------------
# functionals and residuals
# ---------------------------------------------------------------------------

def _nonlin_power(vals: np.ndarray, exponent: float) -> np.ndarray:
    # u^((k-3)/(k+1)) collapses to the constant 1 at k = 3
    if exponent == 0.0:
        return np.ones_like(vals)
    return np.power(vals, exponent)


def functional_J(prob: Problem, u: ScalarField) -> float:
    """(1/2) int |grad u|^2 - b_k int (f - scal_B) u^2 + c_k int c u^theta."""
    if prob.mode != "product":
        raise DomainError("functional_J applies to product mode")
    base = prob.base
    dims = prob.fiber.dims
    uv = u.values
    grad_term = 0.5 * base.integrate(base.gradient_sq_norm(u))
    gap = prob.f.values - prob.reference_scal.values
    quad_term = dims.b_k * float(np.dot(base.weights, gap * uv * uv))
    c_term = dims.c_k * prob.fiber.c * float(
        np.dot(base.weights, _nonlin_power(uv, dims.theta))
    )
    return grad_term - quad_term + c_term


def functional_J_general(prob: Problem, u: ScalarField) -> float:
    """General-mode functional with the delta_A and u^gamma corrections."""
    if prob.mode != "general":
        raise DomainError("functional_J_general applies to general mode")
    base = prob.base
    dims = prob.fiber.dims
    uv = u.values
    sub = prob.sub
    grad_term = 0.5 * base.integrate(base.gradient_sq_norm(u))
    integrand = (
        (sub.scal_g.values + sub.delta_A.values - prob.fiber.c - prob.f.values)
        * (uv * uv)
        / 2.0
        + prob.fiber.c / dims.theta * _nonlin_power(uv, dims.theta)
        - sub.delta_A.values / dims.gamma * np.power(uv, dims.gamma)
    )
    return grad_term + 2.0 * dims.b_k * float(np.dot(base.weights, integrand))


def functional(prob: Problem, u: ScalarField) -> float:
    return functional_J(prob, u) if prob.mode == "product" else functional_J_general(prob, u)


def el_residual(prob: Problem, u: ScalarField) -> ScalarField:
    """Euler-Lagrange residual field; zero exactly at discrete critical points.

    Product mode: lap(u) + 2 b_k (f - scal_B) u - 2 b_k c u^((k-3)/(k+1)).
    General mode: -lap(u) + 2 b_k {(u^((k-3)/(k+1)) - u) c
                  + (u - u^((k+5)/(k+1))) delta_A} - 2 b_k u (f - scal_g).
    """
    if u.min() <= 0:
        raise DomainError("el_residual requires u > 0")
    base = prob.base
    dims = prob.fiber.dims
    two_b = 2.0 * dims.b_k
    uv = u.values
    lap = base.laplacian(u).values
    low_pow = _nonlin_power(uv, dims.theta - 1.0)
    if prob.mode == "product":
        gap = prob.f.values - prob.reference_scal.values
        vals = lap + two_b * gap * uv - two_b * prob.fiber.c * low_pow
        return base.field(vals)
    sub = prob.sub
    high_pow = np.power(uv, dims.gamma - 1.0)
    vals = (
        -lap
        + two_b * ((low_pow - uv) * prob.fiber.c + (uv - high_pow) * sub.delta_A.values)
        - two_b * uv * (prob.f.values - sub.scal_g.values)
    )
    return base.field(vals)


def descent_direction(prob: Problem, u: ScalarField) -> np.ndarray:
    """Negative L2 gradient of the functional, as nodal values."""
    r = el_residual(prob, u).values
    return r if prob.mode == "product" else -r


def edp_oriented_residual(prob: Problem, u: ScalarField) -> ScalarField:
    """Residual in the orientation for which scal~ - f = -(4k/(k+1)) u^-1 * residual."""
    r = el_residual(prob, u)
    return r if prob.mode == "product" else -r


def functional_gradient(prob: Problem, u: ScalarField) -> np.ndarray:
    """Discrete gradient dJ/du_i (quadrature-weighted nodal values)."""
    return -prob.base.weights * descent_direction(prob, u)


def recover_warping(u: ScalarField, k: int) -> ScalarField:
    """phi = (2/(k+1)) ln u, the warping exponent of the solved metric."""
    if u.min() <= 0:
        raise DomainError("recover_warping requires u > 0")
    return u.base.field((2.0 / (k + 1)) * np.log(u.values))


def project(u: ScalarField, epsilon0: float, theta: float) -> ScalarField:
    """Clamp to u >= epsilon0, then scale up if the theta-integral is below 1."""
    if epsilon0 <= 0:
        raise DomainError("epsilon0 must be positive")
    if not 0.0 < theta <= 2.0:
        raise DomainError("theta must lie in (0, 2]")
    base = u.base
    vals = np.maximum(u.values, epsilon0)
    integral = float(np.dot(base.weights, _nonlin_power(vals, theta)))
    if integral < 1.0:
        vals = vals * integral ** (-1.0 / theta)
    return base.field(vals)


# ---------------------------------------------------------------------------
# projected gradient descent
# ---------------------------------------------------------------------------

_FLOOR_SLACK = 1e-12
_DIVERGENCE_CAP = 1e9


def _projected_gradient_norm(prob: Problem, u: ScalarField, cfg: SolverConfig) -> float:
    """Sup norm of the gradient projected on the feasible directions at u."""
    base = prob.base
    dims = prob.fiber.dims
    g = -descent_direction(prob, u)  # L2 gradient
    active = u.values <= cfg.epsilon0 * (1.0 + _FLOOR_SLACK)
    g = np.where(active, np.minimum(g, 0.0), g)
    integral = float(np.dot(base.weights, _nonlin_power(u.values, dims.theta)))
    if integral <= 1.0 + _FLOOR_SLACK:
        d = dims.theta * _nonlin_power(u.values, dims.theta - 1.0)
        denom = float(np.dot(base.weights, d * d))
        if denom > 0:
            nu = max(0.0, float(np.dot(base.weights, g * d)) / denom)
            g = g - nu * d
    return float(np.abs(g).max())


def minimize(prob: Problem, cfg: SolverConfig | None = None) -> Solution:
    """Projected gradient descent from u0 = project(1) with Armijo backtracking."""
    cfg = cfg or SolverConfig()
    base = prob.base
    dims = prob.fiber.dims
    w = base.weights

    u = project(base.constant_field(1.0), cfg.epsilon0, dims.theta)
    J = functional(prob, u)
    if not np.isfinite(J):
        raise NumericalError("functional is non-finite at the initial iterate")
    trace = [J]
    status = "max_iter"
    converged = False
    iterations = 0

    for it in range(1, cfg.max_iter + 1):
        iterations = it
        d = descent_direction(prob, u)
        if not np.all(np.isfinite(d)):
            raise NumericalError(
                "gradient became non-finite", {"iteration": it, "J": J}
            )
        pg = _projected_gradient_norm(prob, u, cfg)
        if pg <= cfg.tol:
            converged = True
            status = "converged"
            iterations = it - 1
            break

        t = cfg.step
        accepted = False
        while t >= 1e-18:
            trial = project(u + t * d, cfg.epsilon0, dims.theta)
            J_trial = functional(prob, trial)
            if np.isfinite(J_trial):
                step_vec = trial.values - u.values
                predicted = float(np.dot(w, d * step_vec))  # <-grad, step>
                threshold = J - cfg.backtrack_sufficient_decrease * max(predicted, 0.0)
                if (predicted > 0 and J_trial <= threshold) or (
                    predicted <= 0 and J_trial < J
                ):
                    accepted = True
                    break
            t *= cfg.backtrack_contraction
        if not accepted:
            status = "line_search_stall"
            break

        u, J = trial, J_trial
        trace.append(J)
        if np.abs(u.values).max() > _DIVERGENCE_CAP or J < -1e18:
            status = "diverged"
            break

    residual = el_residual(prob, u).values
    active = u.values <= cfg.epsilon0 * (1.0 + _FLOOR_SLACK)
    inactive_res = residual[~active]
    res_norm = float(np.abs(inactive_res).max()) if inactive_res.size else 0.0
    return Solution(
        u=u,
        phi=recover_warping(u, prob.fiber.k),
        J_value=J,
        el_residual_norm=res_norm,
        iterations=iterations,
        active_floor=active,
        constraint_integral=float(np.dot(w, _nonlin_power(u.values, dims.theta))),
        converged=converged,
        status=status,
        epsilon0=cfg.epsilon0,
        j_trace=np.array(trace),
    )
