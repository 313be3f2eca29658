"""Sufficient-condition certificates and the realizability interval test.

Every check returns a Certificate with the margin alpha, a pass flag and a
details map holding the evaluated terms of the inequality.  A failed
certificate never blocks the solver: the conditions are sufficient only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .base_geometry import BaseManifold
from .curvature import FiberSpec, SubmersionData, canonical_scal_t, constants
from .errors import DomainError, HypothesisViolationError, UnsupportedHypothesisError
from .fields import ScalarField

__all__ = [
    "Certificate",
    "check_canonical",
    "check_general",
    "check_kw",
    "check_product",
    "check_ricci",
    "scan_canonical",
]


@dataclass
class Certificate:
    theorem_id: str
    alpha: float
    epsilon: float | None
    passed: bool
    witness: float | None = None
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "alpha": self.alpha,
            "epsilon": self.epsilon,
            "pass": self.passed,
            "witness": self.witness,
            "details": self.details,
        }


def _require_epsilon(epsilon: float) -> float:
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    return float(epsilon)


def _require_nonpositive_c(fiber: FiberSpec) -> None:
    if fiber.c > 0:
        raise UnsupportedHypothesisError(
            "certificate requires nonpositive fiber scalar curvature (c <= 0); "
            f"got c = {fiber.c}"
        )


def check_product(
    base: BaseManifold, fiber: FiberSpec, f: ScalarField, epsilon: float
) -> Certificate:
    """Margin alpha = lam1/(2+eps) - b_k max(f - scal_B) + c_k c vol^(2/theta-1)."""
    epsilon = _require_epsilon(epsilon)
    _require_nonpositive_c(fiber)
    if f.base is not base:
        raise DomainError("f must be a field on the given base")
    dims = fiber.dims
    lam1 = base.first_eigenvalue()
    vol = base.volume()
    max_gap = float(np.max(f.values - base.scalar_curvature_field().values))
    vol_pow = vol ** (2.0 / dims.theta - 1.0)
    term_eig = lam1 / (2.0 + epsilon)
    term_gap = dims.b_k * max_gap
    term_c = dims.c_k * fiber.c * vol_pow
    alpha = term_eig - term_gap + term_c
    details = {
        "lambda1": lam1,
        "volume": vol,
        "max_gap": max_gap,
        "b_k": dims.b_k,
        "c_k": dims.c_k,
        "theta": dims.theta,
        "term_eigenvalue": term_eig,
        "term_gap": term_gap,
        "term_c": term_c,
        "alpha_sup": lam1 / 2.0 - term_gap + term_c,
        "c": fiber.c,
        "k": fiber.k,
    }
    return Certificate("product", alpha, epsilon, alpha > 0, None, details)


def check_general(
    base: BaseManifold,
    fiber: FiberSpec,
    sub: SubmersionData,
    f: ScalarField,
    epsilon: float,
) -> Certificate:
    """Product margin corrected by b_k min(delta_A) against scal_g data."""
    epsilon = _require_epsilon(epsilon)
    _require_nonpositive_c(fiber)
    if f.base is not base or sub.base is not base:
        raise DomainError("f and submersion data must live on the given base")
    max_delta = sub.delta_A.max()
    if max_delta > 0:
        raise HypothesisViolationError(
            "max_delta_A_nonpositive",
            f"hypothesis max delta_A <= 0 violated: max = {max_delta}",
        )
    if np.any(sub.mean_curvature_pairing.values != 0.0):
        raise HypothesisViolationError(
            "minimal_fibers",
            "hypothesis of minimal fibers violated: mean-curvature pairing is nonzero",
        )
    dims = fiber.dims
    lam1 = base.first_eigenvalue()
    vol = base.volume()
    max_gap = float(np.max(f.values - sub.scal_g.values + fiber.c))
    min_delta = sub.delta_A.min()
    vol_pow = vol ** (2.0 / dims.theta - 1.0)
    term_eig = lam1 / (2.0 + epsilon)
    term_gap = dims.b_k * max_gap
    term_c = dims.c_k * fiber.c * vol_pow
    term_delta = dims.b_k * min_delta
    alpha = term_eig - term_gap + term_c + term_delta
    details = {
        "lambda1": lam1,
        "volume": vol,
        "max_gap": max_gap,
        "min_delta_A": min_delta,
        "b_k": dims.b_k,
        "c_k": dims.c_k,
        "theta": dims.theta,
        "term_eigenvalue": term_eig,
        "term_gap": term_gap,
        "term_c": term_c,
        "term_delta": term_delta,
        "alpha_sup": lam1 / 2.0 - term_gap + term_c + term_delta,
        "c": fiber.c,
        "k": fiber.k,
    }
    return Certificate("general", alpha, epsilon, alpha > 0, None, details)


def check_ricci(
    n: int,
    fiber: FiberSpec,
    volB: float,
    max_f: float,
    epsilon: float,
    base: BaseManifold | None = None,
) -> Certificate:
    """Ricci >= (n-1) variant: n(8k/((2+eps)(k+1)) + (n-1)) > max f + (c_k/b_k) c vol^(2/theta-1)."""
    epsilon = _require_epsilon(epsilon)
    _require_nonpositive_c(fiber)
    if volB <= 0:
        raise DomainError("volume must be positive")
    if base is not None:
        bound = base.ricci_lower_bound()
        if bound != "unknown" and bound < n - 1:
            raise HypothesisViolationError(
                "ricci_lower_bound",
                f"hypothesis Ric >= (n-1) violated: known bound {bound} < {n - 1}",
            )
    dims = fiber.dims
    k = fiber.k
    lhs = n * (8.0 * k / ((2.0 + epsilon) * (k + 1)) + (n - 1))
    ck_over_bk = (k + 1) / (k - 1.0)
    rhs = max_f + ck_over_bk * fiber.c * volB ** (2.0 / dims.theta - 1.0)
    alpha = lhs - rhs
    details = {
        "lhs": lhs,
        "rhs": rhs,
        "max_f": max_f,
        "volume": volB,
        "ck_over_bk": ck_over_bk,
        "n": n,
        "k": k,
        "c": fiber.c,
        "alpha_sup": n * (8.0 * k / (2.0 * (k + 1)) + (n - 1)) - rhs,
    }
    return Certificate("ricci", alpha, epsilon, alpha > 0, None, details)


# ---------------------------------------------------------------------------
# realizability interval test
# ---------------------------------------------------------------------------

def _kw_interval(f_min, f_max, s_min, s_max):
    """Feasible open interval (lo, hi) of c > 0 with c*f_min < s_min and s_max < c*f_max.

    Returns (lo, hi) with hi possibly inf; the test is feasible iff lo < hi.
    Infeasible sign cases return an empty interval.
    """
    lo, hi = 0.0, math.inf
    # c * f_min < s_min
    if f_min > 0:
        if s_min <= 0:
            return 0.0, 0.0
        hi = min(hi, s_min / f_min)
    elif f_min == 0:
        if s_min <= 0:
            return 0.0, 0.0
    else:  # f_min < 0
        if s_min < 0:
            lo = max(lo, s_min / f_min)
    # s_max < c * f_max
    if f_max > 0:
        lo = max(lo, s_max / f_max)
    elif f_max == 0:
        if s_max >= 0:
            return 0.0, 0.0
    else:  # f_max < 0
        if s_max >= 0:
            return 0.0, 0.0
        hi = min(hi, s_max / f_max)
    return lo, hi


def _kw_witness(lo, hi):
    if math.isinf(hi):
        return 1.0 if lo <= 0 else 2.0 * lo
    if lo <= 0:
        return hi / 2.0
    return math.sqrt(lo * hi)


def check_kw(f: ScalarField, scal: ScalarField) -> Certificate:
    """Decide existence of c > 0 with c*min f < scal < c*max f everywhere."""
    f.same_base(scal)
    return kw_from_ranges(f.min(), f.max(), scal.min(), scal.max())


def kw_from_ranges(f_min, f_max, s_min, s_max) -> Certificate:
    lo, hi = _kw_interval(f_min, f_max, s_min, s_max)
    feasible = lo < hi
    details = {
        "f_min": f_min,
        "f_max": f_max,
        "scal_min": s_min,
        "scal_max": s_max,
        "c_lower": lo,
        "c_upper": None if math.isinf(hi) else hi,
    }
    if feasible:
        c = _kw_witness(lo, hi)
        margin = min(s_min - c * f_min, c * f_max - s_max)
        details["margin"] = margin
        return Certificate("kazdan_warner", margin, None, True, c, details)
    alpha = hi - lo if math.isfinite(hi) else -1.0
    return Certificate("kazdan_warner", min(alpha, 0.0), None, False, None, details)


# ---------------------------------------------------------------------------
# canonical-variation scan
# ---------------------------------------------------------------------------

def scan_canonical(
    fiber: FiberSpec,
    scal_B: ScalarField,
    scal_g_horiz: ScalarField,
    a_norm_sq: ScalarField,
    t_min: float = -12.0,
    grid_points: int = 400,
):
    """Scan table (t, s_t, S_t, ratio) on a grid geometric in exp(2t) from 1 down."""
    if fiber.scal_range is None:
        raise DomainError("fiber scal_range required for the canonical scan")
    lo_f, hi_f = fiber.scal_range
    if hi_f <= 0:
        raise DomainError("canonical scan requires max fiber scal > 0")
    if t_min >= 0:
        raise DomainError("t_min must be negative")
    e2t = np.geomspace(1.0, math.exp(2.0 * t_min), int(grid_points))
    ts = 0.5 * np.log(e2t)
    ts[0] = 0.0
    rows = []
    for t in ts:
        fld_min = canonical_scal_t(t, scal_B, scal_g_horiz, a_norm_sq, lo_f)
        fld_max = canonical_scal_t(t, scal_B, scal_g_horiz, a_norm_sq, hi_f)
        s_t = fld_min.min()
        S_t = fld_max.max()
        ratio = s_t / S_t if S_t != 0 else math.nan
        rows.append((float(t), s_t, S_t, ratio))
    return rows


def check_canonical(
    fiber: FiberSpec,
    f: ScalarField,
    scal_B: ScalarField,
    scal_g_horiz: ScalarField,
    a_norm_sq: ScalarField,
    t_min: float = -12.0,
    grid_points: int = 400,
) -> Certificate:
    """Scan t < 0 for min f / max f < s_t/S_t <= 1, then confirm realizability."""
    if fiber.scal_range is None:
        raise DomainError("fiber scal_range required for the canonical certificate")
    if fiber.scal_range[1] <= 0:
        raise DomainError("canonical certificate requires max fiber scal > 0")
    if f.max() == 0:
        raise DomainError("canonical certificate requires max f != 0")
    target = f.min() / f.max()
    rows = scan_canonical(fiber, scal_B, scal_g_horiz, a_norm_sq, t_min, grid_points)
    best_margin = -math.inf
    for t, s_t, S_t, ratio in rows:
        if S_t <= 0 or not math.isfinite(ratio):
            continue
        margin = ratio - target
        best_margin = max(best_margin, margin)
        if target < ratio <= 1.0:
            kw = kw_from_ranges(f.min(), f.max(), s_t, S_t)
            if kw.passed:
                details = {
                    "t": t,
                    "s_t": s_t,
                    "S_t": S_t,
                    "ratio": ratio,
                    "target_ratio": target,
                    "limit_ratio": fiber.scal_range[0] / fiber.scal_range[1],
                    "kw_witness_c": kw.witness,
                }
                return Certificate("canonical_variation", margin, None, True, t, details)
    details = {
        "target_ratio": target,
        "limit_ratio": fiber.scal_range[0] / fiber.scal_range[1],
        "best_margin": None if best_margin == -math.inf else best_margin,
    }
    alpha = best_margin if math.isfinite(best_margin) else -1.0
    return Certificate("canonical_variation", min(alpha, 0.0), None, False, None, details)
