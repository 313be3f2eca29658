"""Round sphere backend.

Volume, scalar curvature, the first positive Laplace eigenvalue and the
Ricci lower bound are exact closed forms in every dimension.  For n = 2 a
spectral calculus is assembled from a real spherical-harmonic basis sampled
on a Gauss-Legendre x uniform longitude grid: the basis is orthonormal
under the quadrature to rounding, so the discrete Laplacian is diagonal in
it, self-adjoint, and its Rayleigh quotient attains exactly 2/r^2 on the
degree-1 space.  Fields are understood as degree <= band expansions sampled
at the nodes; operators act on that expansion.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import lpmv

from ..errors import DomainError
from .manifold import BaseManifold


def _sphere_area(n: int, radius: float) -> float:
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0) * radius**n


class RoundSphere(BaseManifold):
    kind = "round_sphere"

    def __init__(self, n: int, radius: float, band: int = 24):
        if n < 1:
            raise DomainError("sphere dimension must be >= 1")
        if radius <= 0:
            raise DomainError("sphere radius must be positive")
        self.n = int(n)
        self.radius = float(radius)
        self.band = None
        self.has_calculus = n == 2
        if self.has_calculus:
            if band < 2:
                raise DomainError("spherical-harmonic band must be >= 2")
            self.band = int(band)
            nodes, weights, ops = _assemble_sh_calculus(self.band, self.radius)
            self._synth, self._analysis, self._synth_dth, self._synth_dph, self._degrees = ops
            super().__init__(2, len(nodes), weights, nodes)
        else:
            vol = _sphere_area(self.n, self.radius)
            super().__init__(self.n, 1, np.array([vol]), np.zeros((1, 3)))

    # -- analytic constants ---------------------------------------------------

    def volume(self) -> float:
        return _sphere_area(self.n, self.radius)

    def scalar_curvature_field(self):
        return self.constant_field(self.n * (self.n - 1) / self.radius**2)

    def first_eigenvalue(self) -> float:
        # first positive eigenvalue of -Laplace on S^n(r): l=1 gives n/r^2;
        # equals the discrete value of the harmonic calculus exactly
        return self.n / self.radius**2

    def ricci_lower_bound(self) -> float:
        return (self.n - 1) / self.radius**2

    # -- spectral calculus -------------------------------------------------------

    def _coeffs(self, vals):
        return self._analysis @ vals

    def _apply_laplacian(self, vals):
        if not self.has_calculus:
            return np.zeros_like(vals)
        c = self._coeffs(vals)
        lam = self._degrees * (self._degrees + 1.0) / self.radius**2
        return self._synth @ (-lam * c)

    def _apply_gradient_sq(self, vals):
        if not self.has_calculus:
            return np.zeros_like(vals)
        c = self._coeffs(vals)
        gt = self._synth_dth @ c
        gp = self._synth_dph @ c
        return (gt * gt + gp * gp) / self.radius**2

    def first_eigenpair(self):
        if not self.has_calculus:
            return super().first_eigenpair()
        # z/r is the (l=1, m=0) harmonic up to normalization
        return self.first_eigenvalue(), self.field(self.coords[:, 2] / self.radius)

    def sample_field(self, rng: np.random.Generator, scale: float = 1.0):
        coeffs = rng.standard_normal(self._synth.shape[1])
        return self.field(scale * (self._synth @ coeffs))


def _assemble_sh_calculus(band: int, radius: float):
    """Node set, quadrature weights and synthesis/analysis operators."""
    ntheta = band + 1
    nphi = 2 * band + 2
    x, gw = leggauss(ntheta)
    theta = np.arccos(x)
    phis = 2.0 * np.pi * np.arange(nphi) / nphi
    TH, PH = np.meshgrid(theta, phis, indexing="ij")
    th, ph = TH.ravel(), PH.ravel()
    weights = np.repeat(gw * (2.0 * np.pi / nphi), nphi) * radius**2
    nodes = radius * np.stack(
        [np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1
    )

    modes = [(l, m) for l in range(band + 1) for m in range(-l, l + 1)]
    nn = len(th)
    E = np.empty((nn, len(modes)))
    Et = np.empty((nn, len(modes)))
    Ep = np.empty((nn, len(modes)))
    cx, sx = np.cos(th), np.sin(th)
    for idx, (l, m) in enumerate(modes):
        am = abs(m)
        lognorm = 0.5 * (
            math.log(2 * l + 1)
            - math.log(4 * math.pi)
            + math.lgamma(l - am + 1)
            - math.lgamma(l + am + 1)
        )
        N = math.exp(lognorm)
        P = lpmv(am, l, cx)
        Pm1 = lpmv(am, l - 1, cx) if l - 1 >= am else np.zeros_like(cx)
        dP = (l * cx * P - (l + am) * Pm1) / sx  # dP/dtheta; GL nodes avoid the poles
        if m == 0:
            ang, dang = np.ones_like(ph), np.zeros_like(ph)
        elif m > 0:
            ang = math.sqrt(2.0) * np.cos(m * ph)
            dang = -m * math.sqrt(2.0) * np.sin(m * ph)
        else:
            ang = math.sqrt(2.0) * np.sin(am * ph)
            dang = am * math.sqrt(2.0) * np.cos(am * ph)
        E[:, idx] = N * P * ang
        Et[:, idx] = N * dP * ang
        Ep[:, idx] = N * P * dang / sx
    analysis = E.T * weights / radius**2  # exact discrete inverse on the band
    degrees = np.array([l for l, _ in modes], dtype=float)
    return nodes, weights, (E, analysis, Et, Ep, degrees)
