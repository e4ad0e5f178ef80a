"""The Bargmann transform in both realizations (coefficient relabeling and
kernel integral), Fock-side evaluation, and quadrature oracles over the
Gaussian-weighted complex plane.

Two pairings on C^d are used and deliberately kept apart:

  * bilinear  <z, w> = sum z_j w_j          (Bargmann kernel)
  * sesquilinear (z, w) = sum z_j conj(w_j) (Fock inner products, Wick kernels)

Conflating them silently corrupts every kernel, so each function documents
which one it uses.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import (
    FOCK,
    HERMITE,
    CoefficientExpansion,
    InputDataError,
    UsageError,
    gauss_hermite,
    tensor_rule,
)
from .hermite import _sample


class AccuracyWarning(UserWarning):
    """A quadrature order is too low for the polynomial degrees present."""


@dataclass(frozen=True)
class FockPoint:
    """A point z in C^d with the two pairings attached."""

    z: tuple

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(complex(c) for c in self.z))
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in self.z):
            raise UsageError("Fock point components must be finite")

    @property
    def dimension(self):
        return len(self.z)

    def bilinear(self, other) -> complex:
        return bilinear_pairing(self.z, _as_complex_vector(other))

    def sesquilinear(self, other) -> complex:
        return sesquilinear_pairing(self.z, _as_complex_vector(other))


def _as_complex_vector(z) -> np.ndarray:
    if isinstance(z, FockPoint):
        return np.asarray(z.z, dtype=complex)
    return np.atleast_1d(np.asarray(z, dtype=complex))


def bilinear_pairing(z, w) -> complex:
    """<z, w> = sum z_j w_j (no conjugation)."""
    return complex(np.sum(np.asarray(z, dtype=complex) * np.asarray(w, dtype=complex)))


def sesquilinear_pairing(z, w) -> complex:
    """(z, w) = sum z_j conj(w_j)."""
    return complex(np.sum(np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))))


def bargmann_kernel(z, y) -> complex:
    """Bargmann kernel pi^{-d/4} exp(-1/2(<z,z> + |y|^2) + sqrt(2) <z,y>).

    Uses the *bilinear* pairing.  The exponent is accumulated first and
    exponentiated once, so moderate |z| (up to ~6) stays in range despite the
    e^{+sqrt(2) z.y} growth.
    """
    z = _as_complex_vector(z)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if z.shape[-1] != y.shape[-1]:
        raise UsageError("Bargmann kernel: dimension mismatch between z and y")
    d = z.shape[-1]
    exponent = (-0.5 * (np.sum(z * z) + np.sum(y * y, axis=-1))
                + math.sqrt(2.0) * np.sum(z * y, axis=-1))
    return np.pi ** (-d / 4.0) * np.exp(exponent)


def bargmann_integral(f, z, quad_order: int = 60) -> complex:
    """Quadrature value of the Bargmann transform integral of f at z.

    Tensor Gauss-Hermite in y with the e^{-|y|^2} weight folded back in, as
    in hermite_coefficients.
    """
    z = _as_complex_vector(z)
    d = z.shape[-1]
    rule = gauss_hermite(quad_order)
    points, weights, _ = tensor_rule(rule, d)
    fvals = _sample(f, points)
    kernel = bargmann_kernel(z, points)
    integrand = fvals * kernel * np.exp(np.sum(points**2, axis=1))
    return complex(np.sum(weights * integrand))


def bargmann_coeff(f: CoefficientExpansion) -> CoefficientExpansion:
    """Coefficient realization of the transform: h_a -> e_a, coefficients kept.

    Isometric by construction (identical coefficient map on orthonormal
    bases)."""
    if f.side != HERMITE:
        raise UsageError("bargmann_coeff expects a hermite-side expansion")
    return f.with_side(FOCK)


def inverse_bargmann_coeff(F: CoefficientExpansion) -> CoefficientExpansion:
    """Inverse of bargmann_coeff: e_a -> h_a."""
    if F.side != FOCK:
        raise UsageError("inverse_bargmann_coeff expects a fock-side expansion")
    return F.with_side(HERMITE)


def evaluate_fock(F: CoefficientExpansion, z) -> complex:
    """Value sum c_a z^a / sqrt(a!) of a Fock-side expansion at z."""
    if F.side != FOCK:
        raise UsageError("evaluate_fock expects a fock-side expansion")
    z = _as_complex_vector(z)
    if z.shape[-1] != F.dimension:
        raise UsageError("point dimension does not match the expansion")
    total = 0.0 + 0.0j
    for alpha, c in F.coeffs.items():
        mono = 1.0 + 0.0j
        for j, n in enumerate(alpha):
            mono *= z[j] ** n
        total += c * mono / math.sqrt(alpha.factorial())
    return complex(total)


@lru_cache(maxsize=None)
def gaussian_plane_rule(radial_order: int = 40, angular_order: int = 64):
    """Quadrature (points, weights) for pi^{-1} * integral over C of
    g(w) e^{-|w|^2} dlambda(w), d = 1.

    Polar coordinates with the substitution u = r^2: Gauss-Laguerre radially
    (exact for even polynomial radial parts) and a uniform angular grid
    (exact for Fourier modes below angular_order).
    """
    if radial_order < 1 or angular_order < 1:
        raise UsageError("quadrature orders must be >= 1")
    u, lw = np.polynomial.laguerre.laggauss(radial_order)
    theta = 2.0 * np.pi * np.arange(angular_order) / angular_order
    r = np.sqrt(u)
    points = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.broadcast_to(lw[:, None] / angular_order,
                              (radial_order, angular_order)).ravel().copy()
    return points, weights


def fock_inner_quadrature(F: CoefficientExpansion, G: CoefficientExpansion,
                          radial_order: int = 40, angular_order: int = 64) -> complex:
    """A^2 inner product by polar quadrature, d = 1 cross-check path.

    Higher dimensions should use expansion_inner, which is exact.
    """
    if F.side != FOCK or G.side != FOCK:
        raise UsageError("fock_inner_quadrature expects fock-side expansions")
    if F.dimension != 1 or G.dimension != 1:
        raise UsageError("fock_inner_quadrature is a d = 1 oracle; use expansion_inner")
    if angular_order <= F.degree_bound + G.degree_bound:
        warnings.warn(
            f"angular order {angular_order} <= combined degree "
            f"{F.degree_bound + G.degree_bound}; result may be inaccurate",
            AccuracyWarning, stacklevel=2)
    points, weights = gaussian_plane_rule(radial_order, angular_order)
    Fv = np.array([evaluate_fock(F, w) for w in points])
    Gv = np.array([evaluate_fock(G, w) for w in points])
    return complex(np.sum(weights * Fv * np.conj(Gv)))


def reproducing_quadrature(F: CoefficientExpansion, z,
                           radial_order: int = 40, angular_order: int = 64) -> complex:
    """pi^{-1} * integral of F(w) e^{(z,w)} e^{-|w|^2} dlambda(w), d = 1.

    Equals F(z) for entire F; exists to catch pairing-convention bugs.  Uses
    the *sesquilinear* pairing.
    """
    if F.side != FOCK or F.dimension != 1:
        raise UsageError("reproducing_quadrature is a d = 1 fock-side oracle")
    z = complex(_as_complex_vector(z)[0])
    points, weights = gaussian_plane_rule(radial_order, angular_order)
    Fv = np.array([evaluate_fock(F, w) for w in points])
    return complex(np.sum(weights * Fv * np.exp(z * np.conj(points))))
