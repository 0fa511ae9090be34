"""The hyperbolic-plane model of unit-determinant Gram matrices.

Points (X, Y) with X > 0 parametrize determinant-1 positive 2x2 matrices

    N(X, Y) = [[X + Y^2/X, Y/X], [Y/X, 1/X]],

and the induced symmetric-space metric is (dX^2 + dY^2)/X^2.  The module
provides the conversions, the shear-and-scale isometry used to glue the
two flat model families, the tangency relation between their geodesic
images, and the C^2 interpolation of the glued Gram curve.

All curve functions accept floats or `Jet`s, so the metric assembly
downstream gets exact derivatives for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .jets import Jet, smoothstep_quintic, value
from .lattice import GramMatrix2

BLEND_START = math.pi / 3.0
BLEND_END = 2.0 * math.pi / 3.0


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if self.x <= 0.0:
            raise ValueError(f"hyperbolic-plane point needs X > 0, got {self.x}")


def normalized(gram: GramMatrix2, tol: float = 1e-12) -> GramMatrix2:
    """Check det = 1 within tol and return the Gram matrix unchanged."""
    if abs(gram.det - 1.0) > tol:
        raise ValueError(f"Gram matrix not normalized: det = {gram.det}")
    return gram


def gram_to_h(gram: GramMatrix2) -> HPoint:
    normalized(gram)
    return HPoint(1.0 / gram.g22, gram.g12 / gram.g22)


def h_to_gram(h: HPoint) -> GramMatrix2:
    return GramMatrix2(
        g11=h.x + h.y ** 2 / h.x,
        g12=h.y / h.x,
        g22=1.0 / h.x,
    )


def phi_map(h: HPoint, sigma: float, tau: float) -> HPoint:
    """Isometry (X, Y) -> (X/sigma, (Y - 1/(1-tau))/sigma).

    This is the basis change to ((p1 - p2/(1-tau))/sqrt(sigma),
    sqrt(sigma) p2) on the torus generators.
    """
    if sigma <= 0.0:
        raise ValueError(f"need sigma > 0, got {sigma}")
    if tau >= 1.0:
        raise ValueError(f"need tau < 1, got {tau}")
    return HPoint(h.x / sigma, (h.y - 1.0 / (1.0 - tau)) / sigma)


def phi_inverse(h: HPoint, sigma: float, tau: float) -> HPoint:
    if sigma <= 0.0:
        raise ValueError(f"need sigma > 0, got {sigma}")
    if tau >= 1.0:
        raise ValueError(f"need tau < 1, got {tau}")
    return HPoint(sigma * h.x, sigma * h.y + 1.0 / (1.0 - tau))


def tangency_parameter(tau: float) -> float:
    """tau' with 1 - tau' = 1/(1 - tau).

    Makes the geodesic images of the two model families tangent: the half
    circle through (0,0) and (0, 1/(1-tau)) touches the line Y = 1 - tau'
    exactly at its apex.
    """
    if tau >= 1.0:
        raise ValueError(f"need tau < 1, got {tau}")
    return 1.0 - 1.0 / (1.0 - tau)


# -- model curves, generic over Jet/float arguments -------------------------


def model_curve_one(sigma, tau, r, theta):
    """(X, Y) image of the first model family at (r, theta).

    The image lies on the circle X^2 + Y^2 = Y/(1-tau) through (0, 0) and
    (0, 1/(1-tau)).
    """
    rho = r * _sin(theta)
    d = (1.0 - tau) ** 2 * rho * rho + sigma * sigma
    return sigma * rho / d, (1.0 - tau) * rho * rho / d


def model_curve_two(sigma, tau, r, theta):
    """(X, Y) image of the second model family: the line Y = 1 - tau."""
    rho = r * _sin(theta)
    return sigma / rho, 1.0 - tau + 0.0 * rho


def phi_model_curve_one(sigma, tau, r, theta):
    """Phi applied to the first family; exact composition.

    Note the Y-component is -sigma / ((1-tau) D); composing the displayed
    maps is what keeps phi_inverse(interpolant) equal to the model Gram
    matrices on the nose outside the blend zone.
    """
    rho = r * _sin(theta)
    d = (1.0 - tau) ** 2 * rho * rho + sigma * sigma
    return rho / d, -sigma / ((1.0 - tau) * d)


def phi_model_curve_two_tangent(sigma, tau, r, theta):
    """Phi applied to the second family at the tangency parameter tau'."""
    rho = r * _sin(theta)
    return 1.0 / rho, 0.0 * rho


def interpolate_glued(sigma, tau, r, theta):
    """C^2 glued curve in Phi-coordinates, as an (X, Y) pair.

    Equals the Phi-image of family one for theta <= pi/3 and of family two
    (at the tangency parameter) for theta >= 2 pi/3; in between the two are
    blended affinely in (X, Y) with a quintic smoothstep, which is C^2 and
    preserves the common small-parameter limit (1/(r sin theta), 0).
    """
    x1, y1 = phi_model_curve_one(sigma, tau, r, theta)
    x2, y2 = phi_model_curve_two_tangent(sigma, tau, r, theta)
    t = (theta - BLEND_START) / (BLEND_END - BLEND_START)
    chi = smoothstep_quintic(t)
    one_m_chi = 1.0 - chi
    return one_m_chi * x1 + chi * x2, one_m_chi * y1 + chi * y2


def glued_gram_entries(sigma, tau, r, theta):
    """Entries (G11, G12, G22) of the normalized glued Gram matrix.

    phi_inverse of the interpolant, pushed through the matrix form; works
    on jets as well as floats.
    """
    hx, hy = interpolate_glued(sigma, tau, r, theta)
    x = sigma * hx
    y = sigma * hy + 1.0 / (1.0 - tau)
    return x + y * y / x, y / x, 1.0 / x


def glued_hpoint(sigma: float, tau: float, r: float, theta: float) -> HPoint:
    """The interpolant as an HPoint in Phi-coordinates."""
    x, y = interpolate_glued(sigma, tau, r, theta)
    return HPoint(value(x), value(y))


def glued_normalized_gram(sigma: float, tau: float, r: float, theta: float) -> GramMatrix2:
    """Normalized Gram matrix of the glued family (after phi_inverse)."""
    g11, g12, g22 = glued_gram_entries(sigma, tau, r, theta)
    return GramMatrix2(value(g11), value(g12), value(g22))


def circle_residual(h: HPoint, tau: float) -> float:
    """Algebraic residual of the family-one circle X^2 + Y^2 = Y/(1-tau)."""
    return h.x ** 2 + h.y ** 2 - h.y / (1.0 - tau)


def _sin(x):
    return x.sin() if isinstance(x, Jet) else math.sin(x)
