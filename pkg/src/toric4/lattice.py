"""Exact geometry of rank-2 lattices and flat 2-tori.

The covering radius (= diameter of the flat torus R^2/Lambda) is computed
exactly as the circumradius of the Voronoi cell of a Lagrange-Gauss
reduced basis, which needs only the three side lengths of the reduced
superbase triangle.  Brute-force sampling lives in the test suite as an
independent oracle, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMetricError

_MAX_REDUCTION_STEPS = 10_000


@dataclass(frozen=True)
class GramMatrix2:
    """Pairwise inner products of the two torus generators."""

    g11: float
    g12: float
    g22: float

    def __post_init__(self):
        if self.g11 <= 0.0 or self.det <= 0.0:
            raise DegenerateMetricError(
                f"Gram matrix not positive definite: g11={self.g11}, det={self.det}"
            )

    @property
    def det(self):
        return self.g11 * self.g22 - self.g12 ** 2

    @property
    def matrix(self):
        return np.array([[self.g11, self.g12], [self.g12, self.g22]])


@dataclass(frozen=True)
class Lattice2:
    """A planar lattice given by two basis row vectors."""

    basis: tuple

    @staticmethod
    def from_rows(v1, v2):
        b = np.array([v1, v2], dtype=float)
        if abs(np.linalg.det(b)) < 1e-300:
            raise DegenerateMetricError("lattice basis is degenerate")
        return Lattice2(basis=(tuple(b[0]), tuple(b[1])))

    @property
    def rows(self):
        return np.array(self.basis, dtype=float)

    @property
    def det(self):
        return abs(np.linalg.det(self.rows))


def reduce(lat: Lattice2) -> Lattice2:
    """Lagrange-Gauss reduced basis: |v1| <= |v2| <= |v2 +- v1|."""
    v1, v2 = lat.rows
    for _ in range(_MAX_REDUCTION_STEPS):
        if np.dot(v1, v1) > np.dot(v2, v2):
            v1, v2 = v2, v1
        t = round(np.dot(v1, v2) / np.dot(v1, v1))
        if t == 0:
            break
        v2 = v2 - t * v1
    else:
        raise RuntimeError("lattice reduction did not terminate")
    if np.dot(v1, v1) > np.dot(v2, v2):
        v1, v2 = v2, v1
    return Lattice2.from_rows(v1, v2)


def systole(lat: Lattice2) -> float:
    """Length of the shortest nonzero lattice vector."""
    return float(np.linalg.norm(reduce(lat).rows[0]))


def area(lat: Lattice2) -> float:
    return lat.det


def covering_radius(lat: Lattice2) -> float:
    """Max distance from the plane to the lattice = flat-torus diameter.

    For a reduced basis (v1, v2) with obtuse angle, the Voronoi cell is the
    hexagon whose vertices are the circumcenters of the superbase triangle
    {0, v1, v1+v2}; its circumradius |v1||v2||v1+v2| / (2 |det|) is the
    covering radius (degenerating to the rectangle half-diagonal when the
    basis is orthogonal).
    """
    v1, v2 = reduce(lat).rows
    if np.dot(v1, v2) > 0.0:
        v2 = -v2
    v3 = v1 + v2
    a = np.linalg.norm(v1)
    b = np.linalg.norm(v2)
    c = np.linalg.norm(v3)
    det = abs(v1[0] * v2[1] - v1[1] * v2[0])
    return float(a * b * c / (2.0 * det))


def lattice_from_gram(gram: GramMatrix2, period: float = 2.0 * math.pi) -> Lattice2:
    """Realize a Gram matrix as period * (Cholesky rows)."""
    if period <= 0.0:
        raise ValueError(f"period must be positive, got {period}")
    try:
        low = np.linalg.cholesky(gram.matrix)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMetricError("Gram matrix not positive definite") from exc
    return Lattice2.from_rows(period * low[0], period * low[1])


def collapse_ratio(a: float, b: float):
    """Ratio b/a controlling the torus R^2/<(1,0), (1-a,b)> diameter.

    The torus diameter tends to zero along a parameter sequence exactly
    when this ratio does (codimension-2 collapse); b = 0 is the degenerate
    rank-deficient limit and is rejected.
    """
    if a <= 0.0:
        raise ValueError(f"need a > 0, got {a}")
    if b == 0.0:
        raise DegenerateMetricError("b = 0 gives a rank-deficient collapse family")
    ratio = b / a
    return ratio, abs(ratio) < 0.1


def skew_torus(a: float, b: float) -> Lattice2:
    """The lattice spanned by (1, 0) and (1-a, b)."""
    return Lattice2.from_rows((1.0, 0.0), (1.0 - a, b))
