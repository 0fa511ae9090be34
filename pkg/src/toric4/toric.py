"""T^2-invariant 4-metrics over half-plane charts.

A `GramField` maps base points to the 2x2 fiber Gram matrix through jet
arithmetic; a `ToricMetric` pairs it with the flat base form of its chart
(drho^2 + dz^2 or dr^2 + r^2 dtheta^2).  On top of the assembled metric
jets sit the collapse diagnostics: the deviation/size/length quantities
(tau, sigma, f) of the fiber lattice, the fiber lattice itself, and the
geodesic curvature of Killing orbits.

Fiber Gram matrices of collapsing families are nearly degenerate, so
curvature is evaluated after a constant GL(2) change of the fiber basis
that makes the Gram matrix the identity at the evaluation point; tensor
norms, Ricci and the Weyl blocks are invariant under this.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curvature as curv
from .curvature import Chart, ChartPoint, MetricJet
from .errors import AxisEvaluationError, DegenerateFiberError, DomainError
from .jets import Jet, seed_coords
from .lattice import GramMatrix2, Lattice2, lattice_from_gram



@dataclass(frozen=True)
class GramField:
    """Smooth base point -> fiber Gram matrix, with jet access.

    `entries` maps two base-coordinate jets to the (G11, G12, G22) jets.
    `generator_order` names which torus generator plays the translation /
    rotation role in the collapse diagnostics: (1, 2) means tau and sigma
    are extracted with phi_1 as the translation-like generator, (2, 1)
    swaps them.  The order is a per-family convention, not geometry.
    """

    name: str
    entries: object
    chart: Chart = Chart.CARTESIAN
    domain: tuple = ((0.0, np.inf), (-np.inf, np.inf))
    generator_order: tuple = (1, 2)
    parameters: dict = field(default_factory=dict)

    def gram_jets(self, c0, c1):
        return self.entries(c0, c1)

    def contains(self, point: ChartPoint) -> bool:
        (a0, b0), (a1, b1) = self.domain
        c0, c1 = point.base
        return a0 <= c0 <= b0 and a1 <= c1 <= b1


@dataclass(frozen=True)
class ToricMetric:
    gram: GramField

    @property
    def chart(self) -> Chart:
        return self.gram.chart

    def point(self, c0, c1, phi1=0.0, phi2=0.0) -> ChartPoint:
        return ChartPoint((c0, c1, phi1, phi2), self.chart)


def _check_interior(metric: ToricMetric, p: ChartPoint):
    if p.chart is not metric.chart:
        raise DomainError(f"point chart {p.chart} does not match metric chart {metric.chart}")
    if not p.interior():
        raise AxisEvaluationError(f"point {p.coords} lies on the chart axis/boundary")
    if not metric.gram.contains(p):
        raise DomainError(f"point {p.coords} outside domain of {metric.gram.name}")


def base_block_jets(chart: Chart, c0_jet, c1_jet):
    """Jets of the flat base metric block for the chart."""
    one = Jet.constant(1.0)
    if chart is Chart.CARTESIAN:
        return one, one
    return one, c0_jet * c0_jet


def assemble(metric: ToricMetric, p: ChartPoint, fiber_basis=None) -> MetricJet:
    """MetricJet of the full 4-metric at p.

    `fiber_basis` (2x2 constant matrix B) optionally rewrites the fiber
    block as B^T G B; this is a chart change on the torus and leaves all
    curvature invariants untouched.
    """
    _check_interior(metric, p)
    c0, c1 = p.base
    c0j, c1j, _, _ = seed_coords((c0, c1, 0.0, 0.0), active=(0, 1))
    g11, g12, g22 = metric.gram.gram_jets(c0j, c1j)
    if g11.val <= 0.0 or (g11.val * g22.val - g12.val ** 2) <= 0.0:
        raise DegenerateFiberError(
            f"fiber Gram not positive definite at {p.coords[:2]}"
        )
    if fiber_basis is not None:
        b = np.asarray(fiber_basis, dtype=float)
        gmat = [[g11, g12], [g12, g22]]
        out = []
        for a in range(2):
            row = []
            for c in range(2):
                acc = Jet.constant(0.0)
                for i in range(2):
                    for j in range(2):
                        acc = acc + (b[i, a] * b[j, c]) * gmat[i][j]
                row.append(acc)
            out.append(row)
        g11, g12, g22 = out[0][0], out[0][1], out[1][1]
    b00, b11 = base_block_jets(metric.chart, c0j, c1j)
    z = Jet.constant(0.0)
    return MetricJet.from_jets(
        [
            [b00, z, z, z],
            [z, b11, z, z],
            [z, z, g11, g12],
            [z, z, g12, g22],
        ]
    )


def gram_values(metric: ToricMetric, p: ChartPoint) -> GramMatrix2:
    _check_interior(metric, p)
    c0j, c1j, _, _ = seed_coords((*p.base, 0.0, 0.0), active=(0, 1))
    g11, g12, g22 = metric.gram.gram_jets(c0j, c1j)
    return GramMatrix2(g11.val, g12.val, g22.val)


def conditioning_basis(metric: ToricMetric, p: ChartPoint) -> np.ndarray:
    """Constant fiber basis making the Gram matrix the identity at p."""
    gram = gram_values(metric, p).matrix
    return np.linalg.inv(np.linalg.cholesky(gram)).T


def curvature_packet(
    metric: ToricMetric,
    p: ChartPoint,
    orientation: int | None = None,
    normalize_fiber: bool = True,
) -> curv.CurvaturePacket:
    """Riemann/Ricci/scalar (and Weyl blocks if orientation given) at p."""
    basis = conditioning_basis(metric, p) if normalize_fiber else None
    jet = assemble(metric, p, fiber_basis=basis)
    packet = curv.riemann(jet)
    if orientation is not None:
        packet = curv.weyl_blocks(packet, jet, orientation)
    return packet


@dataclass(frozen=True)
class PTQuantities:
    """Collapse quantities of the fiber lattice at a base point.

    f is the length of the rotation-role generator, tau the deviation of
    the other generator from the model alignment, sigma the length of the
    orthogonal combination; tau_rho and sigma_rho are derivatives along
    the first chart coordinate (rho, resp. r at fixed theta).
    """

    f: float
    tau: float
    sigma: float
    tau_rho: float
    sigma_rho: float
    f_rho: float
    order: tuple
    combo: tuple

    @property
    def orbit_area_density(self):
        return self.f * self.sigma


def pt_quantities(metric: ToricMetric, p: ChartPoint, order=None) -> PTQuantities:
    _check_interior(metric, p)
    if order is None:
        order = metric.gram.generator_order
    c0j, c1j, _, _ = seed_coords((*p.base, 0.0, 0.0), active=(0, 1))
    g11, g12, g22 = metric.gram.gram_jets(c0j, c1j)
    if order == (1, 2):
        gaa, gab, gbb = g11, g12, g22
    elif order == (2, 1):
        gaa, gab, gbb = g22, g12, g11
    else:
        raise ValueError(f"generator order must be (1, 2) or (2, 1), got {order}")
    if gbb.val <= 0.0:
        raise DegenerateFiberError("second generator has nonpositive squared length")
    f = gbb.sqrt()
    one_minus_tau = gab / gbb
    tau = 1.0 - one_minus_tau
    sig_sq = gaa - gab * gab / gbb
    if sig_sq.val <= 0.0:
        raise DegenerateFiberError("orthogonal generator combination degenerates")
    sigma = sig_sq.sqrt()
    if order == (1, 2):
        combo = (1.0, -one_minus_tau.val)
    else:
        combo = (-one_minus_tau.val, 1.0)
    return PTQuantities(
        f=f.val,
        tau=tau.val,
        sigma=sigma.val,
        tau_rho=tau.d[0],
        sigma_rho=sigma.d[0],
        f_rho=f.d[0],
        order=order,
        combo=combo,
    )


def fiber_lattice(metric: ToricMetric, p: ChartPoint, period: float = 2.0 * np.pi) -> Lattice2:
    return lattice_from_gram(gram_values(metric, p), period)


@dataclass(frozen=True)
class KillingCombo:
    """Constant combination c1 d/dphi1 + c2 d/dphi2."""

    c1: float
    c2: float

    def __post_init__(self):
        if self.c1 == 0.0 and self.c2 == 0.0:
            raise ValueError("Killing combination must be nonzero")

    @property
    def vector(self):
        return np.array([0.0, 0.0, self.c1, self.c2])


def orbit_geodesic_curvature(metric: ToricMetric, p: ChartPoint, combo: KillingCombo) -> float:
    """|nabla_T T| along the orbit of the combination, T the unit tangent.

    The combination has constant components and base-only norm, so the
    acceleration reduces to Gamma(V, V)/|V|^2.
    """
    jet = assemble(metric, p)
    v = combo.vector
    vnorm_sq = float(v @ jet.g @ v)
    if vnorm_sq <= 1e-300:
        raise DegenerateFiberError("Killing combination has zero length at the point")
    gam = curv.christoffel(jet)
    acc = np.einsum("kij,i,j->k", gam, v, v) / vnorm_sq
    return float(np.sqrt(max(acc @ jet.g @ acc, 0.0)))


def generator_norm(metric: ToricMetric, p: ChartPoint, combo: KillingCombo) -> float:
    jet_g = gram_values(metric, p).matrix
    c = np.array([combo.c1, combo.c2])
    return float(np.sqrt(c @ jet_g @ c))


def rotation_normalizations(metric: ToricMetric, p: ChartPoint):
    """(|d_phi1| kappa(d_phi1), |d_phi2| kappa(d_phi2)) at p.

    A value of 1 identifies the generator as a rotation field with period
    2*pi; disagreement between the two flags the ambiguous labeling that a
    non-simply-connected end permits.
    """
    out = []
    for c in ((1.0, 0.0), (0.0, 1.0)):
        combo = KillingCombo(*c)
        out.append(
            generator_norm(metric, p, combo) * orbit_geodesic_curvature(metric, p, combo)
        )
    return tuple(out)
