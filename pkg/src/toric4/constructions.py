"""The two explicit collapsing constructions over the half plane.

`glued_metric` builds the constant-parameter family on S^3 x [1/2, 2]
whose fiber Gram matrix follows the first flat model up to theta = pi/3,
the second from 2 pi/3 on, and the C^2 hyperbolic-plane interpolation in
between.  `nogap_metric` is the same construction with radial profiles
sigma(r) = eps r / log r and tau(r) = (log r)^{-1/2} on an end r >= r0.

Sweeps report the tensor curvature norm and the fiber covering radius on
deterministic grids; the Gromov-Hausdorff distance to the flat annulus is
bounded by the sup covering radius because the base block is exactly
dr^2 + r^2 dtheta^2.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import toric
from .curvature import Chart, ChartPoint
from .errors import DomainError
from .hyperbolic import glued_gram_entries, tangency_parameter
from .jets import Jet, seed_coords
from .lattice import covering_radius
from .toric import GramField, ToricMetric

DEFAULT_THETA_MIN = 0.05
GLUED_RADII = (0.5, 2.0)


@dataclass(frozen=True)
class GluedFamily:
    """Constant collapse parameters; sigma/tau small drives codim-2 collapse."""

    sigma: float
    tau: float

    def __post_init__(self):
        if not (self.sigma > 0.0 and 0.0 < self.tau < 1.0):
            raise DomainError(
                f"need sigma > 0 and 0 < tau < 1, got ({self.sigma}, {self.tau})"
            )

    @property
    def tau_prime(self):
        return tangency_parameter(self.tau)


@dataclass(frozen=True)
class NoGapMetric:
    """Radial-profile version: sigma = eps r/log r, tau = (log r)^(-1/2)."""

    epsilon: float
    r0: float = 10.0

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        if self.r0 <= math.e:
            raise DomainError(f"inner radius must exceed e, got {self.r0}")

    def sigma(self, r):
        return self.epsilon * r / _log(r)

    def tau(self, r):
        return _log(r) ** (-0.5)

    def profile_jets(self, r: float):
        rj = Jet.variable(r, 0)
        return self.sigma(rj), self.tau(rj)


def _log(r):
    return r.log() if isinstance(r, Jet) else math.log(r)


def _scaled_glued_entries(sigma, tau, rj, thj):
    """Fiber Gram entries sigma * r * sin(theta) * (normalized glued Gram)."""
    n11, n12, n22 = glued_gram_entries(sigma, tau, rj, thj)
    srs = sigma * rj * thj.sin()
    return srs * n11, srs * n12, srs * n22


def glued_metric(fam: GluedFamily) -> ToricMetric:
    def entries(rj, thj):
        return _scaled_glued_entries(fam.sigma, fam.tau, rj, thj)

    gram = GramField(
        name=f"glued(sigma={fam.sigma}, tau={fam.tau})",
        entries=entries,
        chart=Chart.POLAR,
        domain=(GLUED_RADII, (0.0, math.pi)),
        generator_order=(2, 1),
        parameters={"sigma": fam.sigma, "tau": fam.tau},
    )
    return ToricMetric(gram)


def nogap_metric(n: NoGapMetric) -> ToricMetric:
    def entries(rj, thj):
        sigma = n.sigma(rj)
        tau = n.tau(rj)
        return _scaled_glued_entries(sigma, tau, rj, thj)

    gram = GramField(
        name=f"nogap(epsilon={n.epsilon})",
        entries=entries,
        chart=Chart.POLAR,
        domain=((n.r0, np.inf), (0.0, math.pi)),
        generator_order=(2, 1),
        parameters={"epsilon": n.epsilon, "r0": n.r0},
    )
    return ToricMetric(gram)


# -- sweeps -------------------------------------------------------------------


@dataclass(frozen=True)
class SweepReport:
    grid: tuple
    rows: tuple  # (r, theta, rm_norm, covering_radius) per grid point
    sup_rm_norm: float
    sup_covering_radius: float
    base_metric_deviation: float = 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("r,theta,rm_norm,covering_radius\n")
        for row in self.rows:
            buf.write(",".join(repr(v) for v in row) + "\n")
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "grid": list(self.grid),
            "sup_rm_norm": self.sup_rm_norm,
            "sup_covering_radius": self.sup_covering_radius,
            "base_metric_deviation": self.base_metric_deviation,
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def curvature_sweep(
    metric: ToricMetric,
    grid=(13, 61),
    theta_min: float = DEFAULT_THETA_MIN,
    r_range=None,
) -> SweepReport:
    """Deterministic (r, theta) sweep of rm_norm and fiber covering radius.

    Points are visited in row-major grid order and the sups reduced
    sequentially, so reports are reproducible bit for bit.
    """
    if metric.chart is not Chart.POLAR:
        raise DomainError("curvature sweeps run in the polar chart")
    (r_lo, r_hi), _ = metric.gram.domain
    if r_range is not None:
        r_lo, r_hi = r_range
    if not np.isfinite(r_hi):
        raise DomainError("sweep needs a finite radial range")
    nr, nth = grid
    rs = np.linspace(r_lo, r_hi, nr)
    ths = np.linspace(theta_min, math.pi - theta_min, nth)
    rows = []
    sup_rm = 0.0
    sup_cov = 0.0
    for r in rs:
        for th in ths:
            p = metric.point(r, th)
            packet = toric.curvature_packet(metric, p)
            cov = covering_radius(toric.fiber_lattice(metric, p))
            rows.append((float(r), float(th), packet.rm_norm, cov))
            sup_rm = max(sup_rm, packet.rm_norm)
            sup_cov = max(sup_cov, cov)
    return SweepReport(
        grid=(nr, nth),
        rows=tuple(rows),
        sup_rm_norm=sup_rm,
        sup_covering_radius=sup_cov,
    )


@dataclass(frozen=True)
class AsymptoticCurvatureEstimate:
    estimate: float
    tail_slope: float
    table: tuple  # (r, r^2 * sup_theta rm_norm)


def asymptotic_curvature_estimate(
    metric: ToricMetric,
    r_schedule=None,
    theta_band=(DEFAULT_THETA_MIN, math.pi - DEFAULT_THETA_MIN),
    n_theta: int = 41,
) -> AsymptoticCurvatureEstimate:
    """limsup_r r^2 sup_theta |Rm| estimated on a geometric schedule.

    The estimate is the max of r^2 sup_theta rm_norm over the tail half of
    the schedule; the reported slope is the log-log least-squares slope
    over the same tail, so a reviewer can judge how settled the limit is.
    """
    if r_schedule is None:
        r_schedule = np.geomspace(1e2, 1e6, 25)
    ths = np.linspace(theta_band[0], theta_band[1], n_theta)
    table = []
    for r in r_schedule:
        sup_rm = max(
            toric.curvature_packet(metric, metric.point(float(r), float(th))).rm_norm
            for th in ths
        )
        table.append((float(r), float(r) ** 2 * sup_rm))
    tail = table[len(table) // 2 :]
    log_r = np.log([row[0] for row in tail])
    log_v = np.log([max(row[1], 1e-300) for row in tail])
    slope = float(np.polyfit(log_r, log_v, 1)[0]) if len(tail) > 1 else 0.0
    return AsymptoticCurvatureEstimate(
        estimate=max(row[1] for row in tail),
        tail_slope=slope,
        table=tuple(table),
    )


# -- limit frame brackets ------------------------------------------------------


@dataclass(frozen=True)
class FrameBracketReport:
    scale: float
    bracket_norms: dict
    exceptional_ratio: float


def limit_frame_check(n: NoGapMetric, r: float, theta: float = math.pi / 2) -> FrameBracketReport:
    """Norms of the pairwise Lie brackets of the rescaled end frame.

    The frame is {s d_r, d_theta, (s/sigma)(d_1 - (1-tau)^{-1} d_2), d_2}
    with the scale s frozen to r, measured in the rescaled metric s^{-2} g.
    Only the (d_r, xi) bracket is nonzero; `exceptional_ratio` reports the
    scale-free quantity |[d_r, xi_hat]| * r / |xi_hat| for the unit field
    xi_hat = sigma^{-1} (d_1 - (1-tau)^{-1} d_2).
    """
    if r < n.r0:
        raise DomainError(f"radius {r} below inner radius {n.r0}")
    metric = nogap_metric(n)
    p = metric.point(r, theta)
    c0j, c1j, _, _ = seed_coords((r, theta, 0.0, 0.0), active=(0, 1))
    g11, g12, g22 = metric.gram.gram_jets(c0j, c1j)
    gram = np.array([[g11.val, g12.val], [g12.val, g22.val]])
    sigma, tau = n.profile_jets(r)
    w_coeff = 1.0 / (1.0 - tau)  # d_1 - w_coeff * d_2
    inv_sigma = 1.0 / sigma

    # xi_hat components (phi1, phi2) and their exact r-derivatives
    comp1 = inv_sigma
    comp2 = -inv_sigma * w_coeff
    xi = np.array([comp1.val, comp2.val])
    dxi = np.array([comp1.d[0], comp2.d[0]])

    def fiber_norm(v):
        return float(np.sqrt(max(v @ gram @ v, 0.0)))

    norm_xi = fiber_norm(xi)
    bracket = dxi  # [d_r, xi_hat] has fiber components d(xi)/dr
    exceptional = fiber_norm(bracket) * r / norm_xi

    s = r
    rescale = 1.0 / s  # norms in s^{-2} g
    norms = {
        ("e_r", "e_theta"): 0.0,
        ("e_r", "xi"): fiber_norm(s * s * dxi) * rescale,
        ("e_r", "d_2"): 0.0,
        ("e_theta", "xi"): 0.0,
        ("e_theta", "d_2"): 0.0,
        ("xi", "d_2"): 0.0,
    }
    return FrameBracketReport(
        scale=s,
        bracket_norms={f"[{a},{b}]": v for (a, b), v in norms.items()},
        exceptional_ratio=exceptional,
    )
