"""Ready-made metric families: flat R^4, the flat screw quotients, and the
special Kasner end with its two compatible complex structures.

The screw quotient X(alpha, sigma0) is the quotient of C^2 by
(z1, z2) -> (z1 + sigma0, e^{2 pi i alpha} z2); over the half plane its
fiber Gram matrix is [[rho^2, a rho^2], [a rho^2, a^2 rho^2 + sigma0^2]].
Whether alpha is rational decides the asymptotic cone, which is why the
rationality is declared by the caller instead of sniffed from floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import toric
from .curvature import Chart, ChartPoint, MetricJet
from .errors import DomainError
from .jets import Jet, seed_coords
from .lattice import GramMatrix2, covering_radius, systole
from .toric import GramField, ToricMetric


@dataclass(frozen=True)
class ConeDescriptor:
    """Expected asymptotic cone: R4, R3, half-plane, or a wedge x line."""

    kind: str
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in ("R4", "R3", "HalfPlane", "WedgeTimesLine", "Ray", "Annulus"):
            raise ValueError(f"unknown cone kind {self.kind}")
        if self.kind == "WedgeTimesLine":
            if self.angle is None or not 0.0 < self.angle <= 2.0 * math.pi:
                raise ValueError(f"wedge angle must lie in (0, 2 pi], got {self.angle}")


@dataclass(frozen=True)
class ModelEnd:
    kind: str
    metric: object
    cone: ConeDescriptor
    parameters: dict = field(default_factory=dict)
    rational: Fraction | None = None

    @property
    def is_toric(self):
        return isinstance(self.metric, ToricMetric)


# -- flat models ------------------------------------------------------------


def flat_r4(chart: Chart = Chart.CARTESIAN) -> ModelEnd:
    """Flat R^4 = R^2 x R^2 in bipolar coordinates: Gram diag(rho^2, z^2)."""

    def entries(c0, c1):
        if chart is Chart.CARTESIAN:
            rho, z = c0, c1
        else:
            rho = c0 * c1.sin()
            z = c0 * c1.cos()
        return rho * rho, Jet.constant(0.0), z * z

    domain = ((0.0, np.inf), (0.0, np.inf)) if chart is Chart.CARTESIAN else (
        (0.0, np.inf),
        (0.0, math.pi / 2.0),
    )
    gram = GramField(name="flat-r4", entries=entries, chart=chart, domain=domain)
    return ModelEnd(
        kind="flat-r4", metric=ToricMetric(gram), cone=ConeDescriptor("R4"), parameters={}
    )


def flat_quotient(
    alpha: float,
    sigma0: float,
    chart: Chart = Chart.CARTESIAN,
    rational: Fraction | None = None,
) -> ModelEnd:
    """The flat screw quotient X(alpha, sigma0).

    Pass `rational=Fraction(p, q)` to declare alpha = p/q exactly; the
    asymptotic cone is then a 2 pi/q wedge times a line, otherwise the
    half plane.
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    if sigma0 <= 0.0:
        raise DomainError(f"sigma0 must be positive, got {sigma0}")
    if rational is not None:
        alpha = float(rational)

    def entries(c0, c1):
        if chart is Chart.CARTESIAN:
            rho = c0
        else:
            rho = c0 * c1.sin()
        rho_sq = rho * rho
        return rho_sq, alpha * rho_sq, (alpha * alpha) * rho_sq + sigma0 * sigma0

    domain = ((0.0, np.inf), (-np.inf, np.inf)) if chart is Chart.CARTESIAN else (
        (0.0, np.inf),
        (0.0, math.pi),
    )
    gram = GramField(
        name=f"flat-quotient(alpha={alpha}, sigma0={sigma0})",
        entries=entries,
        chart=chart,
        domain=domain,
        parameters={"alpha": alpha, "sigma0": sigma0},
    )
    if rational is not None:
        cone = ConeDescriptor("WedgeTimesLine", angle=2.0 * math.pi / rational.denominator)
    else:
        cone = ConeDescriptor("HalfPlane")
    return ModelEnd(
        kind="flat-quotient",
        metric=ToricMetric(gram),
        cone=cone,
        parameters={"alpha": alpha, "sigma0": sigma0},
        rational=rational,
    )


def gram_of_model(end: ModelEnd, p: ChartPoint) -> GramMatrix2:
    """Closed-form fiber Gram matrix of a toric model end."""
    if not end.is_toric:
        raise DomainError(f"model end {end.kind} has no half-plane Gram matrix")
    return toric.gram_values(end.metric, p)


# -- special Kasner ----------------------------------------------------------


class KasnerEnd:
    """The Ricci-flat end drho^2 + rho^{4/3}(dx1^2 + dx2^2) + rho^{-2/3} dx3^2
    on [1, infinity) x T^3, with x-periods normalized to 2 pi.

    It is the unique Ricci-flat Kasner metric whose self-dual Weyl tensor
    has a repeated eigenvalue pair for both orientations; lam = sqrt(24)|W+|
    equals (8/3) rho^{-2}, which the tests pin against the curvature engine.
    """

    LAMBDA_COEFF = 8.0 / 3.0

    def __init__(self, rho_min: float = 1.0):
        self.rho_min = rho_min

    def _check(self, coords):
        if coords[0] < self.rho_min:
            raise DomainError(f"Kasner end is defined for rho >= {self.rho_min}")

    def jet_at(self, coords) -> MetricJet:
        self._check(coords)
        rj, _, _, _ = seed_coords(tuple(coords), active=(0,))
        a = rj ** (4.0 / 3.0)
        b = rj ** (-2.0 / 3.0)
        one = Jet.constant(1.0)
        z = Jet.constant(0.0)
        return MetricJet.from_jets(
            [[one, z, z, z], [z, a, z, z], [z, z, a, z], [z, z, z, b]]
        )

    def lambda_jet(self, coords) -> Jet:
        self._check(coords)
        rj, _, _, _ = seed_coords(tuple(coords), active=(0,))
        return self.LAMBDA_COEFF * rj ** (-2.0)

    def complex_structure(self, sign: int = 1) -> "AlmostComplexStructure":
        """J with drho -> sign * rho^{-1/3} dx3 and dx1 -> dx2."""

        def action(coords):
            self._check(coords)
            rj, _, _, _ = seed_coords(tuple(coords), active=(0,))
            z = Jet.constant(0.0)
            c = [[z] * 4 for _ in range(4)]
            c[0][3] = float(sign) * rj ** (-1.0 / 3.0)
            c[1][2] = Jet.constant(1.0)
            c[2][1] = Jet.constant(-1.0)
            c[3][0] = -float(sign) * rj ** (1.0 / 3.0)
            return c

        return AlmostComplexStructure(action)


def kasner_end(rho_min: float = 1.0) -> ModelEnd:
    return ModelEnd(
        kind="special-kasner",
        metric=KasnerEnd(rho_min),
        cone=ConeDescriptor("Ray"),
        parameters={"rho_min": rho_min},
    )


def kasner_jet(p) -> MetricJet:
    coords = p.coords if isinstance(p, ChartPoint) else tuple(p)
    return KasnerEnd().jet_at(coords)


# -- almost complex structures ----------------------------------------------


class AlmostComplexStructure:
    """A 4x4 matrix field acting on the coframe (equally, on vectors).

    `action(coords)` returns the matrix as a nested list of jets C with
    J* eta^a = C^a_b eta^b; the same matrix gives the vector action
    J e_c = C^a_c e_a.
    """

    def __init__(self, action):
        self._action = action

    def jets(self, coords):
        return self._action(coords)

    def matrix(self, coords) -> np.ndarray:
        c = self._action(coords)
        return np.array([[c[i][j].val for j in range(4)] for i in range(4)])

    def derivative(self, coords) -> np.ndarray:
        c = self._action(coords)
        out = np.zeros((4, 4, 4))
        for i in range(4):
            for j in range(4):
                out[i, j] = c[i][j].d
        return out


def hermitian_check(j_structure: AlmostComplexStructure, jet_field, coords):
    """(metric-compatibility, Nijenhuis) residuals of J at coords.

    Compatibility is max |g(J., J.) - g|; the Nijenhuis tensor is computed
    from the first derivatives of J, so a vanishing residual certifies an
    integrable structure to roundoff.
    """
    coords = np.asarray(coords, dtype=float)
    jet = jet_field(coords)
    jmat = j_structure.matrix(coords)
    sq = jmat @ jmat + np.eye(4)
    if np.max(np.abs(sq)) > 1e-10:
        raise ValueError("field does not square to -identity at the point")
    compat = float(np.max(np.abs(jmat.T @ jet.g @ jmat - jet.g)))
    # dj[k, j, l] = d_l J^k_j
    dj = j_structure.derivative(coords)
    # N^k_ij = J^l_i d_l J^k_j - J^l_j d_l J^k_i - J^k_l (d_i J^l_j - d_j J^l_i)
    term1 = np.einsum("li,kjl->kij", jmat, dj)
    term2 = np.einsum("lj,kil->kij", jmat, dj)
    term3 = np.einsum("kl,lji->kij", jmat, dj)
    term4 = np.einsum("kl,lij->kij", jmat, dj)
    nijenhuis = term1 - term2 - term3 + term4
    return compat, float(np.max(np.abs(nijenhuis)))


# -- cone probes -------------------------------------------------------------


@dataclass(frozen=True)
class ConeProbeRecord:
    scale: float
    systole: float
    covering_radius: float
    rescaled_systole: float
    rescaled_covering_radius: float
    rescaled_base: tuple


@dataclass(frozen=True)
class ConeProbeReport:
    records: tuple
    verdict: str


def cone_probe(
    end: ModelEnd,
    doublings: int = 20,
    base_point=(1.0, 0.5),
    ratio: float = 2.0,
) -> ConeProbeReport:
    """Fiber lattice geometry along a geometric scale schedule.

    For a declared-rational screw angle the raw systole stabilizes at a
    positive constant (wedge x line cone); for an irrational one the
    rescaled covering radius decays to zero (half-plane cone, codimension-2
    collapse).
    """
    if not end.is_toric:
        raise DomainError(f"cone probe needs a toric model end, got {end.kind}")
    metric = end.metric
    rho0, z0 = base_point
    records = []
    for k in range(doublings + 1):
        lam = ratio ** k
        p = metric.point(lam * rho0, lam * z0)
        lat = toric.fiber_lattice(metric, p)
        sys_raw = systole(lat)
        cov_raw = covering_radius(lat)
        records.append(
            ConeProbeRecord(
                scale=lam,
                systole=sys_raw,
                covering_radius=cov_raw,
                rescaled_systole=sys_raw / lam,
                rescaled_covering_radius=cov_raw / lam,
                rescaled_base=(rho0, z0),
            )
        )
    if end.kind == "flat-r4":
        verdict = "linear-scaling"
    elif end.rational is not None:
        tail = [rec.systole for rec in records[-5:]]
        stable = max(tail) - min(tail) <= 0.05 * max(tail)
        verdict = "systole-stabilizes" if stable else "inconclusive"
    else:
        rc = [rec.rescaled_covering_radius for rec in records]
        verdict = "fiber-collapse" if rc[-1] < min(0.05, rc[0]) else "inconclusive"
    return ConeProbeReport(records=tuple(records), verdict=verdict)


# -- axisymmetric harmonic map residual --------------------------------------


def harmonic_map_residual(end: ModelEnd, p: ChartPoint) -> float:
    """Tension-field residual of (rho, z) -> (X, Y) = normalized Gram in H.

    The map goes from flat R^3 (the half plane rotated about its edge,
    hence the 1/rho weight in the Laplacian) into the hyperbolic plane
    carrying (dX^2 + dY^2)/X^2; a Ricci-flat toric metric makes it
    harmonic, so the residual vanishes for the flat models.
    """
    if not end.is_toric:
        raise DomainError("harmonic map residual needs a toric model end")
    metric = end.metric
    if metric.chart is not Chart.CARTESIAN:
        raise DomainError("harmonic map residual is defined in the Cartesian chart")
    toric._check_interior(metric, p)
    rho, z = p.base
    c0j, c1j, _, _ = seed_coords((rho, z, 0.0, 0.0), active=(0, 1))
    g11, g12, g22 = metric.gram.gram_jets(c0j, c1j)
    det = g11 * g22 - g12 * g12
    x = det.sqrt() / g22
    y = g12 / g22
    lap_x = x.dd[0, 0] + x.d[0] / rho + x.dd[1, 1]
    lap_y = y.dd[0, 0] + y.d[0] / rho + y.dd[1, 1]
    grad_xx = x.d[0] ** 2 + x.d[1] ** 2
    grad_yy = y.d[0] ** 2 + y.d[1] ** 2
    grad_xy = x.d[0] * y.d[0] + x.d[1] * y.d[1]
    tension_x = lap_x - (grad_xx - grad_yy) / x.val
    tension_y = lap_y - 2.0 * grad_xy / x.val
    return float(math.hypot(tension_x, tension_y) / x.val)
