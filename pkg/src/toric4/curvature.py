"""Curvature of 4-metrics from exact second-order jets.

Everything here is pointwise linear algebra on a `MetricJet`: Christoffel
symbols, the covariant Riemann tensor, Ricci and scalar curvature, the
self-dual/anti-self-dual Weyl blocks, and the eigenvalue-based curvature
type.  The derivative data is assumed exact (jet arithmetic upstream), so
the only error sources are roundoff and metric conditioning.

Index conventions: `dg[i, j, k]` is the k-th partial of g_ij and
`ddg[i, j, k, l]` the (k, l) second partial; `christoffel(...)[k, i, j]`
is Gamma^k_ij; `riemann` is fully covariant R_ijkl with R_ijkl = -R_jikl =
R_klij and sign fixed so the round sphere has positive sectional curvature.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConformalFactorError,
    DegenerateMetricError,
    DegenerateWeylError,
    InvalidToleranceError,
)
from .jets import Jet, finite_difference_jet

TWO_FORM_PAIRS = ((0, 1), (0, 2), (0, 3))
TWO_FORM_DUALS = ((2, 3), (3, 1), (1, 2))
ANTI_SELF_DUAL_SIGNS = (1.0, 1.0, -1.0)


class Chart(enum.Enum):
    """Half-plane charts used by the toric metric families."""

    CARTESIAN = "cartesian-half-plane"
    POLAR = "polar-half-plane"


@dataclass(frozen=True)
class ChartPoint:
    """A point in one of the half-plane charts.

    Coordinates are (rho, z, phi1, phi2) in the Cartesian chart and
    (r, theta, phi1, phi2) in the polar chart; the fiber angles are taken
    mod 2*pi.
    """

    coords: tuple
    chart: Chart = Chart.CARTESIAN

    def __post_init__(self):
        if len(self.coords) != 4:
            raise ValueError("ChartPoint needs 4 coordinates")

    @property
    def base(self):
        return self.coords[0], self.coords[1]

    def interior(self):
        c0, c1 = self.base
        if self.chart is Chart.CARTESIAN:
            return c0 > 0.0
        return c0 > 0.0 and 0.0 < c1 < np.pi


@dataclass
class MetricJet:
    """Metric components with exact first and second partials at a point."""

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray

    @staticmethod
    def from_jets(entries):
        """Assemble from a 4x4 (symmetric) array of scalar `Jet`s."""
        g = np.zeros((4, 4))
        dg = np.zeros((4, 4, 4))
        ddg = np.zeros((4, 4, 4, 4))
        for i in range(4):
            for j in range(4):
                e = entries[i][j]
                if not isinstance(e, Jet):
                    e = Jet.constant(e)
                g[i, j] = e.val
                dg[i, j] = e.d
                ddg[i, j] = e.dd
        return MetricJet(g, dg, ddg)

    def inverse(self):
        try:
            ginv = np.linalg.inv(self.g)
        except np.linalg.LinAlgError as exc:
            raise DegenerateMetricError("metric matrix is singular") from exc
        return ginv

    def chol_frame(self):
        """Orthonormal frame from Gram-Schmidt on the coordinate basis.

        Returns E with columns the frame vectors (E^T g E = I); E is upper
        triangular with positive diagonal, so it preserves orientation.
        """
        try:
            L = np.linalg.cholesky(self.g)
        except np.linalg.LinAlgError as exc:
            raise DegenerateMetricError("metric is not positive definite") from exc
        return np.linalg.inv(L).T


@dataclass
class CurvaturePacket:
    """Curvature data at one point."""

    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    rm_norm: float
    wplus: np.ndarray | None = None
    wminus: np.ndarray | None = None
    lam: float | None = None
    ricci_norm: float = field(default=0.0)


class CurvatureKind(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"
    TYPE_III = "III"


@dataclass(frozen=True)
class CurvatureType:
    kind: CurvatureKind
    eigenvalues: tuple
    tolerance_used: float


def christoffel(jet: MetricJet) -> np.ndarray:
    """Christoffel symbols of the second kind, Gamma[k, i, j]."""
    ginv = jet.inverse()
    # dg[j, l, i] + dg[i, l, j] - dg[i, j, l], contracted with g^{kl}
    term = (
        np.einsum("jli->lij", jet.dg)
        + np.einsum("ilj->lij", jet.dg)
        - np.einsum("ijl->lij", jet.dg)
    )
    return 0.5 * np.einsum("kl,lij->kij", ginv, term)


def _christoffel_first_kind_derivative(jet: MetricJet) -> np.ndarray:
    """partial_m Gamma_{l,ij} with all indices down, out[m, l, i, j]."""
    return 0.5 * (
        np.einsum("jlim->mlij", jet.ddg)
        + np.einsum("iljm->mlij", jet.ddg)
        - np.einsum("ijlm->mlij", jet.ddg)
    )


def riemann(jet: MetricJet) -> CurvaturePacket:
    """Covariant Riemann tensor plus Ricci, scalar and tensor norm."""
    ginv = jet.inverse()
    gam = christoffel(jet)
    # Gamma with first index lowered: Gamma_{l,ij}
    gam_low = np.einsum("lk,kij->lij", jet.g, gam)
    dgam_low = _christoffel_first_kind_derivative(jet)
    # R_{iklm} = d_l Gamma_{i,km} - d_m Gamma_{i,kl}
    #            + Gamma^p_{km} Gamma_{p,il} ... assembled below in the
    # Landau-Lifshitz covariant form, which keeps the pair symmetries exact.
    rm = 0.5 * (
        np.einsum("imkl->iklm", jet.ddg)
        + np.einsum("klim->iklm", jet.ddg)
        - np.einsum("ilkm->iklm", jet.ddg)
        - np.einsum("kmil->iklm", jet.ddg)
    )
    rm += np.einsum("nkl,nim->iklm", gam_low, gam)
    rm -= np.einsum("nkm,nil->iklm", gam_low, gam)
    ricci = np.einsum("cd,cadb->ab", ginv, rm)
    scalar = float(np.einsum("ab,ab->", ginv, ricci))
    rm_up = np.einsum("ia,jb,kc,ld,abcd->ijkl", ginv, ginv, ginv, ginv, rm)
    rm_norm = float(np.sqrt(abs(np.einsum("ijkl,ijkl->", rm, rm_up))))
    ricci_up = ginv @ ricci @ ginv
    ricci_norm = float(np.sqrt(abs(np.einsum("ab,ab->", ricci, ricci_up))))
    return CurvaturePacket(
        riemann=rm,
        ricci=ricci,
        scalar=scalar,
        rm_norm=rm_norm,
        ricci_norm=ricci_norm,
    )


def frame_riemann(packet: CurvaturePacket, jet: MetricJet, orientation: int = 1):
    """Riemann components in the Gram-Schmidt orthonormal frame."""
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    frame = jet.chol_frame()
    if orientation == -1:
        frame = frame.copy()
        frame[:, 3] = -frame[:, 3]
    return np.einsum("ia,jb,kc,ld,ijkl->abcd", frame, frame, frame, frame, packet.riemann)


def weyl_blocks(packet: CurvaturePacket, jet: MetricJet, orientation: int = 1) -> CurvaturePacket:
    """Fill the W+ / W- blocks of the curvature operator on 2-forms.

    The operator is taken in an orthonormal frame in the basis of unit
    (anti-)self-dual 2-forms; reversing `orientation` flips the fourth
    frame leg, which exchanges the two blocks bit for bit.
    """
    rhat = frame_riemann(packet, jet, orientation)
    a = np.zeros((3, 3))
    c = np.zeros((3, 3))
    for k in range(3):
        pk, qk = TWO_FORM_PAIRS[k], TWO_FORM_DUALS[k]
        for l in range(3):
            pl, ql = TWO_FORM_PAIRS[l], TWO_FORM_DUALS[l]
            t1 = rhat[pk[0], pk[1], pl[0], pl[1]]
            t2 = rhat[pk[0], pk[1], ql[0], ql[1]]
            t3 = rhat[qk[0], qk[1], pl[0], pl[1]]
            t4 = rhat[qk[0], qk[1], ql[0], ql[1]]
            a[k, l] = 0.5 * (t1 + t2 + t3 + t4)
            sign = ANTI_SELF_DUAL_SIGNS[k] * ANTI_SELF_DUAL_SIGNS[l]
            c[k, l] = sign * (0.5 * (t1 - t2 - t3 + t4))
    packet.wplus = a - (np.trace(a) / 3.0) * np.eye(3)
    packet.wminus = c - (np.trace(c) / 3.0) * np.eye(3)
    packet.lam = float(np.sqrt(24.0) * np.linalg.norm(packet.wplus))
    return packet


def classify_type(wplus: np.ndarray, tol: float | None = None) -> CurvatureType:
    """Type I/II/III from the W+ spectrum.

    Type I: spectrum vanishes; Type II: exactly two eigenvalues coincide
    and the matrix is nonzero; Type III: three distinct eigenvalues.
    """
    norm = float(np.linalg.norm(wplus))
    if tol is None:
        tol = 1e-6 * max(1.0, norm)
    if tol <= 0.0:
        raise InvalidToleranceError(f"tolerance must be positive, got {tol}")
    eigs = np.linalg.eigvalsh(0.5 * (wplus + wplus.T))
    if np.max(np.abs(eigs)) <= tol:
        kind = CurvatureKind.TYPE_I
    elif min(eigs[1] - eigs[0], eigs[2] - eigs[1]) <= tol:
        kind = CurvatureKind.TYPE_II
    else:
        kind = CurvatureKind.TYPE_III
    return CurvatureType(kind=kind, eigenvalues=tuple(eigs), tolerance_used=tol)


def conformal_jet(jet: MetricJet, factor: Jet) -> MetricJet:
    """Jet of (factor * g) with the product rule applied through 2nd order."""
    if not isinstance(factor, Jet):
        factor = Jet.constant(factor)
    if factor.val <= 0.0:
        raise ConformalFactorError(f"conformal factor must be positive, got {factor.val}")
    g = factor.val * jet.g
    dg = np.einsum("k,ij->ijk", factor.d, jet.g) + factor.val * jet.dg
    ddg = (
        np.einsum("kl,ij->ijkl", factor.dd, jet.g)
        + np.einsum("k,ijl->ijkl", factor.d, jet.dg)
        + np.einsum("l,ijk->ijkl", factor.d, jet.dg)
        + factor.val * jet.ddg
    )
    return MetricJet(g, dg, ddg)


def laplacian(jet: MetricJet, scalar_jet: Jet) -> float:
    """Laplace-Beltrami of a scalar from its jet and the metric jet."""
    ginv = jet.inverse()
    gam = christoffel(jet)
    hess = scalar_jet.dd - np.einsum("kij,k->ij", gam, scalar_jet.d)
    return float(np.einsum("ij,ij->", ginv, hess))


def sectional_range(packet: CurvaturePacket, jet: MetricJet, orientation: int = 1):
    """Deterministic sample of sectional curvatures in the orthonormal frame.

    Cross-check for the tensor norm: returns (min, max) of K over the six
    frame coordinate planes and the diagonal planes spanned by frame
    bisectors.
    """
    rhat = frame_riemann(packet, jet, orientation)
    planes = []
    for a in range(4):
        for b in range(a + 1, 4):
            u = np.eye(4)[a]
            v = np.eye(4)[b]
            planes.append((u, v))
            for c in range(4):
                if c != a and c != b:
                    planes.append((u, (np.eye(4)[b] + np.eye(4)[c]) / np.sqrt(2.0)))
    vals = []
    for u, v in planes:
        num = np.einsum("i,j,k,l,ijkl->", u, v, u, v, rhat)
        den = np.dot(u, u) * np.dot(v, v) - np.dot(u, v) ** 2
        vals.append(num / den)
    return float(np.min(vals)), float(np.max(vals))


def scalar_positivity_residual(
    jet_field,
    lam_jet_field,
    coords,
    active=(0,),
) -> float:
    """Residual of S(gt)^3 (-6 Lap_gt + S(gt)) S(gt)^{-1} for gt = lam^{2/3} g.

    `jet_field` maps a plain coordinate 4-tuple to the MetricJet of a
    Ricci-flat metric; `lam_jet_field` maps it to the scalar jet of
    lam = sqrt(24)|W+| (exact, e.g. a closed form from the catalog).  The
    extra differentiation level (the Hessian of S(gt)^{-1}) is taken by
    Richardson finite differences over the `active` coordinates; everything
    else is exact jet arithmetic, which keeps that single FD level clean.
    """
    coords = np.asarray(coords, dtype=float)
    lam0 = lam_jet_field(coords)
    if lam0.val <= 1e-12:
        raise DegenerateWeylError("lam vanishes at the base point")

    def conformal_scalar(x):
        jt = conformal_jet(jet_field(x), lam_jet_field(x) ** (2.0 / 3.0))
        return riemann(jt).scalar

    s0 = conformal_scalar(coords)
    inv_s = finite_difference_jet(
        lambda x: 1.0 / conformal_scalar(x), coords, scale=_coord_scale(coords, active)
    )
    gt_jet = conformal_jet(jet_field(coords), lam0 ** (2.0 / 3.0))
    lap = laplacian(gt_jet, inv_s)
    return float(s0 ** 3 * (-6.0 * lap + 1.0))


def _coord_scale(x, active):
    scale = np.ones(4)
    for i in active:
        scale[i] = max(1.0, abs(x[i]))
    return scale


def finite_difference_metric_jet(metric_fn, coords, active=(0, 1)) -> MetricJet:
    """MetricJet of a black-box metric function via Richardson differences.

    `metric_fn` maps a coordinate 4-tuple to a 4x4 array; each stencil node
    is evaluated once and shared by all components.  This is the
    independent oracle the exact jet arithmetic is checked against.
    """
    coords = np.asarray(coords, dtype=float)
    h = (np.finfo(float).eps ** (1.0 / 3.0)) * _coord_scale(coords, active)

    cache = {}

    def ev(*offsets):
        key = offsets
        if key not in cache:
            x = coords.copy()
            for idx, step in offsets:
                x[idx] += step
            cache[key] = np.asarray(metric_fn(x), dtype=float)
        return cache[key]

    def richardson(full, half):
        return (4.0 * half - full) / 3.0

    g = ev()
    dg = np.zeros((4, 4, 4))
    ddg = np.zeros((4, 4, 4, 4))
    for i in active:
        for s in (1.0, 0.5):
            step = s * h[i]
            cache.setdefault(("d", i, s), (ev(((i, step),)) - ev(((i, -step),))) / (2 * step))
            cache.setdefault(
                ("dd", i, s),
                (ev(((i, step),)) - 2 * g + ev(((i, -step),))) / step ** 2,
            )
        dg[:, :, i] = richardson(cache[("d", i, 1.0)], cache[("d", i, 0.5)])
        ddg[:, :, i, i] = richardson(cache[("dd", i, 1.0)], cache[("dd", i, 0.5)])
    for i in active:
        for j in active:
            if j <= i:
                continue
            vals = {}
            for s in (1.0, 0.5):
                hi, hj = s * h[i], s * h[j]
                vals[s] = (
                    ev(((i, hi), (j, hj)))
                    - ev(((i, hi), (j, -hj)))
                    - ev(((i, -hi), (j, hj)))
                    + ev(((i, -hi), (j, -hj)))
                ) / (4 * hi * hj)
            mixed = richardson(vals[1.0], vals[0.5])
            ddg[:, :, i, j] = mixed
            ddg[:, :, j, i] = mixed
    return MetricJet(g, dg, ddg)
