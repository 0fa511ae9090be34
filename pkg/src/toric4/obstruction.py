"""Asymptotic obstruction diagnostics along half-plane rays.

Six indicator trajectories are tracked along a ray: the fiber deviation
tau (limit 0), the rotation-length ratio f/rho (limit 1, informational),
the size ratios sigma/rho and sigma/(rho tau) (limits 0), and the
derivative anomalies rho sigma_rho/sigma and rho^2 tau_rho/sigma (limits
0).  A profile realizing all of {tau, sigma/(rho tau), rho sigma_rho/sigma,
rho^2 tau_rho/sigma, sigma/rho} -> targets is impossible: L'Hospital
applied to tau / (sigma/rho) forces an infinite and a zero limit for the
same quantity.  The exponent search makes that concrete for power-log
profiles and the check reports where the two numeric trends collide.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .curvature import Chart
from .errors import DomainError, InsufficientDataError
from .toric import ToricMetric, pt_quantities, rotation_normalizations

CONTRADICTION_SET = ("tau", "sigma_over_rho_tau", "rho_sigma_rho_over_sigma",
                     "rho2_tau_rho_over_sigma", "sigma_over_rho")


@dataclass(frozen=True)
class ProfileSample:
    rho: float
    tau: float
    sigma: float
    f: float
    tau_rho: float
    sigma_rho: float


@dataclass(frozen=True)
class RayProfile:
    """Sampled collapse quantities along a fixed-direction ray.

    `rho` is the distance-like coordinate: the first chart coordinate for
    Cartesian rays at fixed z, and r sin(theta) for polar rays at fixed
    theta (with d/drho = sin(theta)^{-1} d/dr folded into the derivative
    samples).
    """

    ray: tuple
    samples: tuple
    generator_order: tuple = (1, 2)

    def __post_init__(self):
        rhos = [s.rho for s in self.samples]
        if any(b <= a for a, b in zip(rhos, rhos[1:])):
            raise ValueError("profile samples must have strictly increasing rho")
        if any(s.sigma <= 0.0 or s.f <= 0.0 for s in self.samples):
            raise ValueError("profile needs positive sigma and f")

    @property
    def rhos(self):
        return np.array([s.rho for s in self.samples])


def extract_profile(metric: ToricMetric, ray, rho_schedule, order=None) -> RayProfile:
    """Sample pt quantities along a ray.

    `ray` is ("z", z0) in the Cartesian chart or ("theta", theta0) in the
    polar chart; `rho_schedule` gives the distance-like coordinate values.
    """
    kind, value = ray
    samples = []
    if kind == "z":
        if metric.chart is not Chart.CARTESIAN:
            raise DomainError("fixed-z rays require the Cartesian chart")
        for rho in rho_schedule:
            q = pt_quantities(metric, metric.point(float(rho), value), order=order)
            samples.append(
                ProfileSample(
                    rho=float(rho), tau=q.tau, sigma=q.sigma, f=q.f,
                    tau_rho=q.tau_rho, sigma_rho=q.sigma_rho,
                )
            )
    elif kind == "theta":
        if metric.chart is not Chart.POLAR:
            raise DomainError("fixed-theta rays require the polar chart")
        s = math.sin(value)
        if s <= 0.0:
            raise DomainError(f"ray angle {value} lies on the chart axis")
        for rho in rho_schedule:
            r = float(rho) / s
            q = pt_quantities(metric, metric.point(r, value), order=order)
            samples.append(
                ProfileSample(
                    rho=float(rho), tau=q.tau, sigma=q.sigma, f=q.f,
                    tau_rho=q.tau_rho / s, sigma_rho=q.sigma_rho / s,
                )
            )
    else:
        raise ValueError(f"unknown ray kind {kind}")
    used_order = order if order is not None else metric.gram.generator_order
    return RayProfile(ray=(kind, value), samples=tuple(samples), generator_order=used_order)


# -- indicators ---------------------------------------------------------------


@dataclass(frozen=True)
class IndicatorTrack:
    name: str
    target: float
    values: tuple
    measured_limit: float
    verdict: str
    passes: bool
    in_contradiction_set: bool


@dataclass(frozen=True)
class DiagnosticsReport:
    ray: tuple
    indicators: tuple
    overall: str
    failing: tuple
    rotation_normalization: tuple | None = None
    limit_tolerance: float = 0.05

    def indicator(self, name: str) -> IndicatorTrack:
        for track in self.indicators:
            if track.name == name:
                return track
        raise KeyError(name)

    def to_json(self) -> str:
        blocks = {}
        for t in self.indicators:
            blocks[t.name] = {
                "target": t.target,
                "samples": [[r, v] for r, v in t.values],
                "measured_limit": t.measured_limit,
                "verdict": t.verdict,
                "passes": t.passes,
                "tolerance": self.limit_tolerance,
            }
        payload = {
            "ray": list(self.ray),
            "indicators": blocks,
            "overall": self.overall,
            "failing": list(self.failing),
        }
        if self.rotation_normalization is not None:
            payload["rotation_normalization"] = list(self.rotation_normalization)
        return json.dumps(payload, sort_keys=True)


def _extrapolate_limit(rhos, values):
    """Tail limit via least squares against {1, 1/log rho, 1/sqrt(log rho)}.

    Exact for the 1/log- and 1/sqrt(log)-type decays the collapse profiles
    produce, and harmless for faster decays (the correction coefficients
    just come out tiny).
    """
    n = len(values)
    tail = slice(max(0, n - max(4, n // 3)), n)
    x = np.log(rhos[tail])
    basis = np.column_stack([np.ones_like(x), 1.0 / x, x ** -0.5])
    coeff, *_ = np.linalg.lstsq(basis, np.asarray(values)[tail], rcond=None)
    return float(coeff[0])


def _verdict(rhos, values, target, tol_limit):
    d = np.abs(np.asarray(values) - target)
    n = len(d)
    tail = d[max(0, n - max(3, n // 3)):]
    limit = _extrapolate_limit(rhos, values)
    if abs(limit - target) <= tol_limit and tail[-1] <= tail[0] * 1.05 + 1e-12:
        return limit, "converging-to-target", True
    moving_away = np.all(np.diff(tail) >= -1e-14) and tail[-1] > tail[0]
    if moving_away:
        return limit, "diverging", False
    return limit, "inconclusive", False


def limit_indicators(profile: RayProfile, tol_limit: float = 0.05,
                     rotation_normalization=None) -> DiagnosticsReport:
    """Evaluate the six indicator trajectories and classify each.

    Verdicts are deterministic: an indicator converges to its target when
    the tail-extrapolated limit lands within `tol_limit` of it and the
    tail deviation is not growing; it diverges when the tail deviation
    increases monotonically; otherwise it is inconclusive.
    """
    if len(profile.samples) < 10:
        raise InsufficientDataError("need at least 10 samples")
    rhos = profile.rhos
    if rhos[-1] / rhos[0] < 99.0:
        raise InsufficientDataError("profile must span at least two decades")

    def track(name, target, vals, in_set=True):
        limit, verdict, ok = _verdict(rhos, vals, target, tol_limit)
        return IndicatorTrack(
            name=name,
            target=target,
            values=tuple(zip((float(r) for r in rhos), (float(v) for v in vals))),
            measured_limit=limit,
            verdict=verdict,
            passes=ok,
            in_contradiction_set=in_set,
        )

    s = profile.samples
    tracks = (
        track("tau", 0.0, [x.tau for x in s]),
        track("f_over_rho", 1.0, [x.f / x.rho for x in s], in_set=False),
        track("sigma_over_rho", 0.0, [x.sigma / x.rho for x in s]),
        track("sigma_over_rho_tau", 0.0, [_safe_div(x.sigma, x.rho * x.tau) for x in s]),
        track("rho_sigma_rho_over_sigma", 0.0, [x.rho * x.sigma_rho / x.sigma for x in s]),
        track("rho2_tau_rho_over_sigma", 0.0, [x.rho ** 2 * x.tau_rho / x.sigma for x in s]),
    )
    failing = tuple(t.name for t in tracks if t.in_contradiction_set and not t.passes)
    overall = "all-indicators-pass" if not failing else "fails:" + ",".join(failing)
    return DiagnosticsReport(
        ray=profile.ray,
        indicators=tracks,
        overall=overall,
        failing=failing,
        rotation_normalization=rotation_normalization,
        limit_tolerance=tol_limit,
    )


def _safe_div(a, b):
    if b == 0.0:
        return math.inf if a > 0 else -math.inf
    return a / b


def diagnostics_for_metric(metric: ToricMetric, ray, rho_schedule,
                           order=None, tol_limit: float = 0.05) -> DiagnosticsReport:
    """extract_profile + limit_indicators + rotation-normalization flag."""
    profile = extract_profile(metric, ray, rho_schedule, order=order)
    kind, value = ray
    rho_last = profile.samples[-1].rho
    if kind == "theta":
        p = metric.point(rho_last / math.sin(value), value)
    else:
        p = metric.point(rho_last, value)
    rot = rotation_normalizations(metric, p)
    return limit_indicators(profile, tol_limit=tol_limit, rotation_normalization=rot)


# -- L'Hospital incompatibility ------------------------------------------------


@dataclass(frozen=True)
class LHospitalCertificate:
    applicable: bool
    conflict_rho: float | None
    ratio_direct: tuple      # tau / (sigma/rho): must blow up by Eq (3)
    ratio_derivative: tuple  # rho^2 tau_rho / (rho sigma_rho - sigma): must -> 0
    note: str


def lhospital_check(profile: RayProfile, threshold: float = 10.0,
                    force: bool = False) -> LHospitalCertificate:
    """Exhibit the conflicting L'Hospital trends on a passing profile.

    On a profile whose five contradiction-set indicators all pass, the
    ratio tau/(sigma/rho) must diverge while its derivative ratio
    tau_rho/(sigma_rho/rho - sigma/rho^2) must vanish; L'Hospital's rule
    forbids both once tau and sigma/rho tend to zero.  The certificate
    records the first rho where the direct ratio exceeds `threshold`
    while the derivative ratio is below 1/threshold.
    """
    report = limit_indicators(profile)
    passing = all(report.indicator(nm).passes for nm in CONTRADICTION_SET)
    direct = []
    deriv = []
    for x in profile.samples:
        direct.append((x.rho, _safe_div(x.tau, x.sigma / x.rho)))
        deriv.append((x.rho, _safe_div(x.rho ** 2 * x.tau_rho,
                                       x.rho * x.sigma_rho - x.sigma)))
    if not passing and not force:
        return LHospitalCertificate(
            applicable=False,
            conflict_rho=None,
            ratio_direct=tuple(direct),
            ratio_derivative=tuple(deriv),
            note="not-applicable: indicators fail: " + ",".join(report.failing),
        )
    conflict = None
    for (rho, v1), (_, v2) in zip(direct, deriv):
        if abs(v1) > threshold and abs(v2) < 1.0 / threshold:
            conflict = rho
            break
    note = (
        "conflict: direct ratio diverges while derivative ratio vanishes"
        if conflict is not None
        else "no numeric conflict in the sampled range"
    )
    return LHospitalCertificate(
        applicable=passing,
        conflict_rho=conflict,
        ratio_direct=tuple(direct),
        ratio_derivative=tuple(deriv),
        note=note,
    )


# -- power-log profile search ---------------------------------------------------


def _frange(lo, hi, step=Fraction(1, 4)):
    lo, hi = Fraction(lo), Fraction(hi)
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def _lt(x):  # limit of rho^x (log-free): negative -> 0
    return x < 0


def passes_constraints(a, b, c, d, drop=None):
    """Exact power-log limits for sigma = rho^a log^b, tau = rho^c log^d.

    Constraint indices follow the indicator numbering: 1 tau->0,
    3 sigma/(rho tau)->0, 4 rho sigma_rho/sigma->0, 5 rho^2 tau_rho/sigma->0,
    6 sigma/rho->0.
    """
    checks = {}
    checks[1] = c < 0 or (c == 0 and d < 0)
    checks[3] = (a - 1 - c) < 0 or ((a - 1 - c) == 0 and (b - d) < 0)
    checks[4] = a == 0
    if c != 0:
        checks[5] = (c + 1 - a) < 0 or ((c + 1 - a) == 0 and (d - b) < 0)
    elif d != 0:
        checks[5] = (1 - a) < 0 or ((1 - a) == 0 and (d - b - 1) < 0)
    else:
        checks[5] = True  # tau constant: derivative identically zero
    checks[6] = a < 1 or (a == 1 and b < 0)
    return all(ok for idx, ok in checks.items() if idx != drop)


def profile_family_search(
    a_range=(-2, 1),
    c_range=(-2, 0),
    b_range=(-3, 3),
    d_range=(-3, 3),
    step=Fraction(1, 4),
    drop=None,
):
    """Admissible power-log exponent tuples (expected: none).

    Exponents run over the given inclusive ranges with exact fractional
    steps; `drop` omits one constraint (1, 3, 4, 5 or 6) to show the
    obstruction is sharp.
    """
    step = Fraction(step)
    hits = []
    for a in _frange(*a_range, step):
        for c in _frange(*c_range, step):
            for b in _frange(*b_range, step):
                for d in _frange(*d_range, step):
                    if passes_constraints(a, b, c, d, drop=drop):
                        hits.append((a, b, c, d))
    hits.sort()
    return hits
