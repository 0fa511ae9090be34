"""JSON family descriptors shared by the metric catalog and the CLI.

A descriptor names a model family, its parameters and chart, plus grid
and tolerance hints for sweeps.  Identical descriptors hash identically
(canonical JSON), which is what makes run manifests reproducible.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import catalog, constructions
from .curvature import Chart

VARIANTS = ("flat-r4", "flat-quotient", "special-kasner", "glued", "nogap")


@dataclass(frozen=True)
class FamilyDescriptor:
    name: str
    variant: str
    parameters: dict = field(default_factory=dict)
    chart: str = "cartesian"
    rational: tuple | None = None
    generator_order: tuple | None = None
    grid: tuple = (13, 61)
    theta_min: float = constructions.DEFAULT_THETA_MIN
    tolerances: dict = field(default_factory=dict)

    def canonical(self) -> str:
        payload = {
            "name": self.name,
            "variant": self.variant,
            "parameters": self.parameters,
            "chart": self.chart,
            "rational": list(self.rational) if self.rational else None,
            "generator_order": list(self.generator_order) if self.generator_order else None,
            "grid": list(self.grid),
            "theta_min": self.theta_min,
            "tolerances": self.tolerances,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()


def parse_descriptor(data) -> FamilyDescriptor:
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    if not isinstance(data, dict):
        raise ValueError("descriptor must be a JSON object")
    variant = data.get("variant")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    rational = data.get("rational")
    if rational is not None:
        rational = (int(rational[0]), int(rational[1]))
    order = data.get("generator_order")
    if order is not None:
        order = tuple(int(x) for x in order)
    return FamilyDescriptor(
        name=data.get("name", variant),
        variant=variant,
        parameters=dict(data.get("parameters", {})),
        chart=data.get("chart", "cartesian"),
        rational=rational,
        generator_order=order,
        grid=tuple(data.get("grid", (13, 61))),
        theta_min=float(data.get("theta_min", constructions.DEFAULT_THETA_MIN)),
        tolerances=dict(data.get("tolerances", {})),
    )


def build_end(desc: FamilyDescriptor) -> catalog.ModelEnd:
    chart = Chart.CARTESIAN if desc.chart == "cartesian" else Chart.POLAR
    params = desc.parameters
    if desc.variant == "flat-r4":
        end = catalog.flat_r4(chart)
    elif desc.variant == "flat-quotient":
        rational = Fraction(*desc.rational) if desc.rational else None
        end = catalog.flat_quotient(
            alpha=float(params.get("alpha", 0.0)),
            sigma0=float(params.get("sigma0", 1.0)),
            chart=chart,
            rational=rational,
        )
    elif desc.variant == "special-kasner":
        end = catalog.kasner_end(rho_min=float(params.get("rho_min", 1.0)))
    elif desc.variant == "glued":
        fam = constructions.GluedFamily(
            sigma=float(params["sigma"]), tau=float(params["tau"])
        )
        end = catalog.ModelEnd(
            kind="glued",
            metric=constructions.glued_metric(fam),
            cone=catalog.ConeDescriptor("Annulus"),
            parameters={"sigma": fam.sigma, "tau": fam.tau},
        )
    elif desc.variant == "nogap":
        n = constructions.NoGapMetric(
            epsilon=float(params["epsilon"]), r0=float(params.get("r0", 10.0))
        )
        end = catalog.ModelEnd(
            kind="nogap",
            metric=constructions.nogap_metric(n),
            cone=catalog.ConeDescriptor("HalfPlane"),
            parameters={"epsilon": n.epsilon, "r0": n.r0},
        )
    else:  # pragma: no cover - guarded by parse_descriptor
        raise ValueError(desc.variant)
    if desc.generator_order is not None and end.is_toric:
        from dataclasses import replace

        from .toric import ToricMetric

        gram = replace(end.metric.gram, generator_order=desc.generator_order)
        end = replace(end, metric=ToricMetric(gram))
    return end


def kasner_is_polar_free(desc: FamilyDescriptor) -> bool:
    return desc.variant == "special-kasner"


def run_manifest(command: str, desc: FamilyDescriptor | None, grid, seed: int = 0) -> dict:
    from . import __version__

    return {
        "command": command,
        "descriptor_hash": desc.digest() if desc is not None else None,
        "grid": list(grid) if grid is not None else None,
        "seed": seed,
        "tool_version": __version__,
    }


def theta_domain_for(desc: FamilyDescriptor):
    return (desc.theta_min, math.pi - desc.theta_min)
