"""Command-line front end.

Subcommands: flatness, collapse, nogap, classify, obstruct, probe-cone,
kasner-check.  Families are given as JSON descriptor files; reports are
emitted as CSV (per-point data) or JSON (summaries) with shortest
round-trip float formatting and LF line endings, so identical runs
produce identical bytes.  Exit codes: 0 pass, 1 quantitative failure,
2 usage or configuration error.

Environment: TORIC4_OUT overrides the output directory; TORIC4_THREADS is
accepted for interface compatibility (evaluation is sequential and
deterministic either way).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog, constructions, families, obstruction, toric
from .curvature import Chart, classify_type, conformal_jet, riemann, weyl_blocks
from .errors import DomainError


def _out_dir(args):
    out = args.out or os.environ.get("TORIC4_OUT")
    if out:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        return path
    return None


def _emit(args, name, text, manifest=None):
    out = _out_dir(args)
    if out is not None:
        (out / name).write_text(text, newline="\n")
        if manifest is not None:
            (out / (name + ".manifest.json")).write_text(
                json.dumps(manifest, sort_keys=True) + "\n", newline="\n"
            )
    else:
        sys.stdout.write(text)


def _load_family(args):
    if not args.family:
        raise SystemExit(2)
    try:
        desc = families.parse_descriptor(args.family)
        end = families.build_end(desc)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: bad family descriptor: {exc}", file=sys.stderr)
        raise SystemExit(2)
    return desc, end


def _grid(args, default=(13, 41)):
    if args.grid is None:
        return default
    try:
        a, b = args.grid.lower().split("x")
        return int(a), int(b)
    except ValueError:
        print(f"error: bad grid spec {args.grid!r}, expected NxM", file=sys.stderr)
        raise SystemExit(2)


def _base_grid(desc, end, args):
    """Deterministic evaluation grid for a family in its own chart."""
    n0, n1 = _grid(args)
    r_max = args.r_max or 3.0
    metric = end.metric
    if isinstance(metric, catalog.KasnerEnd):
        return [(rho, 0.0) for rho in np.linspace(metric.rho_min, r_max + metric.rho_min, n0 * n1)]
    (lo0, hi0), (lo1, hi1) = metric.gram.domain
    theta_min = args.theta_min if args.theta_min is not None else desc.theta_min
    if metric.chart is Chart.POLAR:
        r_lo = max(lo0, 0.5)
        r_hi = min(hi0, r_max) if np.isfinite(hi0) else r_max
        c0 = np.linspace(r_lo, r_hi, n0)
        c1 = np.linspace(max(lo1, theta_min), min(hi1, math.pi - theta_min), n1)
    else:
        c0 = np.linspace(max(lo0, 0.3), r_max, n0)
        z_lo = max(lo1, -r_max / 2.0) if np.isfinite(lo1) else -r_max / 2.0
        z_hi = min(hi1, r_max / 2.0) if np.isfinite(hi1) else r_max / 2.0
        if end.kind == "flat-r4":
            z_lo = max(z_lo, 0.3)
        c1 = np.linspace(z_lo, z_hi, n1)
    return [(float(a), float(b)) for a in c0 for b in c1]


def cmd_flatness(args):
    desc, end = _load_family(args)
    tol = args.tol if args.tol is not None else 1e-9
    rows = []
    max_rm = 0.0
    max_ric = 0.0
    if isinstance(end.metric, catalog.KasnerEnd):
        for c0, _ in _base_grid(desc, end, args):
            packet = riemann(end.metric.jet_at((c0, 0.0, 0.0, 0.0)))
            rows.append((c0, 0.0, packet.rm_norm, packet.ricci_norm))
            max_rm = max(max_rm, packet.rm_norm)
            max_ric = max(max_ric, packet.ricci_norm)
    else:
        for c0, c1 in _base_grid(desc, end, args):
            packet = toric.curvature_packet(end.metric, end.metric.point(c0, c1))
            rows.append((c0, c1, packet.rm_norm, packet.ricci_norm))
            max_rm = max(max_rm, packet.rm_norm)
            max_ric = max(max_ric, packet.ricci_norm)
    if args.format == "csv":
        text = "c0,c1,rm_norm,ricci_norm\n" + "".join(
            ",".join(repr(v) for v in row) + "\n" for row in rows
        )
    else:
        text = json.dumps(
            {"family": desc.name, "max_rm_norm": max_rm, "max_ricci_norm": max_ric,
             "tolerance": tol, "flat": max_rm < tol},
            sort_keys=True,
        ) + "\n"
    _emit(args, f"flatness-{desc.name}.{args.format}", text,
          families.run_manifest("flatness", desc, _grid(args)))
    print(f"flatness {desc.name}: max |Rm| = {max_rm:.3e} (tol {tol:.1e})")
    return 0 if max_rm < tol else 1


def cmd_collapse(args):
    ks = list(range(args.kmin, args.kmax + 1))
    theta_min = args.theta_min if args.theta_min is not None else constructions.DEFAULT_THETA_MIN
    grid = _grid(args, default=(9, 41))
    rows = []
    for k in ks:
        sigma, tau = (4.0 ** -k, 2.0 ** -k) if not args.equal else (2.0 ** -k, 2.0 ** -k)
        metric = constructions.glued_metric(constructions.GluedFamily(sigma, tau))
        report = constructions.curvature_sweep(metric, grid=grid, theta_min=theta_min)
        rows.append((k, sigma, tau, report.sup_rm_norm, report.sup_covering_radius))
    text = "k,sigma,tau,sup_rm_norm,sup_covering_radius\n" + "".join(
        ",".join(repr(v) for v in row) + "\n" for row in rows
    )
    _emit(args, "collapse.csv", text, families.run_manifest("collapse", None, grid))
    dec_rm = all(b[3] < a[3] for a, b in zip(rows, rows[1:]))
    dec_cov = all(b[4] < a[4] for a, b in zip(rows, rows[1:]))
    print(f"collapse: sup|Rm| decreasing={dec_rm}, sup covrad decreasing={dec_cov}")
    return 0 if (dec_rm and dec_cov) else 1


def cmd_nogap(args):
    epsilons = [float(e) for e in args.epsilons.split(",")]
    theta_min = args.theta_min if args.theta_min is not None else constructions.DEFAULT_THETA_MIN
    r_hi = args.r_max or 1e6
    schedule = np.geomspace(1e2, r_hi, args.samples)
    rows = []
    for eps in epsilons:
        n = constructions.NoGapMetric(epsilon=eps)
        metric = constructions.nogap_metric(n)
        est = constructions.asymptotic_curvature_estimate(
            metric, r_schedule=schedule,
            theta_band=(theta_min, math.pi - theta_min),
        )
        bracket = constructions.limit_frame_check(n, r_hi).exceptional_ratio
        rows.append((eps, est.estimate, est.tail_slope, est.estimate / eps, bracket))
    text = "epsilon,a_estimate,tail_slope,a_over_eps,bracket_ratio\n" + "".join(
        ",".join(repr(v) for v in row) + "\n" for row in rows
    )
    _emit(args, "nogap.csv", text, families.run_manifest("nogap", None, (args.samples,)))
    for row in rows:
        print(f"nogap eps={row[0]}: A~{row[1]:.4f} slope={row[2]:+.4f} "
              f"A/eps={row[3]:.2f} bracket*r/|xi|={row[4]:.4f}")
    ok = all(abs(r[2]) <= 0.1 for r in rows)
    return 0 if ok else 1


def cmd_classify(args):
    desc, end = _load_family(args)
    orientation = -1 if args.orientation == "-" else 1
    hist = {"I": 0, "II": 0, "III": 0}
    if isinstance(end.metric, catalog.KasnerEnd):
        for c0, _ in _base_grid(desc, end, args):
            jet = end.metric.jet_at((c0, 0.0, 0.0, 0.0))
            packet = weyl_blocks(riemann(jet), jet, orientation)
            hist[classify_type(packet.wplus).kind.value] += 1
    else:
        for c0, c1 in _base_grid(desc, end, args):
            packet = toric.curvature_packet(
                end.metric, end.metric.point(c0, c1), orientation=orientation
            )
            hist[classify_type(packet.wplus).kind.value] += 1
    total = sum(hist.values())
    text = json.dumps(
        {"family": desc.name, "orientation": args.orientation, "histogram": hist,
         "total": total},
        sort_keys=True,
    ) + "\n"
    _emit(args, f"classify-{desc.name}.json", text,
          families.run_manifest("classify", desc, _grid(args)))
    print(f"classify {desc.name} (orientation {args.orientation}): {hist}")
    return 0


def cmd_obstruct(args):
    desc, end = _load_family(args)
    if not end.is_toric:
        print("error: obstruct needs a toric family", file=sys.stderr)
        return 2
    metric = end.metric
    if metric.chart is Chart.POLAR:
        ray = ("theta", args.ray_theta)
    else:
        ray = ("z", args.ray_z)
    schedule = np.geomspace(args.rho_min, args.rho_max, args.samples)
    try:
        report = obstruction.diagnostics_for_metric(metric, ray, schedule)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(args, f"obstruct-{desc.name}.json", report.to_json() + "\n",
          families.run_manifest("obstruct", desc, (args.samples,)))
    print(f"obstruct {desc.name} along {ray[0]}={ray[1]}: {report.overall}")
    for t in report.indicators:
        print(f"  {t.name:26s} target {t.target:g} limit {t.measured_limit:+.4f} "
              f"[{t.verdict}]")
    return 0


def cmd_probe_cone(args):
    desc, end = _load_family(args)
    try:
        report = catalog.cone_probe(end, doublings=args.doublings)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = [
        (r.scale, r.systole, r.covering_radius, r.rescaled_systole,
         r.rescaled_covering_radius)
        for r in report.records
    ]
    text = "scale,systole,covering_radius,rescaled_systole,rescaled_covering_radius\n" + \
        "".join(",".join(repr(v) for v in row) + "\n" for row in rows)
    _emit(args, f"probe-cone-{desc.name}.csv", text,
          families.run_manifest("probe-cone", desc, (args.doublings,)))
    print(f"probe-cone {desc.name}: verdict {report.verdict} (cone {end.cone.kind})")
    expected = {
        "WedgeTimesLine": "systole-stabilizes",
        "HalfPlane": "fiber-collapse",
        "R4": "linear-scaling",
    }.get(end.cone.kind)
    return 0 if expected is None or report.verdict == expected else 1


def cmd_kasner_check(args):
    end = catalog.kasner_end()
    kasner = end.metric
    tol_ric = 1e-8
    rhos = np.linspace(1.0, 6.0, 50)
    max_ric = 0.0
    type_ok = True
    for rho in rhos:
        jet = kasner.jet_at((float(rho), 0.0, 0.0, 0.0))
        packet = riemann(jet)
        max_ric = max(max_ric, packet.ricci_norm)
        for orientation in (1, -1):
            p = weyl_blocks(riemann(jet), jet, orientation)
            if classify_type(p.wplus).kind.value != "II":
                type_ok = False
    conf_rel = 0.0
    for rho in (1.3, 1.7, 2.6, 4.1):
        coords = (rho, 0.0, 0.0, 0.0)
        jet = kasner.jet_at(coords)
        lam = kasner.lambda_jet(coords)
        gt = riemann(conformal_jet(jet, lam ** (2.0 / 3.0)))
        rel = abs(gt.scalar ** 2 - lam.val ** (2.0 / 3.0)) / lam.val ** (2.0 / 3.0)
        conf_rel = max(conf_rel, rel)
    j_res = 0.0
    for sign in (1, -1):
        struct = kasner.complex_structure(sign)
        for rho in (1.2, 2.5, 7.0):
            compat, nij = catalog.hermitian_check(struct, kasner.jet_at, (rho, 0.0, 0.0, 0.0))
            j_res = max(j_res, compat, nij)
    ok = max_ric < tol_ric and type_ok and conf_rel < 1e-6 and j_res < 1e-8
    text = json.dumps(
        {"max_ricci_norm": max_ric, "all_type_II": type_ok,
         "conformal_identity_rel_error": conf_rel, "hermitian_residual": j_res,
         "pass": ok},
        sort_keys=True,
    ) + "\n"
    _emit(args, "kasner-check.json", text, families.run_manifest("kasner-check", None, None))
    print(f"kasner-check: |Ric|max={max_ric:.2e} TypeII={type_ok} "
          f"conformal rel={conf_rel:.2e} J residual={j_res:.2e} -> {'pass' if ok else 'FAIL'}")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toric4",
        description="Curvature and collapse diagnostics for T^2-invariant 4-metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        if family:
            p.add_argument("--family", help="JSON family descriptor file")
        p.add_argument("--grid", help="grid spec NxM")
        p.add_argument("--theta-min", type=float, default=None)
        p.add_argument("--r-max", type=float, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--orientation", choices=["+", "-"], default="+")
        p.add_argument("--out", help="output directory (overrides TORIC4_OUT)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("flatness", help="max |Rm| over a grid")
    common(p)
    p.set_defaults(func=cmd_flatness)

    p = sub.add_parser("collapse", help="glued-family collapse schedule")
    common(p, family=False)
    p.add_argument("--kmin", type=int, default=3)
    p.add_argument("--kmax", type=int, default=7)
    p.add_argument("--equal", action="store_true",
                   help="use the sigma = tau counter-schedule")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("nogap", help="asymptotic curvature of the no-gap family")
    common(p, family=False)
    p.add_argument("--epsilons", default="0.2,0.1,0.05")
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(func=cmd_nogap)

    p = sub.add_parser("classify", help="Weyl type histogram over a grid")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("obstruct", help="collapse indicators along a ray")
    common(p)
    p.add_argument("--ray-theta", type=float, default=math.pi / 2)
    p.add_argument("--ray-z", type=float, default=0.0)
    p.add_argument("--rho-min", type=float, default=1e2)
    p.add_argument("--rho-max", type=float, default=1e6)
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("probe-cone", help="rescaled fiber geometry per scale")
    common(p)
    p.add_argument("--doublings", type=int, default=20)
    p.set_defaults(func=cmd_probe_cone)

    p = sub.add_parser("kasner-check", help="special Kasner verification battery")
    common(p, family=False)
    p.set_defaults(func=cmd_kasner_check)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        raise exc
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
