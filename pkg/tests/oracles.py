"""Independent oracles: brute-force lattice geometry and fixed-step
finite-difference curvature.  These deliberately avoid the package's own
reduction/Voronoi and jet code paths."""

import itertools

import numpy as np


def brute_force_min_dist(point, rows, window=5):
    """Distance from `point` to the lattice, searching a translate window."""
    best = np.inf
    for m in range(-window, window + 1):
        for n in range(-window, window + 1):
            v = m * rows[0] + n * rows[1]
            best = min(best, np.hypot(point[0] - v[0], point[1] - v[1]))
    return best


def brute_force_covering_radius(rows, coarse=41, levels=7):
    """Max over the plane of distance to the lattice, by zoomed sampling.

    Coarse-samples the fundamental parallelogram, then repeatedly zooms on
    the cell around the current maximizer; each level shrinks the search
    box by 4, so seven levels resolve the maximizer well below 1e-6.
    """
    rows = np.asarray(rows, dtype=float)
    center = np.array([0.5, 0.5])
    half = np.array([0.5, 0.5])
    best_val, best_uv = -np.inf, center
    for _ in range(levels):
        us = np.linspace(center[0] - half[0], center[0] + half[0], coarse)
        vs = np.linspace(center[1] - half[1], center[1] + half[1], coarse)
        for u in us:
            for v in vs:
                p = u * rows[0] + v * rows[1]
                d = brute_force_min_dist(p, rows)
                if d > best_val:
                    best_val, best_uv = d, np.array([u, v])
        center = best_uv
        half = half / 4.0
    return best_val


def brute_force_systole(rows, window=10):
    """Shortest nonzero vector over a coefficient window."""
    rows = np.asarray(rows, dtype=float)
    best = np.inf
    for m in range(-window, window + 1):
        for n in range(-window, window + 1):
            if m == 0 and n == 0:
                continue
            best = min(best, np.linalg.norm(m * rows[0] + n * rows[1]))
    return best


def voronoi_vertex_covering_radius(rows, window=3):
    """Covering radius via circumcenters of lattice-point triples.

    Enumerates triples of nearby lattice points containing the origin's
    cell, keeps circumcenters whose nearest lattice points are exactly the
    defining triple, and returns the largest circumradius.  Independent of
    the reduced-superbase formula.
    """
    rows = np.asarray(rows, dtype=float)
    pts = [
        m * rows[0] + n * rows[1]
        for m in range(-window, window + 1)
        for n in range(-window, window + 1)
    ]
    best = 0.0
    origin_candidates = [p for p in pts if np.linalg.norm(p) < 1e-12]
    assert origin_candidates
    for a, b in itertools.combinations(range(len(pts)), 2):
        pa, pb = pts[a], pts[b]
        if np.linalg.norm(pa) < 1e-12 or np.linalg.norm(pb) < 1e-12:
            continue
        # circumcenter of (0, pa, pb)
        d = 2.0 * (pa[0] * pb[1] - pa[1] * pb[0])
        if abs(d) < 1e-14:
            continue
        ux = (np.dot(pa, pa) * pb[1] - np.dot(pb, pb) * pa[1]) / d
        uy = (np.dot(pb, pb) * pa[0] - np.dot(pa, pa) * pb[0]) / d
        c = np.array([ux, uy])
        r = np.linalg.norm(c)
        dmin = brute_force_min_dist(c, rows, window=window + 2)
        if dmin >= r - 1e-9:
            best = max(best, r)
    return best


def fixed_step_riemann(metric_fn, coords, step=1e-4, active=(0, 1)):
    """Covariant Riemann tensor from plain central differences, step 1e-4.

    Implements the same covariant formula as the engine but sources all
    derivative data from second-order central differences of the metric
    components, independent of the jet arithmetic.
    """
    coords = np.asarray(coords, dtype=float)

    def g_at(x):
        return np.asarray(metric_fn(x), dtype=float)

    g = g_at(coords)
    dg = np.zeros((4, 4, 4))
    ddg = np.zeros((4, 4, 4, 4))
    for k in active:
        e = np.zeros(4)
        e[k] = step
        gp, gm = g_at(coords + e), g_at(coords - e)
        dg[:, :, k] = (gp - gm) / (2 * step)
        ddg[:, :, k, k] = (gp - 2 * g + gm) / step ** 2
    for k in active:
        for l in active:
            if l <= k:
                continue
            ek = np.zeros(4)
            el = np.zeros(4)
            ek[k] = step
            el[l] = step
            mixed = (
                g_at(coords + ek + el)
                - g_at(coords + ek - el)
                - g_at(coords - ek + el)
                + g_at(coords - ek - el)
            ) / (4 * step ** 2)
            ddg[:, :, k, l] = mixed
            ddg[:, :, l, k] = mixed
    ginv = np.linalg.inv(g)
    term = (
        np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg)
    )
    gam = 0.5 * np.einsum("kl,lij->kij", ginv, term)
    gam_low = np.einsum("lk,kij->lij", g, gam)
    rm = 0.5 * (
        np.einsum("imkl->iklm", ddg)
        + np.einsum("klim->iklm", ddg)
        - np.einsum("ilkm->iklm", ddg)
        - np.einsum("kmil->iklm", ddg)
    )
    rm += np.einsum("nkl,nim->iklm", gam_low, gam)
    rm -= np.einsum("nkm,nil->iklm", gam_low, gam)
    return g, rm


def rm_norm_of(g, rm):
    ginv = np.linalg.inv(g)
    rm_up = np.einsum("ia,jb,kc,ld,abcd->ijkl", ginv, ginv, ginv, ginv, rm)
    return float(np.sqrt(abs(np.einsum("ijkl,ijkl->", rm, rm_up))))
