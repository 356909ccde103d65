#!/usr/bin/env python3
"""Regenerates the checked-in polygonal mesh fixtures (data/meshes/poly_N.json).

Lloyd-relaxed Voronoi tessellations of the unit square. The square boundary is
handled by mirroring the seed set across all four sides, which makes the cells
of the original seeds clip exactly to the square. Cells are convex, vertices
are shared exactly between neighbouring cells, and loops are CCW.

Usage: python3 tools/make_poly_fixtures.py [--sizes 16 64 256 1024 4096]
"""

import argparse
import json
import pathlib

import numpy as np
from scipy.spatial import Voronoi


def mirrored_voronoi(seeds):
    n = len(seeds)
    mirrors = [
        seeds * [1, -1],                     # bottom
        seeds * [1, -1] + [0, 2],            # top
        seeds * [-1, 1],                     # left
        seeds * [-1, 1] + [2, 0],            # right
    ]
    allpts = np.vstack([seeds] + mirrors)
    vor = Voronoi(allpts)
    cells = []
    for i in range(n):
        region = vor.regions[vor.point_region[i]]
        assert -1 not in region, "unbounded cell despite mirroring"
        cells.append(vor.vertices[region])
    return cells


def lloyd(seeds, iterations):
    for _ in range(iterations):
        cells = mirrored_voronoi(seeds)
        new = []
        for poly in cells:
            x, y = poly[:, 0], poly[:, 1]
            xs, ys = np.roll(x, -1), np.roll(y, -1)
            cr = x * ys - xs * y
            area = cr.sum() / 2.0
            cx = ((x + xs) * cr).sum() / (6 * area)
            cy = ((y + ys) * cr).sum() / (6 * area)
            new.append([cx, cy])
        seeds = np.array(new)
    return seeds


def snap(v, eps=1e-9):
    out = v.copy()
    for k in (0.0, 1.0):
        out[np.abs(out - k) < eps] = k
    return out


def build_mesh(cells):
    key_of = {}
    vertices = []

    def vid(pt):
        key = (round(pt[0] * 1e9), round(pt[1] * 1e9))
        if key not in key_of:
            key_of[key] = len(vertices)
            vertices.append([pt[0], pt[1]])
        return key_of[key]

    elements = []
    for poly in cells:
        poly = snap(poly)
        # CCW order around the centroid (cells are convex).
        c = poly.mean(axis=0)
        ang = np.arctan2(poly[:, 1] - c[1], poly[:, 0] - c[0])
        poly = poly[np.argsort(ang)]
        ids = []
        for pt in poly:
            i = vid(pt)
            if not ids or (i != ids[-1] and i != ids[0]):
                ids.append(i)
        assert len(ids) >= 3, "degenerate cell"
        elements.append(ids)
    return vertices, elements


def validate(vertices, elements):
    v = np.array(vertices)
    total = 0.0
    edge_count = {}
    for loop in elements:
        p = v[loop]
        x, y = p[:, 0], p[:, 1]
        xs, ys = np.roll(x, -1), np.roll(y, -1)
        area = (x * ys - xs * y).sum() / 2.0
        assert area > 1e-12, "zero-area or CW cell"
        total += area
        for a, b in zip(loop, loop[1:] + loop[:1]):
            edge_count[(min(a, b), max(a, b))] = edge_count.get((min(a, b), max(a, b)), 0) + 1
    assert abs(total - 1.0) < 1e-9, f"area sum {total}"
    for cnt in edge_count.values():
        assert cnt in (1, 2), "edge shared by more than two cells"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256, 1024, 4096])
    ap.add_argument("--iterations", type=int, default=80)
    ap.add_argument("--seed", type=int, default=20240901)
    ap.add_argument("--out", default="data/meshes")
    args = ap.parse_args()

    outdir = pathlib.Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)
    for n in args.sizes:
        seeds = rng.uniform(0.05, 0.95, size=(n, 2))
        seeds = lloyd(seeds, args.iterations)
        cells = mirrored_voronoi(seeds)
        vertices, elements = build_mesh(cells)
        validate(vertices, elements)
        path = outdir / f"poly_{n}.json"
        with open(path, "w") as f:
            json.dump({"vertices": vertices, "elements": elements}, f)
        hmax = 0.0
        for loop in elements:
            p = np.array([vertices[i] for i in loop])
            d = np.sqrt(((p[:, None, :] - p[None, :, :]) ** 2).sum(-1)).max()
            hmax = max(hmax, d)
        print(f"{path}: {len(elements)} cells, {len(vertices)} vertices, h_max={hmax:.4f}")


if __name__ == "__main__":
    main()
