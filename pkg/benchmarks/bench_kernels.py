"""Benchmark: compiled geometry kernels vs. the pure-Python fallback.

Runs the three hot paths (grid aggregation, intersection area, batch
containment) over identical inputs and prints the speedup. Usage:

    python benchmarks/bench_kernels.py [--cells 640000] [--pairs 200]
"""

from __future__ import annotations

import argparse
import math
import random
import time

from geolink.geo import _kernels_py

try:
    from geolink.geo import _kernels
except ImportError:
    _kernels = None


def random_convex(rng, n=8, scale=1.0, offset=(0.0, 0.0)):
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
    pts = [
        (
            offset[0] + scale * (0.5 + rng.uniform(0.2, 0.5) * math.cos(t)),
            offset[1] + scale * (0.5 + rng.uniform(0.2, 0.5) * math.sin(t)),
        )
        for t in angles
    ]
    # Convex hull of the points keeps the clipping benchmark honest.
    pts = sorted(set(pts))

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                (ox, oy), (ax, ay) = out[-2], out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull if len(hull) >= 3 else [(0, 0), (1, 0), (0.5, 1)]


def bench(label, fn, repeats=3):
    best = math.inf
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    print(f"  {label:<26} {best * 1000:10.1f} ms")
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--cells", type=int, default=640_000, help="grid cells for aggregation")
    parser.add_argument("--pairs", type=int, default=200, help="polygon pairs for clipping")
    parser.add_argument("--points", type=int, default=200_000, help="probes for containment")
    args = parser.parse_args()

    rng = random.Random(42)
    side = int(math.sqrt(args.cells))
    cell = 1.0 / side
    polygons = [random_convex(rng, n=10) for _ in range(24)]
    pairs = [
        (random_convex(rng, n=9), random_convex(rng, n=9, offset=(rng.uniform(-0.3, 0.3), 0)))
        for _ in range(args.pairs)
    ]
    probes = [(rng.random(), rng.random()) for _ in range(args.points)]
    probe_ring = random_convex(rng, n=12)

    impls = [("pure-python", _kernels_py)]
    if _kernels is not None:
        impls.append(("compiled", _kernels))
    else:
        print("compiled kernels unavailable; benchmarking the fallback only")

    results = {}
    for name, impl in impls:
        print(f"{name}:")
        grid = bench(
            f"heatmap grid {side}x{side}",
            lambda impl=impl: [
                impl.cells_inside(p, 0.0, 0.0, cell, side, side) for p in polygons
            ],
        )
        inter = bench(
            f"intersection x{args.pairs}",
            lambda impl=impl: [impl.intersection_area(a, b) for a, b in pairs],
        )
        contain = bench(
            f"containment x{args.points}",
            lambda impl=impl: [impl.point_in_polygon(x, y, probe_ring) for x, y in probes],
        )
        results[name] = (grid, inter, contain)

    if len(results) == 2:
        py = results["pure-python"]
        cy = results["compiled"]
        print("speedup (pure / compiled):")
        for label, i in (("heatmap grid", 0), ("intersection", 1), ("containment", 2)):
            print(f"  {label:<26} {py[i] / cy[i]:10.1f}x")


if __name__ == "__main__":
    main()
