"""Compiled vs pure-Python pair scan.

    python benchmarks/bench_kernels.py [--repeat 3]

Workloads: every isomorphism class of graphs on 6 vertices at p = 2, and
seeded random valid maps at p = 3 with 4 basis vectors.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from qgk import bilform, kernels
from qgk.graphs import enumerate_graphs, graph_bilinear


def workloads():
    graphs = [graph_bilinear(g, 2) for g in enumerate_graphs(6, up_to_iso=True)]
    rng = random.Random(7)
    p3 = [bilform.random_valid_map(rng, 3, 4, rng.randint(2, 5)) for _ in range(40)]
    return {"graphs n=6, p=2 (156 maps)": graphs, "random n=4, p=3 (40 maps)": p3}


def run(maps, backend):
    out = []
    for M in maps:
        out.append(kernels.slot_scan(M.p, M.n, M.m, M.gram, 0, M.p**M.n, backend))
    return out


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    for name, maps in workloads().items():
        results = {}
        times = {}
        for b in backends:
            samples = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                results[b] = run(maps, b)
                samples.append(time.perf_counter() - t0)
            times[b] = statistics.median(samples)
        agree = len({tuple(map(repr, r)) for r in results.values()}) == 1
        line = "  ".join(f"{b} {times[b] * 1e3:9.1f} ms" for b in backends)
        if "compiled" in times:
            line += f"  speedup x{times['python'] / times['compiled']:.1f}"
        print(f"{name:<30} {line}  results agree: {agree}")


if __name__ == "__main__":
    main()
