"""Throughput benchmark on the programmatic glue grid.

Builds an (n+1)^2-type grid system, runs a batch of single-attachment
steps, and reports steps per second plus periodic frontier-coherence
spot checks. The defaults match the headline scale target: ten
thousand types, a hundred thousand steps.
"""
from __future__ import annotations

import argparse
import time

from tilesim.engine import Simulation
from tilesim.synth import glue_grid_system


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=100,
                    help="grid period n; the system has (n+1)^2 tile types")
    ap.add_argument("--steps", type=int, default=100_000)
    ap.add_argument("--check-every", type=int, default=10_000,
                    help="frontier coherence check interval (0 disables)")
    ap.add_argument("--rng-seed", type=int, default=1)
    args = ap.parse_args(argv)

    build0 = time.perf_counter()
    tas = glue_grid_system(args.grid)
    sim = Simulation(tas, rng_seed=args.rng_seed, history_limit=4)
    built = time.perf_counter() - build0
    print(f"{len(tas.tile_set)} tile types (built in {built:.2f}s)")

    start = time.perf_counter()
    for k in range(1, args.steps + 1):
        if not sim.step().stepped:
            print(f"stalled at step {k}")
            return 1
        if args.check_every and k % args.check_every == 0:
            sim.check_frontier_coherence()
            now = time.perf_counter() - start
            print(f"  {k:>9,} steps  {k / now:>9,.0f} steps/s  "
                  f"frontier {len(sim.frontier_positions):>5}  coherent")
    elapsed = time.perf_counter() - start
    print(f"{args.steps:,} steps in {elapsed:.2f}s "
          f"({args.steps / elapsed:,.0f} steps/s), "
          f"{len(sim.assembly):,} tiles")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
