#!/usr/bin/env python3
"""Compare every solver on seeded random instances of every class.

Prints, per problem class and solver, how many instances were proved
(optimal or infeasible), the mean expansion count, the mean wall time,
and the mean primal integral against the oracle optimum.

Usage:
    python scripts/run_desk_suite.py [--instances 25] [--seed 0]
        [--classes tsptw,cvrp,...] [--horizon 1.0]
"""

import argparse
import random
import time
import zlib
from collections import defaultdict

import dpsearch as dp
from dpsearch.problems import CLASSES


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--instances", type=int, default=25)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--classes", default=",".join(sorted(CLASSES)))
    parser.add_argument("--horizon", type=float, default=1.0,
                        help="horizon for the primal integral, seconds")
    args = parser.parse_args()

    names = [n.strip() for n in args.classes.split(",") if n.strip()]
    for name in names:
        if name not in CLASSES:
            parser.error(f"unknown class {name!r}")

    rows = defaultdict(lambda: {"proved": 0, "expanded": 0, "time": 0.0, "integral": 0.0})
    for name in names:
        cls = CLASSES[name]
        rng = random.Random(zlib.crc32(name.encode()) ^ args.seed)
        models = [cls.build(cls.random(rng)) for _ in range(args.instances)]
        optima = [dp.bellman_oracle(m).cost for m in models]
        for solver in dp.SOLVER_NAMES:
            stats = rows[(name, solver)]
            for model, optimum in zip(models, optima):
                begin = time.perf_counter()
                solution = dp.solve(model, solver)
                stats["time"] += time.perf_counter() - begin
                stats["expanded"] += solution.expanded
                stats["proved"] += solution.proved
                if optimum is not None:
                    events = [
                        (min(t, args.horizon), c) for t, c in solution.primal_events
                    ]
                    stats["integral"] += dp.primal_integral(
                        events, optimum, args.horizon
                    )

    count = args.instances
    print(f"{'class':<12} {'solver':<8} {'proved':>7} {'expanded':>10} "
          f"{'time[ms]':>9} {'P(T)':>7}")
    for (name, solver), stats in rows.items():
        print(
            f"{name:<12} {solver:<8} {stats['proved']:>4}/{count:<3}"
            f" {stats['expanded'] / count:>9.1f}"
            f" {1000 * stats['time'] / count:>9.2f}"
            f" {stats['integral'] / count:>7.3f}"
        )


if __name__ == "__main__":
    main()
