#!/usr/bin/env python3
"""Generate a random instance of a problem class and export its model.

Writes the YAML domain and problem files for a seeded random instance
and prints the oracle optimum, so the pair is ready for the solve
command:

    python scripts/make_instance.py tsptw --seed 3 --out /tmp/tsptw
    dpsearch solve --domain /tmp/tsptw-domain.yaml \
        --problem /tmp/tsptw-problem.yaml --config config.yaml
"""

import argparse
import random
from pathlib import Path

import dpsearch as dp
from dpsearch import yamlio
from dpsearch.problems import CLASSES


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("problem_class", choices=sorted(CLASSES))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="instance", help="output path prefix")
    args = parser.parse_args()

    cls = CLASSES[args.problem_class]
    instance = cls.random(random.Random(args.seed))
    model = cls.build(instance)
    domain_text, problem_text = yamlio.serialize_model(model)
    domain_path = Path(f"{args.out}-domain.yaml")
    problem_path = Path(f"{args.out}-problem.yaml")
    domain_path.write_text(domain_text)
    problem_path.write_text(problem_text)

    optimum = dp.bellman_oracle(model).cost
    print(f"instance: {instance}")
    print(f"wrote {domain_path} and {problem_path}")
    print(f"oracle optimum: {optimum if optimum is not None else 'infeasible'}")


if __name__ == "__main__":
    main()
