#!/usr/bin/env python3
"""One-shot experiment: boot an ephemeral stack, run a scenario, print the report.

Example:
    python scripts/run_scenario.py --farmers 6 --groups 2 --epsilon 1e12 --skew 0.9
"""

import argparse
import json
import sys
import tempfile

from agrifed.simctl.generate import DatasetSpec
from agrifed.simctl.scenario import Scenario, run_scenario
from agrifed.stack import launch_stack


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--farmers", type=int, default=5)
    parser.add_argument("--groups", type=int, default=1)
    parser.add_argument("--rows", type=int, default=200)
    parser.add_argument("--feature-dim", type=int, default=4)
    parser.add_argument("--class-sep", type=float, default=2.0)
    parser.add_argument("--skew", type=float, default=0.0)
    parser.add_argument("--epsilon", type=float, default=1e12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--model", default="logistic_regression")
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    scenario = Scenario(
        name=f"exp{args.seed}",
        farmer_count=args.farmers,
        dataset_spec=DatasetSpec(
            feature_dim=args.feature_dim,
            rows_per_farmer=args.rows,
            class_sep=args.class_sep,
            group_skew=args.skew,
            seed=args.seed,
        ),
        epsilon=args.epsilon,
        model_type=args.model,
        groups=args.groups,
    )

    with tempfile.TemporaryDirectory(prefix="agrifed-exp-") as store:
        stack = launch_stack(store)
        try:
            report = run_scenario(scenario, stack.base_url)
        finally:
            stack.stop()

    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
