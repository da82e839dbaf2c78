"""simctl: seed synthetic farmers, run scenarios, validate reports.

Exit codes: 0 success, 1 scenario assertion failure, 2 infrastructure
failure (stack unreachable or API error during setup).
"""

from __future__ import annotations

import argparse
import json
import sys

from agrifed.errors import ScenarioFailed, StackUnreachable
from agrifed.simctl.scenario import (
    Scenario,
    run_scenario,
    seed,
    validate_report,
    write_report,
)


def _load_scenario(path: str) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return Scenario.from_json(json.load(fh))


def _cmd_seed(args) -> int:
    scenario = _load_scenario(args.config)
    manifest = seed(scenario, args.base_url)
    print(write_report(manifest, args.out))
    return 0


def _cmd_run(args) -> int:
    scenario = _load_scenario(args.config)
    report = run_scenario(scenario, args.base_url)
    print(write_report(report, args.out))
    problems = validate_report(report)
    if problems:
        print("report schema problems: " + "; ".join(problems), file=sys.stderr)
        return 1
    return 0


def _cmd_report(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        report = json.load(fh)
    problems = validate_report(report)
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return 1
    print(
        f"scenario={report['scenario']} seed={report['seed']} "
        f"accuracy={report['accuracy']:.3f} overall_risk={report['risk'].get('overall')}"
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="simctl")
    parser.add_argument("command", choices=["seed", "run", "report"])
    parser.add_argument("--config", required=True, help="scenario JSON (or report JSON for 'report')")
    parser.add_argument("--base-url", default="http://127.0.0.1:8080")
    parser.add_argument("--out", default=None, help="write the JSON result here as well")
    args = parser.parse_args(argv)

    handler = {"seed": _cmd_seed, "run": _cmd_run, "report": _cmd_report}[args.command]
    try:
        return handler(args)
    except StackUnreachable as err:
        print(f"infrastructure failure: {err.message}", file=sys.stderr)
        return 2
    except ScenarioFailed as err:
        print(f"scenario failed: {err.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
