#!/usr/bin/env python3
"""Score two contrasting response systems under both singleton policies.

The gold standard has five singleton entities plus two multi-mention
clusters. One system keeps every singleton but merges all linked mentions
into a single cluster; the other recovers the links well, drops all the
singletons, and invents one spurious mention. Scoring both systems with
singletons included and omitted shows how strongly the policy decides which
system looks better.
"""

from __future__ import annotations

import argparse
import json
import sys

from cdcoref import Partition, evaluate

GOLD = Partition(
    [["A"], ["B"], ["C"], ["D"], ["E"], ["F", "G"], ["H", "I", "J"]]
)
SYSTEMS = {
    "span_system (all singletons kept, links over-merged)": Partition(
        [["A"], ["B"], ["C"], ["D"], ["E", "F", "G", "H", "I", "J"]]
    ),
    "link_system (links recovered, singletons dropped, one spurious)": Partition(
        [["E", "F", "G"], ["H", "I", "J"], ["Z"]]
    ),
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    args = parser.parse_args(argv)

    results = {}
    for name, system in SYSTEMS.items():
        for policy in ("included", "omitted"):
            results[name, policy] = evaluate(GOLD, system, policy)

    if args.json:
        payload = {
            f"{name} / singletons {policy}": report.to_dict()
            for (name, policy), report in results.items()
        }
        json.dump(payload, sys.stdout, indent=2)
        print()
        return 0

    for name, system in SYSTEMS.items():
        print(name)
        print(f"  response clusters: {[sorted(c) for c in system]}")
        for policy in ("included", "omitted"):
            report = results[name, policy]
            print("  " + report.to_text().replace("\n", "\n  "))
        print()

    for policy in ("included", "omitted"):
        ranked = sorted(
            SYSTEMS, key=lambda name: results[name, policy].conll_f1, reverse=True
        )
        scores = " vs ".join(
            f"{results[name, policy].conll_f1:.1f}" for name in ranked
        )
        print(f"singletons {policy}: {ranked[0].split(' ')[0]} wins ({scores})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
