#!/usr/bin/env python3
"""Differential fuzzing: the BFS matcher against the automaton oracle.

Each trial draws a fresh random graph, a random raw condition, and a
random (source, target) pair, then checks that both deciders agree.
A disagreement prints a full reproducer and exits nonzero.

Usage::

    python3 scripts/differential_fuzz.py --trials 100000 --seed 7
"""

from __future__ import annotations

import argparse
import sys

from rebac.differential import run_differential


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--trials", type=int, default=10_000, help="number of trials")
    parser.add_argument("--max-nodes", type=int, default=8, help="graph size ceiling per trial")
    args = parser.parse_args(argv)

    report = run_differential(args.seed, args.trials, max_nodes=args.max_nodes)
    rate = report.trials / report.elapsed if report.elapsed else float("inf")
    print(
        f"{report.agreements}/{report.trials} agree "
        f"in {report.elapsed:.2f}s ({rate:,.0f} trials/s, seed={args.seed})"
    )
    if not report.agreed:
        print(f"\nfirst disagreement:\n{report.first_disagreement}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
