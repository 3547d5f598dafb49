"""False-positive rates of the random primality test.

For each composite n the test can only be fooled by a Fermat liar, so k
independent rounds pass with probability liar_rate(n) ** k. This script
measures that over many seeded runs and prints observed vs expected.

Usage: python scripts/liar_stats.py [RUNS]
"""
from __future__ import annotations

import sys

from basm import corpus_run, liar_rate, state_bindings


def observed_rate(n: int, k: int, runs: int) -> float:
    fooled = 0
    for seed in range(runs):
        trace = corpus_run("primality", n=n, k=k, seed=seed)
        if state_bindings(trace.final_state)["prime"] == "true":
            fooled += 1
    return fooled / runs


def main() -> int:
    runs = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    print(f"{runs} runs per cell")
    print(f"{'n':>5} {'liars':>8} {'k':>2} {'expected':>10} {'observed':>10}")
    for n in (15, 91, 561, 9):
        rate = liar_rate(n)
        for k in (1, 2, 3):
            expected = float(rate) ** k
            got = observed_rate(n, k, runs)
            print(f"{n:>5} {str(rate):>8} {k:>2} {expected:>10.4f} {got:>10.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
