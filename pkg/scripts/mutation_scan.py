"""Perturb every structure coefficient of a builtin algebroid and report
which checker notices.

    python3 scripts/mutation_scan.py twisted-action --values 0 1 x
"""
import argparse
import itertools

from homalgebroid.algebroid import check_axioms
from homalgebroid.config import RunConfig
from homalgebroid.fixtures import ALGEBROIDS, TWISTED_LINE_MUTATIONS, perturb


def positions(ab):
    n = ab.rank
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        yield "alpha", (i, j)
    for i in range(1, n + 1):
        for j in range(1, len(ab.base.variables) + 1):
            yield "anchor", (i, j)
    for i, j, k in itertools.product(range(1, n + 1), repeat=3):
        yield "bracket", (i, j, k)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("name", nargs="?", default="twisted-line", choices=sorted(ALGEBROIDS))
    ap.add_argument("--variant", default="A", choices=["A", "B"])
    ap.add_argument("--values", nargs="+", default=None, help="replacement values; default is the fixed list")
    args = ap.parse_args()

    ab = ALGEBROIDS[args.name](args.variant)
    cfg = RunConfig(trials=4)
    if args.values is None and args.name == "twisted-line":
        cases = TWISTED_LINE_MUTATIONS
    else:
        cases = [(f, idx, v) for f, idx in positions(ab) for v in (args.values or ["0", "1", "x"])]
    silent = 0
    for field, idx, value in cases:
        try:
            mutant = perturb(ab, field, idx, value)
        except ValueError as exc:
            print(f"{field}{list(idx)}={value}: skipped ({exc})")
            continue
        if mutant.same_structure(ab):
            continue
        rep = check_axioms(mutant, cfg)
        first = rep.first_failure()
        silent += rep.passed
        print(f"{field}{list(idx)}={value}: " + (f"caught by {first.name}" if first else "still valid"))
    print(f"{silent} perturbations left the structure valid")


if __name__ == "__main__":
    main()
